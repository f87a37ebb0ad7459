use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Sizes after raising the smallest objects to a common level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationResult {
    /// Sorted like the instance (non-increasing).
    pub inflated_sizes: Vec<Rational>,
    /// `L*`; equals the smallest size when nothing was raised.
    pub level: Rational,
    /// Objects strictly below `L*`.
    pub raised_count: usize,
    /// `S'`, the sum of the inflated sizes.
    pub inflated_total: Rational,
}

impl InflationResult {
    pub fn total(&self) -> Rational {
        self.inflated_total.clone()
    }

    pub fn spread(&self) -> Rational {
        &self.inflated_sizes[0] - &self.inflated_sizes[self.inflated_sizes.len() - 1]
    }
}

/// Raises the smallest sizes until `a_1 - a_n <= S'/m`.
///
/// When the spread already fits, the sizes come back unchanged. Otherwise
/// `L*` is the root of `L = a_1 - (1/m) * sum(max(a_i, L))`, which is linear
/// between consecutive sizes: with the `t` smallest objects raised,
/// `L = (m*a_1 - P_t) / (m + t)` where `P_t` sums the other `n - t` sizes.
pub fn inflate_sizes(instance: &Instance, m: usize) -> Result<InflationResult> {
    let n = instance.len();
    let sizes = instance.sizes();
    if m == 0 || m > n {
        return Err(Error::PreconditionViolated(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let (a1, an) = (instance.largest(), instance.smallest());
    let spread = Rational::from(a1 - an);
    if &spread > instance.capacity() {
        return Err(Error::PreconditionViolated(format!(
            "a_1 - a_n = {spread} exceeds the capacity {}",
            instance.capacity()
        )));
    }
    let total = instance.total();
    // a_1 - a_n <= S/m
    if (a1 - an) as u128 * m as u128 <= total {
        return Ok(InflationResult {
            inflated_sizes: sizes.iter().map(|&s| Rational::from(s)).collect(),
            level: Rational::from(an),
            raised_count: 0,
            inflated_total: Rational::from(total),
        });
    }

    let m_a1 = m as i128 * a1 as i128;
    let mut kept: i128 = total as i128;
    for t in 1..n {
        kept -= sizes[n - t] as i128;
        let numer = m_a1 - kept;
        let denom = (m + t) as i128;
        let lo = sizes[n - t] as i128 * denom;
        let hi = sizes[n - t - 1] as i128 * denom;
        if lo <= numer && numer <= hi {
            let level = Rational::from_i128(numer, denom);
            let below = |s: u64| (s as i128) * denom < numer;
            let inflated_sizes: Vec<Rational> = sizes
                .iter()
                .map(|&s| if below(s) { level.clone() } else { Rational::from(s) })
                .collect();
            let raised_count = sizes.iter().filter(|&&s| below(s)).count();
            // the t smallest sit at L*, the rest keep their size
            let inflated_total = Rational::from_i128(kept * denom + t as i128 * numer, denom);
            return Ok(InflationResult {
                inflated_sizes,
                level,
                raised_count,
                inflated_total,
            });
        }
    }
    Err(Error::InternalInvariant(
        "no inflation level found between consecutive sizes".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{lower_bound_bins, validate_instance};
    use proptest::prelude::*;

    fn inst(sizes: &[i64], c: i64) -> Instance {
        validate_instance(sizes, Rational::from(c)).unwrap()
    }

    #[test]
    fn no_inflation_needed() {
        let res = inflate_sizes(&inst(&[8, 7, 6, 5, 4], 10), 3).unwrap();
        assert_eq!(res.raised_count, 0);
        assert_eq!(res.inflated_sizes, [8, 7, 6, 5, 4].map(Rational::from).to_vec());
    }

    #[test]
    fn raises_two_unit_objects() {
        let res = inflate_sizes(&inst(&[10, 1, 1], 10), 2).unwrap();
        let level = Rational::new(5, 2);
        assert_eq!(res.level, level);
        assert_eq!(res.raised_count, 2);
        assert_eq!(
            res.inflated_sizes,
            vec![Rational::from(10), level.clone(), level.clone()]
        );
        assert_eq!(res.total(), Rational::from(15));
        // a_1 - L* = S'/m = 15/2 <= C
        assert_eq!(Rational::from(10) - &level, Rational::new(15, 2));
    }

    #[test]
    fn too_many_bins() {
        let i = inst(&[100, 95], 10);
        let m = lower_bound_bins(&i);
        assert_eq!(m, 20);
        assert!(matches!(inflate_sizes(&i, m), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn spread_above_capacity() {
        assert!(matches!(
            inflate_sizes(&inst(&[20, 1, 1, 1], 10), 3),
            Err(Error::PreconditionViolated(_))
        ));
    }

    /// Raise the smallest object by one unit-fraction step at a time until the
    /// spread condition holds; the level found this way must match the root.
    fn stepwise_level(sizes: &[u64], m: usize, step: &Rational) -> Rational {
        let mut cur: Vec<Rational> = sizes.iter().map(|&s| Rational::from(s)).collect();
        loop {
            let total: Rational = cur.iter().sum();
            let min = cur.iter().min().unwrap().clone();
            if &cur[0] - &min <= total / Rational::from(m) {
                return min;
            }
            let next = &min + step;
            for c in cur.iter_mut() {
                if *c < next {
                    *c = next.clone();
                }
            }
        }
    }

    #[test]
    fn stepwise_raising_brackets_the_root() {
        let i = inst(&[10, 1, 1], 10);
        let res = inflate_sizes(&i, 2).unwrap();
        let step = Rational::new(1, 8);
        let found = stepwise_level(i.sizes(), 2, &step);
        assert!(found >= res.level && found - &res.level < step);
    }

    proptest! {
        #[test]
        fn fixed_point_holds(
            big in 20u64..100,
            small in prop::collection::vec(1u64..20, 1..20),
        ) {
            let mut sizes = vec![big as i64];
            sizes.extend(small.iter().map(|&s| s as i64));
            let c = big as i64;
            let i = inst(&sizes, c);
            let m = lower_bound_bins(&i);
            prop_assume!(m <= i.len());
            let res = inflate_sizes(&i, m).unwrap();
            let avg = res.total() / Rational::from(m);
            prop_assert!(res.spread() <= avg);
            prop_assert!(avg <= c);
            for (orig, infl) in i.sizes().iter().zip(&res.inflated_sizes) {
                prop_assert_eq!(infl, &Rational::from(*orig).max(res.level.clone()));
            }
            if res.raised_count > 0 {
                prop_assert_eq!(Rational::from(big) - &res.level, avg);
            }
        }
    }
}
