use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::packing::Packing;
use super::plan::{Assignment, TwoStagePlan};
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

/// Phase-II circular distribution of the boxes over `m` bins in two stages.
///
/// Requires `sum(C_j) == m * tilde_c`, every box non-empty with positive size,
/// and `C_max - C_min <= tilde_c`. Box-size ties in either selection rule go
/// to the lowest box index.
pub fn distribute_phase2(packing: &Packing, tilde_c: &Rational) -> Result<TwoStagePlan> {
    let m = packing.len();
    if m == 0 {
        return Err(Error::PreconditionViolated("packing has no boxes".into()));
    }
    if let Some(j) = packing.box_sizes.iter().position(|c| !c.is_positive()) {
        return Err(Error::PreconditionViolated(format!(
            "box {} has non-positive size {}",
            j + 1,
            packing.box_sizes[j]
        )));
    }
    // Work on integers: every quantity below is scaled by the common denominator.
    let denom = common_denominator(packing.box_sizes.iter().chain(std::iter::once(tilde_c)));
    let scale = |r: &Rational| -> BigInt {
        if r.denom() == &denom {
            r.numer().clone()
        } else {
            r.numer() * (&denom / r.denom())
        }
    };
    let sizes: Vec<BigInt> = packing.box_sizes.iter().map(scale).collect();
    let target = scale(tilde_c);

    // i128 whenever m * max(C_j, tilde_c) cannot overflow
    let widest = sizes.iter().map(BigInt::bits).max().unwrap_or(0).max(target.bits()).max(denom.bits());
    let headroom = 126 - u64::from(usize::BITS - (m + 2).leading_zeros());
    if widest < headroom {
        let narrow = |v: &BigInt| -> i128 { v.try_into().expect("checked width") };
        let small: Vec<i128> = sizes.iter().map(narrow).collect();
        build(packing, &small, narrow(&target), narrow(&denom), tilde_c)
    } else {
        build(packing, &sizes, target, denom, tilde_c)
    }
}

/// Integers the distribution can run on.
trait Scaled: Integer + Signed + Clone + From<i64> + fmt::Display {
    fn ratio(numer: Self, denom: Self) -> Rational;
}

impl Scaled for i128 {
    fn ratio(numer: i128, denom: i128) -> Rational {
        Rational::from_i128(numer, denom)
    }
}

impl Scaled for BigInt {
    fn ratio(numer: BigInt, denom: BigInt) -> Rational {
        Rational::new(numer, denom)
    }
}

fn build<T: Scaled>(packing: &Packing, sizes: &[T], target: T, denom: T, tilde_c: &Rational) -> Result<TwoStagePlan> {
    let m = sizes.len();
    let Selection { sigma, first_share } = select(sizes, target, tilde_c)?;
    let next = |l: usize| (l + 1) % m;
    let lambda1: Vec<Rational> = (0..m)
        .map(|l| T::ratio(first_share[l].clone(), sizes[sigma[l]].clone()))
        .collect();
    let lambda2: Vec<Rational> = (0..m)
        .map(|l| {
            let c = &sizes[sigma[next(l)]];
            T::ratio(c.clone() - first_share[next(l)].clone(), c.clone())
        })
        .collect();
    // load of bin l, scaled: λ_l^1 C_σ(l) + (1 - λ_{l+1}^1) C_σ(l+1)
    let bin_loads = (0..m)
        .map(|l| {
            let scaled = first_share[l].clone() + sizes[sigma[next(l)]].clone() - first_share[next(l)].clone();
            T::ratio(scaled, denom.clone())
        })
        .collect();
    let assignments = assignments_for(packing, &sigma, &lambda1, &lambda2)?;

    Ok(TwoStagePlan {
        sigma,
        lambda1,
        lambda2,
        tilde_c: tilde_c.clone(),
        assignments,
        bin_loads,
    })
}

/// The circular order and, per step, `λ_l^1 · C_σ(l)` in scaled units.
struct Selection<T> {
    sigma: Vec<usize>,
    first_share: Vec<T>,
}

fn select<T: Scaled>(sizes: &[T], target: T, tilde_c: &Rational) -> Result<Selection<T>> {
    let m = sizes.len();
    let total = sizes.iter().fold(T::zero(), |acc, c| acc + c.clone());
    if total != T::from(m as i64) * target.clone() {
        return Err(Error::PreconditionViolated(format!(
            "box sizes do not sum to {m} x {tilde_c}"
        )));
    }
    let c_max = sizes.iter().max().cloned().expect("m >= 1");
    let c_min = sizes.iter().min().cloned().expect("m >= 1");
    if c_max.clone() - c_min > target {
        return Err(Error::PreconditionViolated(format!(
            "C_max - C_min exceeds tilde_c = {tilde_c}"
        )));
    }

    let mut remaining: BTreeSet<(T, usize)> = sizes.iter().cloned().enumerate().map(|(j, c)| (c, j)).collect();
    let mut sigma = Vec::with_capacity(m);
    let mut first_share = Vec::with_capacity(m);

    let first = take_min_at_least(&mut remaining, &target).ok_or_else(|| {
        Error::InternalInvariant("no box of size >= tilde_c for the first step".into())
    })?;
    let mut running = sizes[first].clone() + target.clone() - c_max.clone();
    first_share.push(running.clone());
    sigma.push(first);

    for step in 2..=m {
        let threshold = T::from(step as i64) * target.clone() - c_max.clone();
        let next = if running <= threshold {
            take_min_at_least(&mut remaining, &target)
        } else {
            take_max_at_most(&mut remaining, &target)
        }
        .ok_or_else(|| {
            Error::InternalInvariant(format!("selection set empty at distribution step {step}"))
        })?;
        running = running + sizes[next].clone();
        first_share.push(running.clone() - T::from(step as i64 - 1) * target.clone());
        sigma.push(next);
    }

    for (l, share) in first_share.iter().enumerate() {
        if share.is_negative() || share > &sizes[sigma[l]] {
            return Err(Error::InternalInvariant(format!(
                "coefficient of box {} at step {} out of [0,1]",
                sigma[l] + 1,
                l + 1
            )));
        }
    }
    Ok(Selection { sigma, first_share })
}

fn take_min_at_least<T: Ord + Clone>(set: &mut BTreeSet<(T, usize)>, bound: &T) -> Option<usize> {
    let key = set.range((bound.clone(), 0)..).next().cloned()?;
    set.remove(&key);
    Some(key.1)
}

fn take_max_at_most<T: Ord + Clone>(set: &mut BTreeSet<(T, usize)>, bound: &T) -> Option<usize> {
    let (value, _) = set.range(..=(bound.clone(), usize::MAX)).next_back().cloned()?;
    // lowest index among the boxes sharing that size
    let key = set.range((value, 0)..).next().cloned()?;
    set.remove(&key);
    Some(key.1)
}

/// Per-object records, ordered by object id then stage.
fn assignments_for(
    packing: &Packing,
    sigma: &[usize],
    lambda1: &[Rational],
    lambda2: &[Rational],
) -> Result<Vec<Assignment>> {
    let m = sigma.len();
    let n = packing.object_count();
    let mut position = vec![0usize; m];
    for (l, &j) in sigma.iter().enumerate() {
        position[j] = l;
    }
    let mut slot = vec![usize::MAX; n];
    for (j, members) in packing.boxes.iter().enumerate() {
        for &id in members {
            if id >= n || slot[id] != usize::MAX {
                return Err(Error::PreconditionViolated(format!(
                    "box contents are not a partition of 0..{n} (object {id})"
                )));
            }
            slot[id] = position[j];
        }
    }
    let mut out = Vec::with_capacity(n + n / 2);
    for (object, &l) in slot.iter().enumerate() {
        if !lambda1[l].is_zero() {
            out.push(Assignment {
                object,
                bin: l,
                stage: 1,
                fraction: lambda1[l].clone(),
            });
        }
        let prev = (l + m - 1) % m;
        if !lambda2[prev].is_zero() {
            out.push(Assignment {
                object,
                bin: prev,
                stage: 2,
                fraction: lambda2[prev].clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn packing(sizes: &[i64]) -> Packing {
        Packing {
            boxes: (0..sizes.len()).map(|j| vec![j]).collect(),
            box_sizes: sizes.iter().map(|&s| r(s)).collect(),
        }
    }

    /// Direct transcription of the distribution rule over rationals with
    /// linear scans; shares no code with the implementation above.
    fn reference(sizes: &[Rational], tilde_c: &Rational) -> (Vec<usize>, Vec<Rational>, Vec<Rational>) {
        let m = sizes.len();
        let c_max = sizes.iter().max().unwrap().clone();
        let mut left: Vec<usize> = (0..m).collect();
        let pick = |left: &Vec<usize>, above: bool| -> usize {
            let mut best: Option<usize> = None;
            for &j in left {
                let ok = if above { sizes[j] >= *tilde_c } else { sizes[j] <= *tilde_c };
                if !ok {
                    continue;
                }
                best = match best {
                    None => Some(j),
                    Some(b) => {
                        let better = if above { sizes[j] < sizes[b] } else { sizes[j] > sizes[b] };
                        if better || (sizes[j] == sizes[b] && j < b) { Some(j) } else { Some(b) }
                    }
                };
            }
            best.unwrap()
        };
        let mut sigma = vec![pick(&left, true)];
        left.retain(|&j| j != sigma[0]);
        let mut s = &sizes[sigma[0]] + tilde_c - &c_max;
        let mut l1 = vec![&s / &sizes[sigma[0]]];
        let mut l2 = vec![Rational::zero(); m];
        l2[m - 1] = Rational::one() - &l1[0];
        for step in 2..=m {
            let above = s <= Rational::from(step) * tilde_c - &c_max;
            let j = pick(&left, above);
            left.retain(|&x| x != j);
            s += &sizes[j];
            let lam = (&s - Rational::from(step - 1) * tilde_c) / &sizes[j];
            l2[step - 2] = Rational::one() - &lam;
            l1.push(lam);
            sigma.push(j);
        }
        (sigma, l1, l2)
    }

    #[test]
    fn worked_example_trace() {
        let p = packing(&[8, 11, 11]);
        let plan = distribute_phase2(&p, &r(10)).unwrap();
        assert_eq!(plan.sigma, vec![1, 0, 2]);
        assert_eq!(
            plan.lambda1,
            vec![Rational::new(10, 11), r(1), Rational::new(9, 11)]
        );
        assert_eq!(
            plan.lambda2,
            vec![r(0), Rational::new(2, 11), Rational::new(1, 11)]
        );
        assert_eq!(plan.bin_loads, vec![r(10), r(10), r(10)]);
    }

    #[test]
    fn all_boxes_at_average() {
        let p = packing(&[7, 7, 7, 7]);
        let plan = distribute_phase2(&p, &r(7)).unwrap();
        assert!(plan.lambda1.iter().all(|l| l.is_one()));
        assert!(plan.lambda2.iter().all(|l| l.is_zero()));
        assert_eq!(plan.sigma, vec![0, 1, 2, 3]);
        assert_eq!(plan.assignments.len(), 4);
    }

    #[test]
    fn single_box() {
        let plan = distribute_phase2(&packing(&[5]), &r(5)).unwrap();
        assert_eq!(plan.lambda1, vec![r(1)]);
        assert_eq!(plan.lambda2, vec![r(0)]);
    }

    #[test]
    fn spread_too_large() {
        let err = distribute_phase2(&packing(&[1, 13]), &r(7)).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    #[test]
    fn wrong_average() {
        let err = distribute_phase2(&packing(&[8, 11, 11]), &r(11)).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(_)));
    }

    proptest! {
        #[test]
        fn agrees_with_reference(raw in prop::collection::vec(1i64..60, 1..12)) {
            let m = raw.len() as i64;
            let total: i64 = raw.iter().sum();
            let tilde_c = Rational::new(total, m);
            let spread = raw.iter().max().unwrap() - raw.iter().min().unwrap();
            prop_assume!(tilde_c >= spread);
            let p = packing(&raw);
            let plan = distribute_phase2(&p, &tilde_c).unwrap();
            let (sigma, l1, l2) = reference(&p.box_sizes, &tilde_c);
            prop_assert_eq!(&plan.sigma, &sigma);
            prop_assert_eq!(&plan.lambda1, &l1);
            prop_assert_eq!(&plan.lambda2, &l2);
            for load in &plan.bin_loads {
                prop_assert_eq!(load, &tilde_c);
            }
            for (l, lam) in plan.lambda1.iter().enumerate() {
                let cap = (&tilde_c / &p.box_sizes[plan.sigma[l]]).min(Rational::one());
                prop_assert!(!lam.is_negative() && *lam <= cap);
            }
        }
    }
}
