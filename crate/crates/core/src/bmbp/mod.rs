//! Two-stage balanced multistage bin packing.
//!
//! The solver packs whole objects greedily into `m = ⌈S/C⌉` boxes, then
//! spreads each box over two consecutive bins of a circular order so every
//! bin carries exactly `S/m`. Instances whose size spread exceeds `S/m` are
//! first inflated, planned, then deflated back to their real sizes.

mod distribute;
mod inflate;
mod packing;
mod plan;

pub use distribute::distribute_phase2;
pub use inflate::{inflate_sizes, InflationResult};
pub use packing::{pack_phase1, pack_rational, Packing};
pub use plan::{Assignment, AssignmentRecord, PlanFile, StagedAssignment, TwoStagePlan};

use crate::error::{Error, Result};
use crate::instance::{lower_bound_bins, Instance};
use crate::rational::Rational;

/// Everything the pipeline computed on the way to a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmbpTrace {
    pub bins: usize,
    pub inflation: InflationResult,
    pub packing: Packing,
    pub plan: TwoStagePlan,
}

/// Solves the instance in two stages on `⌈S/C⌉` bins.
///
/// Requires `a_1 - a_n <= C` and `⌈S/C⌉ <= n`.
pub fn solve_bmbp(instance: &Instance) -> Result<TwoStagePlan> {
    solve_bmbp_traced(instance).map(|t| t.plan)
}

pub fn solve_bmbp_traced(instance: &Instance) -> Result<BmbpTrace> {
    let n = instance.len();
    let m = lower_bound_bins(instance);
    if m > n {
        return Err(Error::PreconditionViolated(format!(
            "⌈S/C⌉ = {m} bins exceed the {n} objects"
        )));
    }
    let inflation = inflate_sizes(instance, m)?;
    let packing = if inflation.raised_count == 0 {
        pack_phase1(instance, m)
    } else {
        pack_rational(instance.index_map(), &inflation.inflated_sizes, m)
    };
    let tilde_c = inflation.total() / Rational::from(m);
    let mut plan = distribute_phase2(&packing, &tilde_c)?;

    if inflation.raised_count > 0 {
        // deflate: same fractions, loads against the real sizes
        let real: Vec<u128> = packing
            .boxes
            .iter()
            .map(|b| {
                b.iter().map(|&i| instance.input_sizes()[i] as u128).sum::<u128>()
            })
            .collect();
        plan.bin_loads = (0..m)
            .map(|l| {
                let next = plan.sigma[(l + 1) % m];
                weighted_pair(&plan.lambda1[l], real[plan.sigma[l]], &plan.lambda2[l], real[next])
            })
            .collect();
    }
    if let Some(l) = plan.bin_loads.iter().position(|load| load > instance.capacity()) {
        return Err(Error::InternalInvariant(format!(
            "bin {} load {} exceeds capacity {}",
            l + 1,
            plan.bin_loads[l],
            instance.capacity()
        )));
    }
    Ok(BmbpTrace {
        bins: m,
        inflation,
        packing,
        plan,
    })
}

/// `x * a + y * b`, in machine integers when nothing overflows.
fn weighted_pair(x: &Rational, a: u128, y: &Rational, b: u128) -> Rational {
    let fast = || -> Option<Rational> {
        let (p1, q1) = x.to_i128_parts()?;
        let (p2, q2) = y.to_i128_parts()?;
        let (a, b) = (i128::try_from(a).ok()?, i128::try_from(b).ok()?);
        let left = p1.checked_mul(a)?.checked_mul(q2)?;
        let right = p2.checked_mul(b)?.checked_mul(q1)?;
        Some(Rational::from_i128(left.checked_add(right)?, q1.checked_mul(q2)?))
    };
    fast().unwrap_or_else(|| x * Rational::from(a) + y * Rational::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn worked_example() {
        let inst = validate_instance(&[8, 7, 6, 5, 4], r(10)).unwrap();
        let plan = solve_bmbp(&inst).unwrap();
        assert_eq!(plan.bins(), 3);
        assert_eq!(plan.sigma, vec![1, 0, 2]);
        assert_eq!(plan.bin_loads, vec![r(10); 3]);
        assert!(plan.bins_per_object(5).iter().all(|&b| b <= 2));
    }

    #[test]
    fn inflated_then_deflated() {
        let inst = validate_instance(&[10, 1, 1], r(10)).unwrap();
        let plan = solve_bmbp(&inst).unwrap();
        let big: Vec<_> = plan.assignments.iter().filter(|a| a.object == 0).collect();
        assert_eq!(big.len(), 2);
        assert_eq!((big[0].bin, big[0].stage, &big[0].fraction), (0, 1, &Rational::new(3, 4)));
        assert_eq!((big[1].bin, big[1].stage, &big[1].fraction), (1, 2, &Rational::new(1, 4)));
        for unit in [1, 2] {
            let parts: Vec<_> = plan.assignments.iter().filter(|a| a.object == unit).collect();
            assert_eq!(parts.len(), 1);
            assert_eq!((parts[0].bin, parts[0].stage, &parts[0].fraction), (1, 1, &r(1)));
        }
        assert_eq!(plan.bin_loads, vec![Rational::new(15, 2), Rational::new(9, 2)]);
        assert_eq!(plan.tilde_c, Rational::new(15, 2));
    }

    #[test]
    fn single_object() {
        let inst = validate_instance(&[5], r(5)).unwrap();
        let plan = solve_bmbp(&inst).unwrap();
        assert_eq!(plan.lambda1, vec![r(1)]);
        assert_eq!(plan.bin_loads, vec![r(5)]);
    }

    #[test]
    fn rejects_too_few_objects() {
        let inst = validate_instance(&[100, 95], r(10)).unwrap();
        assert!(matches!(solve_bmbp(&inst), Err(Error::PreconditionViolated(_))));
    }
}
