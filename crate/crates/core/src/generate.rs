//! Seeded random instances.
//!
//! Sizes are drawn uniformly from `[base, base + floor(C)]`, so the spread
//! `a_1 - a_n` never exceeds the capacity. Draws where `⌈S/C⌉` would exceed
//! the number of objects are rejected and redrawn.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{lower_bound_bins, Instance};
use crate::rational::Rational;

/// Redraws allowed before a configuration is declared unusable.
const MAX_ATTEMPTS: usize = 1000;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` sizes uniform in `[base, base + width]`.
pub fn uniform_sizes<R: Rng + ?Sized>(rng: &mut R, n: usize, base: u64, width: u64) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(base..=base + width)).collect()
}

/// One draw with spread at most `capacity`, or `None` if it needs more bins
/// than objects.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, n: usize, base: u64, capacity: &Rational) -> Option<Instance> {
    let width = capacity.floor().try_into().unwrap_or(u64::MAX - base);
    let sizes = uniform_sizes(rng, n, base.max(1), width);
    let inst = Instance::new(sizes, capacity.clone()).ok()?;
    (lower_bound_bins(&inst) <= n).then_some(inst)
}

/// The benchmark instance for `(n, seed, base, capacity)`.
pub fn bench_instance(n: usize, seed: u64, base: u64, capacity: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    if capacity == 0 {
        return Err(Error::NonPositiveCapacity("0".into()));
    }
    let cap = Rational::from(capacity);
    let mut rng = seeded_rng(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(inst) = random_instance(&mut rng, n, base, &cap) {
            return Ok(inst);
        }
    }
    Err(Error::PreconditionViolated(format!(
        "sizes from [{base}, {}] need more than {n} bins of capacity {capacity}",
        base.saturating_add(capacity)
    )))
}

/// A small property-test instance: `n <= max_n`, a capacity that is an
/// integer or a fraction with denominator 2 or 3, and a base below `C/2`.
pub fn property_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Instance {
    loop {
        let n = rng.gen_range(1..=max_n);
        let denom: i64 = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
        let numer: i64 = rng.gen_range(denom..=60 * denom);
        let capacity = Rational::new(numer, denom);
        let half: u64 = (capacity.floor() / 2u32).try_into().unwrap_or(0);
        let base = rng.gen_range(1..=half.max(1));
        if let Some(inst) = random_instance(rng, n, base, &capacity) {
            return inst;
        }
    }
}

/// An instance where `S/m < a_1 - a_n <= C`: one large object among small
/// ones, so the rounding to `m` bins forces inflation.
pub fn inflation_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Instance {
    loop {
        let n = rng.gen_range(2..=max_n.max(2));
        let capacity: u64 = rng.gen_range(4..=100);
        let smallest: u64 = rng.gen_range(1..=3);
        let largest = rng.gen_range(smallest + capacity / 2..=smallest + capacity);
        let top = smallest + (largest - smallest) / 4;
        let mut sizes = vec![largest, smallest];
        sizes.extend((2..n).map(|_| rng.gen_range(smallest..=top)));
        let inst = match Instance::new(sizes, Rational::from(capacity)) {
            Ok(inst) => inst,
            Err(_) => continue,
        };
        let m = lower_bound_bins(&inst);
        let spread = Rational::from(inst.largest() - inst.smallest());
        let tilde_c = inst.total_rational() / Rational::from(m);
        if m <= n && tilde_c < spread {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_is_deterministic() {
        let a = bench_instance(1000, 7, 1, 100).unwrap();
        let b = bench_instance(1000, 7, 1, 100).unwrap();
        assert_eq!(a, b);
        assert!(a.largest() - a.smallest() <= 100);
        assert_ne!(a, bench_instance(1000, 8, 1, 100).unwrap());
    }

    #[test]
    fn bench_rejects_impossible_base() {
        assert!(bench_instance(10, 1, 1000, 10).is_err());
    }

    #[test]
    fn property_instances_meet_hypotheses() {
        let mut rng = seeded_rng(3);
        for _ in 0..500 {
            let inst = property_instance(&mut rng, 50);
            assert!(Rational::from(inst.largest() - inst.smallest()) <= *inst.capacity());
            assert!(lower_bound_bins(&inst) <= inst.len());
        }
    }

    #[test]
    fn inflation_instances_trigger() {
        let mut rng = seeded_rng(4);
        for _ in 0..200 {
            let inst = inflation_instance(&mut rng, 30);
            let m = lower_bound_bins(&inst);
            let spread = Rational::from(inst.largest() - inst.smallest());
            assert!(spread <= *inst.capacity());
            assert!(inst.total_rational() / Rational::from(m) < spread);
        }
    }
}
