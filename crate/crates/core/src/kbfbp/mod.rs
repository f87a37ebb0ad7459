//! Exact decision procedure for balanced fractional packing with a split
//! bound `k`: every object goes to at most `k` of the `m` bins, and each bin
//! stores the same fraction of every object it receives.
//!
//! The search fixes the 0/1 incidence pattern row by row (objects in
//! non-increasing size order) and asks an exact linear-feasibility oracle for
//! the per-bin factors. Partial patterns are pruned as soon as the factors
//! become infeasible, since adding rows only tightens the system.

mod binpacking;
mod patterns;
mod witness;

pub use binpacking::{brute_force_binpacking, brute_force_binpacking_assignment, BINPACKING_LIMIT};
pub use patterns::{enumerate_patterns, pattern_count, row_choices, Patterns, SplitPattern, PATTERN_LIMIT};
pub use witness::{KbfbpWitness, WitnessFile};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::linear::LinearSystem;
use crate::rational::Rational;
use patterns::{canonical_step, check_guard};

/// Search switches for [`solve_kbfbp_decision_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Skip patterns equivalent under relabeling bins or swapping
    /// equal-size objects.
    pub symmetry_pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry_pruning: true,
        }
    }
}

/// The factor system for the given rows: `sum_{j in row} alpha_j = 1` per
/// distinct row and `0 <= alpha_j <= min(1, C / s_j)`.
fn factor_system<'a>(rows: impl IntoIterator<Item = &'a [usize]>, loads: &[u128], cap: &Rational) -> LinearSystem {
    let m = loads.len();
    let mut sys = LinearSystem::new(m);
    let mut seen: Vec<&[usize]> = Vec::new();
    for row in rows {
        if seen.contains(&row) {
            continue;
        }
        seen.push(row);
        let mut coeffs = vec![Rational::zero(); m];
        for &j in row {
            coeffs[j] = Rational::one();
        }
        sys.add_eq(coeffs, Rational::one());
    }
    for (j, &s) in loads.iter().enumerate() {
        let hi = if s == 0 {
            Rational::one()
        } else {
            (cap / Rational::from(s)).min(Rational::one())
        };
        sys.add_bounds(j, Rational::zero(), hi);
    }
    sys
}

/// Proportionality factors realizing `pattern` on `instance`, if any exist.
///
/// Pattern rows follow the instance's input order.
pub fn feasible_alpha(pattern: &SplitPattern, instance: &Instance) -> Result<Option<Vec<Rational>>> {
    if pattern.objects() != instance.len() {
        return Err(Error::DimensionMismatch(format!(
            "pattern has {} rows for {} objects",
            pattern.objects(),
            instance.len()
        )));
    }
    let m = pattern.bins;
    let mut loads = vec![0u128; m];
    for (row, &size) in pattern.rows.iter().zip(instance.input_sizes()) {
        if row.is_empty() || row.iter().any(|&j| j >= m) {
            return Err(Error::DimensionMismatch(format!(
                "pattern row {row:?} is empty or names a bin outside 0..{m}"
            )));
        }
        for &j in row {
            loads[j] += size as u128;
        }
    }
    let sys = factor_system(pattern.rows.iter().map(Vec::as_slice), &loads, instance.capacity());
    Ok(sys.solve())
}

/// Decides the split-bounded balanced problem on `m` bins with split bound `k`.
pub fn solve_kbfbp_decision(instance: &Instance, m: usize, k: usize) -> Result<Option<KbfbpWitness>> {
    solve_kbfbp_decision_with(instance, m, k, SearchOptions::default())
}

pub fn solve_kbfbp_decision_with(
    instance: &Instance,
    m: usize,
    k: usize,
    options: SearchOptions,
) -> Result<Option<KbfbpWitness>> {
    if m == 0 || k == 0 {
        return Err(Error::PreconditionViolated(format!(
            "need at least one bin and a split bound of at least one (m = {m}, k = {k})"
        )));
    }
    if Rational::from(instance.largest()) > *instance.capacity() {
        return Err(Error::CapacityTooSmallForObject {
            index: instance.original_index(0),
            size: instance.largest(),
            capacity: instance.capacity().to_string(),
        });
    }
    check_guard(instance.len(), m, k)?;

    let mut search = Search {
        sizes: instance.sizes(),
        choices: row_choices(m, k),
        cap: instance.capacity(),
        symmetry: options.symmetry_pruning,
        digits: Vec::with_capacity(instance.len()),
        loads: vec![0; m],
    };
    let Some(alpha) = search.dfs(0) else {
        return Ok(None);
    };
    let mut x = vec![vec![false; m]; instance.len()];
    for (pos, &d) in search.digits.iter().enumerate() {
        for &j in &search.choices[d] {
            x[instance.original_index(pos)][j] = true;
        }
    }
    let mut witness = KbfbpWitness { x, alpha };
    witness.canonicalize();
    Ok(Some(witness))
}

struct Search<'a> {
    sizes: &'a [u64],
    choices: Vec<Vec<usize>>,
    cap: &'a Rational,
    symmetry: bool,
    digits: Vec<usize>,
    loads: Vec<u128>,
}

impl Search<'_> {
    /// Extends `digits` to a full feasible pattern; leaves it filled on success.
    fn dfs(&mut self, used: usize) -> Option<Vec<Rational>> {
        let depth = self.digits.len();
        let size = self.sizes[depth] as u128;
        for d in 0..self.choices.len() {
            let mut next_used = used;
            if self.symmetry {
                if depth > 0 && self.sizes[depth] == self.sizes[depth - 1] && d < self.digits[depth - 1] {
                    continue;
                }
                match canonical_step(&self.choices[d], used) {
                    Some(u) => next_used = u,
                    None => continue,
                }
            }
            self.digits.push(d);
            for &j in &self.choices[d] {
                self.loads[j] += size;
            }
            let rows = self.digits.iter().map(|&d| self.choices[d].as_slice());
            let alpha = factor_system(rows, &self.loads, self.cap).solve();
            if let Some(alpha) = alpha {
                if depth + 1 == self.sizes.len() {
                    return Some(alpha);
                }
                if let Some(found) = self.dfs(next_used) {
                    return Some(found);
                }
            }
            for &j in &self.choices[d] {
                self.loads[j] -= size;
            }
            self.digits.pop();
        }
        None
    }
}
