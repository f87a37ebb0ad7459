use std::thread;

use super::{
    brute_force_partition, brute_force_subset_third, extract_partition, extract_subset_third, partition_to_2bfbp,
    subsetsum_to_3bfbp,
};
use crate::error::Result;
use crate::kbfbp::solve_kbfbp_decision;

/// One source multiset checked both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub source: Vec<u64>,
    pub oracle: bool,
    pub solver: bool,
    /// Whether the certificate read back from the solver's witness has the
    /// required sum; `true` when there is no witness.
    pub certificate_ok: bool,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.oracle == self.solver && self.certificate_ok
    }
}

/// Partition oracle vs. the exact solver on the reduced 3-bin instance.
pub fn check_partition_equivalence(set: &[u64]) -> Result<Equivalence> {
    let reduced = partition_to_2bfbp(set)?;
    let oracle = brute_force_partition(set)?.is_some();
    let witness = solve_kbfbp_decision(&reduced.instance, reduced.bins(), reduced.split_bound())?;
    let certificate_ok = match &witness {
        None => true,
        Some(w) => match extract_partition(w, &reduced) {
            Ok((a, b)) => a.sum() == b.sum() && a.sum() * 2 == reduced.source_total(),
            Err(_) => false,
        },
    };
    Ok(Equivalence {
        source: set.to_vec(),
        oracle,
        solver: witness.is_some(),
        certificate_ok,
    })
}

/// Subset-third oracle vs. the exact solver on the reduced 4-bin instance.
pub fn check_subset_third_equivalence(set: &[u64]) -> Result<Equivalence> {
    let reduced = subsetsum_to_3bfbp(set)?;
    let oracle = brute_force_subset_third(set)?.is_some();
    let witness = solve_kbfbp_decision(&reduced.instance, reduced.bins(), reduced.split_bound())?;
    let certificate_ok = match &witness {
        None => true,
        Some(w) => match extract_subset_third(w, &reduced) {
            Ok(subset) => subset.sum() * 3 == reduced.source_total(),
            Err(_) => false,
        },
    };
    Ok(Equivalence {
        source: set.to_vec(),
        oracle,
        solver: witness.is_some(),
        certificate_ok,
    })
}

/// Non-increasing multisets of length `1..=max_n` over `1..=max_size`.
fn multisets(max_n: usize, max_size: u64) -> Vec<Vec<u64>> {
    fn go(max_n: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_n {
            return;
        }
        for v in (1..=cap).rev() {
            cur.push(v);
            go(max_n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(max_n, max_size, &mut Vec::new(), &mut out);
    out
}

/// Every multiset meeting the partition reduction's preconditions.
pub fn partition_universe(max_n: usize, max_size: u64) -> Vec<Vec<u64>> {
    multisets(max_n, max_size)
        .into_iter()
        .filter(|s| partition_to_2bfbp(s).is_ok())
        .collect()
}

/// Every multiset meeting the subset-third reduction's preconditions.
pub fn subset_third_universe(max_n: usize, max_size: u64) -> Vec<Vec<u64>> {
    multisets(max_n, max_size)
        .into_iter()
        .filter(|s| subsetsum_to_3bfbp(s).is_ok())
        .collect()
}

/// Applies `check` to every item on up to `jobs` threads. Results come back
/// in input order regardless of `jobs`.
pub fn run_sweep<T, R, F>(items: &[T], jobs: usize, check: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&check).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let check = &check;
                scope.spawn(move || part.iter().map(check).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_enumeration_counts() {
        // C(3+n-1, n) for n = 1, 2: 3 + 6
        assert_eq!(multisets(2, 3).len(), 9);
    }

    #[test]
    fn universe_respects_preconditions() {
        for s in partition_universe(4, 6) {
            let total: u64 = s.iter().sum();
            assert!(total.is_multiple_of(2) && total > 8 && s.iter().all(|&v| 2 * v <= total));
        }
    }

    #[test]
    fn sweep_order_is_stable() {
        let items: Vec<u64> = (0..37).collect();
        let one = run_sweep(&items, 1, |x| x * x);
        let many = run_sweep(&items, 5, |x| x * x);
        assert_eq!(one, many);
    }

    #[test]
    fn worked_partition_cases() {
        let yes = check_partition_equivalence(&[2, 3, 3, 4]).unwrap();
        assert!(yes.oracle && yes.solver && yes.certificate_ok);
        let no = check_partition_equivalence(&[3, 3, 3, 1]).unwrap();
        assert!(!no.oracle && !no.solver);
    }
}
