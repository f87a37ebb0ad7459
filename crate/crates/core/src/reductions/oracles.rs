use crate::error::{Error, Result};

/// Largest multiset the subset-sum oracles accept.
pub const ORACLE_LIMIT: usize = 24;

/// Some elements of a multiset, by index, with their values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubMultiset {
    pub indices: Vec<usize>,
    pub values: Vec<u64>,
}

impl SubMultiset {
    pub fn from_indices(set: &[u64], indices: Vec<usize>) -> Self {
        let values = indices.iter().map(|&i| set[i]).collect();
        SubMultiset { indices, values }
    }

    pub fn sum(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }

    /// The values sorted ascending, for order-insensitive comparison.
    pub fn sorted_values(&self) -> Vec<u64> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }

    /// Every index of `set` not in `self`.
    pub fn complement(&self, set: &[u64]) -> SubMultiset {
        let indices = (0..set.len()).filter(|i| !self.indices.contains(i)).collect();
        SubMultiset::from_indices(set, indices)
    }
}

fn guard(set: &[u64]) -> Result<()> {
    if set.len() > ORACLE_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "exhaustive subset search takes at most {ORACLE_LIMIT} elements, got {}",
            set.len()
        )));
    }
    Ok(())
}

/// The lexicographically first index subset (as an increasing sequence)
/// whose values sum to `target`.
pub fn first_subset_with_sum(set: &[u64], target: u128) -> Option<Vec<usize>> {
    fn go(set: &[u64], start: usize, left: u128, picked: &mut Vec<usize>) -> bool {
        for j in start..set.len() {
            let v = set[j] as u128;
            if v > left {
                continue;
            }
            picked.push(j);
            if v == left || go(set, j + 1, left - v, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    if target == 0 {
        return Some(Vec::new());
    }
    let mut picked = Vec::new();
    go(set, 0, target, &mut picked).then_some(picked)
}

/// Splits `set` into two halves of equal sum, if possible. The first half is
/// the lexicographically first index subset summing to `S/2`.
pub fn brute_force_partition(set: &[u64]) -> Result<Option<(SubMultiset, SubMultiset)>> {
    guard(set)?;
    let total: u128 = set.iter().map(|&v| v as u128).sum();
    if total % 2 == 1 {
        return Ok(None);
    }
    Ok(first_subset_with_sum(set, total / 2).map(|idx| {
        let first = SubMultiset::from_indices(set, idx);
        let second = first.complement(set);
        (first, second)
    }))
}

/// A subset summing to `S/3`, if one exists.
pub fn brute_force_subset_third(set: &[u64]) -> Result<Option<SubMultiset>> {
    guard(set)?;
    let total: u128 = set.iter().map(|&v| v as u128).sum();
    if !total.is_multiple_of(3) {
        return Err(Error::SumNotDivisible(total as u64));
    }
    if total == 0 {
        return Ok(None);
    }
    Ok(first_subset_with_sum(set, total / 3).map(|idx| SubMultiset::from_indices(set, idx)))
}
