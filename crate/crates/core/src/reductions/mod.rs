//! Hardness reductions as instance generators.
//!
//! [`partition_to_2bfbp`] turns an equal-sum partition question into a
//! 3-bin balanced instance with split bound 2; [`subsetsum_to_3bfbp`] turns a
//! subset-of-sum-`S/3` question into a 4-bin instance with split bound 3.
//! Each comes with an extractor that reads the certificate back out of a
//! balanced witness, and brute-force oracles answer the source questions
//! directly for cross-checking.

mod oracles;
mod sweep;

pub use oracles::{brute_force_partition, brute_force_subset_third, first_subset_with_sum, SubMultiset, ORACLE_LIMIT};
pub use sweep::{
    check_partition_equivalence, check_subset_third_equivalence, partition_universe, run_sweep,
    subset_third_universe, Equivalence,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, InstanceFile};
use crate::kbfbp::KbfbpWitness;
use crate::rational::Rational;
use crate::verify::check_kbfbp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Partition,
    SubsetThird,
}

/// A balanced instance built from a source multiset `A`.
///
/// The instance's input order is `A` followed by the `pad_count` pad objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub instance: Instance,
    pub kind: SourceKind,
    pub pad_value: u64,
    pub pad_count: usize,
    pub residue: u64,
}

impl ReducedInstance {
    pub fn source(&self) -> &[u64] {
        let n = self.instance.len() - self.pad_count;
        &self.instance.input_sizes()[..n]
    }

    pub fn source_total(&self) -> u128 {
        self.source().iter().map(|&v| v as u128).sum()
    }

    pub fn is_pad(&self, object: usize) -> bool {
        object >= self.source().len()
    }

    pub fn bins(&self) -> usize {
        self.instance.bins().expect("reduced instances fix the bin count")
    }

    pub fn split_bound(&self) -> usize {
        self.instance.split_bound().expect("reduced instances fix the split bound")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInfo {
    pub kind: SourceKind,
    pub pad_value: u64,
    pub pad_count: usize,
    pub residue: u64,
}

/// The standard instance document plus a `reduction` object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedInstanceFile {
    #[serde(flatten)]
    pub instance: InstanceFile,
    pub reduction: ReductionInfo,
}

impl From<&ReducedInstance> for ReducedInstanceFile {
    fn from(r: &ReducedInstance) -> Self {
        ReducedInstanceFile {
            instance: InstanceFile::from(&r.instance),
            reduction: ReductionInfo {
                kind: r.kind,
                pad_value: r.pad_value,
                pad_count: r.pad_count,
                residue: r.residue,
            },
        }
    }
}

impl ReducedInstanceFile {
    pub fn into_reduced(self) -> Result<ReducedInstance> {
        let instance = self.instance.into_instance()?;
        let info = self.reduction;
        if info.pad_count >= instance.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} pads among {} objects",
                info.pad_count,
                instance.len()
            )));
        }
        if instance.bins().is_none() || instance.split_bound().is_none() {
            return Err(Error::DimensionMismatch(
                "reduced instance must state bins and split_bound".into(),
            ));
        }
        Ok(ReducedInstance {
            instance,
            kind: info.kind,
            pad_value: info.pad_value,
            pad_count: info.pad_count,
            residue: info.residue,
        })
    }
}

fn checked_total(set: &[u64]) -> Result<u64> {
    if let Some(index) = set.iter().position(|&v| v == 0) {
        return Err(Error::NonPositiveSize { index, size: 0 });
    }
    set.iter()
        .try_fold(0u64, |acc, &v| acc.checked_add(v))
        .ok_or_else(|| Error::InstanceTooLarge("source sum overflows u64".into()))
}

/// `A -> A ∪ {S/2+4-r, S/2+4-r}` with capacity `2(S+4-r)/3`, 3 bins, split bound 2.
///
/// Needs `S` even, `max(A) <= S/2` and `S > 8`.
pub fn partition_to_2bfbp(set: &[u64]) -> Result<ReducedInstance> {
    let total = checked_total(set)?;
    if total % 2 == 1 {
        return Err(Error::TrivialInstance(format!("sum {total} is odd")));
    }
    if set.iter().any(|&v| v > total / 2) {
        return Err(Error::TrivialInstance(format!("an element exceeds half the sum {total}")));
    }
    if total <= 8 {
        return Err(Error::TrivialInstance(format!("sum {total} <= 8")));
    }
    let residue = total % 3;
    let pad_value = total / 2 + 4 - residue;
    let capacity = Rational::new(2 * (total + 4 - residue), 3);
    let mut sizes = set.to_vec();
    sizes.extend([pad_value; 2]);
    let instance = Instance::new(sizes, capacity)?.with_bins(3).with_split_bound(2);
    Ok(ReducedInstance {
        instance,
        kind: SourceKind::Partition,
        pad_value,
        pad_count: 2,
        residue,
    })
}

/// `A -> A ∪ {2S/3+r+1} x3` with capacity `3(S+r+1)/4`, 4 bins, split bound 3.
///
/// Needs `S` divisible by 3, `max(A) <= 2S/3` and `S > 3`.
pub fn subsetsum_to_3bfbp(set: &[u64]) -> Result<ReducedInstance> {
    let total = checked_total(set)?;
    if total % 3 != 0 {
        return Err(Error::TrivialInstance(format!("sum {total} is not divisible by 3")));
    }
    if set.iter().any(|&v| v > 2 * total / 3) {
        return Err(Error::TrivialInstance(format!(
            "an element exceeds two thirds of the sum {total}"
        )));
    }
    if total <= 3 {
        return Err(Error::TrivialInstance(format!("sum {total} <= 3")));
    }
    let residue = total % 2;
    let pad_value = 2 * total / 3 + residue + 1;
    let capacity = Rational::new(3 * (total + residue + 1), 4);
    let mut sizes = set.to_vec();
    sizes.extend([pad_value; 3]);
    let instance = Instance::new(sizes, capacity)?.with_bins(4).with_split_bound(3);
    Ok(ReducedInstance {
        instance,
        kind: SourceKind::SubsetThird,
        pad_value,
        pad_count: 3,
        residue,
    })
}

fn require_valid(reduced: &ReducedInstance, witness: &KbfbpWitness, kind: SourceKind) -> Result<()> {
    if reduced.kind != kind {
        return Err(Error::MalformedWitness(format!(
            "expected a {kind:?} reduction, got {:?}",
            reduced.kind
        )));
    }
    if witness.bins() != reduced.bins() {
        return Err(Error::MalformedWitness(format!(
            "witness has {} bins, the reduction fixes {}",
            witness.bins(),
            reduced.bins()
        )));
    }
    let report = check_kbfbp(&reduced.instance, witness, reduced.split_bound())
        .map_err(|e| Error::MalformedWitness(e.to_string()))?;
    if !report.ok {
        return Err(Error::MalformedWitness(format!(
            "witness fails verification with {} violation(s)",
            report.violations.len()
        )));
    }
    Ok(())
}

/// Reads an equal-sum partition of `A` out of a witness on the reduced instance.
///
/// Valid witnesses have factors `{2/3, 2/3, 1/3}`; the source elements in the
/// two 2/3-bins (lower bin index first) are the two halves.
pub fn extract_partition(witness: &KbfbpWitness, reduced: &ReducedInstance) -> Result<(SubMultiset, SubMultiset)> {
    require_valid(reduced, witness, SourceKind::Partition)?;
    let two_thirds = Rational::new(2, 3);
    let mut factors = witness.alpha.clone();
    factors.sort();
    if factors != [Rational::new(1, 3), two_thirds.clone(), two_thirds.clone()] {
        let shown: Vec<String> = witness.alpha.iter().map(ToString::to_string).collect();
        return Err(Error::MalformedWitness(format!(
            "factors [{}] are not {{2/3, 2/3, 1/3}}",
            shown.join(", ")
        )));
    }
    let source = reduced.source();
    let halves: Vec<SubMultiset> = (0..witness.bins())
        .filter(|&j| witness.alpha[j] == two_thirds)
        .map(|j| {
            let idx = witness.members(j).into_iter().filter(|&i| !reduced.is_pad(i)).collect();
            SubMultiset::from_indices(source, idx)
        })
        .collect();
    let half = reduced.source_total() / 2;
    if halves.iter().any(|h| h.sum() != half) {
        return Err(Error::MalformedWitness("2/3-bins do not split the source evenly".into()));
    }
    let mut it = halves.into_iter();
    Ok((it.next().expect("two halves"), it.next().expect("two halves")))
}

/// Reads a subset of `A` with sum `S/3` out of a witness on the reduced instance.
///
/// Scans, for each bin, the objects it receives and the objects it does not;
/// one of these sums to `S'/3` and holds exactly one pad.
pub fn extract_subset_third(witness: &KbfbpWitness, reduced: &ReducedInstance) -> Result<SubMultiset> {
    require_valid(reduced, witness, SourceKind::SubsetThird)?;
    let sizes = reduced.instance.input_sizes();
    let target = reduced.source_total() + reduced.residue as u128 + 1;
    let n = sizes.len();
    for j in 0..witness.bins() {
        let inside = witness.members(j);
        let outside: Vec<usize> = (0..n).filter(|i| !inside.contains(i)).collect();
        for candidate in [inside, outside] {
            let sum: u128 = candidate.iter().map(|&i| sizes[i] as u128).sum();
            let pads = candidate.iter().filter(|&&i| reduced.is_pad(i)).count();
            if sum == target && pads == 1 {
                let idx = candidate.into_iter().filter(|&i| !reduced.is_pad(i)).collect();
                return Ok(SubMultiset::from_indices(reduced.source(), idx));
            }
        }
    }
    Err(Error::MalformedWitness(format!(
        "no bin's allocated set or its complement sums to {target} with one pad"
    )))
}
