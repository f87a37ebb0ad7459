use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A fraction of one object sent to one bin at one stage.
///
/// `object` and `bin` are zero-based; `stage` counts from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub object: usize,
    pub bin: usize,
    pub stage: usize,
    pub fraction: Rational,
}

/// Phase-II result of the two-stage algorithm.
///
/// Bin `l` receives `lambda1[l]` of every object in box `sigma[l]` at stage 1
/// and `lambda2[l]` of every object in box `sigma[(l + 1) % m]` at stage 2.
/// Zero fractions stay in the coefficient vectors but are left out of
/// `assignments`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStagePlan {
    pub sigma: Vec<usize>,
    pub lambda1: Vec<Rational>,
    pub lambda2: Vec<Rational>,
    pub tilde_c: Rational,
    pub assignments: Vec<Assignment>,
    pub bin_loads: Vec<Rational>,
}

impl TwoStagePlan {
    pub fn bins(&self) -> usize {
        self.sigma.len()
    }

    pub fn to_staged(&self) -> StagedAssignment {
        StagedAssignment {
            bins: self.bins(),
            stages: 2,
            entries: self.assignments.clone(),
        }
    }

    /// Distinct bins that receive part of each object.
    pub fn bins_per_object(&self, n: usize) -> Vec<usize> {
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.assignments {
            if !seen[a.object].contains(&a.bin) {
                seen[a.object].push(a.bin);
            }
        }
        seen.iter().map(Vec::len).collect()
    }
}

/// A general multistage allocation, as checked by the verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedAssignment {
    pub bins: usize,
    pub stages: usize,
    pub entries: Vec<Assignment>,
}

/// JSON form of an [`Assignment`]; indices are one-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub object: usize,
    pub bin: usize,
    pub stage: usize,
    pub fraction: Rational,
}

/// The plan document written by `solve-bmbp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    pub bins: usize,
    pub tilde_c: Rational,
    pub sigma: Vec<usize>,
    pub lambda1: Vec<Rational>,
    pub lambda2: Vec<Rational>,
    pub assignments: Vec<AssignmentRecord>,
    pub bin_loads: Vec<Rational>,
}

impl From<&TwoStagePlan> for PlanFile {
    fn from(plan: &TwoStagePlan) -> Self {
        PlanFile {
            bins: plan.bins(),
            tilde_c: plan.tilde_c.clone(),
            sigma: plan.sigma.iter().map(|s| s + 1).collect(),
            lambda1: plan.lambda1.clone(),
            lambda2: plan.lambda2.clone(),
            assignments: plan
                .assignments
                .iter()
                .map(|a| AssignmentRecord {
                    object: a.object + 1,
                    bin: a.bin + 1,
                    stage: a.stage,
                    fraction: a.fraction.clone(),
                })
                .collect(),
            bin_loads: plan.bin_loads.clone(),
        }
    }
}

fn to_zero_based(v: usize, what: &str) -> Result<usize> {
    v.checked_sub(1)
        .ok_or_else(|| Error::DimensionMismatch(format!("{what} indices are one-based, got 0")))
}

impl PlanFile {
    /// The assignments only; coefficient vectors are not needed to verify a plan.
    pub fn to_staged(&self, stages: usize) -> Result<StagedAssignment> {
        let entries = self
            .assignments
            .iter()
            .map(|r| {
                Ok(Assignment {
                    object: to_zero_based(r.object, "object")?,
                    bin: to_zero_based(r.bin, "bin")?,
                    stage: r.stage,
                    fraction: r.fraction.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StagedAssignment {
            bins: self.bins,
            stages,
            entries,
        })
    }

    pub fn into_plan(self) -> Result<TwoStagePlan> {
        let m = self.bins;
        if self.sigma.len() != m || self.lambda1.len() != m || self.lambda2.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "plan declares {m} bins but sigma/lambda have lengths {}/{}/{}",
                self.sigma.len(),
                self.lambda1.len(),
                self.lambda2.len()
            )));
        }
        let staged = self.to_staged(2)?;
        Ok(TwoStagePlan {
            sigma: self
                .sigma
                .iter()
                .map(|&s| to_zero_based(s, "sigma"))
                .collect::<Result<_>>()?,
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            tilde_c: self.tilde_c,
            assignments: staged.entries,
            bin_loads: self.bin_loads,
        })
    }
}
