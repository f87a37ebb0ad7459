//! Exact constraint checks for proposed solutions.
//!
//! Nothing here trusts the solver that produced a solution: factors are
//! inferred from the fractions themselves, and every row of the model is
//! evaluated in exact arithmetic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bmbp::StagedAssignment;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::kbfbp::KbfbpWitness;
use crate::rational::Rational;

/// The model row family a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Bin load exceeds the capacity.
    Capacity,
    /// An object's fractions do not sum to one.
    Demand,
    /// Fractions entering one bin (at one stage) differ.
    Balance,
    /// A factor or fraction lies outside `[0, 1]`.
    UnitInterval,
    /// An object uses more than `k` bins.
    SplitBound,
    /// An object uses more than one bin in a single stage.
    OneBinPerStage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    /// Object and bin indices (zero-based) and stage numbers the row is about.
    pub subjects: Vec<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        VerificationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn count(&self, constraint: Constraint) -> usize {
        self.violations.iter().filter(|v| v.constraint == constraint).count()
    }
}

fn violation(constraint: Constraint, subjects: Vec<usize>, lhs: Rational, rhs: Rational) -> Violation {
    Violation {
        constraint,
        subjects,
        lhs,
        rhs,
    }
}

fn in_unit(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Checks a split-bounded balanced packing with `lambda_ij = alpha_j * x_ij`.
///
/// Rows of `witness.x` follow the instance's input order. A bin with zero
/// load is treated as unused.
pub fn check_kbfbp(instance: &Instance, witness: &KbfbpWitness, k: usize) -> Result<VerificationReport> {
    let n = instance.len();
    let m = witness.bins();
    if witness.objects() != n {
        return Err(Error::DimensionMismatch(format!(
            "witness has {} rows for {n} objects",
            witness.objects()
        )));
    }
    if let Some(i) = witness.x.iter().position(|row| row.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} of x has {} entries for {m} factors",
            witness.x[i].len()
        )));
    }
    let mut out = Vec::new();
    for (j, a) in witness.alpha.iter().enumerate() {
        if !in_unit(a) {
            out.push(violation(Constraint::UnitInterval, vec![j], a.clone(), Rational::one()));
        }
    }
    let sizes = instance.input_sizes();
    let mut loads = vec![Rational::zero(); m];
    for (i, row) in witness.x.iter().enumerate() {
        let mut share = Rational::zero();
        let mut used = 0usize;
        for (j, &on) in row.iter().enumerate() {
            if on {
                used += 1;
                share += &witness.alpha[j];
                loads[j] += Rational::from(sizes[i]) * &witness.alpha[j];
            }
        }
        if !share.is_one() {
            out.push(violation(Constraint::Demand, vec![i], share, Rational::one()));
        }
        if used > k {
            out.push(violation(
                Constraint::SplitBound,
                vec![i],
                Rational::from(used),
                Rational::from(k),
            ));
        }
    }
    for (j, load) in loads.into_iter().enumerate() {
        if load > *instance.capacity() {
            out.push(violation(Constraint::Capacity, vec![j], load, instance.capacity().clone()));
        }
    }
    Ok(VerificationReport::from_violations(out))
}

/// Checks a multistage balanced allocation using at most `max_stages` stages.
///
/// Each `(bin, stage)` factor is inferred as the first nonzero fraction sent
/// there; every other nonzero fraction into that pair must equal it.
pub fn check_bmbp(instance: &Instance, plan: &StagedAssignment, max_stages: usize) -> Result<VerificationReport> {
    let n = instance.len();
    let m = plan.bins;
    if plan.stages > max_stages {
        return Err(Error::DimensionMismatch(format!(
            "plan uses {} stages, at most {max_stages} allowed",
            plan.stages
        )));
    }
    for e in &plan.entries {
        if e.object >= n || e.bin >= m || e.stage == 0 || e.stage > plan.stages {
            return Err(Error::DimensionMismatch(format!(
                "assignment (object {}, bin {}, stage {}) outside {n} objects, {m} bins, {} stages",
                e.object, e.bin, e.stage, plan.stages
            )));
        }
    }
    let sizes = instance.input_sizes();
    let mut out = Vec::new();
    let mut demand = vec![Rational::zero(); n];
    let mut loads = vec![Rational::zero(); m];
    let mut per_stage: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut factor: BTreeMap<(usize, usize), Rational> = BTreeMap::new();

    for e in &plan.entries {
        if !in_unit(&e.fraction) {
            out.push(violation(
                Constraint::UnitInterval,
                vec![e.object, e.bin, e.stage],
                e.fraction.clone(),
                Rational::one(),
            ));
        }
        demand[e.object] += &e.fraction;
        loads[e.bin] += Rational::from(sizes[e.object]) * &e.fraction;
        if e.fraction.is_zero() {
            continue;
        }
        per_stage.entry((e.object, e.stage)).or_default().push(e.bin);
        match factor.get(&(e.bin, e.stage)) {
            None => {
                factor.insert((e.bin, e.stage), e.fraction.clone());
            }
            Some(alpha) if *alpha != e.fraction => {
                out.push(violation(
                    Constraint::Balance,
                    vec![e.object, e.bin, e.stage],
                    e.fraction.clone(),
                    alpha.clone(),
                ));
            }
            Some(_) => {}
        }
    }
    for ((object, stage), bins) in per_stage {
        if bins.len() > 1 {
            out.push(violation(
                Constraint::OneBinPerStage,
                vec![object, stage],
                Rational::from(bins.len()),
                Rational::one(),
            ));
        }
    }
    for (i, total) in demand.into_iter().enumerate() {
        if !total.is_one() {
            out.push(violation(Constraint::Demand, vec![i], total, Rational::one()));
        }
    }
    for (j, load) in loads.into_iter().enumerate() {
        if load > *instance.capacity() {
            out.push(violation(Constraint::Capacity, vec![j], load, instance.capacity().clone()));
        }
    }
    Ok(VerificationReport::from_violations(out))
}
