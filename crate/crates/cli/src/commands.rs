use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use balpack::bmbp::PlanFile;
use balpack::generate::bench_instance;
use balpack::kbfbp::{brute_force_binpacking_assignment, solve_kbfbp_decision_with, SearchOptions, WitnessFile};
use balpack::mip::{export_model_with, ExportOptions, ModelKind};
use balpack::reductions::{
    brute_force_partition, brute_force_subset_third, check_partition_equivalence, check_subset_third_equivalence,
    extract_partition, extract_subset_third, partition_to_2bfbp, partition_universe, run_sweep,
    subset_third_universe, subsetsum_to_3bfbp, Equivalence, ReducedInstanceFile, SubMultiset,
};
use balpack::{check_bmbp, check_kbfbp, lower_bound_bins, Instance, InstanceFile, KbfbpWitness};
use serde::Serialize;

use crate::io::{emit, emit_json, read_json, read_set};
use crate::{MipKind, OracleKind, SourceKind};

pub enum Outcome {
    Done,
    Infeasible(String),
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Guard(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Guard(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) | Failure::Guard(msg) => f.write_str(msg),
        }
    }
}

impl From<balpack::Error> for Failure {
    fn from(e: balpack::Error) -> Self {
        if e.is_guard() {
            Failure::Guard(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(read_json::<InstanceFile>(path)?.into_instance()?)
}

fn require(value: Option<usize>, what: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Input(format!("{what} is neither given as a flag nor set in the instance")))
}

pub fn solve_bmbp(input: &Path, output: Option<&Path>) -> Result<Outcome, Failure> {
    let instance = read_instance(input)?;
    let plan = balpack::solve_bmbp(&instance)?;
    emit_json(output, &PlanFile::from(&plan))?;
    Ok(Outcome::Done)
}

pub fn solve_exact(
    input: &Path,
    bins: Option<usize>,
    split: Option<usize>,
    symmetry_pruning: bool,
    output: Option<&Path>,
) -> Result<Outcome, Failure> {
    let instance = read_instance(input)?;
    let m = require(bins.or(instance.bins()), "--bins")?;
    let k = require(split.or(instance.split_bound()), "--split")?;
    match solve_kbfbp_decision_with(&instance, m, k, SearchOptions { symmetry_pruning })? {
        Some(w) => {
            emit_json(output, &WitnessFile::from(&w))?;
            Ok(Outcome::Done)
        }
        None => Ok(Outcome::Infeasible(format!("no allocation on {m} bins with split bound {k}"))),
    }
}

fn report_outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Done
    } else {
        Outcome::Infeasible("solution violates the model".into())
    }
}

pub fn verify_bmbp(input: &Path, solution: &Path, stages: usize) -> Result<Outcome, Failure> {
    let instance = read_instance(input)?;
    let plan: PlanFile = read_json(solution)?;
    let report = check_bmbp(&instance, &plan.to_staged(stages)?, stages)?;
    emit_json(None, &report)?;
    Ok(report_outcome(report.ok))
}

pub fn verify_kbfbp(input: &Path, solution: &Path, split: Option<usize>) -> Result<Outcome, Failure> {
    let instance = read_instance(input)?;
    let witness = KbfbpWitness::try_from(read_json::<WitnessFile>(solution)?)?;
    let k = split.or(instance.split_bound()).unwrap_or(witness.bins());
    let report = check_kbfbp(&instance, &witness, k)?;
    emit_json(None, &report)?;
    Ok(report_outcome(report.ok))
}

pub fn reduce(kind: SourceKind, input: &Path, output: Option<&Path>) -> Result<Outcome, Failure> {
    let set = read_set(input)?;
    let reduced = match kind {
        SourceKind::Partition => partition_to_2bfbp(&set)?,
        SourceKind::SubsetThird => subsetsum_to_3bfbp(&set)?,
    };
    emit_json(output, &ReducedInstanceFile::from(&reduced))?;
    Ok(Outcome::Done)
}

/// Part of a set, with one-based indices.
#[derive(Serialize)]
struct Part {
    indices: Vec<usize>,
    values: Vec<u64>,
    sum: u128,
}

impl From<&SubMultiset> for Part {
    fn from(s: &SubMultiset) -> Self {
        Part {
            indices: s.indices.iter().map(|i| i + 1).collect(),
            values: s.values.clone(),
            sum: s.sum(),
        }
    }
}

#[derive(Serialize)]
struct Certificate {
    feasible: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    parts: Vec<Part>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<usize>>,
}

impl Certificate {
    fn parts(parts: &[&SubMultiset]) -> Self {
        Certificate {
            feasible: true,
            parts: parts.iter().map(|&p| Part::from(p)).collect(),
            assignment: None,
        }
    }

    fn none() -> Self {
        Certificate { feasible: false, parts: Vec::new(), assignment: None }
    }
}

pub fn extract(kind: SourceKind, input: &Path, solution: &Path) -> Result<Outcome, Failure> {
    let reduced = read_json::<ReducedInstanceFile>(input)?.into_reduced()?;
    let witness = KbfbpWitness::try_from(read_json::<WitnessFile>(solution)?)?;
    let certificate = match kind {
        SourceKind::Partition => {
            let (a, b) = extract_partition(&witness, &reduced)?;
            Certificate::parts(&[&a, &b])
        }
        SourceKind::SubsetThird => Certificate::parts(&[&extract_subset_third(&witness, &reduced)?]),
    };
    emit_json(None, &certificate)?;
    Ok(Outcome::Done)
}

pub struct MipParams {
    pub bins: Option<usize>,
    pub split: Option<usize>,
    pub stages: Option<usize>,
    pub symmetry_breaking: bool,
}

pub fn export_mip(kind: MipKind, input: &Path, params: MipParams, output: Option<&Path>) -> Result<Outcome, Failure> {
    let instance = read_instance(input)?;
    let name = match kind {
        MipKind::ClassicBp => "classic_bp",
        MipKind::Bfbp => "bfbp",
        MipKind::Kbfbp => "kbfbp",
        MipKind::Bmbp => "bmbp",
    };
    let bins = params.bins.or(instance.bins()).or_else(|| match kind {
        MipKind::Bmbp => Some(lower_bound_bins(&instance)),
        _ => None,
    });
    let model = ModelKind::from_name(name, &instance, bins, params.split, params.stages)?;
    let options = ExportOptions { symmetry_breaking: params.symmetry_breaking };
    emit(output, &export_model_with(&instance, model, options)?)?;
    Ok(Outcome::Done)
}

fn certificate_outcome(certificate: Certificate) -> Result<Outcome, Failure> {
    let feasible = certificate.feasible;
    emit_json(None, &certificate)?;
    Ok(if feasible {
        Outcome::Done
    } else {
        Outcome::Infeasible("the oracle found no certificate".into())
    })
}

pub fn oracle(kind: OracleKind, input: &Path, bins: Option<usize>) -> Result<Outcome, Failure> {
    let certificate = match kind {
        OracleKind::Partition => match brute_force_partition(&read_set(input)?)? {
            Some((a, b)) => Certificate::parts(&[&a, &b]),
            None => Certificate::none(),
        },
        OracleKind::SubsetThird => match brute_force_subset_third(&read_set(input)?)? {
            Some(s) => Certificate::parts(&[&s]),
            None => Certificate::none(),
        },
        OracleKind::Binpacking => {
            let instance = read_instance(input)?;
            let m = require(bins.or(instance.bins()), "--bins")?;
            match brute_force_binpacking_assignment(&instance, m)? {
                Some(a) => Certificate {
                    feasible: true,
                    parts: Vec::new(),
                    assignment: Some(a.iter().map(|b| b + 1).collect()),
                },
                None => Certificate::none(),
            }
        }
    };
    certificate_outcome(certificate)
}

#[derive(Serialize)]
struct SweepSummary {
    kind: &'static str,
    max_n: usize,
    max_size: u64,
    checked: usize,
    yes: usize,
    disagreements: Vec<Vec<u64>>,
}

type Checker = fn(&[u64]) -> balpack::Result<Equivalence>;

pub fn sweep(kind: OracleKind, max_n: usize, max_size: u64, jobs: usize) -> Result<Outcome, Failure> {
    let (name, universe, check): (_, _, Checker) = match kind {
        OracleKind::Partition => ("partition", partition_universe(max_n, max_size), check_partition_equivalence),
        OracleKind::SubsetThird => (
            "subset-third",
            subset_third_universe(max_n, max_size),
            check_subset_third_equivalence,
        ),
        OracleKind::Binpacking => {
            return Err(Failure::Input("--sweep supports partition and subset-third".into()));
        }
    };
    let results = run_sweep(&universe, jobs, |s| check(s));
    let mut summary = SweepSummary {
        kind: name,
        max_n,
        max_size,
        checked: universe.len(),
        yes: 0,
        disagreements: Vec::new(),
    };
    for r in results {
        let r = r?;
        summary.yes += usize::from(r.oracle);
        if !r.holds() {
            summary.disagreements.push(r.source);
        }
    }
    let clean = summary.disagreements.is_empty();
    emit_json(None, &summary)?;
    Ok(if clean {
        Outcome::Done
    } else {
        Outcome::Infeasible(format!("{} disagreements", summary.disagreements.len()))
    })
}

#[derive(Serialize)]
struct BenchSummary {
    n: usize,
    seed: u64,
    base: u64,
    capacity: u64,
    bins: usize,
    tilde_c: balpack::Rational,
}

pub fn bench(
    n: usize,
    seed: u64,
    base: u64,
    capacity: u64,
    repeat: usize,
    emit_instance: Option<&Path>,
) -> Result<Outcome, Failure> {
    let instance = bench_instance(n, seed, base, capacity)?;
    if let Some(path) = emit_instance {
        emit_json(Some(path), &InstanceFile::from(&instance))?;
    }
    let mut best = Duration::MAX;
    let mut plan = None;
    for _ in 0..repeat.max(1) {
        let start = Instant::now();
        plan = Some(balpack::solve_bmbp(&instance)?);
        best = best.min(start.elapsed());
    }
    let plan = plan.expect("at least one run");
    eprintln!("solve-bmbp: best of {}: {:.6} s", repeat.max(1), best.as_secs_f64());
    emit_json(
        None,
        &BenchSummary {
            n,
            seed,
            base,
            capacity,
            bins: plan.bins(),
            tilde_c: plan.tilde_c,
        },
    )?;
    Ok(Outcome::Done)
}
