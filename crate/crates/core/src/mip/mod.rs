//! LP-format export of the packing models.
//!
//! Four models are available: classical bin packing, the balanced fractional
//! model, its split-bounded decision version, and the multistage model. The
//! product `lambda = alpha * x` is written in linearized form. Capacity rows
//! are multiplied through by the capacity's denominator so every coefficient
//! in the file is an integer.
//!
//! Naming: objects `i`, bins `j` and stages `s` are one-based, objects in
//! input order. Variables are `y_j`, `x_i_j`, `l_i_j`, `a_j` (with a `_s`
//! suffix for the multistage model); rows are `cap_j`, `dem_i`,
//! `lin{1,2,3}_i_j`, `split_i`, `onebin_i_s` and, optionally, `sym_j`.

mod lp_check;

pub use lp_check::{parse_lp, LpBound, LpConstraint, LpModel, LpParseError, Relation, Term};

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    ClassicBp { bins: usize },
    Bfbp { bins: usize },
    Kbfbp { bins: usize, split_bound: usize },
    Bmbp { bins: usize, stages: usize },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::ClassicBp { .. } => "classic_bp",
            ModelKind::Bfbp { .. } => "bfbp",
            ModelKind::Kbfbp { .. } => "kbfbp",
            ModelKind::Bmbp { .. } => "bmbp",
        }
    }

    pub fn bins(&self) -> usize {
        match *self {
            ModelKind::ClassicBp { bins }
            | ModelKind::Bfbp { bins }
            | ModelKind::Kbfbp { bins, .. }
            | ModelKind::Bmbp { bins, .. } => bins,
        }
    }

    /// Builds a kind from its name, taking parameters from the arguments or,
    /// failing that, from the instance.
    pub fn from_name(
        name: &str,
        instance: &Instance,
        bins: Option<usize>,
        split_bound: Option<usize>,
        stages: Option<usize>,
    ) -> Result<Self> {
        let missing = |what: &str| Error::UnsupportedKindParameter(format!("{name} needs {what}"));
        let bins = bins.or(instance.bins()).ok_or_else(|| missing("a bin count"))?;
        match name.replace('-', "_").as_str() {
            "classic_bp" => Ok(ModelKind::ClassicBp { bins }),
            "bfbp" => Ok(ModelKind::Bfbp { bins }),
            "kbfbp" => Ok(ModelKind::Kbfbp {
                bins,
                split_bound: split_bound
                    .or(instance.split_bound())
                    .ok_or_else(|| missing("a split bound"))?,
            }),
            "bmbp" => Ok(ModelKind::Bmbp {
                bins,
                stages: stages.or(instance.stages()).ok_or_else(|| missing("a stage count"))?,
            }),
            other => Err(Error::UnsupportedKindParameter(format!("unknown model kind {other:?}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.bins() == 0 {
            return Err(Error::UnsupportedKindParameter("bin count must be at least 1".into()));
        }
        match *self {
            ModelKind::Kbfbp { split_bound: 0, .. } => Err(Error::UnsupportedKindParameter(
                "split bound must be at least 1".into(),
            )),
            ModelKind::Bmbp { stages: 0, .. } => Err(Error::UnsupportedKindParameter(
                "stage count must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExportOptions {
    /// Adds `y_j >= y_{j+1}` rows.
    pub symmetry_breaking: bool,
}

pub fn export_model(instance: &Instance, kind: ModelKind) -> Result<String> {
    export_model_with(instance, kind, ExportOptions::default())
}

pub fn export_model_with(instance: &Instance, kind: ModelKind, options: ExportOptions) -> Result<String> {
    kind.validate()?;
    let m = kind.bins();
    let n = instance.len();
    let p = instance.capacity().numer().clone();
    let q = instance.capacity().denom().clone();
    let sizes = instance.input_sizes();
    let weight = |i: usize| &q * BigInt::from(sizes[i - 1]);

    let mut lp = LpText::default();
    writeln!(
        lp.out,
        "\\ {} model: {n} objects, {m} bins, capacity {}",
        kind.name(),
        instance.capacity()
    )
    .unwrap();

    lp.section("Minimize");
    lp.row("obj", (1..=m).map(|j| (BigInt::one(), format!("y_{j}"))), None);

    lp.section("Subject To");
    let stages = match kind {
        ModelKind::Bmbp { stages, .. } => stages,
        _ => 1,
    };
    // share variable (or assignment variable for the classical model)
    let share = |i: usize, j: usize, s: usize| match kind {
        ModelKind::ClassicBp { .. } => format!("x_{i}_{j}"),
        ModelKind::Bmbp { .. } => format!("l_{i}_{j}_{s}"),
        _ => format!("l_{i}_{j}"),
    };
    let incidence = |i: usize, j: usize, s: usize| match kind {
        ModelKind::Bmbp { .. } => format!("x_{i}_{j}_{s}"),
        _ => format!("x_{i}_{j}"),
    };
    let factor = |j: usize, s: usize| match kind {
        ModelKind::Bmbp { .. } => format!("a_{j}_{s}"),
        _ => format!("a_{j}"),
    };

    for j in 1..=m {
        let mut terms: Vec<(BigInt, String)> = Vec::new();
        for i in 1..=n {
            for s in 1..=stages {
                terms.push((weight(i), share(i, j, s)));
            }
        }
        terms.push((-p.clone(), format!("y_{j}")));
        lp.row(&format!("cap_{j}"), terms, Some((Relation::Le, BigInt::zero())));
    }
    for i in 1..=n {
        let terms = (1..=m).flat_map(|j| (1..=stages).map(move |s| (j, s)));
        lp.row(
            &format!("dem_{i}"),
            terms.map(|(j, s)| (BigInt::one(), share(i, j, s))),
            Some((Relation::Eq, BigInt::one())),
        );
    }
    if let ModelKind::Kbfbp { split_bound, .. } = kind {
        for i in 1..=n {
            lp.row(
                &format!("split_{i}"),
                (1..=m).map(|j| (BigInt::one(), incidence(i, j, 1))),
                Some((Relation::Le, BigInt::from(split_bound))),
            );
        }
    }
    if let ModelKind::Bmbp { .. } = kind {
        for i in 1..=n {
            for s in 1..=stages {
                lp.row(
                    &format!("onebin_{i}_{s}"),
                    (1..=m).map(|j| (BigInt::one(), incidence(i, j, s))),
                    Some((Relation::Le, BigInt::one())),
                );
            }
        }
    }
    let linearized = !matches!(kind, ModelKind::ClassicBp { .. });
    if linearized {
        let suffix = |i: usize, j: usize, s: usize| match kind {
            ModelKind::Bmbp { .. } => format!("{i}_{j}_{s}"),
            _ => format!("{i}_{j}"),
        };
        let cells: Vec<(usize, usize, usize)> = (1..=n)
            .flat_map(|i| (1..=m).flat_map(move |j| (1..=stages).map(move |s| (i, j, s))))
            .collect();
        let one = BigInt::one;
        for &(i, j, s) in &cells {
            lp.row(
                &format!("lin1_{}", suffix(i, j, s)),
                [(one(), share(i, j, s)), (-one(), incidence(i, j, s))],
                Some((Relation::Le, BigInt::zero())),
            );
        }
        for &(i, j, s) in &cells {
            lp.row(
                &format!("lin2_{}", suffix(i, j, s)),
                [(one(), share(i, j, s)), (-one(), factor(j, s))],
                Some((Relation::Le, BigInt::zero())),
            );
        }
        for &(i, j, s) in &cells {
            lp.row(
                &format!("lin3_{}", suffix(i, j, s)),
                [(one(), share(i, j, s)), (-one(), factor(j, s)), (-one(), incidence(i, j, s))],
                Some((Relation::Ge, -one())),
            );
        }
    }
    if options.symmetry_breaking {
        for j in 1..m {
            lp.row(
                &format!("sym_{j}"),
                [(BigInt::one(), format!("y_{j}")), (-BigInt::one(), format!("y_{}", j + 1))],
                Some((Relation::Ge, BigInt::zero())),
            );
        }
    }

    let fixed_bins = matches!(kind, ModelKind::Kbfbp { .. });
    if linearized || fixed_bins {
        lp.section("Bounds");
        if linearized {
            for i in 1..=n {
                for j in 1..=m {
                    for s in 1..=stages {
                        lp.line(&format!("0 <= {} <= 1", share(i, j, s)));
                    }
                }
            }
            for j in 1..=m {
                for s in 1..=stages {
                    lp.line(&format!("0 <= {} <= 1", factor(j, s)));
                }
            }
        }
        if fixed_bins {
            for j in 1..=m {
                lp.line(&format!("y_{j} = 1"));
            }
        }
    }

    lp.section("Binary");
    for i in 1..=n {
        for j in 1..=m {
            for s in 1..=stages {
                lp.line(&incidence(i, j, s));
            }
        }
    }
    for j in 1..=m {
        lp.line(&format!("y_{j}"));
    }
    lp.section("End");
    Ok(lp.out)
}

#[derive(Default)]
struct LpText {
    out: String,
}

impl LpText {
    fn section(&mut self, name: &str) {
        self.out.push_str(name);
        self.out.push('\n');
    }

    fn line(&mut self, body: &str) {
        self.out.push(' ');
        self.out.push_str(body);
        self.out.push('\n');
    }

    fn row(
        &mut self,
        name: &str,
        terms: impl IntoIterator<Item = (BigInt, String)>,
        relation: Option<(Relation, BigInt)>,
    ) {
        let mut body = format!("{name}:");
        for (k, (coef, var)) in terms.into_iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let sign = match (k, coef.is_negative()) {
                (0, false) => " ",
                (0, true) => " - ",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            body.push_str(sign);
            let mag = coef.abs();
            if !mag.is_one() {
                write!(body, "{mag} ").unwrap();
            }
            body.push_str(&var);
        }
        if let Some((rel, rhs)) = relation {
            write!(body, " {} {rhs}", rel.symbol()).unwrap();
        }
        self.line(&body);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;
    use crate::rational::Rational;

    fn worked() -> Instance {
        validate_instance(&[8, 7, 6, 5, 4], Rational::from(10)).unwrap()
    }

    #[test]
    fn classic_counts() {
        let text = export_model(&worked(), ModelKind::ClassicBp { bins: 5 }).unwrap();
        let model = parse_lp(&text).unwrap();
        assert_eq!(model.rows_in_family("cap"), 5);
        assert_eq!(model.rows_in_family("dem"), 5);
        assert_eq!(model.binaries.len(), 30);
    }

    #[test]
    fn rational_capacity_is_cleared() {
        let inst = validate_instance(&[2, 3, 3, 4, 10, 10], Rational::new(32, 3)).unwrap();
        let text = export_model(&inst, ModelKind::Kbfbp { bins: 3, split_bound: 2 }).unwrap();
        assert!(text.contains(" cap_1: 6 l_1_1 + 9 l_2_1 + 9 l_3_1 + 12 l_4_1 + 30 l_5_1 + 30 l_6_1 - 32 y_1 <= 0\n"));
        let model = parse_lp(&text).unwrap();
        assert!(model.all_integral());
    }

    #[test]
    fn bmbp_onebin_rows() {
        let text = export_model(&worked(), ModelKind::Bmbp { bins: 3, stages: 2 }).unwrap();
        let model = parse_lp(&text).unwrap();
        assert_eq!(model.rows_in_family("onebin"), 10);
        assert_eq!(model.rows_in_family("lin3"), 30);
    }

    #[test]
    fn symmetry_rows_are_optional() {
        let kind = ModelKind::Bfbp { bins: 3 };
        let plain = parse_lp(&export_model(&worked(), kind).unwrap()).unwrap();
        assert_eq!(plain.rows_in_family("sym"), 0);
        let text = export_model_with(&worked(), kind, ExportOptions { symmetry_breaking: true }).unwrap();
        let with = parse_lp(&text).unwrap();
        assert_eq!(with.rows_in_family("sym"), 2);
        assert!(text.contains(" sym_1: y_1 - y_2 >= 0\n"));
    }

    #[test]
    fn zero_parameters_rejected() {
        for kind in [
            ModelKind::ClassicBp { bins: 0 },
            ModelKind::Kbfbp { bins: 3, split_bound: 0 },
            ModelKind::Bmbp { bins: 3, stages: 0 },
        ] {
            assert!(matches!(
                export_model(&worked(), kind),
                Err(Error::UnsupportedKindParameter(_))
            ));
        }
    }

    #[test]
    fn kind_from_name() {
        let inst = worked().with_bins(3);
        assert_eq!(
            ModelKind::from_name("classic-bp", &inst, None, None, None).unwrap(),
            ModelKind::ClassicBp { bins: 3 }
        );
        assert!(ModelKind::from_name("kbfbp", &inst, None, None, None).is_err());
        assert_eq!(
            ModelKind::from_name("bmbp", &inst, Some(2), None, Some(2)).unwrap(),
            ModelKind::Bmbp { bins: 2, stages: 2 }
        );
    }
}
