//! Exact feasibility of small linear systems over the rationals.
//!
//! Equalities are eliminated first by Gauss-Jordan reduction; the remaining
//! free variables are projected out of the inequalities one at a time
//! (Fourier-Motzkin). A witness is recovered by back-substitution through the
//! saved projection stages. Intended for a handful of variables.

use std::collections::BTreeSet;

use crate::rational::Rational;

/// `coeffs · x <= rhs` (or `== rhs` for equalities).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Row {
    fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Scales so the first nonzero coefficient has magnitude one; keeps the
    /// direction of the inequality.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let scale = lead.abs().recip();
            for c in self.coeffs.iter_mut() {
                *c *= &scale;
            }
            self.rhs *= &scale;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    vars: usize,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `coeffs · x == rhs`
    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars);
        self.equalities.push(Row { coeffs, rhs });
    }

    /// `coeffs · x <= rhs`
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars);
        self.inequalities.push(Row { coeffs, rhs });
    }

    /// `lo <= x[var] <= hi`
    pub fn add_bounds(&mut self, var: usize, lo: Rational, hi: Rational) {
        let mut up = vec![Rational::zero(); self.vars];
        up[var] = Rational::one();
        let mut down = vec![Rational::zero(); self.vars];
        down[var] = -Rational::one();
        self.add_le(up, hi);
        self.add_le(down, -lo);
    }

    /// True when `x` satisfies every row exactly.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && self.equalities.iter().all(|r| r.eval(x) == r.rhs)
            && self.inequalities.iter().all(|r| r.eval(x) <= r.rhs)
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        let reduced = self.reduce_equalities()?;
        let free = &reduced.free;

        // Restate the inequalities over the free variables only.
        let mut ineqs: Vec<Row> = Vec::with_capacity(self.inequalities.len());
        for row in &self.inequalities {
            let mut coeffs: Vec<Rational> = free.iter().map(|&f| row.coeffs[f].clone()).collect();
            let mut rhs = row.rhs.clone();
            for (p, pivot_row) in &reduced.pivots {
                let a = &row.coeffs[*p];
                if a.is_zero() {
                    continue;
                }
                // x_p = pivot_row.rhs - sum_f pivot_row.coeffs[f] x_f
                rhs -= a * &pivot_row.rhs;
                for (k, &f) in free.iter().enumerate() {
                    coeffs[k] -= a * &pivot_row.coeffs[f];
                }
            }
            ineqs.push(Row { coeffs, rhs });
        }

        let mut stages: Vec<Vec<Row>> = Vec::with_capacity(free.len() + 1);
        let mut current = dedup(ineqs)?;
        for k in 0..free.len() {
            let next = eliminate(&current, k)?;
            stages.push(current);
            current = next;
        }

        // Back-substitute, last projected variable first.
        let mut values = vec![Rational::zero(); free.len()];
        for k in (0..free.len()).rev() {
            let mut lower: Option<Rational> = None;
            let mut upper: Option<Rational> = None;
            for row in &stages[k] {
                let c = &row.coeffs[k];
                if c.is_zero() {
                    continue;
                }
                let rest: Rational = (k + 1..free.len()).map(|t| &row.coeffs[t] * &values[t]).sum();
                let bound = (&row.rhs - rest) / c;
                if c.is_positive() {
                    upper = Some(match upper {
                        Some(u) => u.min(bound),
                        None => bound,
                    });
                } else {
                    lower = Some(match lower {
                        Some(l) => l.max(bound),
                        None => bound,
                    });
                }
            }
            values[k] = match (lower, upper) {
                (Some(l), _) => l,
                (None, Some(u)) => u.min(Rational::zero()),
                (None, None) => Rational::zero(),
            };
        }

        let mut x = vec![Rational::zero(); self.vars];
        for (k, &f) in free.iter().enumerate() {
            x[f] = values[k].clone();
        }
        for (p, row) in &reduced.pivots {
            let dep: Rational = free.iter().map(|&f| &row.coeffs[f] * &x[f]).sum();
            x[*p] = &row.rhs - dep;
        }
        debug_assert!(self.satisfied_by(&x));
        Some(x)
    }

    fn reduce_equalities(&self) -> Option<Reduced> {
        let mut rows: Vec<Row> = self.equalities.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..self.vars {
            let Some(sel) = (r..rows.len()).find(|&i| !rows[i].coeffs[col].is_zero()) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = rows[r].coeffs[col].recip();
            for c in rows[r].coeffs.iter_mut() {
                *c *= &inv;
            }
            rows[r].rhs *= &inv;
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row.coeffs[col].is_zero() {
                    continue;
                }
                let f = row.coeffs[col].clone();
                for (c, pc) in row.coeffs.iter_mut().zip(&pivot.coeffs) {
                    *c -= &(&f * pc);
                }
                row.rhs -= &(&f * &pivot.rhs);
            }
            pivots.push((col, r));
            r += 1;
        }
        if rows[r..].iter().any(|row| !row.rhs.is_zero()) {
            return None;
        }
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(c, _)| c).collect();
        let free = (0..self.vars).filter(|c| !pivot_cols.contains(c)).collect();
        let pivots = pivots
            .into_iter()
            .map(|(col, row)| {
                let mut pr = rows[row].clone();
                pr.coeffs[col] = Rational::zero();
                (col, pr)
            })
            .collect();
        Some(Reduced { pivots, free })
    }
}

struct Reduced {
    /// (pivot column, row with the pivot coefficient zeroed)
    pivots: Vec<(usize, Row)>,
    free: Vec<usize>,
}

/// Drops duplicate and trivially true rows; `None` if a constant row fails.
fn dedup(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut set = BTreeSet::new();
    for row in rows {
        if row.coeffs.iter().all(Rational::is_zero) {
            if row.rhs.is_negative() {
                return None;
            }
            continue;
        }
        set.insert(row.normalized());
    }
    Some(set.into_iter().collect())
}

/// Projects out variable `k`.
fn eliminate(rows: &[Row], k: usize) -> Option<Vec<Row>> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for row in rows {
        let c = &row.coeffs[k];
        if c.is_zero() {
            out.push(row.clone());
        } else if c.is_positive() {
            pos.push(row);
        } else {
            neg.push(row);
        }
    }
    for p in &pos {
        for q in &neg {
            let wp = -&q.coeffs[k];
            let wq = p.coeffs[k].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&q.coeffs)
                .map(|(a, b)| &wp * a + &wq * b)
                .collect();
            let rhs = &wp * &p.rhs + &wq * &q.rhs;
            out.push(Row { coeffs, rhs });
        }
    }
    dedup(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn equality_only() {
        // x + y = 1, x - y = 1/2
        let mut s = LinearSystem::new(2);
        s.add_eq(vec![r(1), r(1)], r(1));
        s.add_eq(vec![r(1), r(-1)], q(1, 2));
        assert_eq!(s.solve().unwrap(), vec![q(3, 4), q(1, 4)]);
    }

    #[test]
    fn inconsistent_equalities() {
        let mut s = LinearSystem::new(2);
        s.add_eq(vec![r(1), r(1)], r(1));
        s.add_eq(vec![r(2), r(2)], r(3));
        assert!(s.solve().is_none());
    }

    #[test]
    fn bounds_make_it_infeasible() {
        // x + y = 1 with x, y <= 1/3
        let mut s = LinearSystem::new(2);
        s.add_eq(vec![r(1), r(1)], r(1));
        s.add_bounds(0, r(0), q(1, 3));
        s.add_bounds(1, r(0), q(1, 3));
        assert!(s.solve().is_none());
    }

    #[test]
    fn projection_with_free_variables() {
        // x + y + z = 1, x <= 1/2, y <= 1/4, z <= 1/2, all >= 0
        let mut s = LinearSystem::new(3);
        s.add_eq(vec![r(1), r(1), r(1)], r(1));
        for (v, hi) in [(0, q(1, 2)), (1, q(1, 4)), (2, q(1, 2))] {
            s.add_bounds(v, r(0), hi);
        }
        let x = s.solve().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn pure_inequalities() {
        // x - y <= -1, y <= 2, x >= 0
        let mut s = LinearSystem::new(2);
        s.add_le(vec![r(1), r(-1)], r(-1));
        s.add_le(vec![r(0), r(1)], r(2));
        s.add_le(vec![r(-1), r(0)], r(0));
        let x = s.solve().unwrap();
        assert!(s.satisfied_by(&x));
        s.add_le(vec![r(-1), r(0)], r(-2));
        assert!(s.solve().is_none());
    }

    #[test]
    fn zero_variables() {
        let s = LinearSystem::new(0);
        assert_eq!(s.solve(), Some(vec![]));
    }
}
