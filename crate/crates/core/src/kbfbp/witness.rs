use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An object x bin incidence pattern with one proportionality factor per bin.
///
/// Rows follow the instance's input order. Object `i` sends `alpha[j]` of
/// itself to bin `j` whenever `x[i][j]` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbfbpWitness {
    pub x: Vec<Vec<bool>>,
    pub alpha: Vec<Rational>,
}

impl KbfbpWitness {
    pub fn objects(&self) -> usize {
        self.x.len()
    }

    pub fn bins(&self) -> usize {
        self.alpha.len()
    }

    /// Clears every column whose factor is zero; such bins hold nothing.
    pub fn canonicalize(&mut self) {
        for (j, a) in self.alpha.iter().enumerate() {
            if a.is_zero() {
                for row in self.x.iter_mut() {
                    if let Some(cell) = row.get_mut(j) {
                        *cell = false;
                    }
                }
            }
        }
    }

    /// Objects assigned to bin `j`.
    pub fn members(&self, j: usize) -> Vec<usize> {
        (0..self.x.len()).filter(|&i| self.x[i][j]).collect()
    }

    /// Relabels bins: new bin `perm[j]` takes old bin `j`.
    pub fn permute_bins(&self, perm: &[usize]) -> KbfbpWitness {
        let m = self.bins();
        let mut alpha = vec![Rational::zero(); m];
        for (j, a) in self.alpha.iter().enumerate() {
            alpha[perm[j]] = a.clone();
        }
        let x = self
            .x
            .iter()
            .map(|row| {
                let mut out = vec![false; m];
                for (j, &v) in row.iter().enumerate() {
                    out[perm[j]] = v;
                }
                out
            })
            .collect();
        KbfbpWitness { x, alpha }
    }
}

/// The witness JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub x: Vec<Vec<u8>>,
    pub alpha: Vec<Rational>,
}

impl From<&KbfbpWitness> for WitnessFile {
    fn from(w: &KbfbpWitness) -> Self {
        WitnessFile {
            x: w
                .x
                .iter()
                .map(|row| row.iter().map(|&b| u8::from(b)).collect())
                .collect(),
            alpha: w.alpha.clone(),
        }
    }
}

impl TryFrom<WitnessFile> for KbfbpWitness {
    type Error = Error;

    fn try_from(f: WitnessFile) -> Result<Self> {
        let x = f
            .x
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::MalformedWitness(format!(
                            "x[{i}] holds {other}; entries must be 0 or 1"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KbfbpWitness { x, alpha: f.alpha })
    }
}
