use crate::error::{Error, Result};

/// Upper limit on raw pattern counts the exhaustive solver accepts.
pub const PATTERN_LIMIT: u128 = 100_000_000;

/// Which bins each object is sent to. Row `i` is a sorted, non-empty set of
/// at most `k` bin indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitPattern {
    pub bins: usize,
    pub rows: Vec<Vec<usize>>,
}

impl SplitPattern {
    pub fn objects(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, object: usize, bin: usize) -> bool {
        self.rows[object].binary_search(&bin).is_ok()
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|row| (0..self.bins).map(|j| row.binary_search(&j).is_ok()).collect())
            .collect()
    }
}

/// All bin subsets of size `1..=k`, ordered by size then lexicographically.
pub fn row_choices(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(m) {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            out.push(comb.clone());
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && comb[i - 1] == m - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for t in i..size {
                comb[t] = comb[t - 1] + 1;
            }
        }
    }
    out
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `(sum_{t=1..k} C(m,t))^n`, or `None` on overflow.
pub fn pattern_count(n: usize, m: usize, k: usize) -> Option<u128> {
    let mut per_row: u128 = 0;
    for t in 1..=k.min(m) {
        per_row = per_row.checked_add(binomial(m as u128, t as u128)?)?;
    }
    per_row.checked_pow(u32::try_from(n).ok()?)
}

pub(crate) fn check_guard(n: usize, m: usize, k: usize) -> Result<()> {
    match pattern_count(n, m, k) {
        Some(c) if c <= PATTERN_LIMIT => Ok(()),
        Some(c) => Err(Error::InstanceTooLarge(format!(
            "{c} split patterns for n = {n}, m = {m}, k = {k} (limit {PATTERN_LIMIT})"
        ))),
        None => Err(Error::InstanceTooLarge(format!(
            "split pattern count overflows for n = {n}, m = {m}, k = {k}"
        ))),
    }
}

/// True if the bins first used by `row` are exactly the next unused labels,
/// given that labels `0..used` have appeared so far. Returns the new `used`.
pub(crate) fn canonical_step(row: &[usize], used: usize) -> Option<usize> {
    let mut next = used;
    for &b in row {
        if b >= used {
            if b != next {
                return None;
            }
            next += 1;
        }
    }
    Some(next)
}

/// Lazy enumeration of split patterns; the first row varies slowest.
#[derive(Debug, Clone)]
pub struct Patterns {
    choices: Vec<Vec<usize>>,
    digits: Vec<usize>,
    bins: usize,
    canonical_only: bool,
    done: bool,
}

/// Streams every `n x m` pattern with row sums in `1..=k`.
///
/// With `canonical_only`, bin relabelings are collapsed: each row may only
/// introduce the next unused bin labels.
pub fn enumerate_patterns(n: usize, m: usize, k: usize, canonical_only: bool) -> Result<Patterns> {
    check_guard(n, m, k)?;
    let choices = row_choices(m, k);
    let done = choices.is_empty() || n == 0;
    Ok(Patterns {
        choices,
        digits: vec![0; n],
        bins: m,
        canonical_only,
        done,
    })
}

impl Patterns {
    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.choices.len() {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }

    fn is_canonical(&self) -> bool {
        let mut used = 0;
        for &d in &self.digits {
            match canonical_step(&self.choices[d], used) {
                Some(u) => used = u,
                None => return false,
            }
        }
        true
    }
}

impl Iterator for Patterns {
    type Item = SplitPattern;

    fn next(&mut self) -> Option<SplitPattern> {
        while !self.done {
            let keep = !self.canonical_only || self.is_canonical();
            let current = keep.then(|| SplitPattern {
                bins: self.bins,
                rows: self.digits.iter().map(|&d| self.choices[d].clone()).collect(),
            });
            self.advance();
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_patterns(1, 2, 1, false).unwrap().count(), 2);
        assert_eq!(enumerate_patterns(2, 2, 2, false).unwrap().count(), 9);
        assert_eq!(enumerate_patterns(1, 3, 3, false).unwrap().count(), 7);
        assert_eq!(pattern_count(2, 2, 2), Some(9));
    }

    #[test]
    fn row_order() {
        assert_eq!(
            row_choices(3, 2),
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
    }

    #[test]
    fn first_row_slowest() {
        let p: Vec<_> = enumerate_patterns(2, 2, 1, false).unwrap().map(|p| p.rows).collect();
        assert_eq!(
            p,
            vec![
                vec![vec![0], vec![0]],
                vec![vec![0], vec![1]],
                vec![vec![1], vec![0]],
                vec![vec![1], vec![1]],
            ]
        );
    }

    #[test]
    fn canonical_patterns() {
        // two objects, two bins, one bin each: {0,0} and {0,1} up to relabeling
        let p: Vec<_> = enumerate_patterns(2, 2, 1, true).unwrap().map(|p| p.rows).collect();
        assert_eq!(p, vec![vec![vec![0], vec![0]], vec![vec![0], vec![1]]]);
        assert_eq!(canonical_step(&[0, 2], 1), None);
        assert_eq!(canonical_step(&[0, 1, 2], 1), Some(3));
    }

    #[test]
    fn canonical_count_matches_orbit_count() {
        // one object, three bins, up to 3 splits: one orbit per subset size
        assert_eq!(enumerate_patterns(1, 3, 3, true).unwrap().count(), 3);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            enumerate_patterns(7, 4, 3, false),
            Err(Error::InstanceTooLarge(_))
        ));
        assert!(enumerate_patterns(6, 4, 3, false).is_ok());
    }

    #[test]
    fn matrix_form() {
        let p = SplitPattern {
            bins: 3,
            rows: vec![vec![0, 2], vec![1]],
        };
        assert_eq!(
            p.to_matrix(),
            vec![vec![true, false, true], vec![false, true, false]]
        );
        assert!(p.contains(0, 2) && !p.contains(1, 0));
    }
}
