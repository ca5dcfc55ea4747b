//! Two-row Young diagrams and their standard tableaux.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::symcore::binom_f64;

/// Diagram with `r1 ≥ r2` boxes in its two rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct YoungDiagram2 {
    pub r1: usize,
    pub r2: usize,
}

impl YoungDiagram2 {
    pub fn new(r1: usize, r2: usize) -> Result<Self> {
        if r2 > r1 {
            return Err(invalid(format!("row lengths must be non-increasing, got ({r1}, {r2})")));
        }
        Ok(Self { r1, r2 })
    }

    pub fn n_boxes(&self) -> usize {
        self.r1 + self.r2
    }

    /// Twice the total angular momentum, `r1 − r2`.
    pub fn j_doubled(&self) -> usize {
        self.r1 - self.r2
    }

    /// `C(N, r1)·(2r1 − N + 1)/(r1 + 1)`.
    pub fn syt_count(&self) -> u128 {
        let n = self.n_boxes();
        binom_u128(n, self.r1) * (2 * self.r1 - n + 1) as u128 / (self.r1 + 1) as u128
    }

    /// `N!` over the product of hook lengths.
    pub fn syt_count_hook(&self) -> u128 {
        let fact: u128 = (1..=self.n_boxes() as u128).product();
        fact / self.hook_lengths().iter().flatten().map(|&h| h as u128).product::<u128>()
    }

    /// Hook length of every box, row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let first = (0..self.r1).map(|c| self.r1 - c + usize::from(c < self.r2)).collect();
        let second = (0..self.r2).map(|c| self.r2 - c).collect();
        vec![first, second]
    }

    /// Semistandard fillings with entries 1 and 2: `r1 − r2 + 1`.
    pub fn ssyt_count(&self) -> u128 {
        (self.r1 - self.r2 + 1) as u128
    }
}

fn binom_u128(n: usize, k: usize) -> u128 {
    let v = binom_f64(n as u64, k as u64);
    debug_assert!(v < 2f64.powi(53));
    v.round() as u128
}

/// All two-row diagrams with `n` boxes, one-row diagram first.
pub fn diagrams(n: usize) -> Vec<YoungDiagram2> {
    (0..=n / 2).map(|r2| YoungDiagram2 { r1: n - r2, r2 }).collect()
}

/// Standard tableau recorded as the sequence of doubled angular momenta
/// `2j_k` after coupling qubits `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StandardTableau {
    j_path: Vec<usize>,
}

impl StandardTableau {
    /// Validates `2j_1 = 1`, steps of `±1` and `j_k ≥ 0`.
    pub fn from_path(j_path: Vec<usize>) -> Result<Self> {
        let ok =
            !j_path.is_empty() && j_path[0] == 1 && j_path.windows(2).all(|w| w[1] == w[0] + 1 || w[1] + 1 == w[0]);
        if !ok {
            return Err(invalid(format!("not a coupling path: {j_path:?}")));
        }
        Ok(Self { j_path })
    }

    /// Tableau whose label `k` sits in row `rows[k-1]` (0 or 1).
    pub fn from_rows(rows: &[u8]) -> Result<Self> {
        let mut path = Vec::with_capacity(rows.len());
        let mut j = 0isize;
        for &r in rows {
            j += if r == 0 { 1 } else { -1 };
            if j < 0 {
                return Err(invalid("second row outgrew the first"));
            }
            path.push(j as usize);
        }
        Self::from_path(path)
    }

    /// The one-row tableau on `n` boxes.
    pub fn symmetric(n: usize) -> Self {
        Self { j_path: (1..=n).collect() }
    }

    pub fn j_path(&self) -> &[usize] {
        &self.j_path
    }

    pub fn n_boxes(&self) -> usize {
        self.j_path.len()
    }

    /// `2j_T`, the doubled total angular momentum.
    pub fn j_doubled(&self) -> usize {
        *self.j_path.last().expect("non-empty path")
    }

    /// Dimension `2j_T + 1` of the block the tableau labels.
    pub fn block_dim(&self) -> usize {
        self.j_doubled() + 1
    }

    /// Row (0 or 1) of each label.
    pub fn rows(&self) -> Vec<u8> {
        let mut prev = 0;
        self.j_path
            .iter()
            .map(|&j| {
                let r = u8::from(j < prev);
                prev = j;
                r
            })
            .collect()
    }

    pub fn diagram(&self) -> YoungDiagram2 {
        let r2 = self.rows().iter().filter(|&&r| r == 1).count();
        YoungDiagram2 { r1: self.n_boxes() - r2, r2 }
    }
}

impl std::fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows = self.rows();
        for r in 0..2u8 {
            let labels: Vec<String> =
                rows.iter().enumerate().filter(|(_, &x)| x == r).map(|(k, _)| (k + 1).to_string()).collect();
            if r == 1 {
                write!(f, "/")?;
            }
            write!(f, "{}", labels.join(" "))?;
        }
        Ok(())
    }
}

/// Every standard tableau on `n` boxes, grouped by diagram, generated by
/// extending coupling paths one box at a time.
pub fn enumerate_syt(n: usize) -> Vec<(YoungDiagram2, Vec<StandardTableau>)> {
    let mut paths: Vec<Vec<usize>> = if n == 0 { vec![] } else { vec![vec![1]] };
    for _ in 1..n {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let j = *p.last().expect("non-empty");
                std::iter::once(j + 1).chain(j.checked_sub(1)).map(move |next| {
                    let mut q = p.clone();
                    q.push(next);
                    q
                })
            })
            .collect();
    }
    group(paths.into_iter().map(|p| StandardTableau { j_path: p }), n)
}

/// Same result by filtering all `2^n` row assignments.
pub fn enumerate_syt_brute_force(n: usize) -> Vec<(YoungDiagram2, Vec<StandardTableau>)> {
    let tabs = (0..1usize << n).filter_map(|mask| {
        let rows: Vec<u8> = (0..n).map(|k| ((mask >> k) & 1) as u8).collect();
        StandardTableau::from_rows(&rows).ok()
    });
    group(tabs, n)
}

fn group(tabs: impl Iterator<Item = StandardTableau>, n: usize) -> Vec<(YoungDiagram2, Vec<StandardTableau>)> {
    let mut out: Vec<(YoungDiagram2, Vec<StandardTableau>)> =
        diagrams(n).into_iter().map(|d| (d, Vec::new())).collect();
    for t in tabs {
        let d = t.diagram();
        if let Some(slot) = out.iter_mut().find(|(e, _)| *e == d) {
            slot.1.push(t);
        }
    }
    out.iter_mut().for_each(|(_, v)| v.sort());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_box_example() {
        let d = YoungDiagram2::new(4, 2).unwrap();
        assert_eq!(d.syt_count(), 9);
        assert_eq!(d.syt_count_hook(), 9);
        let all = enumerate_syt(6);
        assert_eq!(all.iter().find(|(e, _)| *e == d).unwrap().1.len(), 9);
    }

    #[test]
    fn two_boxes() {
        let all = enumerate_syt(2);
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|(_, v)| v.len() == 1));
    }

    #[test]
    fn rows_round_trip() {
        let t = StandardTableau::from_rows(&[0, 1, 0, 0, 1]).unwrap();
        assert_eq!(t.j_path(), &[1, 0, 1, 2, 1]);
        assert_eq!(t.rows(), vec![0, 1, 0, 0, 1]);
        assert_eq!(t.to_string(), "1 3 4/2 5");
        assert!(StandardTableau::from_rows(&[1, 0]).is_err());
    }
}
