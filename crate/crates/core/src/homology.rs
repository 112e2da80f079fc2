//! Reduced integral homology of order complexes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poset::FinPoset;

pub const DEFAULT_CHAIN_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("order complex has more than {0} simplices in the requested range")]
    BudgetExceeded(usize),
    #[error("smith normal form rank {snf} disagrees with rational rank {rational} in degree {degree}")]
    RankMismatch { degree: usize, snf: usize, rational: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    /// Reduced Betti numbers in degrees `0..=max_dim`.
    pub reduced_betti: Vec<usize>,
    /// Torsion coefficients (invariant factors > 1) per degree.
    pub torsion: Vec<Vec<BigInt>>,
    /// Number of simplices per dimension, `0..=max_dim + 1`.
    pub simplex_counts: Vec<usize>,
    /// Whether simplices of dimension above `max_dim` exist, so that higher
    /// homology is not reported.
    pub truncated: bool,
}

impl HomologyResult {
    pub fn is_trivial(&self) -> bool {
        self.reduced_betti.iter().all(|&b| b == 0) && self.torsion.iter().all(|t| t.is_empty())
    }
}

/// Strict chains `x_0 < … < x_d` for `d ≤ max_dim`, grouped by `d`.
fn chains(p: &FinPoset, max_dim: usize, budget: usize) -> Result<(Vec<Vec<Vec<usize>>>, bool), HomologyError> {
    let n = p.len();
    let above: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| p.lt(x, y)).collect()).collect();
    let mut by_dim = vec![Vec::new(); max_dim + 1];
    let mut longer = false;
    let mut total = 0usize;
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|x| vec![x]).collect();
    while let Some(c) = stack.pop() {
        let d = c.len() - 1;
        if d > max_dim {
            longer = true;
            continue;
        }
        total += 1;
        if total > budget {
            return Err(HomologyError::BudgetExceeded(budget));
        }
        let last = *c.last().expect("nonempty");
        for &y in above[last].iter().rev() {
            let mut next = c.clone();
            next.push(y);
            stack.push(next);
        }
        by_dim[d].push(c);
    }
    for cs in &mut by_dim {
        cs.sort();
    }
    Ok((by_dim, longer))
}

/// Matrix of `∂_d : C_d → C_{d−1}`; for `d = 0` the augmentation.
fn boundary(faces: &[Vec<usize>], simplices: &[Vec<usize>]) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); simplices.len()]; faces.len().max(1)];
    if faces.is_empty() {
        for entry in &mut m[0] {
            *entry = BigInt::one();
        }
        return m;
    }
    for (j, s) in simplices.iter().enumerate() {
        for k in 0..s.len() {
            let mut f = s.clone();
            f.remove(k);
            let i = faces.binary_search(&f).expect("face is a chain");
            m[i][j] = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
    }
    m
}

/// Nonzero invariant factors (positive, each dividing the next).
pub fn smith_invariants(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t..rows, t..cols) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..cols {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..rows {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // A smaller remainder sits in row or column t; make it the pivot.
                let (pi, pj) = min_entry(&a, t..rows, t..t + 1)
                    .into_iter()
                    .chain(min_entry(&a, t..t + 1, t..cols))
                    .min_by(|x, y| a[x.0][x.1].abs().cmp(&a[y.0][y.1].abs()))
                    .expect("nonzero remainder");
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn min_entry(a: &[Vec<BigInt>], rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Rank over the rationals by Gaussian elimination.
pub fn rational_rank(a: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let delta = &f * &m[rank][k];
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn order_complex_homology(p: &FinPoset, max_dim: usize) -> Result<HomologyResult, HomologyError> {
    order_complex_homology_with_budget(p, max_dim, DEFAULT_CHAIN_BUDGET)
}

pub fn order_complex_homology_with_budget(p: &FinPoset, max_dim: usize, budget: usize) -> Result<HomologyResult, HomologyError> {
    let (simplices, truncated) = chains(p, max_dim + 1, budget)?;
    let mut ranks = Vec::with_capacity(max_dim + 2);
    let mut invariants = Vec::with_capacity(max_dim + 2);
    for d in 0..=max_dim + 1 {
        let (snf, rank) = if p.is_empty() || simplices[d].is_empty() {
            (Vec::new(), 0)
        } else {
            let faces: &[Vec<usize>] = if d == 0 { &[] } else { &simplices[d - 1] };
            let m = boundary(faces, &simplices[d]);
            let rational = rational_rank(&m);
            let snf = smith_invariants(m);
            if snf.len() != rational {
                return Err(HomologyError::RankMismatch { degree: d, snf: snf.len(), rational });
            }
            (snf, rational)
        };
        ranks.push(rank);
        invariants.push(snf);
    }
    let reduced_betti = (0..=max_dim).map(|d| simplices[d].len() - ranks[d] - ranks[d + 1]).collect();
    let torsion = (0..=max_dim).map(|d| invariants[d + 1].iter().filter(|x| !x.is_one()).cloned().collect()).collect();
    Ok(HomologyResult {
        reduced_betti,
        torsion,
        simplex_counts: simplices.iter().map(|s| s.len()).collect(),
        truncated: truncated || !simplices[max_dim + 1].is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle() -> FinPoset {
        let names = ["v0", "v1", "v2", "e01", "e02", "e12"].map(String::from).to_vec();
        FinPoset::from_relation(names, &[(0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5)]).unwrap()
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let h = order_complex_homology(&hollow_triangle(), 2).unwrap();
        assert_eq!(h.reduced_betti, vec![0, 1, 0]);
        assert!(h.torsion.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn cones_and_empty() {
        assert!(order_complex_homology(&FinPoset::chain(4), 3).unwrap().is_trivial());
        assert!(order_complex_homology(&FinPoset::antichain(0), 2).unwrap().is_trivial());
        let two_points = order_complex_homology(&FinPoset::antichain(2), 1).unwrap();
        assert_eq!(two_points.reduced_betti, vec![1, 0]);
    }

    #[test]
    fn torsion_is_detected() {
        let m = vec![vec![BigInt::from(2), BigInt::from(4)], vec![BigInt::from(6), BigInt::from(8)]];
        assert_eq!(smith_invariants(m), vec![BigInt::from(2), BigInt::from(4)]);
        let m = vec![vec![BigInt::from(2), BigInt::zero()], vec![BigInt::zero(), BigInt::from(3)]];
        assert_eq!(smith_invariants(m), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn truncation_flag() {
        let h = order_complex_homology(&FinPoset::chain(5), 1).unwrap();
        assert!(h.truncated);
        assert!(!order_complex_homology(&FinPoset::chain(2), 1).unwrap().truncated);
    }

    #[test]
    fn budget() {
        assert_eq!(order_complex_homology_with_budget(&FinPoset::chain(6), 4, 10), Err(HomologyError::BudgetExceeded(10)));
    }
}
