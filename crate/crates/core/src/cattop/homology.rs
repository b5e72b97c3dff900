//! Integral homology of finite chain complexes via Smith normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix given by its nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }

    /// Nonzero entries of `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> BTreeMap<(usize, usize), i64> {
        assert_eq!(self.cols, other.rows);
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.rows];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = BTreeMap::new();
        for &(r, k, v) in &self.entries {
            for &(c, w) in &by_row[k] {
                *out.entry((r, c)).or_insert(0) += v * w;
            }
        }
        out.retain(|_, x| *x != 0);
        out
    }
}

/// Rank and the invariant factors greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithInvariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Smith normal form invariants of an integer matrix. Unit pivots are
/// eliminated sparsely first; the remainder is diagonalized densely.
pub fn smith_invariants(m: &SparseMatrix) -> SmithInvariants {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    for &(r, c, v) in &m.entries {
        let e = rows[r].entry(c).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            rows[r].remove(&c);
        }
    }
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut rank = 0;
    let mut progress = true;
    while progress {
        progress = false;
        for c in 0..m.cols {
            let pivot = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs().is_one())
                .min_by_key(|&r| rows[r].len());
            let Some(pr) = pivot else { continue };
            progress = true;
            rank += 1;
            let prow = std::mem::take(&mut rows[pr]);
            for &cc in prow.keys() {
                col_rows[cc].remove(&pr);
            }
            let p = prow[&c].clone();
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for r in others {
                let factor = &rows[r][&c] * &p;
                for (cc, v) in &prow {
                    let e = rows[r].entry(*cc).or_insert_with(BigInt::zero);
                    *e -= &factor * v;
                    if e.is_zero() {
                        rows[r].remove(cc);
                        col_rows[*cc].remove(&r);
                    } else {
                        col_rows[*cc].insert(r);
                    }
                }
            }
            debug_assert!(col_rows[c].is_empty());
        }
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense[i][col_pos[c]] = v.clone();
        }
    }
    let diag = dense_diagonal(dense);
    rank += diag.len();
    SmithInvariants {
        rank,
        torsion: invariant_factors(diag).into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Diagonalizes by unimodular row and column operations; returns the
/// nonzero diagonal entries (absolute values, not yet a divisibility chain).
fn dense_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut swapped = false;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                for (x, p) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                    *x -= &q * p;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    swapped = true;
                }
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Turns a diagonal into a divisibility chain with the same cokernel.
fn invariant_factors(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Homology in one degree: `ℤ^betti ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_z(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for DegreeHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Homology of a chain complex in degrees `0..=valid_through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
    /// Chain group ranks, including any degree beyond `valid_through`.
    pub chain_ranks: Vec<usize>,
    /// False when higher simplices were cut off; then the last chain group
    /// only serves as boundary source.
    pub complete: bool,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn valid_through(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    /// Reduced homology vanishes in every computed degree.
    pub fn reduced_is_zero(&self) -> bool {
        self.degrees.iter().enumerate().all(|(n, d)| {
            if n == 0 {
                d.betti == 1 && d.torsion.is_empty()
            } else {
                d.is_zero()
            }
        })
    }

    pub fn euler_from_chains(&self) -> i64 {
        alternating(&self.chain_ranks)
    }

    pub fn euler_from_betti(&self) -> i64 {
        alternating(&self.betti())
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().enumerate().map(|(n, d)| format!("H{n}={d}")).collect();
        f.write_str(&parts.join(" "))?;
        if !self.complete {
            write!(f, " (through degree {})", self.valid_through())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, dense: &[&[i64]]) -> SparseMatrix {
        let mut entries = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    entries.push((r, c, v));
                }
            }
        }
        SparseMatrix { rows, cols, entries }
    }

    #[test]
    fn smith_small_cases() {
        let a = m(2, 2, &[&[2, 0], &[0, 3]]);
        assert_eq!(
            smith_invariants(&a),
            SmithInvariants {
                rank: 2,
                torsion: vec![BigInt::from(6)]
            }
        );
        let b = m(2, 2, &[&[2, 4], &[6, 8]]);
        assert_eq!(smith_invariants(&b).torsion, vec![BigInt::from(2), BigInt::from(4)]);
        let z = SparseMatrix::zero(3, 2);
        assert_eq!(smith_invariants(&z).rank, 0);
        let u = m(2, 3, &[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(smith_invariants(&u), SmithInvariants { rank: 2, torsion: vec![] });
    }

    #[test]
    fn degree_display() {
        let d = DegreeHomology {
            betti: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(d.to_string(), "Z^2 + Z/2");
        assert_eq!(
            DegreeHomology {
                betti: 0,
                torsion: vec![]
            }
            .to_string(),
            "0"
        );
    }
}
