//! Nerves of loop-free finite categories as chain complexes.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use super::category::FinCategory;
use super::homology::{smith_invariants, DegreeHomology, HomologyResult, SparseMatrix};
use crate::error::Error;

/// Nondegenerate simplices and their boundary maps. A 0-simplex is an
/// object; an n-simplex is a chain of n composable nonidentity arrows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub simplices: Vec<Vec<Vec<usize>>>,
    /// `boundaries[n]` maps degree `n` to degree `n - 1`; entry 0 is empty.
    pub boundaries: Vec<SparseMatrix>,
    /// True when no simplex exists above the top degree built.
    pub complete: bool,
}

impl ChainComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn top(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn check_dd_zero(&self) -> Result<(), Error> {
        for n in 2..self.boundaries.len() {
            if !self.boundaries[n - 1].mul(&self.boundaries[n]).is_empty() {
                return Err(Error::Invariant(format!("boundary squared is nonzero in degree {n}")));
            }
        }
        Ok(())
    }
}

/// The nerve truncated at `max_dim` (all of it when `None`). Fails unless
/// the category is loop-free.
pub fn nerve<O, A>(c: &FinCategory<O, A>, max_dim: Option<usize>) -> Result<ChainComplex, Error>
where
    O: Clone + Eq + Hash + Debug,
    A: Clone + Eq + Hash + Debug,
{
    c.check_loop_free()?;
    let nonid: Vec<Vec<usize>> = (0..c.object_count())
        .map(|o| c.out_arrows(o).iter().copied().filter(|&f| !c.is_identity(f)).collect())
        .collect();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..c.object_count()).map(|o| vec![o]).collect()];
    let mut complete = true;
    // 1-simplices
    let mut level: Vec<Vec<usize>> = (0..c.arrow_count()).filter(|&f| !c.is_identity(f)).map(|f| vec![f]).collect();
    let mut n = 1;
    while !level.is_empty() {
        if max_dim.is_some_and(|m| n > m) {
            complete = false;
            break;
        }
        let next: Vec<Vec<usize>> = level
            .iter()
            .flat_map(|ch| {
                let end = c.arrow(*ch.last().unwrap()).target;
                nonid[end].iter().map(move |&g| {
                    let mut v = ch.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
        simplices.push(level);
        level = next;
        n += 1;
    }

    let mut boundaries = vec![SparseMatrix::zero(0, simplices[0].len())];
    for n in 1..simplices.len() {
        let index: HashMap<&[usize], usize> =
            simplices[n - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut entries = Vec::new();
        for (col, ch) in simplices[n].iter().enumerate() {
            for i in 0..=n {
                let face = face(c, ch, i);
                let row = index[face.as_slice()];
                entries.push((row, col, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        boundaries.push(SparseMatrix {
            rows: simplices[n - 1].len(),
            cols: simplices[n].len(),
            entries,
        });
    }
    let cx = ChainComplex {
        simplices,
        boundaries,
        complete,
    };
    cx.check_dd_zero()?;
    Ok(cx)
}

/// The i-th face: drop the i-th object of the chain.
fn face<O, A>(c: &FinCategory<O, A>, ch: &[usize], i: usize) -> Vec<usize>
where
    O: Clone + Eq + Hash + Debug,
    A: Clone + Eq + Hash + Debug,
{
    let n = ch.len();
    if n == 1 {
        let a = c.arrow(ch[0]);
        return vec![if i == 0 { a.target } else { a.source }];
    }
    if i == 0 {
        ch[1..].to_vec()
    } else if i == n {
        ch[..n - 1].to_vec()
    } else {
        let mut v = ch[..i - 1].to_vec();
        v.push(c.compose(ch[i], ch[i - 1]).expect("chain is composable"));
        v.extend_from_slice(&ch[i + 1..]);
        v
    }
}

/// Homology in every degree the complex determines. For a truncated
/// complex the top chain group only contributes boundaries.
pub fn homology(cx: &ChainComplex) -> Result<HomologyResult, Error> {
    let top = cx.top();
    let ranks = cx.ranks();
    let smith: Vec<_> = cx.boundaries.iter().map(smith_invariants).collect();
    let last = if cx.complete { top } else { top.saturating_sub(1) };
    let mut degrees = Vec::new();
    for n in 0..=last {
        let rank_out = if n == 0 { 0 } else { smith[n].rank };
        let (rank_in, torsion) = if n < top {
            (smith[n + 1].rank, smith[n + 1].torsion.clone())
        } else {
            (0, Vec::new())
        };
        degrees.push(DegreeHomology {
            betti: ranks[n] - rank_out - rank_in,
            torsion,
        });
    }
    let result = HomologyResult {
        degrees,
        chain_ranks: ranks,
        complete: cx.complete,
    };
    if cx.complete && result.euler_from_betti() != result.euler_from_chains() {
        return Err(Error::Invariant(format!(
            "Euler characteristic mismatch: {} from Betti numbers, {} from simplices",
            result.euler_from_betti(),
            result.euler_from_chains()
        )));
    }
    Ok(result)
}

/// Emptiness, connectivity and reduced homology through `max_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub objects: usize,
    pub arrows: usize,
    pub components: usize,
    pub homology: Option<HomologyResult>,
    pub max_dim: usize,
}

impl AcyclicityReport {
    /// Nonempty, connected, and reduced homology zero through `max_dim`.
    /// A homological certificate only; it does not decide contractibility.
    pub fn is_acyclic(&self) -> bool {
        self.objects > 0
            && self.components == 1
            && self
                .homology
                .as_ref()
                .is_some_and(|h| (h.complete || h.valid_through() >= self.max_dim) && h.reduced_is_zero())
    }
}

pub fn acyclicity_report<O, A>(c: &FinCategory<O, A>, max_dim: usize) -> Result<AcyclicityReport, Error>
where
    O: Clone + Eq + Hash + Debug,
    A: Clone + Eq + Hash + Debug,
{
    let homology = if c.is_empty() {
        None
    } else {
        Some(homology(&nerve(c, Some(max_dim + 1))?)?)
    };
    Ok(AcyclicityReport {
        objects: c.object_count(),
        arrows: c.arrow_count(),
        components: c.components(),
        homology,
        max_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinCategory<usize, ()> {
        FinCategory::<usize, ()>::thin((0..n).collect(), |a, b| a <= b).unwrap()
    }

    #[test]
    fn terminal_and_chain_nerves() {
        let pt = nerve(&chain(1), None).unwrap();
        assert_eq!(pt.ranks(), vec![1]);
        let h = homology(&pt).unwrap();
        assert_eq!(h.to_string(), "H0=Z");
        let two = nerve(&chain(2), None).unwrap();
        assert_eq!(two.ranks(), vec![2, 1]);
        assert!(homology(&two).unwrap().reduced_is_zero());
        let three = nerve(&chain(3), None).unwrap();
        assert_eq!(three.ranks(), vec![3, 3, 1]);
    }

    #[test]
    fn truncation_is_reported() {
        let cx = nerve(&chain(4), Some(1)).unwrap();
        assert!(!cx.complete);
        let h = homology(&cx).unwrap();
        assert_eq!(h.valid_through(), 0);
        assert!(!h.to_string().is_empty());
    }

    #[test]
    fn four_cycle_poset_is_a_circle() {
        // a, b below c, d
        let c = FinCategory::<u8, ()>::thin(vec![0, 1, 2, 3], |x, y| x == y || (*x < 2 && *y >= 2)).unwrap();
        let cx = nerve(&c, None).unwrap();
        assert_eq!(cx.ranks(), vec![4, 4]);
        let h = homology(&cx).unwrap();
        assert_eq!(h.betti(), vec![1, 1]);
        let r = acyclicity_report(&c, 3).unwrap();
        assert!(!r.is_acyclic());
        assert!(acyclicity_report(&chain(3), 3).unwrap().is_acyclic());
    }
}
