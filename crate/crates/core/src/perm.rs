//! Permutations of `{0, .., n-1}` stored by their images.
//!
//! Displayed one-based, e.g. `[2,1]` for the transposition of two points.

use std::fmt;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from zero-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::LabelMismatch(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation from one-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self, Error> {
        if images.contains(&0) {
            return Err(Error::LabelMismatch("one-based images must be positive".into()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Perm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// All permutations of `n` points in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// Permutes blocks of sizes `sizes` as `self` permutes their indices,
    /// keeping the order within each block: the point at offset `p` in block
    /// `a` (blocks laid out in index order) goes to offset `p` of the slot
    /// of block `self(a)` in the layout ordered by target index.
    pub fn block(&self, sizes: &[usize]) -> Perm {
        assert_eq!(self.len(), sizes.len());
        let n = self.len();
        let inv = self.inverse();
        // target layout: slot t holds block inv(t)
        let mut target_offset = vec![0; n];
        let mut acc = 0;
        for t in 0..n {
            target_offset[t] = acc;
            acc += sizes[inv.apply(t)];
        }
        let mut images = Vec::with_capacity(acc);
        for a in 0..n {
            for p in 0..sizes[a] {
                images.push(target_offset[self.apply(a)] + p);
            }
        }
        Perm(images)
    }

    /// Direct sum `p_1 ⊕ .. ⊕ p_k` acting blockwise.
    pub fn direct_sum(parts: &[Perm]) -> Perm {
        let mut images = Vec::new();
        let mut off = 0;
        for p in parts {
            images.extend(p.0.iter().map(|&i| i + off));
            off += p.len();
        }
        Perm(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_counts_and_order() {
        assert_eq!(Perm::all(0).len(), 1);
        assert_eq!(Perm::all(3).len(), 6);
        let p = Perm::all(3);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_and_after() {
        for p in Perm::all(4) {
            assert!(p.after(&p.inverse()).is_identity());
            assert!(p.inverse().after(&p).is_identity());
        }
    }

    #[test]
    fn block_permutation_moves_whole_blocks() {
        // swap two blocks of sizes 2 and 1: [a0 a1 | b0] -> [b0 | a0 a1]
        let sw = Perm::transposition(2, 0, 1);
        let b = sw.block(&[2, 1]);
        assert_eq!(b.images(), &[1, 2, 0]);
        assert!(Perm::identity(3).block(&[1, 0, 2]).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_one_based(&[0, 1]).is_err());
        assert_eq!(Perm::from_one_based(&[2, 1]).unwrap().to_string(), "[2,1]");
    }
}
