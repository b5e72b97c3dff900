//! The complete graph operad.
//!
//! An element of arity `k` is a complete graph on `{1..k}` whose edges carry
//! non-negative labels, together with a permutation. The permutation is read
//! as a ranking of the vertices: for `i < j` the orientation of the edge `ij`
//! is neutral iff `perm(i) < perm(j)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError};
use crate::perm::Perm;

/// Which label range a filtration level admits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LabelConvention {
    /// Level `m` uses labels `0..m` (exclusive), so level 2 has two labels.
    #[default]
    Adopted,
    /// Level `m` uses labels `0..=m`.
    Literal,
}

impl LabelConvention {
    /// Largest admissible label at filtration level `m`.
    pub fn max_label(self, m: u32) -> Option<u32> {
        match self {
            LabelConvention::Adopted => m.checked_sub(1),
            LabelConvention::Literal => Some(m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LabelConvention::Adopted => "adopted",
            LabelConvention::Literal => "literal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElt {
    mu: Vec<u32>,
    perm: Perm,
}

/// Position of the pair `i < j` in the lexicographic list of pairs of `0..k`.
pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    // pairs starting with 0..i come first
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

impl KElt {
    pub fn new(mu: Vec<u32>, perm: Perm) -> Result<Self, Error> {
        let k = perm.len();
        if mu.len() != k * k.saturating_sub(1) / 2 {
            return Err(Error::ArityMismatch {
                expected: k * k.saturating_sub(1) / 2,
                found: mu.len(),
            });
        }
        Ok(KElt { mu, perm })
    }

    /// Builds an element from a label function on pairs.
    pub fn from_fn(perm: Perm, mut label: impl FnMut(usize, usize) -> u32) -> Self {
        let mu = pairs(perm.len()).map(|(i, j)| label(i, j)).collect();
        KElt { mu, perm }
    }

    /// The unique arity-1 element.
    pub fn unit() -> Self {
        KElt {
            mu: Vec::new(),
            perm: Perm::identity(1),
        }
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn labels(&self) -> &[u32] {
        &self.mu
    }

    /// Label of the edge between distinct vertices `i` and `j` (zero-based).
    pub fn mu(&self, i: usize, j: usize) -> u32 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.mu[pair_index(self.arity(), a, b)]
    }

    /// True iff `i` precedes `j` in the ranking.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.perm.apply(i) < self.perm.apply(j)
    }

    /// Orientation of the pair `i < j`: true when neutral.
    pub fn neutral(&self, i: usize, j: usize) -> bool {
        self.precedes(i, j)
    }

    pub fn max_label(&self) -> Option<u32> {
        self.mu.iter().copied().max()
    }

    pub fn in_filtration(&self, m: u32, conv: LabelConvention) -> bool {
        match conv.max_label(m) {
            Some(top) => self.mu.iter().all(|&x| x <= top),
            None => self.arity() <= 1,
        }
    }

    /// Relabels vertex `i` as `tau(i)`.
    pub fn act(&self, tau: &Perm) -> Result<KElt, Error> {
        if tau.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: tau.len(),
            });
        }
        let inv = tau.inverse();
        Ok(KElt::from_fn(self.perm.after(&inv), |a, b| {
            self.mu(inv.apply(a), inv.apply(b))
        }))
    }

    /// Removes vertex `v`, keeping the relative order of the rest.
    pub fn delete_vertex(&self, v: usize) -> KElt {
        let k = self.arity();
        assert!(v < k, "vertex out of range");
        let keep: Vec<usize> = (0..k).filter(|&x| x != v).collect();
        let mut ranked = keep.clone();
        ranked.sort_by_key(|&x| self.perm.apply(x));
        let mut images = vec![0; keep.len()];
        for (rank, x) in ranked.iter().enumerate() {
            let pos = keep.iter().position(|y| y == x).unwrap();
            images[pos] = rank;
        }
        KElt::from_fn(Perm::from_images(images).unwrap(), |a, b| self.mu(keep[a], keep[b]))
    }
}

impl fmt::Display for KElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.arity())?;
        for (n, (i, j)) in pairs(self.arity()).enumerate() {
            write!(f, " mu({},{})={}", i + 1, j + 1, self.mu[n])?;
        }
        write!(f, " ; perm={}", self.perm)
    }
}

impl FromStr for KElt {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let err = |offset: usize, m: &str| ParseError {
            offset,
            message: m.to_string(),
        };
        let (head, rest) = s.split_once(';').ok_or_else(|| err(0, "expected ';' after arity"))?;
        let k: usize = head.trim().parse().map_err(|_| err(0, "bad arity"))?;
        let base = head.len() + 1;
        let (mus, perm_part) = rest
            .split_once(';')
            .ok_or_else(|| err(base, "expected '; perm=[..]'"))?;
        let mut labels = std::collections::HashMap::new();
        for tok in mus.split_whitespace() {
            let off = base + mus.find(tok).unwrap_or(0);
            let body = tok
                .strip_prefix("mu(")
                .and_then(|t| t.split_once(")="))
                .ok_or_else(|| err(off, "expected mu(i,j)=n"))?;
            let (ij, val) = body;
            let (i, j) = ij.split_once(',').ok_or_else(|| err(off, "expected i,j"))?;
            let i: usize = i.trim().parse().map_err(|_| err(off, "bad index"))?;
            let j: usize = j.trim().parse().map_err(|_| err(off, "bad index"))?;
            let v: u32 = val.trim().parse().map_err(|_| err(off, "bad label"))?;
            if i == 0 || j == 0 || i >= j || j > k {
                return Err(err(off, "pair out of range"));
            }
            labels.insert((i - 1, j - 1), v);
        }
        let poff = base + mus.len() + 1;
        let p = perm_part
            .trim()
            .strip_prefix("perm=[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err(poff, "expected perm=[..]"))?;
        let images: Vec<usize> = if p.trim().is_empty() {
            Vec::new()
        } else {
            p.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| err(poff, "bad permutation entry"))?
        };
        if images.len() != k {
            return Err(err(poff, "permutation length differs from arity"));
        }
        let perm = Perm::from_one_based(&images).map_err(|e| err(poff, &e.to_string()))?;
        if labels.len() != k * k.saturating_sub(1) / 2 {
            return Err(err(base, "labels must cover every pair exactly once"));
        }
        Ok(KElt::from_fn(perm, |i, j| labels[&(i, j)]))
    }
}

/// `(μ,σ) ≤ (ν,τ)` iff on every pair either `μ < ν`, or labels agree and so
/// do the orientations.
pub fn k_leq(a: &KElt, b: &KElt) -> Result<bool, Error> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(pairs(a.arity()).all(|(i, j)| {
        let (x, y) = (a.mu(i, j), b.mu(i, j));
        x < y || (x == y && a.neutral(i, j) == b.neutral(i, j))
    }))
}

/// Operadic composition: insert `inner[a]` at vertex `a` of `outer`, with
/// block renumbering.
pub fn k_compose(outer: &KElt, inner: &[KElt]) -> Result<KElt, Error> {
    if inner.len() != outer.arity() {
        return Err(Error::ArityMismatch {
            expected: outer.arity(),
            found: inner.len(),
        });
    }
    let sizes: Vec<usize> = inner.iter().map(KElt::arity).collect();
    let mut block_of = Vec::new();
    for (a, &l) in sizes.iter().enumerate() {
        block_of.extend((0..l).map(|p| (a, p)));
    }
    let inner_perms: Vec<Perm> = inner.iter().map(|x| x.perm.clone()).collect();
    let perm = outer.perm.block(&sizes).after(&Perm::direct_sum(&inner_perms));
    Ok(KElt::from_fn(perm, |x, y| {
        let ((a, p), (b, q)) = (block_of[x], block_of[y]);
        if a == b {
            inner[a].mu(p, q)
        } else {
            outer.mu(a, b)
        }
    }))
}

/// The shift `𝒦₂ → 𝒦₃` adding one to every label.
pub fn k_iota(a: &KElt) -> Result<KElt, Error> {
    if !a.in_filtration(2, LabelConvention::Adopted) {
        return Err(Error::Filtration {
            level: 2,
            element: a.to_string(),
        });
    }
    Ok(KElt {
        mu: a.mu.iter().map(|x| x + 1).collect(),
        perm: a.perm.clone(),
    })
}

/// All elements of `𝒦_m(k)`, labels varying slowest-last, then permutations.
pub fn k_enumerate(m: u32, k: usize, conv: LabelConvention) -> Vec<KElt> {
    let npairs = k * k.saturating_sub(1) / 2;
    let Some(top) = conv.max_label(m) else {
        return if npairs == 0 {
            Perm::all(k).into_iter().map(|p| KElt { mu: Vec::new(), perm: p }).collect()
        } else {
            Vec::new()
        };
    };
    let base = top + 1;
    let mut label_vectors = vec![Vec::new()];
    for _ in 0..npairs {
        label_vectors = label_vectors
            .into_iter()
            .flat_map(|v| {
                (0..base).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    let perms = Perm::all(k);
    let mut out = Vec::with_capacity(label_vectors.len() * perms.len());
    for mu in &label_vectors {
        for p in &perms {
            out.push(KElt {
                mu: mu.clone(),
                perm: p.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2(mu: u32, swapped: bool) -> KElt {
        let p = if swapped {
            Perm::transposition(2, 0, 1)
        } else {
            Perm::identity(2)
        };
        KElt::new(vec![mu], p).unwrap()
    }

    #[test]
    fn pair_index_is_lexicographic() {
        let k = 5;
        let all: Vec<_> = pairs(k).collect();
        for (n, &(i, j)) in all.iter().enumerate() {
            assert_eq!(pair_index(k, i, j), n);
        }
    }

    #[test]
    fn leq_examples() {
        for a in k_enumerate(3, 3, LabelConvention::Adopted) {
            assert!(k_leq(&a, &a).unwrap());
        }
        assert!(k_leq(&k2(0, false), &k2(1, true)).unwrap());
        assert!(!k_leq(&k2(1, false), &k2(1, true)).unwrap());
        assert!(!k_leq(&k2(1, true), &k2(1, false)).unwrap());
        assert!(k_leq(&k2(0, false), &KElt::unit()).is_err());
    }

    #[test]
    fn figure_composite() {
        let outer = k2(1, false);
        let a = KElt::new(vec![0, 2, 2], Perm::identity(3)).unwrap();
        let b = k2(0, false);
        let c = k_compose(&outer, &[a, b]).unwrap();
        assert_eq!(c.arity(), 5);
        assert_eq!((c.mu(0, 1), c.mu(0, 2), c.mu(1, 2), c.mu(3, 4)), (0, 2, 2, 0));
        for i in 0..3 {
            for j in 3..5 {
                assert_eq!(c.mu(i, j), 1);
            }
        }
        assert!(c.perm().is_identity());
    }

    #[test]
    fn unary_units() {
        for x in k_enumerate(3, 3, LabelConvention::Adopted) {
            let units = vec![KElt::unit(); 3];
            assert_eq!(k_compose(&x, &units).unwrap(), x);
            assert_eq!(k_compose(&KElt::unit(), std::slice::from_ref(&x)).unwrap(), x);
        }
    }

    #[test]
    fn iota_examples() {
        assert_eq!(k_iota(&k2(0, false)).unwrap(), k2(1, false));
        assert_eq!(k_iota(&k2(1, true)).unwrap(), k2(2, true));
        assert!(matches!(k_iota(&k2(2, false)), Err(Error::Filtration { .. })));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(k_enumerate(2, 2, LabelConvention::Adopted).len(), 4);
        assert_eq!(k_enumerate(3, 2, LabelConvention::Adopted).len(), 6);
        assert_eq!(k_enumerate(2, 3, LabelConvention::Adopted).len(), 8 * 6);
        assert_eq!(k_enumerate(2, 2, LabelConvention::Literal).len(), 6);
        for m in 1..4 {
            assert_eq!(k_enumerate(m, 0, LabelConvention::Adopted).len(), 1);
            assert_eq!(k_enumerate(m, 1, LabelConvention::Adopted).len(), 1);
        }
    }

    #[test]
    fn text_round_trip() {
        for x in k_enumerate(3, 3, LabelConvention::Adopted) {
            let s = x.to_string();
            assert_eq!(s.parse::<KElt>().unwrap(), x, "{s}");
        }
        assert_eq!(k2(1, true).to_string(), "2; mu(1,2)=1 ; perm=[2,1]");
        assert_eq!(KElt::unit().to_string(), "1; ; perm=[1]");
        assert!("2; mu(1,3)=1 ; perm=[1,2]".parse::<KElt>().is_err());
    }

    #[test]
    fn delete_vertex_keeps_order() {
        // ranks: vertex0 -> 2, vertex1 -> 0, vertex2 -> 1
        let x = KElt::new(vec![1, 2, 0], Perm::from_images(vec![2, 0, 1]).unwrap()).unwrap();
        let d = x.delete_vertex(1);
        assert_eq!(d.labels(), &[2]);
        assert_eq!(d.perm().images(), &[1, 0]);
    }
}
