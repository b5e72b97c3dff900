//! Planar rooted trees.
//!
//! A [`PlanarTree`] is either the free-living edge [`PlanarTree::Leaf`] or a
//! vertex with an ordered list of child subtrees. Planar trees have no
//! non-trivial automorphisms, so structural equality is isomorphism.
//!
//! Text form: `tree ::= "|" | "(" tree* ")"` with children separated by a
//! single space, e.g. `((|) |)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

/// Preorder index of a vertex (a `Node` occurrence) inside a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddress(pub usize);

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(cs) => cs.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(cs) => 1 + cs.iter().map(PlanarTree::vertices).sum::<usize>(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlanarTree::Leaf)
    }

    /// True for trees with exactly one vertex.
    pub fn is_corolla(&self) -> bool {
        match self {
            PlanarTree::Node(cs) => cs.iter().all(PlanarTree::is_leaf),
            PlanarTree::Leaf => false,
        }
    }

    /// True when every vertex has at most one child, i.e. the tree is a
    /// chain of unary vertices (optionally capped by a 0-ary one).
    pub fn is_linear(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(cs) => cs.len() <= 1 && cs.iter().all(PlanarTree::is_linear),
        }
    }

    /// Ordering key for enumerations: vertex count, then leaf count, then text.
    pub fn sort_key(&self) -> (usize, usize, String) {
        (self.vertices(), self.leaves(), self.to_string())
    }

    /// Number of children of the vertex at `v`.
    pub fn arity_at(&self, v: VertexAddress) -> Result<usize, Error> {
        self.subtree_at(v).map(|t| match t {
            PlanarTree::Node(cs) => cs.len(),
            PlanarTree::Leaf => unreachable!("vertex addresses resolve to nodes"),
        })
    }

    fn subtree_at(&self, v: VertexAddress) -> Result<&PlanarTree, Error> {
        fn go<'a>(t: &'a PlanarTree, target: usize, next: &mut usize) -> Option<&'a PlanarTree> {
            match t {
                PlanarTree::Leaf => None,
                PlanarTree::Node(cs) => {
                    if *next == target {
                        return Some(t);
                    }
                    *next += 1;
                    cs.iter().find_map(|c| go(c, target, next))
                }
            }
        }
        let mut next = 0;
        go(self, v.0, &mut next).ok_or(Error::BadVertexAddress {
            address: v.0,
            vertices: self.vertices(),
        })
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => f.write_str("|"),
            PlanarTree::Node(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for PlanarTree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Cursor::new(s);
        let t = p.tree()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

/// Byte cursor shared by the tree and circled-tree parsers.
pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Cursor { src: s.as_bytes(), pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    pub(crate) fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("expected '{}'", b as char))),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    /// Reads a run of ASCII digits; returns `None` if there is none.
    pub(crate) fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    pub(crate) fn error(&self, msg: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn tree(&mut self) -> Result<PlanarTree, ParseError> {
        match self.peek() {
            Some(b'|') => {
                self.pos += 1;
                Ok(PlanarTree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let mut cs = Vec::new();
                loop {
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(PlanarTree::Node(cs));
                        }
                        Some(_) => cs.push(self.tree()?),
                        None => return Err(self.error("unterminated '('")),
                    }
                }
            }
            Some(_) => Err(self.error("expected '|' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// The corolla with one vertex and `n` leaves.
pub fn corolla(n: usize) -> PlanarTree {
    PlanarTree::Node(vec![PlanarTree::Leaf; n])
}

/// Replaces the leaves of `base`, left to right, by `replacements`.
pub fn graft(base: &PlanarTree, replacements: &[PlanarTree]) -> Result<PlanarTree, Error> {
    let expected = base.leaves();
    if replacements.len() != expected {
        return Err(Error::ArityMismatch {
            expected,
            found: replacements.len(),
        });
    }
    let mut it = replacements.iter();
    Ok(graft_iter(base, &mut it))
}

fn graft_iter<'a>(t: &PlanarTree, it: &mut impl Iterator<Item = &'a PlanarTree>) -> PlanarTree {
    match t {
        PlanarTree::Leaf => it.next().expect("leaf count checked").clone(),
        PlanarTree::Node(cs) => PlanarTree::Node(cs.iter().map(|c| graft_iter(c, it)).collect()),
    }
}

/// `S ∘_v T`: replaces vertex `v` of `s` by the tree `t`, attaching the
/// former children of `v` to the leaves of `t` in planar order.
pub fn insert_at_vertex(s: &PlanarTree, v: VertexAddress, t: &PlanarTree) -> Result<PlanarTree, Error> {
    let arity = s.arity_at(v)?;
    if t.leaves() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            found: t.leaves(),
        });
    }
    fn go(s: &PlanarTree, target: usize, next: &mut usize, t: &PlanarTree) -> PlanarTree {
        match s {
            PlanarTree::Leaf => PlanarTree::Leaf,
            PlanarTree::Node(cs) => {
                let here = *next;
                *next += 1;
                let cs: Vec<_> = cs.iter().map(|c| go(c, target, next, t)).collect();
                if here == target {
                    graft(t, &cs).expect("arity checked")
                } else {
                    PlanarTree::Node(cs)
                }
            }
        }
    }
    let mut next = 0;
    Ok(go(s, v.0, &mut next, t))
}

/// All planar trees with at most `max_vertices` vertices and at most
/// `max_leaves` leaves, sorted by [`PlanarTree::sort_key`].
pub fn enumerate_trees(max_vertices: usize, max_leaves: usize) -> Vec<PlanarTree> {
    let mut gen = TreeGen::default();
    let mut out = Vec::new();
    for v in 0..=max_vertices {
        for l in 0..=max_leaves {
            out.extend(gen.exact(v, l).iter().cloned());
        }
    }
    out.sort_by_cached_key(PlanarTree::sort_key);
    out
}

#[derive(Default)]
struct TreeGen {
    trees: HashMap<(usize, usize), Vec<PlanarTree>>,
    forests: HashMap<(usize, usize), Vec<Vec<PlanarTree>>>,
}

impl TreeGen {
    /// Trees with exactly `v` vertices and `l` leaves.
    fn exact(&mut self, v: usize, l: usize) -> Vec<PlanarTree> {
        if let Some(ts) = self.trees.get(&(v, l)) {
            return ts.clone();
        }
        let ts = match v {
            0 if l == 1 => vec![PlanarTree::Leaf],
            0 => Vec::new(),
            _ => self.forest(v - 1, l).into_iter().map(PlanarTree::Node).collect(),
        };
        self.trees.insert((v, l), ts.clone());
        ts
    }

    /// Ordered sequences of trees with `v` vertices and `l` leaves in total.
    fn forest(&mut self, v: usize, l: usize) -> Vec<Vec<PlanarTree>> {
        if let Some(fs) = self.forests.get(&(v, l)) {
            return fs.clone();
        }
        let mut fs = Vec::new();
        if v == 0 && l == 0 {
            fs.push(Vec::new());
        }
        // every tree contributes a vertex or a leaf, so the recursion shrinks
        for v1 in 0..=v {
            for l1 in 0..=l {
                if v1 + l1 == 0 {
                    continue;
                }
                let heads = self.exact(v1, l1);
                if heads.is_empty() {
                    continue;
                }
                let tails = self.forest(v - v1, l - l1);
                for h in &heads {
                    for tl in &tails {
                        let mut f = Vec::with_capacity(tl.len() + 1);
                        f.push(h.clone());
                        f.extend(tl.iter().cloned());
                        fs.push(f);
                    }
                }
            }
        }
        self.forests.insert((v, l), fs.clone());
        fs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PlanarTree {
        s.parse().unwrap()
    }

    #[test]
    fn corolla_shapes() {
        assert_eq!(corolla(0), PlanarTree::Node(vec![]));
        assert_eq!(corolla(1), PlanarTree::Node(vec![PlanarTree::Leaf]));
        assert_eq!(corolla(3).leaves(), 3);
        assert_eq!(corolla(3).vertices(), 1);
        assert_eq!(corolla(0).leaves(), 0);
    }

    #[test]
    fn codec_examples() {
        assert_eq!(t("|"), PlanarTree::Leaf);
        assert_eq!(t("(| |)"), corolla(2));
        assert_eq!(
            t("((|) |)"),
            PlanarTree::Node(vec![corolla(1), PlanarTree::Leaf])
        );
        assert_eq!(t("((|) |)").to_string(), "((|) |)");
        assert_eq!(t("  ( ( |)   |) ").to_string(), "((|) |)");
        assert_eq!(t("()").to_string(), "()");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = "(| x)".parse::<PlanarTree>().unwrap_err();
        assert_eq!(e.offset, 3);
        let e = "(|".parse::<PlanarTree>().unwrap_err();
        assert_eq!(e.offset, 2);
        let e = "| |".parse::<PlanarTree>().unwrap_err();
        assert_eq!(e.offset, 2);
        assert!("".parse::<PlanarTree>().is_err());
    }

    #[test]
    fn graft_examples() {
        let x = t("(|)");
        assert_eq!(graft(&PlanarTree::Leaf, std::slice::from_ref(&x)).unwrap(), x);
        let c2 = corolla(2);
        assert_eq!(graft(&c2, &[PlanarTree::Leaf, PlanarTree::Leaf]).unwrap(), c2);
        let g = graft(&c2, &[corolla(1), PlanarTree::Leaf]).unwrap();
        assert_eq!(g, t("((|) |)"));
        assert_eq!(g.vertices(), c2.vertices() + corolla(1).vertices());
        assert!(matches!(
            graft(&c2, &[PlanarTree::Leaf]),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn insert_examples() {
        let c2 = corolla(2);
        assert_eq!(insert_at_vertex(&c2, VertexAddress(0), &c2).unwrap(), c2);
        assert_eq!(
            insert_at_vertex(&corolla(1), VertexAddress(0), &PlanarTree::Leaf).unwrap(),
            PlanarTree::Leaf
        );
        let s = t("((|) |)");
        assert_eq!(insert_at_vertex(&s, VertexAddress(1), &corolla(1)).unwrap(), s);
        assert_eq!(
            insert_at_vertex(&s, VertexAddress(1), &t("((|))")).unwrap(),
            t("(((|)) |)")
        );
        assert!(matches!(
            insert_at_vertex(&s, VertexAddress(2), &corolla(1)),
            Err(Error::BadVertexAddress { .. })
        ));
        assert!(matches!(
            insert_at_vertex(&s, VertexAddress(0), &corolla(1)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_trees(0, 1), vec![PlanarTree::Leaf]);
        let got: Vec<String> = enumerate_trees(1, 2).iter().map(|x| x.to_string()).collect();
        assert_eq!(got, vec!["|", "()", "(|)", "(| |)"]);
        let two = enumerate_trees(2, 1);
        assert!(two.contains(&t("((|))")));
        assert!(two.contains(&t("(())")));
    }

    #[test]
    fn linear_and_corolla_predicates() {
        assert!(t("((|))").is_linear());
        assert!(!t("(| |)").is_linear());
        assert!(t("(| |)").is_corolla());
        assert!(!t("((|))").is_corolla());
    }
}
