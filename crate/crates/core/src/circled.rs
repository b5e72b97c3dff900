//! Circled planar trees: planar trees carrying a laminar family of white
//! (numbered) and black circles.
//!
//! A term is `Leaf`, `Node(children)` or `Circ(kind, content, grafts)`. The
//! content is the region enclosed by the circle; its open leaves are the
//! exits of the circle and `grafts` continue those exits upwards. Text form:
//!
//! ```text
//! ct   ::= "|" | "(" ct* ")" | "{" kind ct "/" ct* "}"
//! kind ::= "w" <int> | "b"
//! ```
//!
//! so `{w1 | / |}` is a single white circle on the free-living edge and
//! `{w1 | / {w2 | / |}}` has circle 1 below circle 2.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::error::{Error, ParseError};
use crate::perm::Perm;
use crate::trees::{graft, Cursor, PlanarTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleKind {
    White(u32),
    Black,
}

impl CircleKind {
    pub fn is_white(self) -> bool {
        matches!(self, CircleKind::White(_))
    }

    pub fn is_black(self) -> bool {
        matches!(self, CircleKind::Black)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circle {
    pub kind: CircleKind,
    pub content: CircledTree,
    pub grafts: Vec<CircledTree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircledTree {
    Leaf,
    Node(Vec<CircledTree>),
    Circ(Box<Circle>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    IntoContent,
    IntoGraft(usize),
    IntoChild(usize),
}

/// Path from the root of a term to a `Circ` occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircleAddress(pub Vec<Step>);

impl fmt::Display for CircleAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("@");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match s {
                Step::IntoContent => f.write_str("c")?,
                Step::IntoGraft(g) => write!(f, "g{g}")?,
                Step::IntoChild(n) => write!(f, "n{n}")?,
            }
        }
        Ok(())
    }
}

/// Relative position of two distinct circles; the carried address names the
/// distinguished circle of the pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RelPos {
    Outside { outer: CircleAddress },
    Below { lower: CircleAddress },
    LeftOf { left: CircleAddress },
}

impl RelPos {
    pub fn distinguished(&self) -> &CircleAddress {
        match self {
            RelPos::Outside { outer } => outer,
            RelPos::Below { lower } => lower,
            RelPos::LeftOf { left } => left,
        }
    }

    /// Label of the case: 0 for left-of, 1 for below, 2 for outside.
    pub fn level(&self) -> u32 {
        match self {
            RelPos::LeftOf { .. } => 0,
            RelPos::Below { .. } => 1,
            RelPos::Outside { .. } => 2,
        }
    }
}

impl CircledTree {
    pub fn circ(kind: CircleKind, content: CircledTree, grafts: Vec<CircledTree>) -> Result<Self, Error> {
        let open = content.open_leaves();
        if open != grafts.len() {
            return Err(Error::ArityMismatch {
                expected: open,
                found: grafts.len(),
            });
        }
        Ok(CircledTree::Circ(Box::new(Circle { kind, content, grafts })))
    }

    pub(crate) fn circ_unchecked(kind: CircleKind, content: CircledTree, grafts: Vec<CircledTree>) -> Self {
        debug_assert_eq!(content.open_leaves(), grafts.len());
        CircledTree::Circ(Box::new(Circle { kind, content, grafts }))
    }

    /// The circle-free term with the given underlying tree.
    pub fn bare(t: &PlanarTree) -> Self {
        match t {
            PlanarTree::Leaf => CircledTree::Leaf,
            PlanarTree::Node(cs) => CircledTree::Node(cs.iter().map(CircledTree::bare).collect()),
        }
    }

    pub fn open_leaves(&self) -> usize {
        match self {
            CircledTree::Leaf => 1,
            CircledTree::Node(cs) => cs.iter().map(CircledTree::open_leaves).sum(),
            CircledTree::Circ(c) => c.grafts.iter().map(CircledTree::open_leaves).sum(),
        }
    }

    /// Checks the graft-arity constraint at every circle.
    pub fn check_arity(&self) -> Result<(), Error> {
        match self {
            CircledTree::Leaf => Ok(()),
            CircledTree::Node(cs) => cs.iter().try_for_each(CircledTree::check_arity),
            CircledTree::Circ(c) => {
                let open = c.content.open_leaves();
                if open != c.grafts.len() {
                    return Err(Error::ArityMismatch {
                        expected: open,
                        found: c.grafts.len(),
                    });
                }
                c.content.check_arity()?;
                c.grafts.iter().try_for_each(CircledTree::check_arity)
            }
        }
    }

    pub fn circle_count(&self) -> usize {
        match self {
            CircledTree::Leaf => 0,
            CircledTree::Node(cs) => cs.iter().map(CircledTree::circle_count).sum(),
            CircledTree::Circ(c) => {
                1 + c.content.circle_count() + c.grafts.iter().map(CircledTree::circle_count).sum::<usize>()
            }
        }
    }

    /// All circles in preorder (a circle, then its content, then its grafts).
    pub fn circles(&self) -> Vec<(CircleAddress, &Circle)> {
        fn go<'a>(t: &'a CircledTree, path: &mut Vec<Step>, out: &mut Vec<(CircleAddress, &'a Circle)>) {
            match t {
                CircledTree::Leaf => {}
                CircledTree::Node(cs) => {
                    for (i, c) in cs.iter().enumerate() {
                        path.push(Step::IntoChild(i));
                        go(c, path, out);
                        path.pop();
                    }
                }
                CircledTree::Circ(c) => {
                    out.push((CircleAddress(path.clone()), c));
                    path.push(Step::IntoContent);
                    go(&c.content, path, out);
                    path.pop();
                    for (i, g) in c.grafts.iter().enumerate() {
                        path.push(Step::IntoGraft(i));
                        go(g, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn subterm(&self, path: &[Step]) -> Option<&CircledTree> {
        let mut cur = self;
        for s in path {
            cur = match (cur, s) {
                (CircledTree::Node(cs), Step::IntoChild(i)) => cs.get(*i)?,
                (CircledTree::Circ(c), Step::IntoContent) => &c.content,
                (CircledTree::Circ(c), Step::IntoGraft(i)) => c.grafts.get(*i)?,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn circle_at(&self, a: &CircleAddress) -> Result<&Circle, Error> {
        match self.subterm(&a.0) {
            Some(CircledTree::Circ(c)) => Ok(c),
            _ => Err(Error::BadCircleAddress(a.to_string())),
        }
    }

    fn map_at(&self, path: &[Step], f: &mut dyn FnMut(&CircledTree) -> CircledTree) -> Option<CircledTree> {
        let Some((first, rest)) = path.split_first() else {
            return Some(f(self));
        };
        match (self, first) {
            (CircledTree::Node(cs), Step::IntoChild(i)) if *i < cs.len() => {
                let mut cs = cs.clone();
                cs[*i] = cs[*i].map_at(rest, f)?;
                Some(CircledTree::Node(cs))
            }
            (CircledTree::Circ(c), Step::IntoContent) => {
                let content = c.content.map_at(rest, f)?;
                Some(CircledTree::circ_unchecked(c.kind, content, c.grafts.clone()))
            }
            (CircledTree::Circ(c), Step::IntoGraft(i)) if *i < c.grafts.len() => {
                let mut gs = c.grafts.clone();
                gs[*i] = gs[*i].map_at(rest, f)?;
                Some(CircledTree::circ_unchecked(c.kind, c.content.clone(), gs))
            }
            _ => None,
        }
    }

    /// White labels in preorder.
    pub fn white_labels(&self) -> Vec<u32> {
        self.circles()
            .into_iter()
            .filter_map(|(_, c)| match c.kind {
                CircleKind::White(l) => Some(l),
                CircleKind::Black => None,
            })
            .collect()
    }

    pub fn white_address(&self, label: u32) -> Option<CircleAddress> {
        self.circles()
            .into_iter()
            .find(|(_, c)| c.kind == CircleKind::White(label))
            .map(|(a, _)| a)
    }

    pub fn white_count(&self) -> usize {
        self.white_labels().len()
    }
}

/// Replaces the open leaves of `t`, left to right, by `reps`.
pub fn graft_ct(t: &CircledTree, reps: &[CircledTree]) -> CircledTree {
    fn go<'a>(t: &CircledTree, it: &mut impl Iterator<Item = &'a CircledTree>) -> CircledTree {
        match t {
            CircledTree::Leaf => it.next().expect("open-leaf count matches").clone(),
            CircledTree::Node(cs) => CircledTree::Node(cs.iter().map(|c| go(c, it)).collect()),
            CircledTree::Circ(c) => CircledTree::circ_unchecked(
                c.kind,
                c.content.clone(),
                c.grafts.iter().map(|g| go(g, it)).collect(),
            ),
        }
    }
    assert_eq!(t.open_leaves(), reps.len(), "graft arity");
    go(t, &mut reps.iter())
}

impl fmt::Display for CircleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleKind::White(l) => write!(f, "w{l}"),
            CircleKind::Black => f.write_str("b"),
        }
    }
}

impl fmt::Display for CircledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircledTree::Leaf => f.write_str("|"),
            CircledTree::Node(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            CircledTree::Circ(c) => {
                write!(f, "{{{} {} /", c.kind, c.content)?;
                for g in &c.grafts {
                    write!(f, " {g}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl FromStr for CircledTree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Cursor::new(s);
        let t = parse_ct(&mut p)?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

fn parse_ct(p: &mut Cursor<'_>) -> Result<CircledTree, ParseError> {
    match p.peek() {
        Some(b'|') => {
            p.bump();
            Ok(CircledTree::Leaf)
        }
        Some(b'(') => {
            p.bump();
            let mut cs = Vec::new();
            loop {
                match p.peek() {
                    Some(b')') => {
                        p.bump();
                        return Ok(CircledTree::Node(cs));
                    }
                    Some(_) => cs.push(parse_ct(p)?),
                    None => return Err(p.error("unterminated '('")),
                }
            }
        }
        Some(b'{') => {
            let start = p.pos;
            p.bump();
            let kind = match p.bump() {
                Some(b'b') => CircleKind::Black,
                Some(b'w') => {
                    let at = p.pos;
                    match p.number() {
                        Some(n) if n > 0 && n <= u32::MAX as u64 => CircleKind::White(n as u32),
                        _ => {
                            p.pos = at;
                            return Err(p.error("expected a positive white label"));
                        }
                    }
                }
                _ => {
                    p.pos -= 1;
                    return Err(p.error("expected circle kind 'w<n>' or 'b'"));
                }
            };
            let content = parse_ct(p)?;
            p.expect(b'/')?;
            let mut grafts = Vec::new();
            loop {
                match p.peek() {
                    Some(b'}') => {
                        p.bump();
                        break;
                    }
                    Some(_) => grafts.push(parse_ct(p)?),
                    None => return Err(p.error("unterminated '{'")),
                }
            }
            let open = content.open_leaves();
            if open != grafts.len() {
                return Err(ParseError {
                    offset: start,
                    message: format!(
                        "graft arity mismatch: content has {open} open leaves but {} grafts follow",
                        grafts.len()
                    ),
                });
            }
            Ok(CircledTree::circ_unchecked(kind, content, grafts))
        }
        Some(_) => Err(p.error("expected '|', '(' or '{'")),
        None => Err(p.error("unexpected end of input")),
    }
}

/// Erases every circle.
pub fn underlying(c: &CircledTree) -> PlanarTree {
    match c {
        CircledTree::Leaf => PlanarTree::Leaf,
        CircledTree::Node(cs) => PlanarTree::Node(cs.iter().map(underlying).collect()),
        CircledTree::Circ(circ) => {
            let inner = underlying(&circ.content);
            let gs: Vec<PlanarTree> = circ.grafts.iter().map(underlying).collect();
            graft(&inner, &gs).expect("graft arity is a term invariant")
        }
    }
}

/// Contracts every circle of `c` to a single vertex whose children are the
/// contractions of its exits.
pub fn contract(c: &CircledTree) -> PlanarTree {
    match c {
        CircledTree::Leaf => PlanarTree::Leaf,
        CircledTree::Node(cs) => PlanarTree::Node(cs.iter().map(contract).collect()),
        CircledTree::Circ(circ) => PlanarTree::Node(circ.grafts.iter().map(contract).collect()),
    }
}

/// Vertex count of [`contract`] without building the tree.
pub(crate) fn contracted_vertices(c: &CircledTree) -> usize {
    match c {
        CircledTree::Leaf => 0,
        CircledTree::Node(cs) => 1 + cs.iter().map(contracted_vertices).sum::<usize>(),
        CircledTree::Circ(circ) => 1 + circ.grafts.iter().map(contracted_vertices).sum::<usize>(),
    }
}

/// The tree inside the circle at `a`, with inner circles contracted.
pub fn inside_tree(c: &CircledTree, a: &CircleAddress) -> Result<PlanarTree, Error> {
    Ok(contract(&c.circle_at(a)?.content))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// White labels are not exactly `{1..k}`.
    WhiteLabels { found: Vec<u32> },
    /// The tree inside a black circle is a corolla.
    BlackAroundCorolla(CircleAddress),
    /// The tree inside a black circle is the free-living edge.
    BlackAroundEdge(CircleAddress),
    BlackDirectlyInsideBlack(CircleAddress),
    BlackOutsideWhites(CircleAddress),
    GraftArity(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WhiteLabels { found } => write!(f, "white labels {found:?} are not 1..k"),
            Violation::BlackAroundCorolla(a) => write!(f, "black circle at {a} around a corolla"),
            Violation::BlackAroundEdge(a) => write!(f, "black circle at {a} encloses only an edge"),
            Violation::BlackDirectlyInsideBlack(a) => {
                write!(f, "black circle at {a} directly inside a black circle")
            }
            Violation::BlackOutsideWhites(a) => write!(f, "black circle at {a} is not inside any white circle"),
            Violation::GraftArity(m) => write!(f, "graft arity: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub k: usize,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Context of a position in a term: whether some enclosing circle is white,
/// and whether the nearest enclosing circle is black.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Enclosure {
    pub inside_white: bool,
    pub parent_black: bool,
}

impl Enclosure {
    pub(crate) fn enter(self, kind: CircleKind) -> Enclosure {
        Enclosure {
            inside_white: self.inside_white || kind.is_white(),
            parent_black: kind.is_black(),
        }
    }
}

/// Every circle with the enclosure context it sits in, in preorder.
pub(crate) fn circles_in_context(c: &CircledTree) -> Vec<(CircleAddress, &Circle, Enclosure)> {
    fn go<'a>(
        t: &'a CircledTree,
        ctx: Enclosure,
        path: &mut Vec<Step>,
        out: &mut Vec<(CircleAddress, &'a Circle, Enclosure)>,
    ) {
        match t {
            CircledTree::Leaf => {}
            CircledTree::Node(cs) => {
                for (i, x) in cs.iter().enumerate() {
                    path.push(Step::IntoChild(i));
                    go(x, ctx, path, out);
                    path.pop();
                }
            }
            CircledTree::Circ(circ) => {
                out.push((CircleAddress(path.clone()), circ, ctx));
                path.push(Step::IntoContent);
                go(&circ.content, ctx.enter(circ.kind), path, out);
                path.pop();
                for (i, g) in circ.grafts.iter().enumerate() {
                    path.push(Step::IntoGraft(i));
                    go(g, ctx, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(c, Enclosure::default(), &mut Vec::new(), &mut out);
    out
}

pub fn validate_config(c: &CircledTree) -> ValidityReport {
    let mut violations = Vec::new();
    if let Err(e) = c.check_arity() {
        violations.push(Violation::GraftArity(e.to_string()));
        return ValidityReport { k: 0, violations };
    }
    let labels = c.white_labels();
    let k = labels.len();
    let set: BTreeSet<u32> = labels.iter().copied().collect();
    if set.len() != k || set.iter().copied().ne(1..=k as u32) {
        violations.push(Violation::WhiteLabels { found: labels });
    }
    for (addr, circ, ctx) in circles_in_context(c) {
        if !circ.kind.is_black() {
            continue;
        }
        match contracted_vertices(&circ.content) {
            0 => violations.push(Violation::BlackAroundEdge(addr.clone())),
            1 => violations.push(Violation::BlackAroundCorolla(addr.clone())),
            _ => {}
        }
        if ctx.parent_black {
            violations.push(Violation::BlackDirectlyInsideBlack(addr.clone()));
        }
        if !ctx.inside_white {
            violations.push(Violation::BlackOutsideWhites(addr));
        }
    }
    ValidityReport { k, violations }
}

/// The operad profile `(T₁..T_k; T)` of a valid configuration.
pub fn white_profile(c: &CircledTree) -> Result<(Vec<PlanarTree>, PlanarTree), Error> {
    let report = validate_config(c);
    if !report.is_valid() {
        let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidConfig(msg.join("; ")));
    }
    Ok(profile_unchecked(c))
}

pub(crate) fn profile_unchecked(c: &CircledTree) -> (Vec<PlanarTree>, PlanarTree) {
    let mut whites: Vec<(u32, PlanarTree)> = c
        .circles()
        .into_iter()
        .filter_map(|(_, circ)| match circ.kind {
            CircleKind::White(l) => Some((l, contract(&circ.content))),
            CircleKind::Black => None,
        })
        .collect();
    whites.sort_by_key(|(l, _)| *l);
    (whites.into_iter().map(|(_, t)| t).collect(), underlying(c))
}

/// Entry and exit points of every circle in the tree obtained from the
/// underlying tree by marking where each circle boundary crosses an edge.
///
/// Positions are child-index paths from the root of that marked tree, so a
/// point lies above another iff the latter's path is a prefix of its own.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub addresses: Vec<CircleAddress>,
    pub kinds: Vec<CircleKind>,
    entries: Vec<Vec<u32>>,
    exits: Vec<Vec<Vec<u32>>>,
}

enum GTree {
    Leaf,
    Node(Mark, Vec<GTree>),
}

#[derive(Clone, Copy)]
enum Mark {
    Vertex,
    Entry(usize),
    Exit(usize, usize),
}

impl Geometry {
    pub fn of(c: &CircledTree) -> Geometry {
        let circles = c.circles();
        let n = circles.len();
        let mut counter = 0;
        let g = build_gtree(c, &mut counter);
        debug_assert_eq!(counter, n);
        let mut geo = Geometry {
            addresses: circles.iter().map(|(a, _)| a.clone()).collect(),
            kinds: circles.iter().map(|(_, c)| c.kind).collect(),
            entries: vec![Vec::new(); n],
            exits: circles.iter().map(|(_, c)| vec![Vec::new(); c.grafts.len()]).collect(),
        };
        fn walk(g: &GTree, path: &mut Vec<u32>, geo: &mut Geometry) {
            if let GTree::Node(mark, cs) = g {
                match *mark {
                    Mark::Entry(i) => geo.entries[i] = path.clone(),
                    Mark::Exit(i, e) => geo.exits[i][e] = path.clone(),
                    Mark::Vertex => {}
                }
                for (k, c) in cs.iter().enumerate() {
                    path.push(k as u32);
                    walk(c, path, geo);
                    path.pop();
                }
            }
        }
        walk(&g, &mut Vec::new(), &mut geo);
        geo
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }

    pub fn index_of(&self, a: &CircleAddress) -> Option<usize> {
        self.addresses.iter().position(|x| x == a)
    }

    /// True iff circle `j` lies inside circle `i`.
    pub fn encloses(&self, i: usize, j: usize) -> bool {
        i != j
            && self.entries[j].starts_with(&self.entries[i])
            && !self.exits[i].iter().any(|x| self.entries[j].starts_with(x))
    }

    /// True iff circle `j` lies above an exit of circle `i`.
    pub fn below(&self, i: usize, j: usize) -> bool {
        i != j && self.exits[i].iter().any(|x| self.entries[j].starts_with(x))
    }

    pub fn relpos(&self, i: usize, j: usize) -> RelPos {
        assert_ne!(i, j, "relative position needs two distinct circles");
        let (ai, aj) = (self.addresses[i].clone(), self.addresses[j].clone());
        if self.encloses(i, j) {
            RelPos::Outside { outer: ai }
        } else if self.encloses(j, i) {
            RelPos::Outside { outer: aj }
        } else if self.below(i, j) {
            RelPos::Below { lower: ai }
        } else if self.below(j, i) {
            RelPos::Below { lower: aj }
        } else if self.entries[i] < self.entries[j] {
            RelPos::LeftOf { left: ai }
        } else {
            RelPos::LeftOf { left: aj }
        }
    }

    /// Circle indices sorted by entry point in preorder: left, lower and
    /// outer circles come first.
    pub fn entry_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.entries[a].cmp(&self.entries[b]));
        idx
    }
}

fn build_gtree(c: &CircledTree, counter: &mut usize) -> GTree {
    match c {
        CircledTree::Leaf => GTree::Leaf,
        CircledTree::Node(cs) => GTree::Node(Mark::Vertex, cs.iter().map(|x| build_gtree(x, counter)).collect()),
        CircledTree::Circ(circ) => {
            let id = *counter;
            *counter += 1;
            let inner = build_gtree(&circ.content, counter);
            let exits: Vec<GTree> = circ
                .grafts
                .iter()
                .enumerate()
                .map(|(e, g)| GTree::Node(Mark::Exit(id, e), vec![build_gtree(g, counter)]))
                .collect();
            let mut it = exits.into_iter();
            let body = graft_g(inner, &mut it);
            GTree::Node(Mark::Entry(id), vec![body])
        }
    }
}

fn graft_g(t: GTree, it: &mut impl Iterator<Item = GTree>) -> GTree {
    match t {
        GTree::Leaf => it.next().expect("exit count matches"),
        GTree::Node(m, cs) => GTree::Node(m, cs.into_iter().map(|c| graft_g(c, it)).collect()),
    }
}

pub fn relative_position(c: &CircledTree, a: &CircleAddress, b: &CircleAddress) -> Result<RelPos, Error> {
    c.circle_at(a)?;
    c.circle_at(b)?;
    if a == b {
        return Err(Error::BadCircleAddress(format!("{a} given twice")));
    }
    let g = Geometry::of(c);
    let i = g.index_of(a).expect("resolved above");
    let j = g.index_of(b).expect("resolved above");
    Ok(g.relpos(i, j))
}

/// Erases the boundary of the circle at `a`, keeping everything else.
pub fn splice(c: &CircledTree, a: &CircleAddress) -> Result<CircledTree, Error> {
    c.circle_at(a)?;
    Ok(c
        .map_at(&a.0, &mut |t| match t {
            CircledTree::Circ(circ) => graft_ct(&circ.content, &circ.grafts),
            _ => unreachable!("address resolves to a circle"),
        })
        .expect("address resolved"))
}

/// Renames white label `i` to `sigma(i)` (one-based labels, zero-based perm).
pub fn relabel_whites(c: &CircledTree, sigma: &Perm) -> Result<CircledTree, Error> {
    let labels: BTreeSet<u32> = c.white_labels().into_iter().collect();
    let k = sigma.len() as u32;
    if labels.len() != c.white_count() || labels.iter().copied().ne(1..=k) {
        return Err(Error::LabelMismatch(format!(
            "white labels {:?} do not match a permutation of {k} points",
            c.white_labels()
        )));
    }
    Ok(map_whites(c, &mut |l| sigma.apply(l as usize - 1) as u32 + 1))
}

pub(crate) fn map_whites(c: &CircledTree, f: &mut dyn FnMut(u32) -> u32) -> CircledTree {
    match c {
        CircledTree::Leaf => CircledTree::Leaf,
        CircledTree::Node(cs) => CircledTree::Node(cs.iter().map(|x| map_whites(x, f)).collect()),
        CircledTree::Circ(circ) => {
            let kind = match circ.kind {
                CircleKind::White(l) => CircleKind::White(f(l)),
                CircleKind::Black => CircleKind::Black,
            };
            let content = map_whites(&circ.content, f);
            let grafts = circ.grafts.iter().map(|g| map_whites(g, f)).collect();
            CircledTree::circ_unchecked(kind, content, grafts)
        }
    }
}

/// Upper bound on the number of circles in a valid configuration.
pub fn circle_bound(t: &PlanarTree, k: usize) -> usize {
    2 * k + t.vertices()
}

/// All valid configurations on `t` with white labels `{1..k}`, optionally
/// restricted to a white profile, sorted by their text form.
pub fn enumerate_configs(t: &PlanarTree, k: usize, profile_filter: Option<&[PlanarTree]>) -> Vec<CircledTree> {
    enumerate_configs_bounded(t, k, circle_bound(t, k), profile_filter)
}

/// As [`enumerate_configs`], with an explicit bound on the circle count.
pub fn enumerate_configs_bounded(
    t: &PlanarTree,
    k: usize,
    max_circles: usize,
    profile_filter: Option<&[PlanarTree]>,
) -> Vec<CircledTree> {
    let mut gen = ConfigGen::default();
    let shapes = gen.gen(t, max_circles, k, Enclosure::default());
    let perms = Perm::all(k);
    let mut out: Vec<(String, CircledTree)> = Vec::new();
    for s in shapes.iter().filter(|s| s.whites == k) {
        for p in &perms {
            let mut next = 0;
            let labelled = map_whites(&s.term, &mut |_| {
                let l = p.apply(next) as u32 + 1;
                next += 1;
                l
            });
            if let Some(filter) = profile_filter {
                let (ins, _) = profile_unchecked(&labelled);
                if ins.as_slice() != filter {
                    continue;
                }
            }
            out.push((labelled.to_string(), labelled));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out.into_iter().map(|(_, c)| c).collect()
}

/// Unary configurations on `t` whose white circle encloses the tree `s`.
pub fn enumerate_unary(s: &PlanarTree, t: &PlanarTree) -> Vec<CircledTree> {
    enumerate_configs(t, 1, Some(std::slice::from_ref(s)))
}

#[derive(Clone)]
struct Shape {
    term: CircledTree,
    whites: usize,
    circles: usize,
}

/// Generator of circle shapes with unlabelled whites (`White(0)`).
///
/// Only black circles admissible in their context are produced: blacks sit
/// inside some white, never directly inside a black, and enclose a tree with
/// at least two vertices once inner circles are contracted.
#[derive(Default)]
struct ConfigGen {
    memo: HashMap<(PlanarTree, usize, usize, Enclosure), Rc<Vec<Shape>>>,
}

impl ConfigGen {
    fn gen(&mut self, t: &PlanarTree, budget: usize, wmax: usize, ctx: Enclosure) -> Rc<Vec<Shape>> {
        let key = (t.clone(), budget, wmax, ctx);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        // circle-free at the top
        match t {
            PlanarTree::Leaf => out.push(Shape {
                term: CircledTree::Leaf,
                whites: 0,
                circles: 0,
            }),
            PlanarTree::Node(cs) => {
                let lists: Vec<Rc<Vec<Shape>>> = cs.iter().map(|c| self.gen(c, budget, wmax, ctx)).collect();
                for combo in bounded_product(&lists, budget, wmax) {
                    out.push(Shape {
                        whites: combo.iter().map(|s| s.whites).sum(),
                        circles: combo.iter().map(|s| s.circles).sum(),
                        term: CircledTree::Node(combo.into_iter().map(|s| s.term.clone()).collect()),
                    });
                }
            }
        }
        // a circle rooted at the bottom of `t`
        if budget > 0 {
            let mut kinds = Vec::new();
            if wmax > 0 {
                kinds.push(CircleKind::White(0));
            }
            if ctx.inside_white && !ctx.parent_black {
                kinds.push(CircleKind::Black);
            }
            for kind in kinds {
                let wdec = usize::from(kind.is_white());
                for (cut, hanging) in cuts(t) {
                    let contents = self.gen(&cut, budget - 1, wmax - wdec, ctx.enter(kind));
                    let graft_lists: Vec<Rc<Vec<Shape>>> =
                        hanging.iter().map(|h| self.gen(h, budget - 1, wmax - wdec, ctx)).collect();
                    for content in contents.iter() {
                        if kind.is_black() && contracted_vertices(&content.term) < 2 {
                            continue;
                        }
                        let used = 1 + content.circles;
                        let wused = wdec + content.whites;
                        if used > budget || wused > wmax {
                            continue;
                        }
                        for combo in bounded_product(&graft_lists, budget - used, wmax - wused) {
                            out.push(Shape {
                                whites: wused + combo.iter().map(|s| s.whites).sum::<usize>(),
                                circles: used + combo.iter().map(|s| s.circles).sum::<usize>(),
                                term: CircledTree::circ_unchecked(
                                    kind,
                                    content.term.clone(),
                                    combo.into_iter().map(|s| s.term.clone()).collect(),
                                ),
                            });
                        }
                    }
                }
            }
        }
        let rc = Rc::new(out);
        self.memo.insert(key, rc.clone());
        rc
    }
}

/// Choices of one shape per list with total circles `≤ budget` and total
/// whites `≤ wmax`.
fn bounded_product(lists: &[Rc<Vec<Shape>>], budget: usize, wmax: usize) -> Vec<Vec<&Shape>> {
    let mut acc: Vec<(Vec<&Shape>, usize, usize)> = vec![(Vec::new(), 0, 0)];
    for list in lists {
        let mut next = Vec::new();
        for (prefix, c, w) in &acc {
            for s in list.iter() {
                if c + s.circles <= budget && w + s.whites <= wmax {
                    let mut p = prefix.clone();
                    p.push(s);
                    next.push((p, c + s.circles, w + s.whites));
                }
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(p, _, _)| p).collect()
}

/// Ways to cut `t` at the bottom: the part enclosed by a circle rooted at
/// the root edge, with the subtrees hanging above its exits.
fn cuts(t: &PlanarTree) -> Vec<(PlanarTree, Vec<PlanarTree>)> {
    let mut out = vec![(PlanarTree::Leaf, vec![t.clone()])];
    if let PlanarTree::Node(_) = t {
        out.extend(vertex_cuts(t));
    }
    out
}

/// Cuts containing the root vertex.
fn vertex_cuts(t: &PlanarTree) -> Vec<(PlanarTree, Vec<PlanarTree>)> {
    let PlanarTree::Node(cs) = t else {
        return Vec::new();
    };
    let mut acc: Vec<(Vec<PlanarTree>, Vec<PlanarTree>)> = vec![(Vec::new(), Vec::new())];
    for c in cs {
        let mut options = vec![(PlanarTree::Leaf, vec![c.clone()])];
        if let PlanarTree::Node(_) = c {
            options.extend(vertex_cuts(c));
        }
        let mut next = Vec::new();
        for (kids, hang) in &acc {
            for (oc, oh) in &options {
                let mut k = kids.clone();
                k.push(oc.clone());
                let mut h = hang.clone();
                h.extend(oh.iter().cloned());
                next.push((k, h));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(k, h)| (PlanarTree::Node(k), h)).collect()
}
