//! The coloured operad of circled planar trees, its complexity map into the
//! complete graph operad, and the operad of pairs `(o, κ)` with
//! `c(o) ≤ ι(κ)`.
//!
//! Composition superimposes the circles of the j-th argument onto the
//! region of white circle j, turns that circle black, renumbers the
//! argument whites blockwise and then removes superfluous black circles:
//!
//! * R1: a black circle enclosing an edge or a corolla is erased;
//! * R2: a black circle directly inside a black circle is erased;
//! * R3: a black circle not inside any white circle is erased.
//!
//! Rules are applied one splice at a time, outermost first, to a fixpoint.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::circled::{
    circles_in_context, contracted_vertices, map_whites, profile_unchecked, splice, underlying, validate_config,
    CircleAddress, CircleKind, CircledTree, Geometry,
};
use crate::error::{Error, ParseError};
use crate::kgraph::{k_compose, k_iota, k_leq, KElt};
use crate::perm::Perm;
use crate::trees::PlanarTree;

/// Switches for the reduction rules; all on by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReduceRules {
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
}

impl Default for ReduceRules {
    fn default() -> Self {
        ReduceRules {
            r1: true,
            r2: true,
            r3: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R1,
    R2,
    R3,
}

/// A valid configuration with its cached profile `(T₁..T_k; T)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HOperation {
    config: CircledTree,
    inputs: Vec<PlanarTree>,
    output: PlanarTree,
}

impl HOperation {
    pub fn new(config: CircledTree) -> Result<Self, Error> {
        let report = validate_config(&config);
        if !report.is_valid() {
            let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidConfig(format!("{config}: {}", msg.join("; "))));
        }
        let (inputs, output) = profile_unchecked(&config);
        Ok(HOperation { config, inputs, output })
    }

    pub fn config(&self) -> &CircledTree {
        &self.config
    }

    pub fn inputs(&self) -> &[PlanarTree] {
        &self.inputs
    }

    pub fn output(&self) -> &PlanarTree {
        &self.output
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Recomputes the profile and compares it with the cached one.
    pub fn check_invariants(&self) -> Result<(), Error> {
        let again = HOperation::new(self.config.clone())?;
        if again.inputs != self.inputs || again.output != self.output {
            return Err(Error::Invariant(format!("stale profile on {}", self.config)));
        }
        Ok(())
    }
}

impl fmt::Display for HOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.config.fmt(f)
    }
}

impl FromStr for HOperation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        HOperation::new(s.parse::<CircledTree>()?)
    }
}

/// The unit: one white circle around all of `t`.
pub fn identity_op(t: &PlanarTree) -> HOperation {
    let config = CircledTree::circ(
        CircleKind::White(1),
        CircledTree::bare(t),
        vec![CircledTree::Leaf; t.leaves()],
    )
    .expect("bare tree has one open leaf per leaf");
    HOperation {
        config,
        inputs: vec![t.clone()],
        output: t.clone(),
    }
}

/// Every black circle a rule applies to, in preorder, with the first rule
/// that applies.
pub fn reducible(c: &CircledTree, rules: ReduceRules) -> Vec<(CircleAddress, Rule)> {
    circles_in_context(c)
        .into_iter()
        .filter(|(_, circ, _)| circ.kind.is_black())
        .filter_map(|(addr, circ, ctx)| {
            if rules.r1 && contracted_vertices(&circ.content) <= 1 {
                Some((addr, Rule::R1))
            } else if rules.r2 && ctx.parent_black {
                Some((addr, Rule::R2))
            } else if rules.r3 && !ctx.inside_white {
                Some((addr, Rule::R3))
            } else {
                None
            }
        })
        .collect()
}

pub fn reduce(c: &CircledTree) -> CircledTree {
    reduce_with(c, ReduceRules::default())
}

pub fn reduce_with(c: &CircledTree, rules: ReduceRules) -> CircledTree {
    let mut cur = c.clone();
    while let Some((addr, _)) = reducible(&cur, rules).into_iter().next() {
        cur = splice(&cur, &addr).expect("reducible addresses resolve");
    }
    cur
}

/// Normal forms reachable by every maximal sequence of single splices.
pub fn normal_forms(c: &CircledTree, rules: ReduceRules) -> BTreeSet<CircledTree> {
    fn go(
        c: &CircledTree,
        rules: ReduceRules,
        memo: &mut HashMap<CircledTree, BTreeSet<CircledTree>>,
    ) -> BTreeSet<CircledTree> {
        if let Some(r) = memo.get(c) {
            return r.clone();
        }
        let steps = reducible(c, rules);
        let out = if steps.is_empty() {
            BTreeSet::from([c.clone()])
        } else {
            let mut acc = BTreeSet::new();
            for (addr, _) in steps {
                let next = splice(c, &addr).expect("reducible addresses resolve");
                acc.extend(go(&next, rules, memo));
            }
            acc
        };
        memo.insert(c.clone(), out.clone());
        out
    }
    go(c, rules, &mut HashMap::new())
}

/// Superimposes `arg` (a term over the contraction of `region`) onto
/// `region`. Returns the merged term and, in order, the parts of `region`
/// that hang above the open leaves of `arg`.
fn superimpose(arg: &CircledTree, region: &CircledTree) -> Result<(CircledTree, Vec<CircledTree>), Error> {
    let mismatch = || Error::ColourMismatch {
        slot: 0,
        expected: region.to_string(),
        found: arg.to_string(),
    };
    match arg {
        CircledTree::Leaf => Ok((CircledTree::Leaf, vec![region.clone()])),
        CircledTree::Node(achildren) => match region {
            CircledTree::Node(rchildren) => {
                if achildren.len() != rchildren.len() {
                    return Err(mismatch());
                }
                let mut kids = Vec::with_capacity(achildren.len());
                let mut pending = Vec::new();
                for (a, r) in achildren.iter().zip(rchildren) {
                    let (k, p) = superimpose(a, r)?;
                    kids.push(k);
                    pending.extend(p);
                }
                Ok((CircledTree::Node(kids), pending))
            }
            // an inner circle of the region is a single vertex for `arg`
            CircledTree::Circ(circ) => {
                if achildren.len() != circ.grafts.len() {
                    return Err(mismatch());
                }
                let mut grafts = Vec::with_capacity(achildren.len());
                let mut pending = Vec::new();
                for (a, g) in achildren.iter().zip(&circ.grafts) {
                    let (k, p) = superimpose(a, g)?;
                    grafts.push(k);
                    pending.extend(p);
                }
                Ok((
                    CircledTree::circ_unchecked(circ.kind, circ.content.clone(), grafts),
                    pending,
                ))
            }
            CircledTree::Leaf => Err(mismatch()),
        },
        CircledTree::Circ(acirc) => {
            let (content, above) = superimpose(&acirc.content, region)?;
            if above.len() != acirc.grafts.len() {
                return Err(mismatch());
            }
            let mut grafts = Vec::with_capacity(above.len());
            let mut pending = Vec::new();
            for (g, r) in acirc.grafts.iter().zip(&above) {
                let (k, p) = superimpose(g, r)?;
                grafts.push(k);
                pending.extend(p);
            }
            Ok((CircledTree::circ_unchecked(acirc.kind, content, grafts), pending))
        }
    }
}

fn check_colours(o: &HOperation, args: &[HOperation]) -> Result<(), Error> {
    if args.len() != o.arity() {
        return Err(Error::ArityMismatch {
            expected: o.arity(),
            found: args.len(),
        });
    }
    for (j, (a, t)) in args.iter().zip(&o.inputs).enumerate() {
        if a.output() != t {
            return Err(Error::ColourMismatch {
                slot: j + 1,
                expected: t.to_string(),
                found: a.output().to_string(),
            });
        }
    }
    Ok(())
}

/// The superposition of `args` into `o` before any black circle is removed.
pub fn compose_raw(o: &HOperation, args: &[HOperation]) -> Result<CircledTree, Error> {
    check_colours(o, args)?;
    let mut offsets = Vec::with_capacity(args.len());
    let mut acc = 0u32;
    for a in args {
        offsets.push(acc);
        acc += a.arity() as u32;
    }
    let shifted: Vec<CircledTree> = args
        .iter()
        .zip(&offsets)
        .map(|(a, &off)| map_whites(&a.config, &mut |l| l + off))
        .collect();
    substitute(&o.config, &shifted)
}

fn substitute(t: &CircledTree, args: &[CircledTree]) -> Result<CircledTree, Error> {
    match t {
        CircledTree::Leaf => Ok(CircledTree::Leaf),
        CircledTree::Node(cs) => Ok(CircledTree::Node(
            cs.iter().map(|c| substitute(c, args)).collect::<Result<_, _>>()?,
        )),
        CircledTree::Circ(circ) => {
            let content = substitute(&circ.content, args)?;
            let grafts: Vec<CircledTree> = circ.grafts.iter().map(|g| substitute(g, args)).collect::<Result<_, _>>()?;
            match circ.kind {
                CircleKind::Black => Ok(CircledTree::circ_unchecked(CircleKind::Black, content, grafts)),
                CircleKind::White(j) => {
                    let (merged, pending) = superimpose(&args[j as usize - 1], &content)?;
                    if pending.iter().any(|p| *p != CircledTree::Leaf) {
                        return Err(Error::Invariant(format!("argument {j} does not cover its white circle")));
                    }
                    Ok(CircledTree::circ_unchecked(CircleKind::Black, merged, grafts))
                }
            }
        }
    }
}

/// Operadic composition `m(o; args)`.
pub fn compose(o: &HOperation, args: &[HOperation]) -> Result<HOperation, Error> {
    let raw = compose_raw(o, args)?;
    HOperation::new(reduce(&raw))
}

/// Composition with a chosen subset of the reduction rules. The result need
/// not be a valid configuration when rules are disabled.
pub fn compose_with(o: &HOperation, args: &[HOperation], rules: ReduceRules) -> Result<CircledTree, Error> {
    Ok(reduce_with(&compose_raw(o, args)?, rules))
}

/// Right action of the symmetric group: white `i` is renamed `sigma(i)`.
pub fn sigma_act(sigma: &Perm, o: &HOperation) -> Result<HOperation, Error> {
    if sigma.len() != o.arity() {
        return Err(Error::ArityMismatch {
            expected: o.arity(),
            found: sigma.len(),
        });
    }
    let config = map_whites(&o.config, &mut |l| sigma.apply(l as usize - 1) as u32 + 1);
    let inv = sigma.inverse();
    let inputs = (0..o.arity()).map(|m| o.inputs[inv.apply(m)].clone()).collect();
    Ok(HOperation {
        config,
        inputs,
        output: o.output.clone(),
    })
}

/// Removes white circle `label`, reduces, and renumbers the remaining
/// whites order-preservingly.
pub fn delete_white(o: &HOperation, label: u32) -> Result<HOperation, Error> {
    let addr = o
        .config
        .white_address(label)
        .ok_or_else(|| Error::LabelMismatch(format!("no white circle {label} in {}", o.config)))?;
    let spliced = splice(&o.config, &addr)?;
    let renamed = map_whites(&spliced, &mut |l| if l > label { l - 1 } else { l });
    HOperation::new(reduce(&renamed))
}

/// The complexity map: pairwise positions of the white circles.
pub fn complexity(o: &HOperation) -> KElt {
    let geo = Geometry::of(&o.config);
    let k = o.arity();
    let mut white_index = vec![0; k];
    for (idx, kind) in geo.kinds.iter().enumerate() {
        if let CircleKind::White(l) = kind {
            white_index[*l as usize - 1] = idx;
        }
    }
    let order = geo.entry_order();
    let mut rank_of_circle = vec![0; geo.len()];
    for (r, &idx) in order.iter().enumerate() {
        rank_of_circle[idx] = r;
    }
    let mut ranked: Vec<usize> = (0..k).collect();
    ranked.sort_by_key(|&w| rank_of_circle[white_index[w]]);
    let mut images = vec![0; k];
    for (r, &w) in ranked.iter().enumerate() {
        images[w] = r;
    }
    let perm = Perm::from_images(images).expect("ranking is a bijection");
    KElt::from_fn(perm, |i, j| geo.relpos(white_index[i], white_index[j]).level())
}

/// An operation together with a complete-graph element bounding its
/// complexity after the shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatOperation {
    op: HOperation,
    kelt: KElt,
}

impl HatOperation {
    pub fn new(op: HOperation, kelt: KElt) -> Result<Self, Error> {
        if kelt.arity() != op.arity() {
            return Err(Error::ArityMismatch {
                expected: op.arity(),
                found: kelt.arity(),
            });
        }
        let bound = k_iota(&kelt)?;
        if !k_leq(&complexity(&op), &bound)? {
            return Err(Error::Invariant(format!(
                "complexity of {op} exceeds the shifted bound {bound}"
            )));
        }
        Ok(HatOperation { op, kelt })
    }

    pub fn identity(t: &PlanarTree) -> Self {
        HatOperation {
            op: identity_op(t),
            kelt: KElt::unit(),
        }
    }

    pub fn op(&self) -> &HOperation {
        &self.op
    }

    pub fn kelt(&self) -> &KElt {
        &self.kelt
    }

    pub fn arity(&self) -> usize {
        self.op.arity()
    }
}

impl fmt::Display for HatOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ;", self.op)?;
        for m in self.kelt.labels() {
            write!(f, " {m}")?;
        }
        write!(f, " ; {}", self.kelt.perm())
    }
}

impl FromStr for HatOperation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(';').collect();
        let [config, mus, perm] = parts.as_slice() else {
            return Err(ParseError {
                offset: 0,
                message: "expected 'config ; labels ; [perm]'".into(),
            }
            .into());
        };
        let op: HOperation = config.trim().parse()?;
        let bad = |m: &str| -> Error {
            ParseError {
                offset: config.len() + 1,
                message: m.to_string(),
            }
            .into()
        };
        let labels: Vec<u32> = mus
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad("bad label"))?;
        let p = perm.trim().strip_prefix('[').and_then(|p| p.strip_suffix(']')).ok_or_else(|| bad("bad permutation"))?;
        let images: Vec<usize> = if p.trim().is_empty() {
            Vec::new()
        } else {
            p.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad("bad permutation"))?
        };
        let kelt = KElt::new(labels, Perm::from_one_based(&images)?)?;
        HatOperation::new(op, kelt)
    }
}

/// Componentwise composition; the bound is re-checked on the result.
pub fn hat_compose(h: &HatOperation, args: &[HatOperation]) -> Result<HatOperation, Error> {
    let ops: Vec<HOperation> = args.iter().map(|a| a.op.clone()).collect();
    let kelts: Vec<KElt> = args.iter().map(|a| a.kelt.clone()).collect();
    let op = compose(&h.op, &ops)?;
    let kelt = k_compose(&h.kelt, &kelts)?;
    HatOperation::new(op, kelt)
}

pub fn hat_sigma_act(sigma: &Perm, h: &HatOperation) -> Result<HatOperation, Error> {
    HatOperation::new(sigma_act(sigma, &h.op)?, h.kelt.act(sigma)?)
}

/// True when `c` is a fixpoint of all three rules.
pub fn is_reduced(c: &CircledTree) -> bool {
    reducible(c, ReduceRules::default()).is_empty()
}

/// The underlying tree of an operation's configuration.
pub fn output_tree(o: &HOperation) -> PlanarTree {
    underlying(&o.config)
}
