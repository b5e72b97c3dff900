//! Categories built from the operad of circled trees: the comma categories
//! `𝓗_k/T`, their complexity-bounded subcategories, the category of pairs
//! over `𝒦₂(k)`, the deletion functor and its slices, fibers and
//! adjunction certificates.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use super::category::{grothendieck, Arrow, FinCategory, FinFunctor, GrothArrow, GrothObject};
use crate::circled::enumerate_configs;
use crate::error::Error;
use crate::kgraph::{k_enumerate, k_iota, k_leq, KElt, LabelConvention};
use crate::operad_h::{complexity, compose, delete_white, identity_op, HOperation, HatOperation};
use crate::trees::PlanarTree;

/// Arrows of a comma category are tuples of unary operations.
pub type CommaCategory = FinCategory<HOperation, Vec<HOperation>>;
pub type HatCategory = FinCategory<HatOperation, Vec<HOperation>>;
pub type PosetCategory = FinCategory<KElt, ()>;

fn compose_tuples(q: &[HOperation], p: &[HOperation]) -> Result<Vec<HOperation>, Error> {
    q.iter().zip(p).map(|(qj, pj)| compose(qj, std::slice::from_ref(pj))).collect()
}

fn identity_tuple(o: &HOperation) -> Vec<HOperation> {
    o.inputs().iter().map(identity_op).collect()
}

/// The comma category `𝓗_k/T`: k-ary operations with output `T`; an arrow
/// `o → o′` is a tuple `p` of unary operations with `m(o′; p) = o`.
pub fn build_comma(t: &PlanarTree, k: usize) -> Result<CommaCategory, Error> {
    let objects: Vec<HOperation> = enumerate_configs(t, k, None)
        .into_iter()
        .map(HOperation::new)
        .collect::<Result<_, _>>()?;
    let index: HashMap<&HOperation, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut unary: HashMap<PlanarTree, Vec<HOperation>> = HashMap::new();
    let mut arrows = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (ti, target) in objects.iter().enumerate() {
        let lists: Vec<Vec<HOperation>> = target
            .inputs()
            .iter()
            .map(|s| {
                unary
                    .entry(s.clone())
                    .or_insert_with(|| {
                        enumerate_configs(s, 1, None)
                            .into_iter()
                            .map(|c| HOperation::new(c).expect("enumerated configurations are valid"))
                            .collect()
                    })
                    .clone()
            })
            .collect();
        let mut tuple = Vec::with_capacity(k);
        for_each_tuple(&lists, &mut tuple, &mut |p| {
            let source = compose(target, p)?;
            let si = *index
                .get(&source)
                .ok_or_else(|| Error::Invariant(format!("composite {source} is not an object")))?;
            if si == ti && p.iter().zip(target.inputs()).all(|(pj, s)| *pj == identity_op(s)) {
                identities[ti] = arrows.len();
            }
            arrows.push(Arrow {
                source: si,
                target: ti,
                payload: p.to_vec(),
            });
            Ok(())
        })?;
    }
    FinCategory::build(objects, arrows, identities, |g, f| compose_tuples(&g.payload, &f.payload))
}

fn for_each_tuple<T: Clone>(
    lists: &[Vec<T>],
    cur: &mut Vec<T>,
    f: &mut dyn FnMut(&[T]) -> Result<(), Error>,
) -> Result<(), Error> {
    if cur.len() == lists.len() {
        return f(cur);
    }
    for x in &lists[cur.len()] {
        cur.push(x.clone());
        for_each_tuple(lists, cur, f)?;
        cur.pop();
    }
    Ok(())
}

/// `𝓗_{(μ,σ)}/T`: the full subcategory of operations with `c(o) ≤ (μ,σ)`.
pub fn complexity_subcategory(comma: &CommaCategory, bound: &KElt) -> CommaCategory {
    comma
        .full_subcategory(|o| k_leq(&complexity(o), bound).unwrap_or(false))
        .0
}

/// A finite set of complete-graph elements ordered by `≤`.
pub fn poset_category(elements: Vec<KElt>) -> Result<PosetCategory, Error> {
    let arity = elements.first().map(KElt::arity);
    if elements.iter().any(|e| Some(e.arity()) != arity) {
        return Err(Error::ArityMismatch {
            expected: arity.unwrap_or(0),
            found: elements.iter().map(KElt::arity).find(|&a| Some(a) != arity).unwrap_or(0),
        });
    }
    FinCategory::<KElt, ()>::thin(elements, |a, b| k_leq(a, b).unwrap_or(false))
}

/// The category of pairs `(o, κ)` with `κ ∈ 𝒦₂(k)` and `c(o) ≤ ι(κ)`. An
/// arrow `(o, κ) → (o′, κ′)` is a comma arrow `o → o′` with `κ ≤ κ′`.
pub fn build_hat(comma: &CommaCategory, k: usize) -> Result<HatCategory, Error> {
    let kelts = k_enumerate(2, k, LabelConvention::Adopted);
    let mut objects = Vec::new();
    let mut over: Vec<Vec<(usize, usize)>> = vec![Vec::new(); comma.object_count()];
    for (oi, o) in comma.objects().iter().enumerate() {
        for (ki, kappa) in kelts.iter().enumerate() {
            if let Ok(h) = HatOperation::new(o.clone(), kappa.clone()) {
                over[oi].push((objects.len(), ki));
                objects.push(h);
            }
        }
    }
    let mut arrows = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (f, a) in comma.arrows().iter().enumerate() {
        for &(hs, ks) in &over[a.source] {
            for &(ht, kt) in &over[a.target] {
                if k_leq(&kelts[ks], &kelts[kt])? {
                    if hs == ht && comma.is_identity(f) {
                        identities[hs] = arrows.len();
                    }
                    arrows.push(Arrow {
                        source: hs,
                        target: ht,
                        payload: a.payload.clone(),
                    });
                }
            }
        }
    }
    FinCategory::build(objects, arrows, identities, |g, f| compose_tuples(&g.payload, &f.payload))
}

pub type GrothCategory = FinCategory<GrothObject<HOperation>, GrothArrow<Vec<HOperation>>>;

/// The Grothendieck construction over the poset `𝒦₂(k)` of
/// `κ ↦ 𝓗_{ι(κ)}/T` with inclusions as transitions.
pub fn hat_grothendieck(comma: &CommaCategory, k: usize) -> Result<(PosetCategory, GrothCategory), Error> {
    let base = poset_category(k_enumerate(2, k, LabelConvention::Adopted))?;
    let fibers: Vec<CommaCategory> = base
        .objects()
        .iter()
        .map(|kappa| Ok(complexity_subcategory(comma, &k_iota(kappa)?)))
        .collect::<Result<_, Error>>()?;
    let g = grothendieck(&base, &fibers, |b| {
        let a = base.arrow(b);
        FinFunctor::by_payload(&fibers[a.source], &fibers[a.target], |o| Ok(o.clone()), |x| x.payload.clone())
    })?;
    Ok((base, g))
}

/// Checks that the Grothendieck construction and the category of pairs
/// are isomorphic under `(κ, o) ↦ (o, κ)`; returns the isomorphism.
pub fn grothendieck_isomorphism(
    base: &PosetCategory,
    groth: &GrothCategory,
    hat: &HatCategory,
) -> Result<FinFunctor, Error> {
    let f = FinFunctor::by_payload(
        groth,
        hat,
        |(b, o)| HatOperation::new(o.clone(), base.object(*b).clone()),
        |a| a.payload.1.clone(),
    )?;
    if !f.is_bijective(hat.object_count(), hat.arrow_count()) {
        return Err(Error::FunctorLaw(format!(
            "comparison functor is not bijective: {} objects and {} arrows onto {} and {}",
            groth.object_count(),
            groth.arrow_count(),
            hat.object_count(),
            hat.arrow_count()
        )));
    }
    Ok(f)
}

/// The functor deleting the white circle of the first vertex of a cell.
#[derive(Clone, Debug)]
pub struct Deletion {
    pub cell: KElt,
    pub reduced_cell: KElt,
    /// One-based label of the deleted white circle.
    pub label: u32,
    pub domain: CommaCategory,
    pub codomain: CommaCategory,
    pub functor: FinFunctor,
}

/// Deletes white `σ⁻¹(1)` from `𝓗_{(μ,σ)}/T` into `𝓗_{(μ′,σ′)}/T`, where
/// `(μ′,σ′)` drops that vertex. `comma_k` and `comma_k1` are `𝓗_k/T` and
/// `𝓗_{k-1}/T`.
pub fn deletion_functor(comma_k: &CommaCategory, comma_k1: &CommaCategory, cell: &KElt) -> Result<Deletion, Error> {
    let k = cell.arity();
    if k == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    if cell.labels().contains(&0) {
        return Err(Error::Invariant(format!("deletion needs all labels at least 1, got {cell}")));
    }
    let vertex = cell.perm().inverse().apply(0);
    let reduced_cell = cell.delete_vertex(vertex);
    let domain = complexity_subcategory(comma_k, cell);
    let codomain = complexity_subcategory(comma_k1, &reduced_cell);
    let label = vertex as u32 + 1;
    let functor = FinFunctor::by_payload(
        &domain,
        &codomain,
        |o| delete_white(o, label),
        |a| {
            let mut p = a.payload.clone();
            p.remove(vertex);
            p
        },
    )?;
    Ok(Deletion {
        cell: cell.clone(),
        reduced_cell,
        label,
        domain,
        codomain,
        functor,
    })
}

/// `F/d`: objects `(x, g: F(x) → d)`, arrows `h: x → x′` with
/// `g′ ∘ F(h) = g`. Payloads are indices into `c` and `d_cat`.
pub fn over_category<O1, A1, O2, A2>(
    c: &FinCategory<O1, A1>,
    d_cat: &FinCategory<O2, A2>,
    f: &FinFunctor,
    d: usize,
) -> Result<FinCategory<(usize, usize), usize>, Error>
where
    O1: Clone + Eq + Hash + Debug,
    A1: Clone + Eq + Hash + Debug,
    O2: Clone + Eq + Hash + Debug,
    A2: Clone + Eq + Hash + Debug,
{
    let objects: Vec<(usize, usize)> = (0..c.object_count())
        .flat_map(|x| d_cat.hom(f.on_objects[x], d).into_iter().map(move |g| (x, g)))
        .collect();
    let mut by_x: Vec<Vec<usize>> = vec![Vec::new(); c.object_count()];
    for (i, &(x, _)) in objects.iter().enumerate() {
        by_x[x].push(i);
    }
    let mut arrows = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (h, a) in c.arrows().iter().enumerate() {
        for &s in &by_x[a.source] {
            for &t in &by_x[a.target] {
                let (g, g2) = (objects[s].1, objects[t].1);
                if d_cat.compose(g2, f.on_arrows[h]) == Some(g) {
                    if s == t && c.is_identity(h) {
                        identities[s] = arrows.len();
                    }
                    arrows.push(Arrow {
                        source: s,
                        target: t,
                        payload: h,
                    });
                }
            }
        }
    }
    FinCategory::build(objects, arrows, identities, |g, f| {
        c.compose(g.payload, f.payload)
            .ok_or_else(|| Error::CategoryAxiom("slice arrows do not compose".into()))
    })
}

/// `F_d`: objects with `F(x) = d`, arrows mapped to the identity of `d`.
pub fn fiber_category<O1, A1, O2, A2>(
    c: &FinCategory<O1, A1>,
    d_cat: &FinCategory<O2, A2>,
    f: &FinFunctor,
    d: usize,
) -> Result<FinCategory<usize, usize>, Error>
where
    O1: Clone + Eq + Hash + Debug,
    A1: Clone + Eq + Hash + Debug,
    O2: Clone + Eq + Hash + Debug,
    A2: Clone + Eq + Hash + Debug,
{
    let objects: Vec<usize> = (0..c.object_count()).filter(|&x| f.on_objects[x] == d).collect();
    let pos: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let id_d = d_cat.identity(d);
    let mut arrows = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (h, a) in c.arrows().iter().enumerate() {
        if f.on_arrows[h] != id_d {
            continue;
        }
        if let (Some(&s), Some(&t)) = (pos.get(&a.source), pos.get(&a.target)) {
            if c.is_identity(h) {
                identities[s] = arrows.len();
            }
            arrows.push(Arrow {
                source: s,
                target: t,
                payload: h,
            });
        }
    }
    FinCategory::build(objects, arrows, identities, |g, f| {
        c.compose(g.payload, f.payload)
            .ok_or_else(|| Error::CategoryAxiom("fiber arrows do not compose".into()))
    })
}

/// The slice `F/d`, the fiber `F_d` and the inclusion `x ↦ (x, id_d)`.
pub struct SliceAndFiber {
    pub slice: FinCategory<(usize, usize), usize>,
    pub fiber: FinCategory<usize, usize>,
    pub inclusion: FinFunctor,
}

pub fn slice_and_fiber<O1, A1, O2, A2>(
    c: &FinCategory<O1, A1>,
    d_cat: &FinCategory<O2, A2>,
    f: &FinFunctor,
    d: usize,
) -> Result<SliceAndFiber, Error>
where
    O1: Clone + Eq + Hash + Debug,
    A1: Clone + Eq + Hash + Debug,
    O2: Clone + Eq + Hash + Debug,
    A2: Clone + Eq + Hash + Debug,
{
    let slice = over_category(c, d_cat, f, d)?;
    let fiber = fiber_category(c, d_cat, f, d)?;
    let id_d = d_cat.identity(d);
    let inclusion = FinFunctor::by_payload(&fiber, &slice, |&x| Ok((x, id_d)), |a| a.payload)?;
    Ok(SliceAndFiber {
        slice,
        fiber,
        inclusion,
    })
}

/// Certifies that `J: A → B` has a left adjoint by finding an initial
/// object in every comma category `b ↓ J`. Returns the object part of the
/// adjoint.
pub fn left_adjoint_certificate<O1, A1, O2, A2>(
    a_cat: &FinCategory<O1, A1>,
    b_cat: &FinCategory<O2, A2>,
    j: &FinFunctor,
) -> Result<Vec<usize>, Error>
where
    O1: Clone + Eq + Hash + Debug,
    A1: Clone + Eq + Hash + Debug,
    O2: Clone + Eq + Hash + Debug,
    A2: Clone + Eq + Hash + Debug,
{
    let mut adjoint = Vec::with_capacity(b_cat.object_count());
    for b in 0..b_cat.object_count() {
        let under = under_category(a_cat, b_cat, j, b)?;
        let Some(init) = under.find_initial() else {
            return Err(Error::Invariant(format!(
                "no initial object under {:?} ({} candidates)",
                b_cat.object(b),
                under.object_count()
            )));
        };
        adjoint.push(under.object(init).0);
    }
    Ok(adjoint)
}

/// `b ↓ J`: objects `(a, s: b → J(a))`, arrows `u: a → a′` with
/// `J(u) ∘ s = s′`.
pub fn under_category<O1, A1, O2, A2>(
    a_cat: &FinCategory<O1, A1>,
    b_cat: &FinCategory<O2, A2>,
    j: &FinFunctor,
    b: usize,
) -> Result<FinCategory<(usize, usize), usize>, Error>
where
    O1: Clone + Eq + Hash + Debug,
    A1: Clone + Eq + Hash + Debug,
    O2: Clone + Eq + Hash + Debug,
    A2: Clone + Eq + Hash + Debug,
{
    let objects: Vec<(usize, usize)> = (0..a_cat.object_count())
        .flat_map(|a| b_cat.hom(b, j.on_objects[a]).into_iter().map(move |s| (a, s)))
        .collect();
    let mut by_a: Vec<Vec<usize>> = vec![Vec::new(); a_cat.object_count()];
    for (i, &(a, _)) in objects.iter().enumerate() {
        by_a[a].push(i);
    }
    let mut arrows = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (u, ua) in a_cat.arrows().iter().enumerate() {
        for &x in &by_a[ua.source] {
            for &y in &by_a[ua.target] {
                if b_cat.compose(j.on_arrows[u], objects[x].1) == Some(objects[y].1) {
                    if x == y && a_cat.is_identity(u) {
                        identities[x] = arrows.len();
                    }
                    arrows.push(Arrow {
                        source: x,
                        target: y,
                        payload: u,
                    });
                }
            }
        }
    }
    FinCategory::build(objects, arrows, identities, |g, f| {
        a_cat
            .compose(g.payload, f.payload)
            .ok_or_else(|| Error::CategoryAxiom("under-category arrows do not compose".into()))
    })
}

/// The unique k = 0 object: `T` without circles.
pub fn bare_operation(t: &PlanarTree) -> HOperation {
    HOperation::new(crate::circled::CircledTree::bare(t)).expect("a bare tree is a valid nullary operation")
}

/// The identity tuple on an operation's inputs.
pub fn identity_arrow(o: &HOperation) -> Vec<HOperation> {
    identity_tuple(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::trees::corolla;

    fn pt(s: &str) -> PlanarTree {
        s.parse().unwrap()
    }

    #[test]
    fn comma_small_cases() {
        let c0 = build_comma(&pt("(| |)"), 0).unwrap();
        assert_eq!((c0.object_count(), c0.arrow_count()), (1, 1));
        assert_eq!(c0.object(0), &bare_operation(&pt("(| |)")));
        let c1 = build_comma(&PlanarTree::Leaf, 1).unwrap();
        assert_eq!((c1.object_count(), c1.arrow_count()), (1, 1));
        let c2 = build_comma(&PlanarTree::Leaf, 2).unwrap();
        assert_eq!(c2.object_count(), 4);
        c2.check_loop_free().unwrap();
        for (f, a) in c2.arrows().iter().enumerate() {
            if c2.is_identity(f) {
                continue;
            }
            let src = complexity(c2.object(a.source));
            let tgt = complexity(c2.object(a.target));
            assert_eq!(src.mu(0, 1), 1, "arrows start at stacked configurations");
            assert_eq!(tgt.mu(0, 1), 2, "arrows end at concentric configurations");
        }
        assert!(c2.arrow_count() > 4);
    }

    #[test]
    fn stacked_cell_on_leaf() {
        let c2 = build_comma(&PlanarTree::Leaf, 2).unwrap();
        let cell = KElt::new(vec![1], Perm::identity(2)).unwrap();
        let sub = complexity_subcategory(&c2, &cell);
        assert_eq!(sub.object_count(), 1);
        assert_eq!(sub.object(0).to_string(), "{w1 | / {w2 | / |}}");
        let left = KElt::new(vec![0], Perm::identity(2)).unwrap();
        assert!(complexity_subcategory(&c2, &left).is_empty());
    }

    #[test]
    fn kposet_shapes() {
        assert_eq!(poset_category(k_enumerate(2, 1, LabelConvention::Adopted)).unwrap().object_count(), 1);
        let k22 = poset_category(k_enumerate(2, 2, LabelConvention::Adopted)).unwrap();
        assert_eq!(k22.object_count(), 4);
        assert_eq!(k22.arrow_count(), 8);
        let k32 = poset_category(k_enumerate(3, 2, LabelConvention::Adopted)).unwrap();
        assert_eq!(k32.object_count(), 6);
    }

    #[test]
    fn deletion_on_leaf() {
        let c2 = build_comma(&PlanarTree::Leaf, 2).unwrap();
        let c1 = build_comma(&PlanarTree::Leaf, 1).unwrap();
        let cell = KElt::new(vec![1], Perm::identity(2)).unwrap();
        let d = deletion_functor(&c2, &c1, &cell).unwrap();
        assert_eq!(d.label, 1);
        assert_eq!(d.codomain.object(0).to_string(), "{w1 | / |}");
        let zero = KElt::new(vec![0], Perm::identity(2)).unwrap();
        assert!(deletion_functor(&c2, &c1, &zero).is_err());
    }

    #[test]
    fn identity_functor_slices() {
        let c = build_comma(&corolla(1), 1).unwrap();
        let id = FinFunctor::identity(&c);
        for d in 0..c.object_count() {
            let sf = slice_and_fiber(&c, &c, &id, d).unwrap();
            assert_eq!(sf.fiber.object_count(), 1);
            assert_eq!(sf.slice.object_count(), c.in_arrows(d).len());
            assert!(sf.slice.find_terminal().is_some());
            left_adjoint_certificate(&sf.fiber, &sf.slice, &sf.inclusion).unwrap();
        }
    }
}
