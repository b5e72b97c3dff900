//! Finite categories with an explicit composition table, functors between
//! them, and the constructions used on top of them.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow<A> {
    pub source: usize,
    pub target: usize,
    pub payload: A,
}

/// A finite category. Objects and arrows carry payloads; `(source, target,
/// payload)` identifies an arrow.
#[derive(Clone, Debug)]
pub struct FinCategory<O, A> {
    objects: Vec<O>,
    arrows: Vec<Arrow<A>>,
    identities: Vec<usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
    comp: HashMap<(usize, usize), usize>,
    object_index: HashMap<O, usize>,
    arrow_index: HashMap<(usize, usize, A), usize>,
}

impl<O, A> FinCategory<O, A>
where
    O: Clone + Eq + Hash + Debug,
    A: Clone + Eq + Hash + Debug,
{
    /// Builds the composition table from `compose(g, f) = g ∘ f` and checks
    /// closure, unit laws and associativity.
    pub fn build(
        objects: Vec<O>,
        arrows: Vec<Arrow<A>>,
        identities: Vec<usize>,
        compose: impl Fn(&Arrow<A>, &Arrow<A>) -> Result<A, Error>,
    ) -> Result<Self, Error> {
        let mut c = Self::skeleton(objects, arrows, identities)?;
        for b in 0..c.objects.len() {
            for &f in &c.in_arrows[b] {
                for &g in &c.out_arrows[b] {
                    let payload = compose(&c.arrows[g], &c.arrows[f])?;
                    let key = (c.arrows[f].source, c.arrows[g].target, payload);
                    let Some(&h) = c.arrow_index.get(&key) else {
                        return Err(Error::CategoryAxiom(format!(
                            "composite of {:?} after {:?} is not an arrow: {:?}",
                            c.arrows[g].payload, c.arrows[f].payload, key.2
                        )));
                    };
                    c.comp.insert((g, f), h);
                }
            }
        }
        c.check_axioms()?;
        Ok(c)
    }

    fn skeleton(objects: Vec<O>, arrows: Vec<Arrow<A>>, identities: Vec<usize>) -> Result<Self, Error> {
        let n = objects.len();
        if identities.len() != n {
            return Err(Error::CategoryAxiom("one identity per object required".into()));
        }
        let mut object_index = HashMap::with_capacity(n);
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::CategoryAxiom(format!("duplicate object {o:?}")));
            }
        }
        let mut out_arrows = vec![Vec::new(); n];
        let mut in_arrows = vec![Vec::new(); n];
        let mut arrow_index = HashMap::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= n || a.target >= n {
                return Err(Error::CategoryAxiom(format!("arrow {i} has an endpoint out of range")));
            }
            out_arrows[a.source].push(i);
            in_arrows[a.target].push(i);
            if arrow_index.insert((a.source, a.target, a.payload.clone()), i).is_some() {
                return Err(Error::CategoryAxiom(format!("duplicate arrow {:?}", a.payload)));
            }
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= arrows.len() || arrows[id].source != o || arrows[id].target != o {
                return Err(Error::CategoryAxiom(format!("identity of object {o} is not an endomorphism")));
            }
        }
        Ok(FinCategory {
            objects,
            arrows,
            identities,
            out_arrows,
            in_arrows,
            comp: HashMap::new(),
            object_index,
            arrow_index,
        })
    }

    /// A thin category: one arrow `x → y` iff `leq(x, y)`.
    pub fn thin(objects: Vec<O>, leq: impl Fn(&O, &O) -> bool) -> Result<FinCategory<O, ()>, Error> {
        let n = objects.len();
        let mut arrows = Vec::new();
        let mut identities = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if leq(&objects[i], &objects[j]) {
                    if i == j {
                        identities[i] = arrows.len();
                    }
                    arrows.push(Arrow {
                        source: i,
                        target: j,
                        payload: (),
                    });
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| !leq(&objects[i], &objects[i])) {
            return Err(Error::CategoryAxiom(format!("order is not reflexive at {:?}", objects[i])));
        }
        FinCategory::build(objects, arrows, identities, |_, _| Ok(()))
    }

    pub fn check_axioms(&self) -> Result<(), Error> {
        for (o, &id) in self.identities.iter().enumerate() {
            for &f in &self.out_arrows[o] {
                if self.compose(f, id) != Some(f) {
                    return Err(Error::CategoryAxiom(format!("right unit fails at arrow {f}")));
                }
            }
            for &f in &self.in_arrows[o] {
                if self.compose(id, f) != Some(f) {
                    return Err(Error::CategoryAxiom(format!("left unit fails at arrow {f}")));
                }
            }
        }
        for (f, af) in self.arrows.iter().enumerate() {
            for &g in &self.out_arrows[af.target] {
                let gf = self.compose(g, f).expect("composable");
                for &h in &self.out_arrows[self.arrows[g].target] {
                    let hg = self.compose(h, g).expect("composable");
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(Error::CategoryAxiom(format!("associativity fails at ({h}, {g}, {f})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[O] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow<A>] {
        &self.arrows
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, i: usize) -> &O {
        &self.objects[i]
    }

    pub fn arrow(&self, f: usize) -> &Arrow<A> {
        &self.arrows[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].source] == f
    }

    pub fn out_arrows(&self, o: usize) -> &[usize] {
        &self.out_arrows[o]
    }

    pub fn in_arrows(&self, o: usize) -> &[usize] {
        &self.in_arrows[o]
    }

    /// `g ∘ f`, when `f` ends where `g` starts.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_arrows[a].iter().copied().filter(|&f| self.arrows[f].target == b).collect()
    }

    pub fn find_object(&self, o: &O) -> Option<usize> {
        self.object_index.get(o).copied()
    }

    pub fn find_arrow(&self, source: usize, target: usize, payload: &A) -> Option<usize> {
        self.arrow_index.get(&(source, target, payload.clone())).copied()
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> usize {
        let n = self.objects.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let nbrs = self.out_arrows[x]
                    .iter()
                    .map(|&f| self.arrows[f].target)
                    .chain(self.in_arrows[x].iter().map(|&f| self.arrows[f].source));
                for y in nbrs {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    /// No nonidentity endomorphisms and no cycles of nonidentity arrows.
    pub fn check_loop_free(&self) -> Result<(), Error> {
        let n = self.objects.len();
        for (f, a) in self.arrows.iter().enumerate() {
            if a.source == a.target && !self.is_identity(f) {
                return Err(Error::NotLoopFree(format!(
                    "nonidentity endomorphism {:?} of {:?}",
                    a.payload, self.objects[a.source]
                )));
            }
        }
        // Kahn's algorithm on the graph of nonidentity arrows
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for a in &self.arrows {
            if a.source != a.target && succ[a.source].insert(a.target) {
                indeg[a.target] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut done = 0;
        while let Some(x) = queue.pop_front() {
            done += 1;
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if done != n {
            return Err(Error::NotLoopFree(format!("{} objects lie on cycles", n - done)));
        }
        Ok(())
    }

    /// Objects receiving exactly one arrow from every object.
    pub fn find_terminal(&self) -> Option<usize> {
        (0..self.objects.len()).find(|&t| {
            let mut count = vec![0usize; self.objects.len()];
            for &f in &self.in_arrows[t] {
                count[self.arrows[f].source] += 1;
            }
            count.iter().all(|&c| c == 1)
        })
    }

    /// Objects with exactly one arrow to every object.
    pub fn find_initial(&self) -> Option<usize> {
        (0..self.objects.len()).find(|&s| {
            let mut count = vec![0usize; self.objects.len()];
            for &f in &self.out_arrows[s] {
                count[self.arrows[f].target] += 1;
            }
            count.iter().all(|&c| c == 1)
        })
    }

    /// The full subcategory on the objects satisfying `pred`, with the
    /// object indices it keeps.
    pub fn full_subcategory(&self, pred: impl Fn(&O) -> bool) -> (Self, Vec<usize>) {
        let keep: Vec<usize> = (0..self.objects.len()).filter(|&i| pred(&self.objects[i])).collect();
        let mut new_obj = vec![usize::MAX; self.objects.len()];
        for (n, &o) in keep.iter().enumerate() {
            new_obj[o] = n;
        }
        let mut new_arrow = vec![usize::MAX; self.arrows.len()];
        let mut arrows = Vec::new();
        for (f, a) in self.arrows.iter().enumerate() {
            if new_obj[a.source] != usize::MAX && new_obj[a.target] != usize::MAX {
                new_arrow[f] = arrows.len();
                arrows.push(Arrow {
                    source: new_obj[a.source],
                    target: new_obj[a.target],
                    payload: a.payload.clone(),
                });
            }
        }
        let identities = keep.iter().map(|&o| new_arrow[self.identities[o]]).collect();
        let objects = keep.iter().map(|&o| self.objects[o].clone()).collect();
        let mut sub = Self::skeleton(objects, arrows, identities).expect("restriction of a valid category");
        for (&(g, f), &h) in &self.comp {
            if new_arrow[g] != usize::MAX && new_arrow[f] != usize::MAX {
                sub.comp.insert((new_arrow[g], new_arrow[f]), new_arrow[h]);
            }
        }
        (sub, keep)
    }
}

/// A functor given by its action on object and arrow indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl FinFunctor {
    pub fn identity<O, A>(c: &FinCategory<O, A>) -> Self
    where
        O: Clone + Eq + Hash + Debug,
        A: Clone + Eq + Hash + Debug,
    {
        FinFunctor {
            on_objects: (0..c.object_count()).collect(),
            on_arrows: (0..c.arrow_count()).collect(),
        }
    }

    /// Builds a functor from payload maps, looking images up in `tgt`.
    pub fn by_payload<O1, A1, O2, A2>(
        src: &FinCategory<O1, A1>,
        tgt: &FinCategory<O2, A2>,
        obj: impl Fn(&O1) -> Result<O2, Error>,
        arr: impl Fn(&Arrow<A1>) -> A2,
    ) -> Result<Self, Error>
    where
        O1: Clone + Eq + Hash + Debug,
        A1: Clone + Eq + Hash + Debug,
        O2: Clone + Eq + Hash + Debug,
        A2: Clone + Eq + Hash + Debug,
    {
        let mut on_objects = Vec::with_capacity(src.object_count());
        for o in src.objects() {
            let image = obj(o)?;
            let i = tgt
                .find_object(&image)
                .ok_or_else(|| Error::FunctorLaw(format!("image {image:?} of {o:?} is not an object")))?;
            on_objects.push(i);
        }
        let mut on_arrows = Vec::with_capacity(src.arrow_count());
        for a in src.arrows() {
            let p = arr(a);
            let i = tgt
                .find_arrow(on_objects[a.source], on_objects[a.target], &p)
                .ok_or_else(|| Error::FunctorLaw(format!("image {p:?} of {:?} is not an arrow", a.payload)))?;
            on_arrows.push(i);
        }
        let f = FinFunctor { on_objects, on_arrows };
        f.check(src, tgt)?;
        Ok(f)
    }

    /// Endpoints, identities and composition are preserved.
    pub fn check<O1, A1, O2, A2>(&self, src: &FinCategory<O1, A1>, tgt: &FinCategory<O2, A2>) -> Result<(), Error>
    where
        O1: Clone + Eq + Hash + Debug,
        A1: Clone + Eq + Hash + Debug,
        O2: Clone + Eq + Hash + Debug,
        A2: Clone + Eq + Hash + Debug,
    {
        if self.on_objects.len() != src.object_count() || self.on_arrows.len() != src.arrow_count() {
            return Err(Error::FunctorLaw("maps do not cover the source".into()));
        }
        for (f, a) in src.arrows().iter().enumerate() {
            let b = tgt.arrow(self.on_arrows[f]);
            if b.source != self.on_objects[a.source] || b.target != self.on_objects[a.target] {
                return Err(Error::FunctorLaw(format!("endpoints of {:?} not preserved", a.payload)));
            }
        }
        for o in 0..src.object_count() {
            if self.on_arrows[src.identity(o)] != tgt.identity(self.on_objects[o]) {
                return Err(Error::FunctorLaw(format!("identity of {:?} not preserved", src.object(o))));
            }
        }
        for (f, a) in src.arrows().iter().enumerate() {
            for &g in src.out_arrows(a.target) {
                let gf = src.compose(g, f).expect("composable");
                if tgt.compose(self.on_arrows[g], self.on_arrows[f]) != Some(self.on_arrows[gf]) {
                    return Err(Error::FunctorLaw(format!(
                        "composition of {:?} then {:?} not preserved",
                        a.payload,
                        src.arrow(g).payload
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &FinFunctor) -> FinFunctor {
        FinFunctor {
            on_objects: other.on_objects.iter().map(|&o| self.on_objects[o]).collect(),
            on_arrows: other.on_arrows.iter().map(|&f| self.on_arrows[f]).collect(),
        }
    }

    pub fn is_bijective(&self, tgt_objects: usize, tgt_arrows: usize) -> bool {
        fn bij(v: &[usize], n: usize) -> bool {
            v.len() == n && v.iter().collect::<HashSet<_>>().len() == n
        }
        bij(&self.on_objects, tgt_objects) && bij(&self.on_arrows, tgt_arrows)
    }
}

/// Objects of a Grothendieck construction: a base object and a fiber object.
pub type GrothObject<O> = (usize, O);
/// Arrows of a Grothendieck construction: a base arrow and a fiber arrow
/// from the transported source.
pub type GrothArrow<A> = (usize, A);

/// The Grothendieck construction of a functor from `base` to categories.
/// `transition(b)` is the functor attached to base arrow `b`.
pub fn grothendieck<BO, BA, O, A>(
    base: &FinCategory<BO, BA>,
    fibers: &[FinCategory<O, A>],
    transition: impl Fn(usize) -> Result<FinFunctor, Error>,
) -> Result<FinCategory<GrothObject<O>, GrothArrow<A>>, Error>
where
    BO: Clone + Eq + Hash + Debug,
    BA: Clone + Eq + Hash + Debug,
    O: Clone + Eq + Hash + Debug,
    A: Clone + Eq + Hash + Debug,
{
    if fibers.len() != base.object_count() {
        return Err(Error::FunctorLaw("one fiber per base object required".into()));
    }
    let transitions: Vec<FinFunctor> = (0..base.arrow_count()).map(&transition).collect::<Result<_, _>>()?;
    for (b, a) in base.arrows().iter().enumerate() {
        transitions[b].check(&fibers[a.source], &fibers[a.target])?;
        if base.is_identity(b) && transitions[b] != FinFunctor::identity(&fibers[a.source]) {
            return Err(Error::FunctorLaw(format!("identity base arrow {b} acts nontrivially")));
        }
        for &c in base.out_arrows(a.target) {
            let cb = base.compose(c, b).expect("composable");
            if transitions[cb] != transitions[c].after(&transitions[b]) {
                return Err(Error::FunctorLaw(format!("transitions of base arrows {c} and {b} do not compose")));
            }
        }
    }

    let mut objects = Vec::new();
    let mut offset = Vec::with_capacity(fibers.len());
    for (b, fib) in fibers.iter().enumerate() {
        offset.push(objects.len());
        objects.extend(fib.objects().iter().map(|o| (b, o.clone())));
    }
    let mut arrows = Vec::new();
    let mut identities = vec![0; objects.len()];
    for (beta, ba) in base.arrows().iter().enumerate() {
        let t = &transitions[beta];
        let (src_fib, tgt_fib) = (&fibers[ba.source], &fibers[ba.target]);
        for x in 0..src_fib.object_count() {
            for &f in tgt_fib.out_arrows(t.on_objects[x]) {
                let a = tgt_fib.arrow(f);
                if base.is_identity(beta) && a.source == a.target && tgt_fib.is_identity(f) {
                    identities[offset[ba.source] + x] = arrows.len();
                }
                arrows.push(Arrow {
                    source: offset[ba.source] + x,
                    target: offset[ba.target] + a.target,
                    payload: (beta, a.payload.clone()),
                });
            }
        }
    }
    let base_obj = |global: usize| offset.iter().rposition(|&o| o <= global).expect("offsets start at 0");
    let local = |global: usize| global - offset[base_obj(global)];
    FinCategory::build(objects, arrows, identities, |g, f| {
        // f = (α, u: t_α(x) → y), g = (β, v: t_β(y) → z); g∘f = (βα, v ∘ t_β(u))
        let (alpha, beta) = (f.payload.0, g.payload.0);
        let ba = base.compose(beta, alpha).expect("base arrows compose");
        let mid = base.arrow(beta).source;
        let fib_mid = &fibers[mid];
        let fib_end = &fibers[base.arrow(beta).target];
        let u_src = transitions[alpha].on_objects[local(f.source)];
        let u = fib_mid
            .find_arrow(u_src, local(f.target), &f.payload.1)
            .ok_or_else(|| Error::CategoryAxiom("fiber arrow lookup failed".into()))?;
        let v_src = transitions[beta].on_objects[local(g.source)];
        let v = fib_end
            .find_arrow(v_src, local(g.target), &g.payload.1)
            .ok_or_else(|| Error::CategoryAxiom("fiber arrow lookup failed".into()))?;
        let vu = fib_end.compose(v, transitions[beta].on_arrows[u]).expect("composable in fiber");
        Ok((ba, fib_end.arrow(vu).payload.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinCategory<usize, ()> {
        FinCategory::<usize, ()>::thin((0..n).collect(), |a, b| a <= b).unwrap()
    }

    #[test]
    fn thin_chain() {
        let c = chain(3);
        assert_eq!(c.object_count(), 3);
        assert_eq!(c.arrow_count(), 6);
        assert_eq!(c.find_initial(), Some(0));
        assert_eq!(c.find_terminal(), Some(2));
        c.check_loop_free().unwrap();
        assert_eq!(c.components(), 1);
    }

    #[test]
    fn empty_category_has_no_terminal() {
        let c = FinCategory::<usize, ()>::thin(vec![], |_, _| true).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.find_terminal(), None);
        assert_eq!(c.components(), 0);
    }

    #[test]
    fn non_loop_free_detected() {
        let c = FinCategory::<usize, ()>::thin(vec![0, 1], |_, _| true).unwrap();
        assert!(matches!(c.check_loop_free(), Err(Error::NotLoopFree(_))));
    }

    #[test]
    fn non_closed_composition_is_rejected() {
        // a -> b -> c without a -> c
        let arrows = vec![
            Arrow { source: 0, target: 0, payload: "1a" },
            Arrow { source: 1, target: 1, payload: "1b" },
            Arrow { source: 2, target: 2, payload: "1c" },
            Arrow { source: 0, target: 1, payload: "f" },
            Arrow { source: 1, target: 2, payload: "g" },
        ];
        let r = FinCategory::build(vec!['a', 'b', 'c'], arrows, vec![0, 1, 2], |g, f| {
            Ok(match (g.payload, f.payload) {
                (x, "1a" | "1b" | "1c") => x,
                ("1a" | "1b" | "1c", y) => y,
                _ => "gf",
            })
        });
        assert!(matches!(r, Err(Error::CategoryAxiom(_))));
    }

    #[test]
    fn full_subcategory_keeps_everything_for_true() {
        let c = chain(4);
        let (s, keep) = c.full_subcategory(|_| true);
        assert_eq!(keep, vec![0, 1, 2, 3]);
        assert_eq!(s.arrow_count(), c.arrow_count());
        s.check_axioms().unwrap();
        let (odd, _) = c.full_subcategory(|x| x % 2 == 1);
        assert_eq!(odd.arrow_count(), 3);
    }

    #[test]
    fn grothendieck_of_terminal_fibers_is_base() {
        let base = chain(2);
        let point = FinCategory::<(), ()>::thin(vec![()], |_, _| true).unwrap();
        let fibers = vec![point.clone(), point.clone()];
        let g = grothendieck(&base, &fibers, |_| Ok(FinFunctor::identity(&point))).unwrap();
        assert_eq!(g.object_count(), 2);
        assert_eq!(g.arrow_count(), 3);
        let proj = FinFunctor {
            on_objects: g.objects().iter().map(|o| o.0).collect(),
            on_arrows: g.arrows().iter().map(|a| a.payload.0).collect(),
        };
        proj.check(&g, &base).unwrap();
    }

    #[test]
    fn functor_checks_composition() {
        let c = chain(3);
        FinFunctor::identity(&c).check(&c, &c).unwrap();
        let collapse = FinFunctor::by_payload(&c, &chain(1), |_| Ok(0), |_| ()).unwrap();
        assert_eq!(collapse.on_objects, vec![0, 0, 0]);
        let bad = FinFunctor {
            on_objects: vec![0, 1, 2],
            on_arrows: vec![0; 6],
        };
        assert!(bad.check(&c, &c).is_err());
    }
}
