//! Property suites over finite corpora. Every suite returns a report with
//! the number of cases checked and counterexamples in codec form.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cattop::comma::{
    build_comma, build_hat, complexity_subcategory, deletion_functor, grothendieck_isomorphism, hat_grothendieck,
    left_adjoint_certificate, poset_category, slice_and_fiber,
};
use crate::cattop::{acyclicity_report, homology, nerve, HomologyResult};
use crate::circled::{enumerate_configs, CircledTree, Geometry};
use crate::error::Error;
use crate::kgraph::{k_compose, k_enumerate, k_leq, KElt, LabelConvention};
use crate::operad_h::{
    complexity, compose, compose_raw, compose_with, identity_op, normal_forms, reduce, sigma_act, HOperation,
    HatOperation, ReduceRules,
};
use crate::perm::Perm;
use crate::trees::{enumerate_trees, PlanarTree};

const MAX_STORED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failure_count: usize,
    /// The first few counterexamples.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(describe());
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    fn error(&mut self, e: &Error) {
        self.cases += 1;
        self.fail(e.to_string());
    }

    /// Adds the counts, failures and notes of `other`.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        let room = MAX_STORED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} cases, {} failures)",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.cases,
            self.failure_count
        )
    }
}

/// Memoized operation lists keyed by `(tree, arity)`.
#[derive(Default)]
pub struct OpPool {
    cache: HashMap<(PlanarTree, usize), Arc<Vec<HOperation>>>,
}

impl OpPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, t: &PlanarTree, k: usize) -> Arc<Vec<HOperation>> {
        self.cache
            .entry((t.clone(), k))
            .or_insert_with(|| {
                Arc::new(
                    enumerate_configs(t, k, None)
                        .into_iter()
                        .map(|c| HOperation::new(c).expect("enumerated configurations are valid"))
                        .collect(),
                )
            })
            .clone()
    }
}

/// Bounds of an exhaustive corpus: trees with at most `max_vertices`
/// vertices and `max_leaves` leaves, every operation of arity at most
/// `max_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusBounds {
    pub max_vertices: usize,
    pub max_leaves: usize,
    pub max_k: usize,
}

impl CorpusBounds {
    pub const EXHAUSTIVE: CorpusBounds = CorpusBounds {
        max_vertices: 2,
        max_leaves: 2,
        max_k: 2,
    };
    pub const RANDOM: CorpusBounds = CorpusBounds {
        max_vertices: 3,
        max_leaves: 3,
        max_k: 3,
    };

    pub fn trees(&self) -> Vec<PlanarTree> {
        enumerate_trees(self.max_vertices, self.max_leaves)
    }
}

/// All vectors of length `n` with non-negative entries summing to at most
/// `total`.
pub fn arity_vectors(n: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                let used: usize = v.iter().sum();
                (0..=total - used).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Calls `f` on every argument tuple for `o` whose arities sum to at most
/// `total`.
pub fn for_each_args(pool: &mut OpPool, o: &HOperation, total: usize, f: &mut dyn FnMut(&[HOperation])) {
    for ks in arity_vectors(o.arity(), total) {
        let lists: Vec<Arc<Vec<HOperation>>> = o.inputs().iter().zip(&ks).map(|(t, &k)| pool.get(t, k)).collect();
        let mut cur = Vec::with_capacity(lists.len());
        product(&lists, &mut cur, f);
    }
}

fn product(lists: &[Arc<Vec<HOperation>>], cur: &mut Vec<HOperation>, f: &mut dyn FnMut(&[HOperation])) {
    if cur.len() == lists.len() {
        f(cur);
        return;
    }
    for x in lists[cur.len()].iter() {
        cur.push(x.clone());
        product(lists, cur, f);
        cur.pop();
    }
}

/// Calls `f` on every operation of the corpus.
pub fn for_each_op(pool: &mut OpPool, bounds: CorpusBounds, f: &mut dyn FnMut(&mut OpPool, &HOperation)) {
    for t in bounds.trees() {
        for k in 0..=bounds.max_k {
            let ops = pool.get(&t, k);
            for o in ops.iter() {
                f(pool, o);
            }
        }
    }
}

fn show_args(args: &[HOperation]) -> String {
    let v: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    format!("[{}]", v.join(", "))
}

/// Splits `b` into consecutive blocks of the given sizes.
fn split_blocks<'a>(b: &'a [HOperation], sizes: &[usize]) -> Vec<&'a [HOperation]> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut off = 0;
    for &s in sizes {
        out.push(&b[off..off + s]);
        off += s;
    }
    out
}

fn check_units(rep: &mut CheckReport, o: &HOperation) {
    let left = compose(&identity_op(o.output()), std::slice::from_ref(o));
    rep.case(left.as_ref() == Ok(o), || format!("left unit fails for {o}: {left:?}"));
    let ids: Vec<HOperation> = o.inputs().iter().map(identity_op).collect();
    let right = compose(o, &ids);
    rep.case(right.as_ref() == Ok(o), || format!("right unit fails for {o}: {right:?}"));
}

fn check_assoc(rep: &mut CheckReport, o: &HOperation, a: &[HOperation], c: &HOperation, b: &[HOperation]) {
    let sizes: Vec<usize> = a.iter().map(HOperation::arity).collect();
    let lhs = compose(c, b);
    let inner: Result<Vec<HOperation>, Error> = a
        .iter()
        .zip(split_blocks(b, &sizes))
        .map(|(aj, bj)| compose(aj, bj))
        .collect();
    let rhs = inner.and_then(|inner| compose(o, &inner));
    rep.case(lhs.is_ok() && lhs == rhs, || {
        format!("associativity fails: o={o} a={} b={}: {lhs:?} vs {rhs:?}", show_args(a), show_args(b))
    });
}

fn check_equivariance(rep: &mut CheckReport, o: &HOperation, a: &[HOperation], c: &HOperation, sigma: &Perm, taus: &[Perm]) {
    let sizes: Vec<usize> = a.iter().map(HOperation::arity).collect();
    // (σ·o)(a_{σ⁻¹(1)}, …) = σ⟨sizes⟩ · o(a)
    let inv = sigma.inverse();
    let b: Vec<HOperation> = (0..a.len()).map(|m| a[inv.apply(m)].clone()).collect();
    let lhs = sigma_act(sigma, o).and_then(|so| compose(&so, &b));
    let rhs = sigma_act(&sigma.block(&sizes), c);
    rep.case(lhs.is_ok() && lhs == rhs, || {
        format!("block equivariance fails: o={o} a={} sigma={sigma}", show_args(a))
    });
    // o(τ₁·a₁, …) = (τ₁ ⊕ … ⊕ τ_k) · o(a)
    let acted: Result<Vec<HOperation>, Error> = a.iter().zip(taus).map(|(aj, t)| sigma_act(t, aj)).collect();
    let lhs = acted.and_then(|acted| compose(o, &acted));
    let rhs = sigma_act(&Perm::direct_sum(taus), c);
    rep.case(lhs.is_ok() && lhs == rhs, || {
        let ts: Vec<String> = taus.iter().map(|t| t.to_string()).collect();
        format!("inner equivariance fails: o={o} a={} taus={}", show_args(a), ts.join(","))
    });
}

fn check_complexity_bound(rep: &mut CheckReport, o: &HOperation, a: &[HOperation], c: &HOperation) {
    let cs: Vec<KElt> = a.iter().map(complexity).collect();
    let ok = k_compose(&complexity(o), &cs).and_then(|bound| k_leq(&complexity(c), &bound));
    rep.case(ok == Ok(true), || {
        format!("complexity inequality fails: o={o} a={} composite={c}", show_args(a))
    });
}

fn check_confluence(rep: &mut CheckReport, o: &HOperation, a: &[HOperation]) {
    match compose_raw(o, a) {
        Ok(raw) => {
            let nfs = normal_forms(&raw, ReduceRules::default());
            let canonical = reduce(&raw);
            rep.case(nfs.len() == 1 && nfs.contains(&canonical), || {
                let v: Vec<String> = nfs.iter().map(|x| x.to_string()).collect();
                format!("splice orders disagree on {raw}: {}", v.join(" | "))
            });
        }
        Err(e) => rep.error(&e),
    }
}

/// Which laws a corpus walk checks.
#[derive(Clone, Copy, Debug, Default)]
pub struct Laws {
    pub axioms: bool,
    pub inequality: bool,
    pub confluence: bool,
}

/// Reports of one corpus walk. `axioms_without_bare_edge` repeats the axiom
/// checks whose arguments never include the nullary operation on `|`.
#[derive(Clone, Debug)]
pub struct LawReports {
    pub axioms: CheckReport,
    pub axioms_without_bare_edge: CheckReport,
    pub inequality: CheckReport,
    pub confluence: CheckReport,
}

impl LawReports {
    fn new(kind: &str) -> Self {
        LawReports {
            axioms: CheckReport::new(&format!("operad axioms ({kind})")),
            axioms_without_bare_edge: CheckReport::new(&format!("operad axioms without the bare edge ({kind})")),
            inequality: CheckReport::new(&format!("complexity inequality ({kind})")),
            confluence: CheckReport::new(&format!("reduction confluence ({kind})")),
        }
    }

    fn absorb(mut self, other: LawReports) -> Self {
        self.axioms.absorb(other.axioms);
        self.axioms_without_bare_edge.absorb(other.axioms_without_bare_edge);
        self.inequality.absorb(other.inequality);
        self.confluence.absorb(other.confluence);
        self
    }

    /// Runs an axiom check, also counting it in the bare-edge-free tally
    /// unless `bare` is set.
    fn axiom(&mut self, bare: bool, check: impl FnOnce(&mut CheckReport)) {
        let mut tmp = CheckReport::new("");
        check(&mut tmp);
        if !bare {
            self.axioms_without_bare_edge.absorb(tmp.clone());
        }
        self.axioms.absorb(tmp);
    }
}

/// The nullary operation with output `|`.
fn is_bare_edge(o: &HOperation) -> bool {
    o.arity() == 0 && o.output() == &PlanarTree::Leaf
}

fn any_bare(ops: &[HOperation]) -> bool {
    ops.iter().any(is_bare_edge)
}

/// Exhaustive walk: every operation, every argument tuple and every second
/// level tuple, all operations involved staying within `bounds.max_k`.
pub fn exhaustive_laws(bounds: CorpusBounds, laws: Laws) -> LawReports {
    let mut pool = OpPool::new();
    let mut ops = Vec::new();
    for_each_op(&mut pool, bounds, &mut |_, o| ops.push(o.clone()));
    let max_k = bounds.max_k;
    ops.par_iter()
        .map_init(OpPool::new, |pool, o| {
            let mut rep = LawReports::new("exhaustive");
            if laws.axioms {
                rep.axiom(false, |r| check_units(r, o));
            }
            let mut pairs: Vec<(Vec<HOperation>, HOperation)> = Vec::new();
            for_each_args(pool, o, max_k, &mut |a| match compose(o, a) {
                Ok(c) => pairs.push((a.to_vec(), c)),
                Err(e) => rep.axiom(any_bare(a), |r| r.error(&e)),
            });
            for (a, c) in &pairs {
                if laws.inequality {
                    check_complexity_bound(&mut rep.inequality, o, a, c);
                }
                if laws.confluence {
                    check_confluence(&mut rep.confluence, o, a);
                }
                if laws.axioms {
                    let bare = any_bare(a);
                    for sigma in Perm::all(o.arity()) {
                        let taus: Vec<Perm> = a.iter().map(|aj| Perm::identity(aj.arity())).collect();
                        rep.axiom(bare, |r| check_equivariance(r, o, a, c, &sigma, &taus));
                    }
                    for taus in all_tuples(a.iter().map(|aj| Perm::all(aj.arity())).collect()) {
                        rep.axiom(bare, |r| check_equivariance(r, o, a, c, &Perm::identity(o.arity()), &taus));
                    }
                    for_each_args(pool, c, max_k, &mut |b| {
                        rep.axiom(bare || any_bare(b), |r| check_assoc(r, o, a, c, b))
                    });
                }
            }
            rep
        })
        .reduce(|| LawReports::new("exhaustive"), LawReports::absorb)
}

fn all_tuples<T: Clone>(lists: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|v: Vec<T>| {
                l.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

/// A randomly drawn composable triple with symmetries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomInstance {
    pub o: HOperation,
    pub a: Vec<HOperation>,
    pub b: Vec<HOperation>,
    pub sigma: Perm,
    pub taus: Vec<Perm>,
}

impl fmt::Display for RandomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let taus: Vec<String> = self.taus.iter().map(|t| t.to_string()).collect();
        write!(
            f,
            "o={} a={} b={} sigma={} taus={}",
            self.o,
            show_args(&self.a),
            show_args(&self.b),
            self.sigma,
            taus.join(",")
        )
    }
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::from_images(v).expect("shuffle is a bijection")
}

fn random_arities(rng: &mut ChaCha8Rng, n: usize, total: usize) -> Vec<usize> {
    let mut ks = vec![0; n];
    let budget = rng.gen_range(0..=total);
    for _ in 0..budget {
        if n > 0 {
            ks[rng.gen_range(0..n)] += 1;
        }
    }
    ks
}

fn random_args(rng: &mut ChaCha8Rng, pool: &mut OpPool, o: &HOperation, total: usize) -> Vec<HOperation> {
    let ks = random_arities(rng, o.arity(), total);
    o.inputs()
        .iter()
        .zip(ks)
        .map(|(t, k)| {
            let ops = pool.get(t, k);
            ops.choose(rng).expect("every tree carries operations of every arity").clone()
        })
        .collect()
}

/// Draws `n` instances over `bounds` from a seeded generator.
pub fn random_instances(seed: u64, n: usize, bounds: CorpusBounds, pool: &mut OpPool) -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trees = bounds.trees();
    (0..n)
        .map(|_| {
            let t = trees.choose(&mut rng).expect("nonempty corpus").clone();
            let k = rng.gen_range(0..=bounds.max_k);
            let o = pool.get(&t, k).choose(&mut rng).expect("operations exist").clone();
            let a = random_args(&mut rng, pool, &o, bounds.max_k);
            let c = compose(&o, &a).expect("colours match by construction");
            let b = random_args(&mut rng, pool, &c, bounds.max_k);
            let sigma = random_perm(&mut rng, o.arity());
            let taus = a.iter().map(|aj| random_perm(&mut rng, aj.arity())).collect();
            RandomInstance { o, a, b, sigma, taus }
        })
        .collect()
}

pub fn random_laws(instances: &[RandomInstance], laws: Laws) -> LawReports {
    let mut rep = LawReports::new("random");
    for inst in instances {
        let bare = any_bare(&inst.a) || any_bare(&inst.b);
        let c = match compose(&inst.o, &inst.a) {
            Ok(c) => c,
            Err(e) => {
                rep.axiom(bare, |r| r.error(&e));
                continue;
            }
        };
        if laws.axioms {
            rep.axiom(false, |r| check_units(r, &inst.o));
            rep.axiom(bare, |r| check_assoc(r, &inst.o, &inst.a, &c, &inst.b));
            rep.axiom(any_bare(&inst.a), |r| check_equivariance(r, &inst.o, &inst.a, &c, &inst.sigma, &inst.taus));
        }
        if laws.inequality {
            check_complexity_bound(&mut rep.inequality, &inst.o, &inst.a, &c);
            check_complexity_bound(&mut rep.inequality, &c, &inst.b, &compose(&c, &inst.b).expect("colours match"));
        }
        if laws.confluence {
            check_confluence(&mut rep.confluence, &inst.o, &inst.a);
            check_confluence(&mut rep.confluence, &c, &inst.b);
        }
    }
    rep
}

fn merge(name: &str, parts: &[CheckReport]) -> CheckReport {
    let mut r = CheckReport::new(name);
    for p in parts {
        r.cases += p.cases;
        r.failure_count += p.failure_count;
        for f in &p.failures {
            if r.failures.len() < MAX_STORED_FAILURES {
                r.failures.push(format!("[{}] {f}", p.name));
            }
        }
        r.notes.push(format!("{}: {} cases", p.name, p.cases));
        r.notes.extend(p.notes.iter().cloned());
    }
    r
}

/// Number of random instances drawn by the law suites.
pub const RANDOM_CASES: usize = 250;

/// Units, associativity and equivariance. A note records how many of the
/// failures survive once the nullary operation on `|` is left out of every
/// argument list.
pub fn operad_axioms(seed: u64) -> CheckReport {
    let laws = Laws {
        axioms: true,
        ..Laws::default()
    };
    let ex = exhaustive_laws(CorpusBounds::EXHAUSTIVE, laws);
    let mut pool = OpPool::new();
    let inst = random_instances(seed, RANDOM_CASES, CorpusBounds::RANDOM, &mut pool);
    let rnd = random_laws(&inst, laws);
    let mut r = merge("operad axioms", &[ex.axioms, rnd.axioms]);
    r.notes.push(format!("{} random instances, seed {seed}", inst.len()));
    let clean = merge("", &[ex.axioms_without_bare_edge, rnd.axioms_without_bare_edge]);
    r.notes.push(format!(
        "without the bare edge as an argument: {} cases, {} failures",
        clean.cases, clean.failure_count
    ));
    r.notes.extend(clean.failures.iter().take(3).map(|f| format!("remaining failure {f}")));
    r
}

pub fn complexity_inequality(seed: u64) -> CheckReport {
    let laws = Laws {
        inequality: true,
        ..Laws::default()
    };
    let ex = exhaustive_laws(CorpusBounds::EXHAUSTIVE, laws);
    let mut pool = OpPool::new();
    let inst = random_instances(seed, RANDOM_CASES, CorpusBounds::RANDOM, &mut pool);
    let rnd = random_laws(&inst, laws);
    merge("complexity inequality", &[ex.inequality, rnd.inequality])
}

pub fn reduction_confluence(seed: u64) -> CheckReport {
    let laws = Laws {
        confluence: true,
        ..Laws::default()
    };
    let ex = exhaustive_laws(CorpusBounds::EXHAUSTIVE, laws);
    let mut pool = OpPool::new();
    let inst = random_instances(seed, RANDOM_CASES, CorpusBounds::RANDOM, &mut pool);
    let rnd = random_laws(&inst, laws);
    merge("reduction confluence", &[ex.confluence, rnd.confluence])
}

/// The composite `2 ∘ (3, 2)` in the complete graph operad.
pub fn kgraph_figure() -> CheckReport {
    let mut r = CheckReport::new("complete-graph composition figure");
    let outer = KElt::new(vec![1], Perm::identity(2)).expect("valid element");
    let first = KElt::new(vec![0, 2, 2], Perm::identity(3)).expect("valid element");
    let second = KElt::new(vec![0], Perm::identity(2)).expect("valid element");
    match k_compose(&outer, &[first, second]) {
        Ok(c) => {
            let within_first = [c.mu(0, 1), c.mu(0, 2), c.mu(1, 2)];
            let within_second = c.mu(3, 4);
            let cross: Vec<u32> = (0..3).flat_map(|i| (3..5).map(move |j| (i, j))).map(|(i, j)| c.mu(i, j)).collect();
            r.case(within_first == [0, 2, 2], || format!("first block labels {within_first:?}"));
            r.case(within_second == 0, || format!("second block label {within_second}"));
            r.case(cross == vec![1; 6], || format!("cross labels {cross:?}"));
            r.case(c.perm().is_identity(), || format!("permutation {}", c.perm()));
            r.note(format!("composite {c}"));
        }
        Err(e) => r.error(&e),
    }
    r
}

/// Trees used for the contractibility checks.
pub const LEMMA_TREES: [&str; 5] = ["|", "(|)", "(| |)", "((|))", "((|) |)"];

fn parse_tree(s: &str) -> PlanarTree {
    s.parse().expect("built-in tree literal")
}

/// Every cell of `𝒦₃(2)` with `μ₁₂ ≥ 1` gives an acyclic subcategory.
pub fn lemma_acyclicity(trees: &[PlanarTree], k: usize, max_dim: usize) -> CheckReport {
    let mut r = CheckReport::new("contractibility (homological)");
    for t in trees {
        let comma = match build_comma(t, k) {
            Ok(c) => c,
            Err(e) => {
                r.error(&e);
                continue;
            }
        };
        for cell in k_enumerate(3, k, LabelConvention::Adopted) {
            if cell.labels().contains(&0) {
                continue;
            }
            let sub = complexity_subcategory(&comma, &cell);
            match acyclicity_report(&sub, max_dim) {
                Ok(rep) => {
                    let h = rep.homology.as_ref().map(HomologyResult::to_string).unwrap_or_default();
                    r.case(rep.is_acyclic(), || {
                        format!(
                            "T={t} cell {cell}: {} objects, {} components, {h}",
                            rep.objects, rep.components
                        )
                    });
                    r.note(format!("T={t} cell {cell}: {} objects {} arrows {h}", rep.objects, rep.arrows));
                }
                Err(e) => r.error(&e),
            }
        }
    }
    r
}

/// Linear trees admit no two whites side by side.
pub fn remark_linear(max_vertices: usize) -> CheckReport {
    let mut r = CheckReport::new("linear trees have empty left-of cells");
    let cells: Vec<KElt> = k_enumerate(3, 2, LabelConvention::Adopted)
        .into_iter()
        .filter(|c| c.mu(0, 1) == 0)
        .collect();
    let mut t = PlanarTree::Leaf;
    for _ in 0..=max_vertices {
        let configs = enumerate_configs(&t, 2, None);
        for cell in &cells {
            let hits = configs
                .iter()
                .filter(|c| {
                    let o = HOperation::new((*c).clone()).expect("enumerated configurations are valid");
                    k_leq(&complexity(&o), cell).unwrap_or(false)
                })
                .count();
            r.case(hits == 0, || format!("T={t} cell {cell}: {hits} objects"));
        }
        r.note(format!("T={t}: {} configurations", configs.len()));
        t = PlanarTree::Node(vec![t]);
    }
    r
}

/// Nerves of the posets `𝒦₂(2)` and `𝒦₃(2)`.
pub fn kposet_homology() -> CheckReport {
    let mut r = CheckReport::new("complete-graph poset homology");
    for (m, expect) in [(2u32, vec![1usize, 1]), (3, vec![1, 0, 1])] {
        let result = poset_category(k_enumerate(m, 2, LabelConvention::Adopted))
            .and_then(|p| nerve(&p, None))
            .and_then(|cx| homology(&cx));
        match result {
            Ok(h) => {
                let torsion_free = h.degrees.iter().all(|d| d.torsion.is_empty());
                let ok = torsion_free && h.complete && h.betti() == expect;
                r.case(ok, || format!("K_{m}(2): {h}, expected Betti {expect:?}"));
                r.note(format!("K_{m}(2): {h}"));
            }
            Err(e) => r.error(&e),
        }
    }
    r
}

/// The category of pairs has the homology of a circle.
pub fn hat_homology(trees: &[PlanarTree]) -> CheckReport {
    let mut r = CheckReport::new("pairs category homology");
    for t in trees {
        let result = build_comma(t, 2)
            .and_then(|c| build_hat(&c, 2))
            .and_then(|h| nerve(&h, None))
            .and_then(|cx| homology(&cx));
        match result {
            Ok(h) => {
                let circle = h.degrees.iter().enumerate().all(|(n, d)| if n <= 1 { d.is_z() } else { d.is_zero() });
                r.case(circle && h.complete, || format!("T={t}: {h}"));
                r.note(format!("T={t}: {h} chain ranks {:?}", h.chain_ranks));
            }
            Err(e) => r.error(&e),
        }
    }
    r
}

/// The category of pairs equals the Grothendieck construction.
pub fn grothendieck_check(trees: &[PlanarTree]) -> CheckReport {
    let mut r = CheckReport::new("Grothendieck isomorphism");
    for t in trees {
        let result = build_comma(t, 2).and_then(|c| {
            let hat = build_hat(&c, 2)?;
            let (base, g) = hat_grothendieck(&c, 2)?;
            grothendieck_isomorphism(&base, &g, &hat)?;
            // projection to the base poset is a functor
            let proj = crate::cattop::FinFunctor {
                on_objects: g.objects().iter().map(|o| o.0).collect(),
                on_arrows: g.arrows().iter().map(|a| a.payload.0).collect(),
            };
            proj.check(&g, &base)?;
            Ok((hat.object_count(), hat.arrow_count()))
        });
        match result {
            Ok((n, m)) => {
                r.case(true, String::new);
                r.note(format!("T={t}: {n} objects, {m} arrows"));
            }
            Err(e) => r.fail(format!("T={t}: {e}")),
        }
    }
    r
}

/// For each deletion functor and each object of its codomain: the fiber
/// has a terminal object, and the fiber inclusion into the slice has a left
/// adjoint. Slice acyclicity is reported as a note.
pub fn proof_structure(trees: &[PlanarTree]) -> CheckReport {
    let mut r = CheckReport::new("proof structure (fibers and adjoints)");
    let mut slices_acyclic = 0;
    let mut slices = 0;
    let (mut terminals, mut adjoints) = (0, 0);
    for t in trees {
        let (c2, c1) = match build_comma(t, 2).and_then(|c2| Ok((c2, build_comma(t, 1)?))) {
            Ok(x) => x,
            Err(e) => {
                r.error(&e);
                continue;
            }
        };
        for cell in k_enumerate(3, 2, LabelConvention::Adopted) {
            if cell.labels().contains(&0) {
                continue;
            }
            let d = match deletion_functor(&c2, &c1, &cell) {
                Ok(d) => d,
                Err(e) => {
                    r.fail(format!("T={t} cell {cell}: {e}"));
                    continue;
                }
            };
            for o in 0..d.codomain.object_count() {
                let target = d.codomain.object(o);
                let sf = match slice_and_fiber(&d.domain, &d.codomain, &d.functor, o) {
                    Ok(sf) => sf,
                    Err(e) => {
                        r.error(&e);
                        continue;
                    }
                };
                let terminal = sf.fiber.find_terminal().is_some();
                terminals += usize::from(terminal);
                r.case(terminal, || {
                    format!("T={t} cell {cell}: fiber over {target} has no terminal object")
                });
                let adj = left_adjoint_certificate(&sf.fiber, &sf.slice, &sf.inclusion);
                adjoints += usize::from(adj.is_ok());
                r.case(adj.is_ok(), || {
                    let detail = match &adj {
                        Err(Error::Invariant(_)) => {
                            let bad = (0..sf.slice.object_count())
                                .find(|&s| {
                                    crate::cattop::comma::under_category(&sf.fiber, &sf.slice, &sf.inclusion, s)
                                        .map(|u| u.find_initial().is_none())
                                        .unwrap_or(true)
                                })
                                .map(|s| {
                                    let (x, g) = *sf.slice.object(s);
                                    format!(
                                        "slice object {} with {:?} has no universal arrow into the fiber",
                                        d.domain.object(x),
                                        d.codomain.arrow(g).payload.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                                    )
                                })
                                .unwrap_or_default();
                            detail_or(bad)
                        }
                        Err(e) => e.to_string(),
                        Ok(_) => String::new(),
                    };
                    format!("T={t} cell {cell}: no left adjoint over {target}: {detail}")
                });
                slices += 1;
                if acyclicity_report(&sf.slice, 3).is_ok_and(|a| a.is_acyclic()) {
                    slices_acyclic += 1;
                }
            }
        }
    }
    r.note(format!("{terminals} of {slices} fibers have a terminal object"));
    r.note(format!("{adjoints} of {slices} fiber inclusions have a left adjoint"));
    r.note(format!("{slices_acyclic} of {slices} slices F/o' are acyclic through degree 3"));
    r
}

fn detail_or(s: String) -> String {
    if s.is_empty() {
        "no universal arrow".into()
    } else {
        s
    }
}

/// The two paths of the cowedge square agree: `m(m(o; f); g)` equals
/// `m(o; m(f_j; g_j))` for sampled unary `f` and `g`.
pub fn cowedge_squares(seed: u64, n: usize) -> CheckReport {
    let mut r = CheckReport::new("cowedge squares");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = OpPool::new();
    let trees = CorpusBounds::RANDOM.trees();
    while r.cases < n {
        let t = trees.choose(&mut rng).expect("nonempty corpus").clone();
        let k = rng.gen_range(1..=2);
        let o = pool.get(&t, k).choose(&mut rng).expect("operations exist").clone();
        let f: Vec<HOperation> = o
            .inputs()
            .iter()
            .map(|s| pool.get(s, 1).choose(&mut rng).expect("unary operations exist").clone())
            .collect();
        let g: Vec<HOperation> = f
            .iter()
            .map(|fj| pool.get(&fj.inputs()[0], 1).choose(&mut rng).expect("unary operations exist").clone())
            .collect();
        let left = compose(&o, &f).and_then(|of| compose(&of, &g));
        let fg: Result<Vec<HOperation>, Error> =
            f.iter().zip(&g).map(|(fj, gj)| compose(fj, std::slice::from_ref(gj))).collect();
        let right = fg.and_then(|fg| compose(&o, &fg));
        r.case(left.is_ok() && left == right, || {
            format!("square fails: o={o} f={} g={}", show_args(&f), show_args(&g))
        });
    }
    r
}

/// With R3 off, the left unit law breaks on the stacked example and on
/// every operation with at least two outermost white circles; with R3 on it
/// holds throughout.
pub fn r3_negative() -> CheckReport {
    let mut r = CheckReport::new("R3 is forced by the unit law");
    let no_r3 = ReduceRules {
        r3: false,
        ..ReduceRules::default()
    };
    let stacked: HOperation = "{w1 | / {w2 | / |}}".parse().expect("valid literal");
    let broken = compose_with(&identity_op(&PlanarTree::Leaf), std::slice::from_ref(&stacked), no_r3);
    r.case(broken.as_ref().is_ok_and(|c| c != stacked.config()), || {
        format!("unit law unexpectedly holds without R3 on {stacked}")
    });
    if let Ok(c) = &broken {
        r.note(format!("without R3: {c} instead of {stacked}"));
    }
    let mut pool = OpPool::new();
    let mut other_failures = 0;
    for_each_op(&mut pool, CorpusBounds::EXHAUSTIVE, &mut |_, o| {
        let id = identity_op(o.output());
        let got = compose_with(&id, std::slice::from_ref(o), no_r3);
        let fails = got.as_ref().map_or(true, |c| c != o.config());
        if outermost_whites(o.config()) >= 2 {
            r.case(fails, || format!("{o}: unit law holds without R3 despite two outermost whites"));
        } else if fails {
            other_failures += 1;
        }
        let with = compose(&id, std::slice::from_ref(o));
        r.case(with.as_ref() == Ok(o), || format!("{o}: unit law fails with R3"));
    });
    r.note(format!("{other_failures} operations with fewer outermost whites also break without R3"));
    r
}

fn outermost_whites(c: &CircledTree) -> usize {
    let geo = Geometry::of(c);
    (0..geo.len())
        .filter(|&i| geo.kinds[i].is_white())
        .filter(|&i| !(0..geo.len()).any(|j| geo.kinds[j].is_white() && geo.encloses(j, i)))
        .count()
}

/// Text round trips for trees, configurations, complete-graph elements and
/// pairs, plus byte-identical reruns of the seeded sampler.
pub fn codec_roundtrips(seed: u64) -> CheckReport {
    let mut r = CheckReport::new("codec round trips");
    for t in CorpusBounds::RANDOM.trees() {
        let back = t.to_string().parse::<PlanarTree>();
        r.case(back.as_ref() == Ok(&t), || format!("tree {t} reparses as {back:?}"));
    }
    let mut pool = OpPool::new();
    for_each_op(&mut pool, CorpusBounds::EXHAUSTIVE, &mut |_, o| {
        let text = o.to_string();
        let back = text.parse::<CircledTree>();
        r.case(back.as_ref() == Ok(o.config()), || format!("configuration {text} reparses as {back:?}"));
    });
    for m in 1..=3u32 {
        for k in 0..=3 {
            for e in k_enumerate(m, k, LabelConvention::Adopted) {
                let back = e.to_string().parse::<KElt>();
                r.case(back.as_ref() == Ok(&e), || format!("element {e} reparses as {back:?}"));
            }
        }
    }
    let hats: Vec<HatOperation> = ["|", "(|)"]
        .iter()
        .flat_map(|t| {
            let c = build_comma(&parse_tree(t), 2).expect("small comma category");
            build_hat(&c, 2).expect("small pairs category").objects().to_vec()
        })
        .collect();
    for h in &hats {
        let back = h.to_string().parse::<HatOperation>();
        r.case(back.as_ref() == Ok(h), || format!("pair {h} reparses as {back:?}"));
    }
    let transcript = |s: u64| -> String {
        let mut pool = OpPool::new();
        random_instances(s, 50, CorpusBounds::RANDOM, &mut pool)
            .iter()
            .map(|i| format!("{i}\n"))
            .collect()
    };
    let (first, second) = (transcript(seed), transcript(seed));
    r.case(first.as_bytes() == second.as_bytes(), || "seeded sampler is not deterministic".into());
    for inst in random_instances(seed, 50, CorpusBounds::RANDOM, &mut pool) {
        for o in std::iter::once(&inst.o).chain(&inst.a).chain(&inst.b) {
            let back = o.to_string().parse::<HOperation>();
            r.case(back.as_ref() == Ok(o), || format!("operation {o} reparses as {back:?}"));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_vectors_count() {
        assert_eq!(arity_vectors(0, 2), vec![Vec::<usize>::new()]);
        assert_eq!(arity_vectors(2, 2).len(), 6);
        assert!(arity_vectors(3, 1).iter().all(|v| v.iter().sum::<usize>() <= 1));
    }

    #[test]
    fn figure_passes() {
        assert!(kgraph_figure().passed());
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut p = OpPool::new();
        let a = random_instances(3, 10, CorpusBounds::RANDOM, &mut p);
        let b = random_instances(3, 10, CorpusBounds::RANDOM, &mut p);
        assert_eq!(a, b);
    }

    #[test]
    fn report_counts_failures() {
        let mut r = CheckReport::new("x");
        r.case(true, String::new);
        r.case(false, || "bad".into());
        assert_eq!((r.cases, r.failure_count), (2, 1));
        assert!(r.to_string().contains("FAIL"));
    }
}
