use std::collections::HashMap;
use std::sync::OnceLock;

use hyperop_core::circled::{enumerate_configs, validate_config, CircledTree};
use hyperop_core::operad_h::{complexity, compose, identity_op, is_reduced, reduce, sigma_act, HOperation};
use hyperop_core::perm::Perm;
use hyperop_core::trees::{corolla, enumerate_trees, PlanarTree};
use hyperop_core::verify::{CorpusBounds, OpPool};
use proptest::prelude::*;

/// Number of planar trees with exactly `v` vertices and `l` leaves, by
/// counting sequences of subtrees.
struct Counter {
    memo: HashMap<(usize, usize), u64>,
}

impl Counter {
    fn trees(&mut self, v: usize, l: usize) -> u64 {
        let leaf = u64::from(v == 0 && l == 1);
        if v == 0 {
            return leaf;
        }
        leaf + self.seqs(v - 1, l)
    }

    fn seqs(&mut self, v: usize, l: usize) -> u64 {
        if let Some(&n) = self.memo.get(&(v, l)) {
            return n;
        }
        // empty sequence, or a first tree followed by a sequence
        let mut n = u64::from(v == 0 && l == 0);
        for v1 in 0..=v {
            for l1 in 0..=l {
                if (v1, l1) == (0, 0) {
                    continue;
                }
                let first = self.trees(v1, l1);
                if first > 0 {
                    n += first * self.seqs(v - v1, l - l1);
                }
            }
        }
        self.memo.insert((v, l), n);
        n
    }
}

#[test]
fn tree_counts_match_sequence_count() {
    let mut c = Counter { memo: HashMap::new() };
    for v in 0..=4 {
        for l in 0..=4 {
            let total: u64 = (0..=v).flat_map(|a| (0..=l).map(move |b| (a, b))).map(|(a, b)| c.trees(a, b)).sum();
            assert_eq!(enumerate_trees(v, l).len() as u64, total, "v={v} l={l}");
        }
    }
    assert_eq!(enumerate_trees(1, 2).len(), 4);
}

#[test]
fn small_configuration_counts() {
    assert_eq!(enumerate_configs(&PlanarTree::Leaf, 2, None).len(), 4);
    assert_eq!(enumerate_configs(&PlanarTree::Leaf, 0, None).len(), 1);
    // identity on a corolla is its only unary configuration with a corolla input
    let c2 = corolla(2);
    let unary: Vec<CircledTree> = enumerate_configs(&c2, 1, Some(std::slice::from_ref(&c2)));
    assert_eq!(unary, vec![identity_op(&c2).config().clone()]);
}

fn pool() -> &'static Vec<HOperation> {
    static OPS: OnceLock<Vec<HOperation>> = OnceLock::new();
    OPS.get_or_init(|| {
        let mut p = OpPool::new();
        let b = CorpusBounds::RANDOM;
        b.trees()
            .iter()
            .flat_map(|t| (0..=b.max_k).flat_map(|k| p.get(t, k).to_vec()).collect::<Vec<_>>())
            .collect()
    })
}

fn op() -> impl Strategy<Value = HOperation> {
    prop::sample::select(pool().clone())
}

fn tree() -> impl Strategy<Value = PlanarTree> {
    let leaf = Just(PlanarTree::Leaf);
    leaf.prop_recursive(4, 24, 3, |inner| prop::collection::vec(inner, 0..=3).prop_map(PlanarTree::Node))
}

proptest! {
    #[test]
    fn tree_text_round_trips(t in tree()) {
        prop_assert_eq!(t.to_string().parse::<PlanarTree>().unwrap(), t);
    }

    #[test]
    fn operations_are_valid_reduced_and_round_trip(o in op()) {
        prop_assert!(validate_config(o.config()).is_valid());
        prop_assert!(is_reduced(o.config()));
        prop_assert_eq!(reduce(o.config()), o.config().clone());
        prop_assert_eq!(o.to_string().parse::<HOperation>().unwrap(), o);
    }

    #[test]
    fn units(o in op()) {
        prop_assert_eq!(&compose(&identity_op(o.output()), std::slice::from_ref(&o)).unwrap(), &o);
        let ids: Vec<HOperation> = o.inputs().iter().map(identity_op).collect();
        prop_assert_eq!(&compose(&o, &ids).unwrap(), &o);
    }

    #[test]
    fn symmetric_action(o in op(), s in any::<prop::sample::Index>(), t in any::<prop::sample::Index>()) {
        let perms = Perm::all(o.arity());
        let (s, t) = (s.get(&perms), t.get(&perms));
        let twice = sigma_act(s, &sigma_act(t, &o).unwrap()).unwrap();
        prop_assert_eq!(&twice, &sigma_act(&s.after(t), &o).unwrap());
        prop_assert_eq!(complexity(&sigma_act(s, &o).unwrap()), complexity(&o).act(s).unwrap());
        let acted = sigma_act(s, &o).unwrap();
        prop_assert_eq!(acted.output(), o.output());
    }

    #[test]
    fn unary_composites_keep_profiles(o in op(), pick in any::<prop::sample::Index>()) {
        let mut p = OpPool::new();
        let args: Vec<HOperation> = o.inputs().iter().map(|t| {
            let ops = p.get(t, 1);
            pick.get(&ops).clone()
        }).collect();
        let c = compose(&o, &args).unwrap();
        prop_assert_eq!(c.output(), o.output());
        let inputs: Vec<PlanarTree> = args.iter().map(|a| a.inputs()[0].clone()).collect();
        prop_assert_eq!(c.inputs(), inputs.as_slice());
    }
}
