use hyperop_core::cattop::{homology, nerve, poset_category};
use hyperop_core::kgraph::{k_compose, k_enumerate, k_iota, k_leq, KElt, LabelConvention};
use hyperop_core::perm::Perm;
use proptest::prelude::*;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn element_counts() {
    for m in 1..=3u32 {
        for k in 0..=3usize {
            let pairs = (k * k.saturating_sub(1) / 2) as u32;
            let expect = (m as usize).pow(pairs) * factorial(k);
            assert_eq!(k_enumerate(m, k, LabelConvention::Adopted).len(), expect, "m={m} k={k}");
        }
    }
}

/// Orientation of an element as the set of ordered pairs `(a, b)`, `a` ranked first.
fn arrows(e: &KElt) -> Vec<(usize, usize)> {
    let k = e.arity();
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && e.perm().apply(a) < e.perm().apply(b) {
                out.push((a, b));
            }
        }
    }
    out
}

fn leq_oracle(x: &KElt, y: &KElt) -> bool {
    let (ax, ay) = (arrows(x), arrows(y));
    ax.iter().all(|&(a, b)| {
        let (mx, my) = (x.mu(a, b), y.mu(a, b));
        mx < my || (mx == my && ay.contains(&(a, b)))
    })
}

#[test]
fn order_matches_orientation_oracle() {
    for k in 0..=3 {
        let all = k_enumerate(3, k, LabelConvention::Adopted);
        for x in &all {
            for y in &all {
                assert_eq!(k_leq(x, y).unwrap(), leq_oracle(x, y), "{x} vs {y}");
            }
        }
    }
}

#[test]
fn arity_two_posets_are_spheres() {
    // K_m(2) has the homology of the (m-1)-sphere
    for m in 1..=4u32 {
        let h = homology(&nerve(&poset_category(k_enumerate(m, 2, LabelConvention::Adopted)).unwrap(), None).unwrap()).unwrap();
        let mut expect = vec![0; m as usize];
        expect[0] += 1;
        expect[m as usize - 1] += 1;
        assert_eq!(h.betti(), expect, "m={m}");
    }
}

#[test]
fn arity_three_level_two_is_a_planar_configuration_space() {
    // Poincare polynomial (1 + t)(1 + 2t)
    let p = poset_category(k_enumerate(2, 3, LabelConvention::Adopted)).unwrap();
    let h = homology(&nerve(&p, None).unwrap()).unwrap();
    assert_eq!(h.betti()[..3], [1, 3, 2]);
    assert!(h.betti()[3..].iter().all(|&b| b == 0));
    assert!(h.degrees.iter().all(|d| d.torsion.is_empty()));
}

fn elt(k: usize, max: u32) -> impl Strategy<Value = KElt> {
    let pairs = k * k.saturating_sub(1) / 2;
    (prop::collection::vec(0..=max, pairs), prop::sample::select(Perm::all(k)))
        .prop_map(|(mu, perm)| KElt::new(mu, perm).unwrap())
}

proptest! {
    #[test]
    fn composition_is_associative(
        outer in elt(2, 2),
        a in elt(2, 2), b in elt(1, 2),
        x in elt(1, 2), y in elt(2, 2), z in elt(1, 2)
    ) {
        let inner = vec![a.clone(), b.clone()];
        let lhs = k_compose(&k_compose(&outer, &inner).unwrap(), &[x.clone(), y.clone(), z.clone()]).unwrap();
        let ax = k_compose(&a, &[x, y]).unwrap();
        let bz = k_compose(&b, &[z]).unwrap();
        let rhs = k_compose(&outer, &[ax, bz]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_laws(e in elt(3, 3)) {
        let units = vec![KElt::unit(); 3];
        prop_assert_eq!(&k_compose(&e, &units).unwrap(), &e);
        prop_assert_eq!(&k_compose(&KElt::unit(), std::slice::from_ref(&e)).unwrap(), &e);
    }

    #[test]
    fn composition_is_monotone(o1 in elt(2, 2), o2 in elt(2, 2), a1 in elt(2, 2), a2 in elt(2, 2), b in elt(1, 2)) {
        if k_leq(&o1, &o2).unwrap() && k_leq(&a1, &a2).unwrap() {
            let c1 = k_compose(&o1, &[a1, b.clone()]).unwrap();
            let c2 = k_compose(&o2, &[a2, b]).unwrap();
            prop_assert!(k_leq(&c1, &c2).unwrap());
        }
    }

    #[test]
    fn action_is_a_group_action(e in elt(3, 2), s in 0usize..6, t in 0usize..6) {
        let perms = Perm::all(3);
        let (s, t) = (&perms[s], &perms[t]);
        let lhs = e.act(t).unwrap().act(s).unwrap();
        prop_assert_eq!(lhs, e.act(&s.after(t)).unwrap());
    }

    #[test]
    fn iota_is_monotone_and_inflating(x in elt(3, 1), y in elt(3, 1)) {
        let ix = k_iota(&x).unwrap();
        prop_assert!(k_leq(&x, &ix).unwrap());
        if k_leq(&x, &y).unwrap() {
            prop_assert!(k_leq(&ix, &k_iota(&y).unwrap()).unwrap());
        }
    }
}
