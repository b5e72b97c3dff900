use hyperop_core::cattop::{acyclicity_report, homology, nerve, smith_invariants, FinCategory, SparseMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn sparse(d: &[Vec<i64>]) -> SparseMatrix {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let entries = d
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().enumerate().filter(|(_, v)| **v != 0).map(move |(c, &v)| (r, c, v)))
        .collect();
    SparseMatrix { rows, cols, entries }
}

/// Fraction-free elimination: rank, and the determinant of a square matrix.
fn bareiss(d: &[Vec<i64>]) -> (usize, i128) {
    let mut a: Vec<Vec<i128>> = d.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut rank = 0;
    let mut sign = 1;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for j in c + 1..cols {
                a[r][j] = (a[r][j] * a[rank][c] - a[r][c] * a[rank][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    let det = if rows == cols && rank == rows { sign * prev } else { 0 };
    (rank, det)
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

proptest! {
    #[test]
    fn smith_rank_matches_bareiss(d in matrix(6)) {
        prop_assert_eq!(smith_invariants(&sparse(&d)).rank, bareiss(&d).0);
    }

    #[test]
    fn invariant_factors_multiply_to_determinant(n in 1usize..=5, seed in prop::collection::vec(-4i64..=4, 25)) {
        let d: Vec<Vec<i64>> = (0..n).map(|r| seed[r * 5..r * 5 + n].to_vec()).collect();
        let (_, det) = bareiss(&d);
        let s = smith_invariants(&sparse(&d));
        if det != 0 {
            let prod: BigInt = s.torsion.iter().product();
            prop_assert_eq!(prod, BigInt::from(det.abs()));
            for w in s.torsion.windows(2) {
                prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
            }
        } else {
            prop_assert!(s.rank < n);
        }
    }
}

/// The face poset of a simplicial complex given by its maximal faces.
fn face_poset(facets: &[Vec<u8>]) -> FinCategory<Vec<u8>, ()> {
    let mut faces = BTreeSet::new();
    for f in facets {
        let mut f = f.clone();
        f.sort();
        for mask in 1u32..(1 << f.len()) {
            faces.insert(f.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect::<Vec<u8>>());
        }
    }
    FinCategory::<Vec<u8>, ()>::thin(faces.into_iter().collect(), |a, b| a.iter().all(|x| b.contains(x))).unwrap()
}

fn betti_and_torsion(facets: &[Vec<u8>]) -> String {
    homology(&nerve(&face_poset(facets), None).unwrap()).unwrap().to_string()
}

#[test]
fn sphere_boundary_of_tetrahedron() {
    let facets = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    assert_eq!(betti_and_torsion(&facets), "H0=Z H1=0 H2=Z");
}

#[test]
fn projective_plane_has_two_torsion() {
    let t = [
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
        [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4],
    ];
    let facets: Vec<Vec<u8>> = t.iter().map(|f| f.to_vec()).collect();
    // every edge lies on exactly two triangles
    for a in 1..=6u8 {
        for b in a + 1..=6 {
            let n = facets.iter().filter(|f| f.contains(&a) && f.contains(&b)).count();
            assert_eq!(n, 2, "edge {a}{b}");
        }
    }
    assert_eq!(betti_and_torsion(&facets), "H0=Z H1=Z/2 H2=0");
}

#[test]
fn seven_vertex_torus() {
    let mut facets = Vec::new();
    for i in 0..7u8 {
        let mut a = vec![i, (i + 1) % 7, (i + 3) % 7];
        let mut b = vec![i, (i + 2) % 7, (i + 3) % 7];
        a.sort();
        b.sort();
        facets.push(a);
        facets.push(b);
    }
    assert_eq!(betti_and_torsion(&facets), "H0=Z H1=Z^2 H2=Z");
}

#[test]
fn cone_is_acyclic_and_circle_is_not() {
    let cone = face_poset(&[vec![0, 1, 2], vec![0, 2, 3]]);
    assert!(acyclicity_report(&cone, 3).unwrap().is_acyclic());
    let circle = face_poset(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    let r = acyclicity_report(&circle, 3).unwrap();
    assert!(!r.is_acyclic());
    assert_eq!(r.homology.unwrap().betti()[..2], [1, 1]);
}

#[test]
fn disconnected_and_empty() {
    let two = face_poset(&[vec![0], vec![1]]);
    let r = acyclicity_report(&two, 2).unwrap();
    assert_eq!(r.components, 2);
    assert!(!r.is_acyclic());
    let empty = FinCategory::<u8, ()>::thin(vec![], |_, _| true).unwrap();
    assert!(!acyclicity_report(&empty, 2).unwrap().is_acyclic());
}
