use std::sync::Arc;

use proptest::prelude::*;

use cluster_core::int::Int;
use cluster_core::laurent::{LaurentPoly, Monomial, Ring, Var};
use cluster_core::matrix::{random_acyclic_connected, ExchangeMatrix};
use cluster_core::quiver::{build_unfolding, LabeledQuiver};
use cluster_core::sequence::{prng, random_sequence};
use cluster_core::unfold::pi;

const VARS: usize = 3;

/// Laurent in every variable, so that any nonzero divisor of a product
/// divides exactly.
fn ring() -> Arc<Ring> {
    Ring::standard(VARS, 0)
}

fn terms(nvars: usize) -> impl Strategy<Value = Vec<(Vec<i32>, i64)>> {
    prop::collection::vec((prop::collection::vec(-2i32..=3, nvars), -5i64..=5), 0..5)
}

fn build(ring: &Arc<Ring>, t: &[(Vec<i32>, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(
        ring,
        t.iter().map(|(e, c)| (Monomial::from_pairs(e.iter().enumerate().map(|(v, &x)| (v as Var, x))), Int::from(*c))),
    )
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    terms(VARS).prop_map(|t| build(&ring(), &t))
}

/// A cover ring with two vertices per label of the three-variable base ring.
fn cover_ring() -> (Arc<Ring>, Vec<usize>) {
    let names = ["x0", "x1", "x2", "x3", "y4", "y5"].iter().map(|s| s.to_string()).collect();
    (Ring::new(names, 4), vec![0, 1, 0, 1, 2, 2])
}

fn cover_poly() -> impl Strategy<Value = LaurentPoly> {
    terms(6).prop_map(|t| build(&cover_ring().0, &t))
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(&ring()), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn pi_is_a_ring_homomorphism(a in cover_poly(), b in cover_poly()) {
        let (_, labels) = cover_ring();
        let base = Ring::standard(2, 1);
        let p = |v: &LaurentPoly| pi(v, &labels, &base);
        prop_assert_eq!(p(&(&a + &b)), &p(&a) + &p(&b));
        prop_assert_eq!(p(&(&a * &b)), &p(&a) * &p(&b));
        prop_assert_eq!(p(&LaurentPoly::one(&cover_ring().0)), LaurentPoly::one(&base));
    }

    #[test]
    fn matrix_mutation_is_an_involution(seed in 0u64..500, n in 1usize..=5, k in 0usize..5) {
        let b = random_acyclic_connected(&mut prng(seed), n, 4);
        let k = k % n;
        prop_assert_eq!(b.mutate(k).mutate(k), b);
    }
}

#[test]
fn pi_on_monomials() {
    let (cover, labels) = cover_ring();
    let base = Ring::standard(2, 1);
    for v in 0..6 {
        let x = LaurentPoly::var(&cover, v as Var);
        assert_eq!(pi(&x, &labels, &base), LaurentPoly::var(&base, labels[v] as Var));
    }
    // vertices 0 and 2 share label 1
    let prod = &LaurentPoly::var(&cover, 0) * &LaurentPoly::var(&cover, 2);
    assert_eq!(pi(&prod, &labels, &base), LaurentPoly::var(&base, 0).pow(2));
}

/// Mutating one class vertex at a time gives the orbit mutation: the class
/// has no arrows inside it, so the single mutations commute.
fn product_of_single_mutations(q: &LabeledQuiver, label: usize) -> LabeledQuiver {
    let mut out = q.clone();
    for v in q.class(label) {
        out = out.mutate_vertex(v);
    }
    out
}

#[test]
fn orbit_mutation_is_the_product_of_single_mutations() {
    let mut rng = prng(11);
    for _ in 0..30 {
        let b = random_acyclic_connected(&mut rng, 3, 2);
        let q = build_unfolding(&b, 4).unwrap();
        let seq = random_sequence(&mut rng, 3, 2);
        let mut cur = q.clone();
        for &k in &seq {
            let orbit = cur.orbit_mutate(k).unwrap();
            assert_eq!(orbit.arrows(), product_of_single_mutations(&cur, k).arrows(), "{b:?} {seq:?}");
            cur = orbit;
        }
    }
}

/// Every exact vertex sees the star of its label, up to the order of the
/// neighbors.
#[test]
fn exact_vertices_are_locally_homogeneous() {
    let mut rng = prng(12);
    let mut mats: Vec<ExchangeMatrix> = (0..20).map(|_| random_acyclic_connected(&mut rng, 4, 3)).collect();
    mats.push(ExchangeMatrix::from_rows(&[vec![0i64, 2, 2], vec![-2, 0, 1], vec![-1, -3, 0]]).unwrap());
    for b in &mats {
        let q = build_unfolding(b, 4).unwrap();
        let stars: Vec<_> = (0..b.n()).map(|i| cluster_core::quiver::local_quiver(b, i).unwrap().neighborhood_signature(0)).collect();
        for v in 0..q.vertex_count() {
            if q.is_exact(v) {
                assert_eq!(q.neighborhood_signature(v), stars[q.vertex(v).label], "{b:?} vertex {v}");
            }
        }
    }
}
