//! Worked examples, each checked against a hand computation or an
//! independent oracle.

use cluster_core::error::Error;
use cluster_core::int::Int;
use cluster_core::laurent::LaurentPoly;
use cluster_core::matrix::ExchangeMatrix;
use cluster_core::quiver::{build_unfolding, local_quiver, LabeledQuiver};
use cluster_core::seed::{check_positive, f_polynomial, Seed};
use cluster_core::unfold::{verify_covering_commutation, verify_pi_commutation};

fn m(rows: &[Vec<i64>]) -> ExchangeMatrix {
    ExchangeMatrix::from_rows(rows).unwrap()
}

fn rank_three() -> ExchangeMatrix {
    m(&[vec![0, 2, 2], vec![-2, 0, 1], vec![-1, -3, 0]])
}

fn line() -> ExchangeMatrix {
    m(&[vec![0, 1, 1], vec![-1, 0, 1], vec![-1, -1, 0]])
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn poly(s: &Seed, text: &str) -> LaurentPoly {
    LaurentPoly::parse(s.ring(), text).unwrap()
}

#[test]
fn sign_skew_symmetry() {
    assert!(m(&[vec![0, 2], vec![-2, 0]]).is_sign_skew_symmetric());
    assert!(!m(&[vec![0, 1], vec![1, 0]]).is_sign_skew_symmetric());
    assert!(rank_three().is_sign_skew_symmetric());
}

#[test]
fn skew_symmetrizers() {
    assert_eq!(m(&[vec![0, 1], vec![-1, 0]]).skew_symmetrizer(), Some(ints(&[1, 1])));
    // d1 * 2 = d2 * 1
    assert_eq!(m(&[vec![0, 2], vec![-1, 0]]).skew_symmetrizer(), Some(ints(&[1, 2])));
    assert_eq!(rank_three().skew_symmetrizer(), None);
    // exhaustive search agrees: no positive d with d_i <= 100 works
    let b = rank_three();
    let ok = |d: [i64; 3]| (0..3).all(|i| (0..3).all(|j| d[i] * b.get(i, j).to_i64().unwrap() == -d[j] * b.get(j, i).to_i64().unwrap()));
    assert!((1..=100).all(|a| (1..=100).all(|c| (1..=100).all(|e| !ok([a, c, e])))));
}

#[test]
fn matrix_mutation() {
    assert_eq!(rank_three().mutate(0), m(&[vec![0, -2, -2], vec![2, 0, 1], vec![1, -3, 0]]));
    assert_eq!(m(&[vec![0, 1], vec![-1, 0]]).mutate(0), m(&[vec![0, -1], vec![1, 0]]));
}

#[test]
fn delta_and_acyclicity() {
    assert_eq!(m(&[vec![0, 1], vec![-1, 0]]).delta().unwrap().edges(), vec![(0, 1)]);
    assert_eq!(rank_three().delta().unwrap().edges(), vec![(0, 1), (0, 2), (1, 2)]);
    assert!(ExchangeMatrix::zero(3).delta().unwrap().edges().is_empty());
    assert!(rank_three().is_acyclic() && rank_three().is_connected());
    assert!(!m(&[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).is_acyclic());
    let one = m(&[vec![0]]);
    assert!(one.is_acyclic() && one.is_connected());
}

#[test]
fn principal_extensions() {
    let b = m(&[vec![0]]).principal_extension().unwrap();
    assert_eq!((b.n(), b.m()), (1, 1));
    assert_eq!(b.get(1, 0), &Int::from(1));
    let b = m(&[vec![0, 1], vec![-1, 0]]).principal_extension().unwrap();
    let rows: Vec<Vec<i64>> = (0..4).map(|i| (0..2).map(|j| b.get(i, j).to_i64().unwrap()).collect()).collect();
    assert_eq!(rows, vec![vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]);
}

#[test]
fn local_stars() {
    let q = local_quiver(&rank_three(), 0).unwrap();
    let labels: Vec<usize> = q.vertices().iter().map(|v| v.label).collect();
    assert_eq!(labels, vec![0, 1, 1, 2]);
    let arrows: Vec<(usize, usize)> = q.arrows().iter().map(|(u, v, _)| (q.vertex(*u).label, q.vertex(*v).label)).collect();
    assert_eq!(arrows, vec![(0, 1), (0, 1), (0, 2)]);

    let q = local_quiver(&m(&[vec![0, 1], vec![-1, 0]]), 1).unwrap();
    assert_eq!(q.vertex_count(), 2);
    assert_eq!(q.arrows().iter().map(|(u, v, _)| (q.vertex(*u).label, q.vertex(*v).label)).collect::<Vec<_>>(), vec![(0, 1)]);

    assert_eq!(local_quiver(&ExchangeMatrix::zero(3), 2).unwrap().vertex_count(), 1);
}

#[test]
fn depth_one_is_the_first_star() {
    let q = build_unfolding(&rank_three(), 1).unwrap();
    let star = local_quiver(&rank_three(), 0).unwrap();
    assert_eq!(q.vertex_count(), 4);
    assert_eq!(q.arrows(), star.arrows());
}

#[test]
fn fresh_unfoldings_have_no_gamma_defects() {
    for b in [rank_three(), line()] {
        let q = build_unfolding(&b, 5).unwrap();
        for label in 0..3 {
            assert!(!q.has_gamma_loops(label) && !q.has_gamma_2cycles(label));
        }
        assert_eq!(q.fold().unwrap(), b);
    }
}

#[test]
fn hand_built_gamma_two_cycle() {
    // a -> b -> a' with a, a' labeled 1 and b labeled 2
    let q = LabeledQuiver::from_arrows(&[0, 1, 0], &[false, false], &[(0, 1, 1), (1, 2, 1)]).unwrap();
    assert!(q.has_gamma_2cycles(0));
    assert!(!q.has_gamma_loops(0));
    assert!(matches!(q.fold(), Err(Error::IllDefinedFolding(_))));

    let single = LabeledQuiver::from_arrows(&[0], &[false], &[]).unwrap();
    assert!(!single.has_gamma_loops(0) && !single.has_gamma_2cycles(0));
}

#[test]
fn orbit_mutation_with_singleton_classes_is_quiver_mutation() {
    let q = LabeledQuiver::from_arrows(&[0, 1, 2], &[false; 3], &[(0, 1, 1), (1, 2, 1)]).unwrap();
    for label in 0..3 {
        assert_eq!(q.orbit_mutate(label).unwrap().arrows(), q.mutate_vertex(label).arrows());
    }
    assert_eq!(q.fold().unwrap(), m(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]));
}

#[test]
fn line_quiver_commutes_with_mutation_at_one() {
    let q = build_unfolding(&line(), 5).unwrap().orbit_mutate(0).unwrap();
    assert_eq!(q.fold().unwrap(), line().mutate(0));
}

#[test]
fn covering_commutation_examples() {
    let b = rank_three();
    for seq in cluster_core::sequence::all_sequences(3, 3) {
        let r = verify_covering_commutation(&b, &seq, seq.len() + 2).unwrap();
        assert!(r.passed(), "{seq:?}: {:?}", r.failures);
    }
    assert!(verify_covering_commutation(&b, &[], 2).unwrap().passed());
    let mut rng = cluster_core::sequence::prng(9);
    for _ in 0..20 {
        let seq = cluster_core::sequence::random_sequence(&mut rng, 3, 5);
        let r = verify_covering_commutation(&line(), &seq, seq.len() + 2).unwrap();
        assert!(r.passed(), "{seq:?}: {:?}", r.failures);
    }
}

#[test]
fn pi_commutation_examples() {
    assert!(verify_pi_commutation(&rank_three(), &[], 2).unwrap().passed());
    let a2 = m(&[vec![0, 1], vec![-1, 0]]);
    for seq in cluster_core::sequence::all_sequences(2, 4) {
        let r = verify_pi_commutation(&a2, &seq, seq.len() + 2).unwrap();
        assert!(r.passed(), "{seq:?}: {:?}", r.failures);
    }
    for seq in [vec![0, 1], vec![2, 1, 0], vec![1, 2, 0]] {
        let r = verify_pi_commutation(&rank_three(), &seq, seq.len() + 2).unwrap();
        assert!(r.passed(), "{seq:?}: {:?}", r.failures);
    }
}

#[test]
fn seed_mutation_examples() {
    let s0 = Seed::initial(&m(&[vec![0]]).principal_extension().unwrap());
    let v = s0.mutate(0).unwrap().cluster()[0].clone();
    assert_eq!(v, poly(&s0, "y1*x1^-1 + x1^-1"));
    assert_eq!(f_polynomial(&v), poly(&s0, "y1 + 1"));
    assert!(check_positive(&v).is_ok());
    assert_eq!(f_polynomial(&s0.cluster()[0]), poly(&s0, "1"));

    let a2 = Seed::initial(&m(&[vec![0, 1], vec![-1, 0]]));
    assert_eq!(a2.mutate(0).unwrap().cluster()[0], poly(&a2, "x2*x1^-1 + x1^-1"));
    let back = a2.mutate(1).unwrap().mutate(1).unwrap();
    assert_eq!(back, a2);
    assert_eq!(a2.expand(&[]).unwrap(), a2);

    // the pentagon: after five steps the cluster is the initial one, swapped
    let s5 = a2.expand(&[0, 1, 0, 1, 0]).unwrap();
    let mut got: Vec<String> = s5.cluster().iter().map(|v| v.to_string()).collect();
    got.sort();
    assert_eq!(got, vec!["x1", "x2"]);
}

#[test]
fn positivity_witness() {
    let s = Seed::initial(&m(&[vec![0, 1], vec![-1, 0]]));
    let w = check_positive(&poly(&s, "x1 - x2")).unwrap_err();
    assert_eq!(w.coeff, Int::from(-1));
    assert_eq!(w.rendered, "x2");
}

#[test]
fn exact_division_examples() {
    let s = Seed::initial(&m(&[vec![0, 1], vec![-1, 0]]));
    let q = poly(&s, "x1^2 - x2^2").exact_div(&poly(&s, "x1 - x2")).unwrap();
    assert_eq!(q, poly(&s, "x1 + x2"));
    let q = poly(&s, "x1 + x2").exact_div(&poly(&s, "x1")).unwrap();
    assert_eq!(q, poly(&s, "1 + x1^-1*x2"));
    assert!(matches!(poly(&s, "x1 + 1").exact_div(&poly(&s, "x2 + 1")), Err(Error::InexactDivision { .. })));
}
