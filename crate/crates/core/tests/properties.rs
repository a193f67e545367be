use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

use frobhecke::category::Session;
use frobhecke::cyclo::Cyclotomic;
use frobhecke::frobenius::{builtin, FrobeniusAlgebra};
use frobhecke::oracle;
use frobhecke::parse::{fmt_poly, fmt_wreath, parse_poly, parse_wreath};
use frobhecke::poly::{PolyAlg, Variant};
use frobhecke::rational::{fmt_q, parse_q, qf, sign, Q};
use frobhecke::sample::Sampler;
use frobhecke::verify::default_labels;
use frobhecke::wreath::WreathAlg;

fn algebra(k: usize) -> Arc<FrobeniusAlgebra> {
    Arc::new(builtin::all().swap_remove(k % 6))
}

/// Builtins with a symmetric even trace, where the quantum variant exists.
fn quantum_algebra(k: usize) -> Arc<FrobeniusAlgebra> {
    Arc::new(match k % 3 {
        0 => builtin::ground(),
        r => builtin::cyclic(r + 1),
    })
}

/// Random element supported on basis vectors of one parity.
fn homogeneous(alg: &FrobeniusAlgebra, p: u8, rng: &mut Sampler) -> Vec<Q> {
    (0..alg.dim()).map(|i| if alg.parity[i] == p { rng.coeff() } else { Q::zero() }).collect()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = qf(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)), Some(x));
    }

    #[test]
    fn trace_is_twisted_by_nakayama(k in 0usize..6, p in 0u8..2, r in 0u8..2, seed: u64) {
        let alg = algebra(k);
        let mut rng = Sampler::new(seed);
        let (a, b) = (homogeneous(&alg, p, &mut rng), homogeneous(&alg, r, &mut rng));
        let lhs = alg.tr(&alg.mul(&a, &b));
        let rhs = alg.tr(&alg.mul(&b, &alg.psi(&a))) * sign(p * r == 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn algebra_multiplication_is_associative(k in 0usize..6, seed: u64) {
        let alg = algebra(k);
        let mut rng = Sampler::new(seed);
        let v: Vec<Vec<Q>> = (0..3).map(|_| (0..alg.dim()).map(|_| rng.coeff()).collect()).collect();
        prop_assert_eq!(alg.mul(&alg.mul(&v[0], &v[1]), &v[2]), alg.mul(&v[0], &alg.mul(&v[1], &v[2])));
        prop_assert_eq!(alg.mul(&alg.unit, &v[0]), v[0].clone());
    }

    #[test]
    fn polynomials_form_an_associative_algebra(k in 0usize..6, n in 1usize..4, quantum: bool, seed: u64) {
        let alg = if quantum { quantum_algebra(k) } else { algebra(k) };
        let v = if quantum { Variant::Quantum } else { Variant::Degenerate };
        let poly = PolyAlg::new(alg, n, v);
        let mut rng = Sampler::new(seed);
        let (f, g, h) = (rng.poly(&poly, 3, 2), rng.poly(&poly, 3, 2), rng.poly(&poly, 2, 2));
        prop_assert_eq!(poly.mul(&poly.mul(&f, &g), &h), poly.mul(&f, &poly.mul(&g, &h)));
        prop_assert_eq!(poly.mul(&f, &g.add(&h)), poly.mul(&f, &g).add(&poly.mul(&f, &h)));
        prop_assert_eq!(poly.mul(&poly.one(), &f), f);
    }

    #[test]
    fn polynomials_round_trip_through_text(k in 0usize..6, n in 1usize..4, quantum: bool, seed: u64) {
        let alg = if quantum { quantum_algebra(k) } else { algebra(k) };
        let v = if quantum { Variant::Quantum } else { Variant::Degenerate };
        let poly = PolyAlg::new(alg, n, v);
        let f = Sampler::new(seed).poly(&poly, 4, 3);
        let text = fmt_poly(&poly, &f);
        prop_assert_eq!(parse_poly(&poly, &text).unwrap(), f);
    }

    #[test]
    fn simple_reflections_are_involutions(k in 0usize..6, n in 2usize..4, seed: u64) {
        let poly = PolyAlg::new(algebra(k), n, Variant::Degenerate);
        let mut rng = Sampler::new(seed);
        let f = rng.poly(&poly, 3, 3);
        let i = rng.below(n - 1);
        prop_assert_eq!(poly.s(i, &poly.s(i, &f)), f);
    }

    #[test]
    fn demazure_satisfies_twisted_leibniz(k in 0usize..6, n in 2usize..4, seed: u64) {
        let poly = PolyAlg::new(algebra(k), n, Variant::Degenerate);
        let mut rng = Sampler::new(seed);
        let (f, g) = (rng.poly(&poly, 2, 3), rng.poly(&poly, 2, 3));
        let i = rng.below(n - 1);
        let lhs = poly.demazure(i, &poly.mul(&f, &g)).unwrap();
        let rhs = poly.mul(&poly.demazure(i, &f).unwrap(), &g).add(&poly.mul(&poly.s(i, &f), &poly.demazure(i, &g).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wreath_products_are_associative(k in 0usize..6, n in 1usize..4, seed: u64) {
        let wa = WreathAlg::degenerate(algebra(k), n);
        let mut rng = Sampler::new(seed);
        let (a, b, c) = (rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2));
        prop_assert_eq!(wa.mul(&wa.mul(&a, &b), &c), wa.mul(&a, &wa.mul(&b, &c)));
        prop_assert_eq!(wa.mul(&wa.one(), &a), a.clone());
        prop_assert_eq!(wa.mul(&a, &wa.one()), a);
    }

    #[test]
    fn quantum_wreath_products_are_associative(k in 0usize..3, n in 1usize..4, zn in -3i64..4, zd in 1i64..4, seed: u64) {
        let wa = WreathAlg::quantum(quantum_algebra(k), n, qf(zn, zd)).unwrap();
        let mut rng = Sampler::new(seed);
        let (a, b, c) = (rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2));
        prop_assert_eq!(wa.mul(&wa.mul(&a, &b), &c), wa.mul(&a, &wa.mul(&b, &c)));
    }

    #[test]
    fn wreath_elements_round_trip_through_text(k in 0usize..6, n in 1usize..4, seed: u64) {
        let wa = WreathAlg::degenerate(algebra(k), n);
        let u = Sampler::new(seed).wreath(&wa, 4, 3);
        prop_assert_eq!(parse_wreath(&wa, &fmt_wreath(&wa, &u)).unwrap(), u);
    }

    #[test]
    fn polynomial_representation_matches_products(k in 0usize..6, n in 1usize..3, seed: u64) {
        let wa = WreathAlg::degenerate(algebra(k), n);
        let mut rng = Sampler::new(seed);
        let (u, v) = (rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2));
        prop_assert!(oracle::product_oracle_check_with(&wa, &u, &v, &wa.mul(&u, &v)).unwrap().is_ok());
    }

    #[test]
    fn cyclotomic_reduction_is_a_linear_projection(k in 0usize..3, n in 1usize..3, quantum: bool, seed: u64) {
        let alg = quantum_algebra(k);
        let v = if quantum { Variant::Quantum } else { Variant::Degenerate };
        let wa = WreathAlg::new(alg.clone(), n, v, qf(1, 2)).unwrap();
        let one = PolyAlg::new(alg, 1, v);
        let text = if quantum { "X - 1" } else { "x^2 + 1" };
        let label = one.pin_label(&parse_poly(&one, text).unwrap()).unwrap();
        let cy = Cyclotomic::new(wa.clone(), label).unwrap();
        let mut rng = Sampler::new(seed);
        let (a, b) = (rng.wreath(&wa, 2, 3), rng.wreath(&wa, 2, 3));
        let (ra, rb) = (cy.reduce(&a).unwrap(), cy.reduce(&b).unwrap());
        prop_assert!(cy.is_reduced(&ra));
        prop_assert_eq!(cy.reduce(&ra).unwrap(), ra.clone());
        prop_assert_eq!(cy.reduce(&a.add(&b)).unwrap(), ra.add(&rb));
    }

    #[test]
    fn phi_is_a_functor(k in 0usize..6, d in 1usize..3, ell in 1usize..3, seed: u64) {
        let alg = algebra(k);
        let labels = default_labels(&alg, Variant::Degenerate, ell);
        let s = Session::new(alg, d, Variant::Degenerate, Q::zero(), labels).unwrap();
        let mut rng = Sampler::new(seed);
        let (i, j, l) = (rng.object(&s), rng.object(&s), rng.object(&s));
        let f = rng.morphism(&s, &i, &j, 2, 2);
        let g = rng.morphism(&s, &j, &l, 2, 2);
        let gf = s.compose(&g, &f).unwrap();
        prop_assert_eq!(s.phi(&gf).unwrap(), s.wa.mul(&s.phi(&g).unwrap(), &s.phi(&f).unwrap()));
        prop_assert_eq!(s.compose(&s.identity(&j), &f).unwrap(), f);
    }

    #[test]
    fn composition_is_associative(k in 0usize..6, d in 1usize..3, seed: u64) {
        let alg = algebra(k);
        let labels = default_labels(&alg, Variant::Degenerate, 1);
        let s = Session::new(alg, d, Variant::Degenerate, Q::zero(), labels).unwrap();
        let mut rng = Sampler::new(seed);
        let objs: Vec<_> = (0..4).map(|_| rng.object(&s)).collect();
        let f = rng.morphism(&s, &objs[0], &objs[1], 2, 1);
        let g = rng.morphism(&s, &objs[1], &objs[2], 2, 1);
        let h = rng.morphism(&s, &objs[2], &objs[3], 2, 1);
        let left = s.compose(&h, &s.compose(&g, &f).unwrap()).unwrap();
        let right = s.compose(&s.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }
}

