//! The level-one comparison between the higher-level cyclotomic algebra at the
//! corner object and the level-zero cyclotomic quotient.

use num_traits::One;

use crate::category::{Gen, Morphism, ObjectWord, Piece, Session, Slot};
use crate::cyclo::{all_words, stabilized_quotient_dim, window_exponents, Cyclotomic, IdealWindow};
use crate::error::{Error, Result};
use crate::perm;
use crate::poly::{Mono, PolyElement};
use crate::rational::{RowSpace, Q};
use crate::wreath::WreathElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloIsoReport {
    /// The red-first double crossing at the corner equals the pin `Q_1`.
    pub double_crossing_is_pin: bool,
    /// Multiples `p Q_1 q` factor through a black-first object and reduce to zero.
    pub ideal_to_zero: bool,
    /// Every composite through a black-first object reduces to zero.
    pub kernel_in_ideal: bool,
    pub composites_checked: usize,
    /// Dimension of the corner window modulo composites through black-first objects.
    pub cyc_dim: usize,
    /// Dimension of the level-zero quotient from the brute-force oracle.
    pub quotient_dim: usize,
    pub bound: i32,
    pub stabilized: bool,
}

impl CycloIsoReport {
    pub fn passed(&self) -> bool {
        self.double_crossing_is_pin && self.ideal_to_zero && self.kernel_in_ideal && self.stabilized && self.cyc_dim == self.quotient_dim
    }
}

fn window_polys(s: &Session, bound: i32) -> Vec<PolyElement> {
    let d = s.d;
    let mut out = Vec::new();
    for e in window_exponents(d, s.variant(), bound) {
        for word in all_words(s.wa.alg().dim(), d) {
            let mut f = s.poly().zero();
            f.add_term(Mono::new(word, e.clone()), Q::one());
            out.push(f);
        }
    }
    out
}

fn basis_morphisms(s: &Session, src: &[Slot], tgt: &[Slot], bound: i32) -> Vec<Morphism> {
    let mut out = Vec::new();
    for w in perm::all(s.d) {
        for f in window_polys(s, bound) {
            out.push(s.basis_morphism(src, tgt, &f, &w));
        }
    }
    out
}

/// Verifies both kernel inclusions and compares dimensions inside a degree window.
pub fn cyclotomic_iso(s: &Session, bound: i32, max_bound: i32) -> Result<CycloIsoReport> {
    if s.level() != 1 {
        return Err(Error::LevelNotOne(format!("the session has {} red strands", s.level())));
    }
    let cy = Cyclotomic::new(s.wa.clone(), s.labels[0].clone())?;
    let omega = s.corner_object();
    let wa = &s.wa;

    let q1 = s.pin(0, 0).clone();
    let dbl = s.normalize_pieces(&omega, &[Piece::G(Gen::XBR(0)), Piece::G(Gen::XRB(0))])?;
    let phi_q1 = s.basis_morphism(&omega, &omega, &q1, &perm::id(s.d));
    let double_crossing_is_pin = dbl == phi_q1 && s.compose_pieces(&omega, &[Piece::G(Gen::XBR(0)), Piece::G(Gen::XRB(0))])? == phi_q1;

    // p Q_1 q = phi(p) o (double crossing) o phi(q)
    let mut ideal_to_zero = true;
    let sample_bound = bound.min(2);
    for p in window_polys(s, sample_bound) {
        for w in perm::all(s.d) {
            let pm = s.basis_morphism(&omega, &omega, &p, &w);
            for v in perm::all(s.d) {
                let qm = s.basis_morphism(&omega, &omega, &s.poly().one(), &v);
                let via = s.compose(&pm, &s.compose(&dbl, &qm)?)?;
                let direct = wa.product(&[pm.body.clone(), wa.from_poly(&q1), qm.body.clone()]);
                if via.body != direct || !cy.reduce(&direct)?.is_zero() {
                    ideal_to_zero = false;
                }
            }
        }
    }

    let win = IdealWindow::new(&cy, bound);
    let mut composites = RowSpace::new();
    let mut kernel_in_ideal = true;
    let mut checked = 0;
    let black_first: Vec<ObjectWord> = s.shuffles().into_iter().filter(|o| o[0] == Slot::Black).collect();
    for obj in &black_first {
        let fs = basis_morphisms(s, &omega, obj, bound);
        let gs = basis_morphisms(s, obj, &omega, bound);
        for g in &gs {
            for f in &fs {
                let gf = s.compose(g, f)?;
                checked += 1;
                let body: WreathElement = gf.body;
                if !cy.reduce(&body)?.is_zero() {
                    kernel_in_ideal = false;
                }
                if let Some(v) = win.vectorize(&body) {
                    composites.insert(&v);
                }
            }
        }
    }
    let oracle = stabilized_quotient_dim(&cy, bound, max_bound);
    Ok(CycloIsoReport {
        double_crossing_is_pin,
        ideal_to_zero,
        kernel_in_ideal,
        composites_checked: checked,
        cyc_dim: win.ambient - composites.dim(),
        quotient_dim: oracle.dim,
        bound,
        stabilized: oracle.stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::poly::{PolyAlg, Variant};
    use crate::rational::q;
    use num_traits::Zero;
    use std::sync::Arc;

    fn run(alg: crate::frobenius::FrobeniusAlgebra, d: usize, variant: Variant, z: Q, coeffs: &[(i32, i64)], bound: i32) -> CycloIsoReport {
        let alg = Arc::new(alg);
        let one = PolyAlg::new(alg.clone(), 1, variant);
        let mut f = one.zero();
        for &(e, c) in coeffs {
            f += &one.dot(0, e).scale(&q(c));
        }
        let s = Session::new(alg, d, variant, z, vec![one.pin_label(&f).unwrap()]).unwrap();
        cyclotomic_iso(&s, bound, bound + 3).unwrap()
    }

    #[test]
    fn ground_x() {
        let r = run(builtin::ground(), 1, Variant::Degenerate, Q::zero(), &[(1, 1)], 3);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cyc_dim, 1);
    }

    #[test]
    fn ground_x_squared() {
        let r = run(builtin::ground(), 1, Variant::Degenerate, Q::zero(), &[(2, 1)], 3);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cyc_dim, 2);
    }

    #[test]
    fn two_strands_and_clifford_and_quantum() {
        let r = run(builtin::ground(), 2, Variant::Degenerate, Q::zero(), &[(1, 1)], 3);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cyc_dim, 2);
        let r = run(builtin::clifford_even(), 1, Variant::Degenerate, Q::zero(), &[(2, 1)], 4);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cyc_dim, 4);
        let r = run(builtin::ground(), 1, Variant::Quantum, q(1), &[(1, 1), (0, -1)], 3);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cyc_dim, 1);
    }
}
