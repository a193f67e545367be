//! Polynomial representations used as independent checks, and relation catalogs.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;

use crate::category::{Gen, Morphism, Piece, Session, Slot};
use crate::cyclo::all_words;
use crate::error::{Error, Result};
use crate::perm;
use crate::poly::{PolyAlg, PolyElement, Variant};
use crate::rational::{sign, Q};
use crate::wreath::{WreathAlg, WreathElement};

fn require_degenerate(v: Variant) -> Result<()> {
    if v != Variant::Degenerate {
        return Err(Error::WrongVariant("the polynomial representation is only available for the degenerate variant".into()));
    }
    Ok(())
}

/// `sigma_i . v = s_i(v) - d_i(v)`.
pub fn crossing_action(poly: &PolyAlg, i: usize, v: &PolyElement) -> Result<PolyElement> {
    let mut out = poly.s(i, v);
    poly.demazure_acc(i, v, &-Q::one(), &mut out)?;
    Ok(out)
}

/// Action of `u` on `Pol_n(A)`.
pub fn poly_rep_apply(wa: &WreathAlg, u: &WreathElement, v: &PolyElement) -> Result<PolyElement> {
    require_degenerate(wa.variant())?;
    let poly = &wa.poly;
    let mut memo = HashMap::new();
    let mut out = poly.zero();
    for (w, f) in u.by_perm() {
        out += &poly.mul(&f, &perm_action(poly, &w, v, &mut memo)?);
    }
    Ok(out)
}

/// `sigma_w . v`, peeling off left descents so that words sharing a suffix share work.
fn perm_action(poly: &PolyAlg, w: &[u8], v: &PolyElement, memo: &mut HashMap<Vec<u8>, PolyElement>) -> Result<PolyElement> {
    if perm::is_id(w) {
        return Ok(v.clone());
    }
    if let Some(g) = memo.get(w) {
        return Ok(g.clone());
    }
    let i = (0..poly.n - 1).find(|&i| perm::is_left_descent(w, i)).expect("non-identity permutation");
    let rest = perm_action(poly, &perm::s_times(i, w), v, memo)?;
    let g = crossing_action(poly, i, &rest)?;
    memo.insert(w.to_vec(), g.clone());
    Ok(g)
}

fn apply_gen(s: &Session, obj: &[Slot], g: &Gen, v: &PolyElement) -> Result<PolyElement> {
    let poly = s.poly();
    let k = obj[..g.slot()].iter().filter(|x| **x == Slot::Black).count();
    Ok(match g {
        Gen::Token(_, a) => poly.mul(&poly.token(k, a), v),
        Gen::Dot(_) => poly.mul(&poly.dot(k, 1), v),
        Gen::Cross(_) => crossing_action(poly, k, v)?,
        Gen::XRB(p) => {
            let Slot::Red(r) = obj[p + 1] else { unreachable!() };
            poly.mul(s.pin(r, k), v)
        }
        Gen::XBR(_) => v.clone(),
        Gen::InvDot(_) | Gen::NegCross(_) => return Err(Error::WrongVariant("quantum generator in the polynomial representation".into())),
    })
}

/// Action of a diagram evaluated generator by generator, without passing through the affine algebra.
pub fn higher_rep_apply_pieces(s: &Session, src: &[Slot], pieces: &[Piece], v: &PolyElement) -> Result<PolyElement> {
    require_degenerate(s.variant())?;
    let mut obj = src.to_vec();
    let mut g = v.clone();
    for pc in pieces {
        match pc {
            Piece::G(gen) => {
                g = apply_gen(s, &obj, gen, &g)?;
                obj = s.apply_gen(&obj, gen)?;
            }
            Piece::L(f) => g = s.poly().mul(f, &g),
        }
    }
    Ok(g)
}

/// Action of a normal-form morphism through its canonical diagrams.
pub fn higher_rep_apply(s: &Session, f: &Morphism, v: &PolyElement) -> Result<PolyElement> {
    require_degenerate(s.variant())?;
    let mut out = s.poly().zero();
    for (w, c) in f.body.by_perm() {
        let word = s.canonical_diagram(&f.src, &f.tgt, &w)?;
        let mut pieces: Vec<Piece> = word.into_iter().map(Piece::G).collect();
        pieces.push(Piece::L(c));
        out += &higher_rep_apply_pieces(s, &f.src, &pieces, v)?;
    }
    Ok(out)
}

/// Test vectors `b x_2^N x_3^{2N} .. x_n^{(n-1)N}` over all basis words `b`.
pub fn test_vectors(poly: &PolyAlg, big_n: i32) -> Vec<PolyElement> {
    let exps: Vec<i32> = (0..poly.n as i32).map(|k| k * big_n).collect();
    let x = poly.monomial_times_one(exps);
    all_words(poly.alg.dim(), poly.n)
        .into_iter()
        .map(|b| poly.mul(&poly.basis_word(&b), &x))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMismatch {
    pub vector: String,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for OracleMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "on {}: expected {}, got {}", self.vector, self.expected, self.got)
    }
}

/// Compares the action of a claimed product `uv` with the composite of the actions of `u` and `v`.
pub fn product_oracle_check_with(
    wa: &WreathAlg,
    u: &WreathElement,
    v: &WreathElement,
    uv: &WreathElement,
) -> Result<std::result::Result<(), OracleMismatch>> {
    require_degenerate(wa.variant())?;
    let big_n = u.degree().max(v.degree()).max(uv.degree()) + 1;
    for t in test_vectors(&wa.poly, big_n) {
        let lhs = poly_rep_apply(wa, uv, &t)?;
        let rhs = poly_rep_apply(wa, u, &poly_rep_apply(wa, v, &t)?)?;
        if lhs != rhs {
            return Ok(Err(OracleMismatch {
                vector: crate::parse::fmt_poly(&wa.poly, &t),
                expected: crate::parse::fmt_poly(&wa.poly, &rhs),
                got: crate::parse::fmt_poly(&wa.poly, &lhs),
            }));
        }
    }
    Ok(Ok(()))
}

pub fn product_oracle_check(wa: &WreathAlg, u: &WreathElement, v: &WreathElement) -> Result<bool> {
    Ok(product_oracle_check_with(wa, u, v, &wa.mul(u, v))?.is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl RelationCheck {
    fn new(name: String, failures: Vec<String>) -> Self {
        RelationCheck { name, passed: failures.is_empty(), detail: failures.join("; ") }
    }
}

fn one_based(i: usize) -> usize {
    i + 1
}

/// Defining relations of the affine wreath product algebra (or its quantum version), each as `lhs - rhs`.
pub fn wreath_relations(wa: &WreathAlg) -> Vec<(String, WreathElement)> {
    let n = wa.n();
    let poly = &wa.poly;
    let alg = wa.alg();
    let m = alg.dim();
    let eps = alg.eps;
    let quantum = wa.variant() == Variant::Quantum;
    let mut rels: Vec<(String, WreathElement)> = Vec::new();
    let p = |f: PolyElement| wa.from_poly(&f);
    let x = |i: usize| wa.from_poly(&poly.dot(i, 1));
    let t = |i: usize| wa.crossing(i);
    let mul = |a: &WreathElement, b: &WreathElement| wa.mul(a, b);
    let dotname = if quantum { "X" } else { "x" };
    let crossname = if quantum { "T" } else { "s" };

    for word in all_words(m, n) {
        let a = p(poly.basis_word(&word));
        let abar = poly.word_parity(&word);
        for i in 0..n {
            let lhs = mul(&a, &x(i));
            let rhs = if quantum {
                mul(&x(i), &a)
            } else {
                let mut psi_word = poly.one();
                for (k, &b) in word.iter().enumerate() {
                    let factor = if k == i { alg.psi(&alg.basis(b as usize)) } else { alg.basis(b as usize) };
                    psi_word = poly.mul(&psi_word, &poly.token(k, &factor));
                }
                mul(&x(i), &p(psi_word)).scale(&sign(eps * abar == 1))
            };
            rels.push((format!("tokens past {dotname}{} for word {word:?}", one_based(i)), lhs.sub(&rhs)));
        }
        for i in 0..n.saturating_sub(1) {
            let swapped = poly.permute(&perm::times_s(&perm::id(n), i), &poly.basis_word(&word));
            rels.push((
                format!("{crossname}{} past tokens {word:?}", one_based(i)),
                mul(&t(i), &a).sub(&mul(&p(swapped), &t(i))),
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let s = if quantum { Q::one() } else { sign(eps == 1) };
                rels.push((
                    format!("{dotname}{} {dotname}{} supercommute", one_based(i), one_based(j)),
                    mul(&x(i), &x(j)).sub(&mul(&x(j), &x(i)).scale(&s)),
                ));
            }
        }
        if quantum {
            let xi = wa.from_poly(&poly.dot(i, -1));
            rels.push((format!("X{} invertible", one_based(i)), mul(&x(i), &xi).sub(&wa.one())));
        }
    }
    for i in 0..n.saturating_sub(1) {
        for j in 0..n.saturating_sub(1) {
            if i.abs_diff(j) > 1 {
                rels.push((
                    format!("{crossname}{} {crossname}{} commute", one_based(i), one_based(j)),
                    mul(&t(i), &t(j)).sub(&mul(&t(j), &t(i))),
                ));
            }
        }
        if i + 2 < n {
            let l = wa.product(&[t(i), t(i + 1), t(i)]);
            let r = wa.product(&[t(i + 1), t(i), t(i + 1)]);
            rels.push((format!("braid at {}", one_based(i)), l.sub(&r)));
        }
        let sq = mul(&t(i), &t(i));
        let sq_rhs = if quantum {
            mul(&p(poly.tele(i).scale(&wa.z)), &t(i)).add(&wa.one())
        } else {
            wa.one()
        };
        rels.push((format!("{crossname}{} quadratic", one_based(i)), sq.sub(&sq_rhs)));
        for j in 0..n {
            if j != i && j != i + 1 {
                rels.push((
                    format!("{dotname}{} past {crossname}{}", one_based(j), one_based(i)),
                    mul(&x(j), &t(i)).sub(&mul(&t(i), &x(j))),
                ));
            }
        }
        let slide = if quantum {
            wa.product(&[t(i), x(i), t(i)]).sub(&x(i + 1))
        } else {
            mul(&t(i), &x(i)).sub(&mul(&x(i + 1), &t(i)).sub(&p(poly.tele(i))))
        };
        rels.push((format!("{dotname} slide at {}", one_based(i)), slide));
    }
    rels
}

/// Checks every defining relation by normal form, and in the degenerate case also through the polynomial representation.
pub fn wreath_catalog(wa: &WreathAlg) -> Result<Vec<RelationCheck>> {
    let vectors = match wa.variant() {
        Variant::Degenerate => test_vectors(&wa.poly, 3),
        Variant::Quantum => vec![],
    };
    let mut out = Vec::new();
    for (name, diff) in wreath_relations(wa) {
        let mut failures = Vec::new();
        if !diff.is_zero() {
            failures.push(format!("normal form of lhs - rhs has {} terms", diff.terms.len()));
        }
        for v in &vectors {
            if !poly_rep_apply(wa, &diff, v)?.is_zero() {
                failures.push("polynomial representation does not annihilate lhs - rhs".into());
                break;
            }
        }
        out.push(RelationCheck::new(name, failures));
    }
    Ok(out)
}

/// A diagram relation: `lhs = sum of rhs terms`, all read bottom to top from `src`.
#[derive(Clone, Debug)]
pub struct DiagramRelation {
    pub name: String,
    pub src: Vec<Slot>,
    pub lhs: Vec<Piece>,
    pub rhs: Vec<Vec<Piece>>,
}

fn black_idx(obj: &[Slot], p: usize) -> usize {
    obj[..p].iter().filter(|x| **x == Slot::Black).count()
}

/// Local relations of the higher-level category at every position of every shuffle object.
pub fn diagram_relations(s: &Session) -> Vec<DiagramRelation> {
    use Gen::*;
    use Piece::{G, L};
    let poly = s.poly();
    let alg = &s.wa.alg();
    let quantum = s.variant() == Variant::Quantum;
    let neg = -Q::one();
    let z = s.wa.z.clone();
    let mut out = Vec::new();
    for obj in s.shuffles() {
        let name_obj = crate::category::fmt_object(&obj);
        let mut rel = |name: String, lhs: Vec<Piece>, rhs: Vec<Vec<Piece>>| {
            out.push(DiagramRelation { name: format!("{name} at {name_obj}"), src: obj.clone(), lhs, rhs });
        };
        for p in 0..obj.len().saturating_sub(1) {
            let k = black_idx(&obj, p);
            let slot = one_based(p);
            let mut local_dots = vec![(Dot(p), Dot(p + 1), "dot".to_string())];
            if quantum {
                local_dots.push((InvDot(p), InvDot(p + 1), "inverse dot".to_string()));
            }
            match (obj[p], obj[p + 1]) {
                (Slot::Black, Slot::Red(r)) => {
                    rel(format!("red-black double crossing from slot {slot}"), vec![G(XRB(p)), G(XBR(p))], vec![vec![L(s.pin(r, k).clone())]]);
                    for (lo, hi, nm) in &local_dots {
                        rel(format!("{nm} through red from slot {slot}"), vec![G(lo.clone()), G(XRB(p))], vec![vec![G(XRB(p)), G(hi.clone())]]);
                    }
                    for b in 0..alg.dim() {
                        let a = alg.basis(b);
                        rel(
                            format!("token {} through red from slot {slot}", alg.labels[b]),
                            vec![G(Token(p, a.clone())), G(XRB(p))],
                            vec![vec![G(XRB(p)), G(Token(p + 1, a))]],
                        );
                    }
                }
                (Slot::Red(r), Slot::Black) => {
                    rel(format!("black-red double crossing from slot {slot}"), vec![G(XBR(p)), G(XRB(p))], vec![vec![L(s.pin(r, k).clone())]]);
                    for (lo, hi, nm) in &local_dots {
                        rel(format!("{nm} through red from slot {}", slot + 1), vec![G(hi.clone()), G(XBR(p))], vec![vec![G(XBR(p)), G(lo.clone())]]);
                    }
                    for b in 0..alg.dim() {
                        let a = alg.basis(b);
                        rel(
                            format!("token {} through red from slot {}", alg.labels[b], slot + 1),
                            vec![G(Token(p + 1, a.clone())), G(XBR(p))],
                            vec![vec![G(XBR(p)), G(Token(p, a))]],
                        );
                    }
                }
                (Slot::Black, Slot::Black) => {
                    let tele = poly.tele(k);
                    if quantum {
                        rel(
                            format!("quadratic crossing at slot {slot}"),
                            vec![G(Cross(p)), G(Cross(p))],
                            vec![vec![G(Cross(p)), L(tele.scale(&z))], vec![]],
                        );
                        rel(format!("positive then negative crossing at slot {slot}"), vec![G(Cross(p)), G(NegCross(p))], vec![vec![]]);
                        rel(format!("negative then positive crossing at slot {slot}"), vec![G(NegCross(p)), G(Cross(p))], vec![vec![]]);
                        rel(format!("dot conjugation at slot {slot}"), vec![G(Cross(p)), G(Dot(p)), G(Cross(p))], vec![vec![G(Dot(p + 1))]]);
                    } else {
                        rel(format!("double crossing at slot {slot}"), vec![G(Cross(p)), G(Cross(p))], vec![vec![]]);
                        rel(
                            format!("dot slide at slot {slot}"),
                            vec![G(Dot(p)), G(Cross(p))],
                            vec![vec![G(Cross(p)), G(Dot(p + 1))], vec![L(tele.scale(&neg))]],
                        );
                    }
                    for b in 0..alg.dim() {
                        let a = alg.basis(b);
                        rel(
                            format!("token {} past crossing at slot {slot}", alg.labels[b]),
                            vec![G(Token(p, a.clone())), G(Cross(p))],
                            vec![vec![G(Cross(p)), G(Token(p + 1, a))]],
                        );
                    }
                }
                _ => {}
            }
            if p + 2 < obj.len() {
                let (c0, c1, c2) = (obj[p], obj[p + 1], obj[p + 2]);
                let reds = [c0, c1, c2].iter().filter(|x| **x != Slot::Black).count();
                if reds > 1 {
                    continue;
                }
                let typed = |slots: [usize; 3]| s.typed_crossings(&obj, &slots).map(|g| g.into_iter().map(G).collect::<Vec<_>>());
                let (Ok(lhs), Ok(rhs)) = (typed([p, p + 1, p]), typed([p + 1, p, p + 1])) else { continue };
                let mut rhs_terms = vec![rhs];
                if let (Slot::Black, Slot::Red(r), Slot::Black) = (c0, c1, c2) {
                    let q = s.pin(r, k);
                    let corr = match s.variant() {
                        Variant::Degenerate => poly.demazure(k, q).expect("valid strand").scale(&neg),
                        Variant::Quantum => poly.delta(k, q).expect("valid strand").scale(&z),
                    };
                    rhs_terms.push(vec![L(corr)]);
                }
                rel(format!("triangle at slot {slot}"), lhs, rhs_terms);
            }
        }
    }
    out
}

/// Evaluates each diagram relation through the functor, through composition, through the rewriter and,
/// for the degenerate variant, through the polynomial representation.
pub fn category_catalog(s: &Session) -> Result<Vec<RelationCheck>> {
    let vectors = match s.variant() {
        Variant::Degenerate => test_vectors(s.poly(), 3),
        Variant::Quantum => vec![],
    };
    let mut out = Vec::new();
    for rel in diagram_relations(s) {
        let mut failures = Vec::new();
        let phi_l = s.phi_pieces(&rel.src, &rel.lhs)?;
        let mut phi_r = s.wa.zero();
        let comp_l = s.compose_pieces(&rel.src, &rel.lhs)?;
        let mut comp_r = s.zero_morphism(&rel.src, &comp_l.tgt);
        let norm_l = s.normalize_pieces(&rel.src, &rel.lhs)?;
        let mut norm_r = comp_r.clone();
        for term in &rel.rhs {
            phi_r += &s.phi_pieces(&rel.src, term)?;
            comp_r = s.add(&comp_r, &s.compose_pieces(&rel.src, term)?)?;
            norm_r = s.add(&norm_r, &s.normalize_pieces(&rel.src, term)?)?;
        }
        if phi_l != phi_r {
            failures.push("images in the affine algebra differ".to_string());
        }
        if comp_l != comp_r {
            failures.push("composition normal forms differ".to_string());
        }
        if norm_l != norm_r {
            failures.push("rewriter normal forms differ".to_string());
        }
        if comp_l != norm_l {
            failures.push("composition and rewriter disagree".to_string());
        }
        for v in &vectors {
            let mut diff = higher_rep_apply_pieces(s, &rel.src, &rel.lhs, v)?;
            for term in &rel.rhs {
                diff = diff.sub(&higher_rep_apply_pieces(s, &rel.src, term, v)?);
            }
            if !diff.is_zero() {
                failures.push("polynomial representation does not annihilate lhs - rhs".into());
                break;
            }
        }
        out.push(RelationCheck::new(rel.name, failures));
    }
    Ok(out)
}

pub fn fmt_checks(checks: &[RelationCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        s.push_str(&format!("{status}  {}", c.name));
        if !c.passed {
            s.push_str(&format!("  ({})", c.detail));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;
    use num_traits::Zero;
    use std::sync::Arc;

    #[test]
    fn crossing_on_x1() {
        let wa = WreathAlg::degenerate(Arc::new(builtin::ground()), 2);
        let v = poly_rep_apply(&wa, &wa.crossing(0), &wa.poly.dot(0, 1)).unwrap();
        assert_eq!(v, wa.poly.dot(1, 1).sub(&wa.poly.one()));
        assert!(product_oracle_check(&wa, &wa.crossing(0), &wa.from_poly(&wa.poly.dot(0, 1))).unwrap());
        let bad = wa.mul(&wa.crossing(0), &wa.crossing(0)).add(&wa.one());
        assert!(product_oracle_check_with(&wa, &wa.crossing(0), &wa.crossing(0), &bad).unwrap().is_err());
    }

    #[test]
    fn catalogs_pass_over_clifford() {
        for alg in [builtin::clifford_even(), builtin::clifford_odd()] {
            let wa = WreathAlg::degenerate(Arc::new(alg), 3);
            for c in wreath_catalog(&wa).unwrap() {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn quantum_catalog() {
        let wa = WreathAlg::quantum(Arc::new(builtin::ground()), 3, q(1)).unwrap();
        for c in wreath_catalog(&wa).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn category_catalog_ground() {
        let alg = Arc::new(builtin::ground());
        let one = PolyAlg::new(alg.clone(), 1, Variant::Degenerate);
        let label = one.pin_label(&one.dot(0, 2).add(&one.one())).unwrap();
        let s = Session::new(alg, 2, Variant::Degenerate, Q::zero(), vec![label]).unwrap();
        for c in category_catalog(&s).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn shared_prefixes_match_crossing_by_crossing() {
        use crate::sample::Sampler;
        for alg in [builtin::clifford_even(), builtin::clifford_odd(), builtin::cyclic(3), builtin::grassmann()] {
            let wa = WreathAlg::degenerate(Arc::new(alg), 3);
            let mut r = Sampler::new(5);
            for _ in 0..10 {
                let u = r.wreath(&wa, 3, 2);
                let v = r.poly(&wa.poly, 3, 3);
                let mut slow = wa.poly.zero();
                for (w, f) in u.by_perm() {
                    let mut g = v.clone();
                    for &i in perm::reduced_word(&w).iter().rev() {
                        g = crossing_action(&wa.poly, i, &g).unwrap();
                    }
                    slow += &wa.poly.mul(&f, &g);
                }
                assert_eq!(poly_rep_apply(&wa, &u, &v).unwrap(), slow);
            }
        }
    }
}
