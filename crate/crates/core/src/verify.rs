//! Verification suites shared by the acceptance tests and `frobhecke verify`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::category::{Morphism, PathElement, Session};
use crate::cyciso::cyclotomic_iso;
use crate::cyclo::{stabilized_quotient_dim, Cyclotomic, IdealWindow};
use crate::error::{Error, Result};
use crate::frobenius::{builtin, change_trace, FrobeniusAlgebra};
use crate::oracle::{self, RelationCheck};
use crate::parse::{fmt_poly, fmt_wreath, parse_poly};
use crate::perm;
use crate::poly::{Mono, PinLabel, PolyAlg, PolyElement, Variant};
use crate::rational::{q, qf, sign, Q};
use crate::sample::Sampler;
use crate::wreath::{WreathAlg, WreathElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn new(name: &str) -> Self {
        Suite { name: name.to_string(), checks: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records the outcome of a fallible computation; errors count as failures.
    pub fn record(&mut self, name: impl Into<String>, r: Result<bool>) {
        match r {
            Ok(ok) => self.check(name, ok, ""),
            Err(e) => self.check(name, false, format!("{}: {e}", e.code())),
        }
    }

    pub fn relations(&mut self, prefix: &str, r: Result<Vec<RelationCheck>>) {
        match r {
            Ok(checks) => {
                for c in checks {
                    self.check(format!("{prefix}: {}", c.name), c.passed, c.detail);
                }
            }
            Err(e) => self.check(format!("{prefix}: catalog"), false, format!("{}: {e}", e.code())),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn summary(&self) -> String {
        let bad = self.failures();
        if bad.is_empty() {
            format!("{} checks passed", self.checks.len())
        } else {
            let names: Vec<&str> = bad.iter().take(3).map(|c| c.name.as_str()).collect();
            format!("{} of {} checks failed, first: {}", bad.len(), self.checks.len(), names.join("; "))
        }
    }
}

/// Pin labels tried in order when a session needs `ell` of them.
pub fn default_labels(alg: &Arc<FrobeniusAlgebra>, variant: Variant, ell: usize) -> Vec<PinLabel> {
    let one = PolyAlg::new(alg.clone(), 1, variant);
    let cands: &[&str] = match variant {
        Variant::Degenerate => &["x", "x^2 + 1", "x^2", "x^2 + 2", "x^4 + x^2 + 1"],
        Variant::Quantum => &["X", "X + X^-1 + 2", "X - 1", "X^2 + 1"],
    };
    cands
        .iter()
        .filter_map(|c| parse_poly(&one, c).ok().and_then(|f| one.pin_label(&f).ok()))
        .take(ell)
        .collect()
}

fn elem_eq(a: &[Q], b: &[Q]) -> bool {
    a == b
}

/// Runs `f` for each algebra on its own thread and its own forked sampler;
/// checks are appended in algebra order, so reports do not depend on scheduling.
fn per_algebra<F>(suite: &mut Suite, algs: &[FrobeniusAlgebra], rng: &mut Sampler, f: F)
where
    F: Fn(&mut Suite, &Arc<FrobeniusAlgebra>, &mut Sampler) + Sync,
{
    let jobs: Vec<(Arc<FrobeniusAlgebra>, Sampler)> = algs.iter().map(|a| (Arc::new(a.clone()), rng.fork(&a.name))).collect();
    let parts: Vec<Suite> = std::thread::scope(|sc| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(alg, mut r)| {
                let f = &f;
                sc.spawn(move || {
                    let mut part = Suite::new(&alg.name);
                    f(&mut part, &alg, &mut r);
                    part
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    for part in parts {
        suite.checks.extend(part.checks);
    }
}

pub fn frobenius_checks(suite: &mut Suite, alg: &FrobeniusAlgebra) {
    let m = alg.dim();
    let name = &alg.name;
    let mut dual_ok = true;
    for i in 0..m {
        for j in 0..m {
            let v = alg.tr(&alg.mul(alg.dual_basis(i), &alg.basis(j)));
            if v != if i == j { Q::one() } else { Q::zero() } {
                dual_ok = false;
            }
        }
    }
    suite.check(format!("{name}: tr(b_i^v b_j) = delta_ij"), dual_ok, "");
    let mut exp_ok = true;
    for a in 0..m {
        let av = alg.basis(a);
        let mut left = alg.zero();
        let mut right = alg.zero();
        for b in 0..m {
            let c1 = alg.tr(&alg.mul(alg.dual_basis(b), &av));
            let c2 = alg.tr(&alg.mul(&av, &alg.basis(b)));
            for k in 0..m {
                left[k] += &c1 * &alg.basis(b)[k];
                right[k] += &c2 * &alg.dual_basis(b)[k];
            }
        }
        if !elem_eq(&left, &av) || !elem_eq(&right, &av) {
            exp_ok = false;
        }
    }
    suite.check(format!("{name}: expansion identity"), exp_ok, "");
    let mut nak_ok = true;
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (alg.basis(i), alg.basis(j));
            let lhs = alg.tr(&alg.mul(&a, &b));
            let rhs = alg.tr(&alg.mul(&b, &alg.psi(&a))) * sign(alg.parity[i] * alg.parity[j] == 1);
            if lhs != rhs {
                nak_ok = false;
            }
        }
    }
    suite.check(format!("{name}: Nakayama condition on all basis pairs"), nak_ok, "");
    let mut dd_ok = true;
    for i in 0..m {
        let p = alg.parity[i];
        let s = sign((p + alg.eps * p) % 2 == 1);
        let expect: Vec<Q> = alg.psi_inv(&alg.basis(i)).into_iter().map(|x| x * &s).collect();
        if alg.double_dual(i) != expect {
            dd_ok = false;
        }
    }
    suite.check(format!("{name}: double dual law"), dd_ok, "");
    let mut par_ok = true;
    for i in 0..m {
        if let Some(p) = alg.parity_of(alg.dual_basis(i)) {
            if (p + alg.parity[i]) % 2 != alg.eps {
                par_ok = false;
            }
        } else {
            par_ok = false;
        }
    }
    suite.check(format!("{name}: dual basis parities add to the trace parity"), par_ok, "");
}

/// Criterion 1.
pub fn frobenius_suite(algs: &[FrobeniusAlgebra]) -> Suite {
    let mut s = Suite::new("frobenius");
    for alg in algs {
        frobenius_checks(&mut s, alg);
    }
    let cl = builtin::clifford_even();
    match change_trace(&cl, &[q(0), q(1)]) {
        Ok(tc) => s.check("clifford trace change (1,0) -> (0,1) gives u = c", tc.u == cl.basis(1), format!("u = {}", cl.fmt_elem(&tc.u))),
        Err(e) => s.check("clifford trace change (1,0) -> (0,1) gives u = c", false, e.to_string()),
    }
    s
}

pub fn teleporter_checks(suite: &mut Suite, alg: &Arc<FrobeniusAlgebra>) {
    let poly = PolyAlg::new(alg.clone(), 2, Variant::Degenerate);
    let (t12, t21) = (poly.tele(0), poly.teleporter(1, 0).expect("two strands"));
    let mut ok = [true; 4];
    for b in 0..alg.dim() {
        let a = alg.basis(b);
        let pa = alg.psi(&a);
        let s = sign(alg.eps * alg.parity[b] == 1);
        let (a1, a2) = (poly.token(0, &a), poly.token(1, &a));
        let (pa1, pa2) = (poly.token(0, &pa), poly.token(1, &pa));
        ok[0] &= poly.mul(&a1, &t12) == poly.mul(&t12, &a2).scale(&s);
        ok[1] &= poly.mul(&t12, &pa1) == poly.mul(&a2, &t12).scale(&s);
        ok[2] &= poly.mul(&t21, &a1) == poly.mul(&a2, &t21).scale(&s);
        ok[3] &= poly.mul(&a1, &t21) == poly.mul(&t21, &pa2).scale(&s);
    }
    let names = [
        "a_1 t_12 = (-1)^(eps a) t_12 a_2",
        "t_12 psi(a)_1 = (-1)^(eps a) a_2 t_12",
        "t_21 a_1 = (-1)^(eps a) a_2 t_21",
        "a_1 t_21 = (-1)^(eps a) t_21 psi(a)_2",
    ];
    for (n, good) in names.iter().zip(ok) {
        suite.check(format!("{}: {n}", alg.name), good, "");
    }
}

/// Criterion 2.
pub fn teleporter_suite(algs: &[FrobeniusAlgebra]) -> Suite {
    let mut s = Suite::new("teleporter");
    for alg in algs {
        teleporter_checks(&mut s, &Arc::new(alg.clone()));
    }
    let odd = Arc::new(builtin::clifford_odd());
    let poly = PolyAlg::new(odd.clone(), 2, Variant::Degenerate);
    let expect = poly.basis_word(&[0, 1]).sub(&poly.basis_word(&[1, 0]));
    s.check("clifford_odd: t_12 = 1 (x) c - c (x) 1", poly.tele(0) == expect, fmt_poly(&poly, &poly.tele(0)));
    s
}

fn single(poly: &PolyAlg, m: Mono) -> PolyElement {
    let mut f = poly.zero();
    f.add_term(m, Q::one());
    f
}

/// Even central one-strand monomials of degree at most `max_deg`.
fn central_monomials(alg: &Arc<FrobeniusAlgebra>, variant: Variant, max_deg: i32) -> Vec<PolyElement> {
    let one = PolyAlg::new(alg.clone(), 1, variant);
    let lo = if variant == Variant::Quantum { -max_deg } else { 0 };
    let mut out = Vec::new();
    for e in lo..=max_deg {
        for b in 0..alg.dim() {
            let f = single(&one, Mono::new(vec![b as u8], vec![e]));
            if one.homogeneous_parts(&f)[1].is_zero() && one.is_central(&f) {
                out.push(f);
            }
        }
    }
    out
}

/// Symmetrised products of central one-strand elements.
fn symmetric_central_sample(poly: &PolyAlg, cands: &[PolyElement], rng: &mut Sampler) -> PolyElement {
    let mut f0 = poly.one();
    for k in 0..poly.n {
        let g = &cands[rng.below(cands.len())];
        f0 = poly.mul(&f0, &poly.embed(g, k));
    }
    let mut f = poly.zero();
    for w in perm::all(poly.n) {
        f += &poly.permute(&w, &f0);
    }
    f.scale(&rng.coeff())
}

pub fn demazure_checks(suite: &mut Suite, alg: &Arc<FrobeniusAlgebra>, rng: &mut Sampler, splits: usize) {
    let name = &alg.name;
    let n = 3;
    let poly = PolyAlg::new(alg.clone(), n, Variant::Degenerate);
    let mut gen_ok = true;
    for i in 0..n - 1 {
        for word in crate::cyclo::all_words(alg.dim(), n) {
            gen_ok &= poly.demazure(i, &poly.basis_word(&word)).map(|d| d.is_zero()).unwrap_or(false);
        }
        for j in 0..n {
            let d = poly.demazure(i, &poly.dot(j, 1));
            let expect = if j == i {
                poly.tele(i)
            } else if j == i + 1 {
                poly.teleporter(i + 1, i).expect("strands").scale(&-Q::one())
            } else {
                poly.zero()
            };
            gen_ok &= d.map(|d| d == expect).unwrap_or(false);
        }
    }
    suite.check(format!("{name}: Demazure values on tokens and dots"), gen_ok, "");

    let mut bad = Vec::new();
    for k in 0..splits {
        let g = single(&poly, rng.mono(&poly, 3));
        let h = single(&poly, rng.mono(&poly, 3));
        let i = rng.below(n - 1);
        let lhs = poly.demazure(i, &poly.mul(&g, &h));
        let rhs = poly
            .demazure(i, &g)
            .and_then(|dg| Ok(poly.mul(&dg, &h).add(&poly.mul(&poly.s(i, &g), &poly.demazure(i, &h)?))));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            _ => bad.push(k),
        }
    }
    suite.check(
        format!("{name}: twisted Leibniz on {splits} random splits"),
        bad.is_empty(),
        if bad.is_empty() { String::new() } else { format!("{} failing samples", bad.len()) },
    );

    let cands = central_monomials(alg, Variant::Degenerate, 4);
    let mut ker_ok = !cands.is_empty();
    let mut sym_ok = true;
    for _ in 0..20 {
        let f = symmetric_central_sample(&poly, &cands, rng);
        sym_ok &= poly.is_symmetric_central(&f);
        for i in 0..n - 1 {
            ker_ok &= poly.demazure(i, &f).map(|d| d.is_zero()).unwrap_or(false);
        }
    }
    suite.check(format!("{name}: generated samples are symmetric and central"), sym_ok, "");
    suite.check(format!("{name}: symmetric central samples lie in every kernel"), ker_ok, "");

    let two = PolyAlg::new(alg.clone(), 2, Variant::Degenerate);
    for label in default_labels(alg, Variant::Degenerate, 2) {
        let (q1, q2) = (two.embed(&label.element, 0), two.embed(&label.element, 1));
        let one = PolyAlg::new(alg.clone(), 1, Variant::Degenerate);
        let lname = fmt_poly(&one, &label.element);
        let sum = q1.add(&q2);
        suite.record(
            format!("{name}: Q_1 + Q_2 in the kernel for Q = {lname}"),
            two.demazure(0, &sum).map(|d| d.is_zero()),
        );
        suite.record(
            format!("{name}: d_1(Q_1) = -d_1(Q_2) for Q = {lname}"),
            (|| Ok(two.demazure(0, &q1)? == two.demazure(0, &q2)?.scale(&-Q::one())))(),
        );
    }

    if alg.symmetric && alg.eps == 0 {
        let qp = PolyAlg::new(alg.clone(), 2, Variant::Quantum);
        let mut d_ok = true;
        for _ in 0..100 {
            let e = vec![rng.below(9) as i32 - 4, rng.below(9) as i32 - 4];
            let word: Vec<u8> = (0..2).map(|_| rng.below(alg.dim()) as u8).collect();
            let p = single(&qp, Mono::new(word.clone(), e.clone()));
            let a = single(&qp, Mono::new(word, vec![0, 0]));
            let xa = qp.mul(&qp.dot(0, e[0]), &qp.dot(1, e[1]));
            let xs = qp.mul(&qp.dot(0, e[1]), &qp.dot(1, e[0]));
            let lhs = qp.mul(&qp.dot(0, 1).sub(&qp.dot(1, 1)), &qp.delta(0, &p).expect("two strands"));
            let rhs = qp.mul(&qp.mul(&qp.tele(0), &a), &qp.mul(&qp.dot(1, 1), &xs.sub(&xa)));
            d_ok &= lhs == rhs;
        }
        suite.check(format!("{name}: (X_1 - X_2) D_1(a X^e) = t_12 a X_2 (X^(s_1 e) - X^e) on Laurent monomials"), d_ok, "");
        let qc = central_monomials(alg, Variant::Quantum, 2);
        let mut qk = !qc.is_empty();
        for _ in 0..10 {
            let f = symmetric_central_sample(&qp, &qc, rng);
            qk &= qp.delta(0, &f).map(|d| d.is_zero()).unwrap_or(false);
        }
        suite.check(format!("{name}: symmetric central Laurent samples lie in the kernel of D_1"), qk, "");
    }
}

/// Criterion 3.
pub fn demazure_suite(algs: &[FrobeniusAlgebra], rng: &mut Sampler, splits: usize) -> Suite {
    let mut s = Suite::new("demazure");
    per_algebra(&mut s, algs, rng, |part, alg, r| demazure_checks(part, alg, r, splits));
    s
}

pub fn wreath_checks(suite: &mut Suite, alg: &Arc<FrobeniusAlgebra>, rng: &mut Sampler, triples: usize, max_n: usize) {
    let name = &alg.name;
    for n in 1..=max_n {
        let wa = WreathAlg::degenerate(alg.clone(), n);
        suite.relations(&format!("{name} n={n}"), oracle::wreath_catalog(&wa));
        if alg.symmetric && alg.eps == 0 {
            for z in [q(1), q(-2)] {
                match WreathAlg::quantum(alg.clone(), n, z.clone()) {
                    Ok(wq) => suite.relations(&format!("{name} n={n} quantum z={}", crate::rational::fmt_q(&z)), oracle::wreath_catalog(&wq)),
                    Err(e) => suite.check(format!("{name} n={n} quantum"), false, e.to_string()),
                }
            }
        }
    }
    let mut bad = 0;
    for k in 0..triples {
        let n = 1 + k % max_n;
        let quantum = alg.symmetric && alg.eps == 0 && k % 4 == 3;
        let wa = if quantum {
            WreathAlg::quantum(alg.clone(), n, rng.coeff()).expect("symmetric algebra")
        } else {
            WreathAlg::degenerate(alg.clone(), n)
        };
        let (a, b, c) = (rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2), rng.wreath(&wa, 2, 2));
        if wa.mul(&wa.mul(&a, &b), &c) != wa.mul(&a, &wa.mul(&b, &c)) {
            bad += 1;
        }
    }
    suite.check(format!("{name}: associativity on {triples} random triples"), bad == 0, if bad > 0 { format!("{bad} failures") } else { String::new() });
}

/// Criterion 4.
pub fn wreath_suite(algs: &[FrobeniusAlgebra], rng: &mut Sampler, triples: usize) -> Suite {
    let mut s = Suite::new("wreath");
    per_algebra(&mut s, algs, rng, |part, alg, r| wreath_checks(part, alg, r, triples, 3));
    let g = Arc::new(builtin::ground());
    for z in [q(0), q(1), q(-1), q(2), qf(1, 3)] {
        let wa = WreathAlg::quantum(g.clone(), 2, z.clone()).expect("ground ring is symmetric");
        let x1 = wa.from_poly(&wa.poly.dot(0, 1));
        let lhs = wa.product(&[wa.crossing(0), x1, wa.crossing(0)]);
        let rhs = wa.from_poly(&wa.poly.dot(1, 1));
        s.check(format!("ground: T_1 X_1 T_1 = X_2 at z = {}", crate::rational::fmt_q(&z)), lhs == rhs, fmt_wreath(&wa, &lhs));
    }
    let wa = WreathAlg::degenerate(g, 2);
    let lhs = wa.mul(&wa.crossing(0), &wa.from_poly(&wa.poly.dot(0, 1)));
    let rhs = wa.mul(&wa.from_poly(&wa.poly.dot(1, 1)), &wa.crossing(0)).sub(&wa.one());
    s.check("ground: s_1 x_1 = x_2 s_1 - 1", lhs == rhs, fmt_wreath(&wa, &lhs));
    s
}

fn labels_session(alg: &Arc<FrobeniusAlgebra>, d: usize, variant: Variant, z: Q, ell: usize) -> Result<Session> {
    let labels = default_labels(alg, variant, ell);
    if labels.len() < ell {
        return Err(Error::NotPinLabel(format!("no {ell} default pin labels over {}", alg.name)));
    }
    Session::new(alg.clone(), d, variant, z, labels)
}

pub fn oracle_checks(suite: &mut Suite, alg: &Arc<FrobeniusAlgebra>, rng: &mut Sampler, pairs: usize, morphisms: usize) {
    let name = &alg.name;
    let mut bad = Vec::new();
    let algebras: Vec<WreathAlg> = (1..=3).map(|n| WreathAlg::degenerate(alg.clone(), n)).collect();
    for k in 0..pairs {
        let wa = &algebras[k % 3];
        let (u, v) = (rng.wreath(wa, 2, 2), rng.wreath(wa, 2, 2));
        match oracle::product_oracle_check_with(wa, &u, &v, &wa.mul(&u, &v)) {
            Ok(Ok(())) => {}
            Ok(Err(m)) => bad.push(m.to_string()),
            Err(e) => bad.push(e.to_string()),
        }
    }
    suite.check(
        format!("{name}: polynomial representation agrees with {pairs} random products"),
        bad.is_empty(),
        bad.first().cloned().unwrap_or_default(),
    );
    let wa = WreathAlg::degenerate(alg.clone(), 2);
    let (u, v) = (wa.crossing(0), wa.from_poly(&wa.poly.dot(0, 1)));
    let corrupted = wa.mul(&u, &v).add(&wa.one());
    suite.record(
        format!("{name}: corrupted product is rejected"),
        oracle::product_oracle_check_with(&wa, &u, &v, &corrupted).map(|r| r.is_err()),
    );

    let mut bad = 0;
    let mut done = 0;
    for (d, ell) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let Ok(s) = labels_session(alg, d, Variant::Degenerate, Q::zero(), ell) else { continue };
        for _ in 0..morphisms.div_ceil(4) {
            let (i, j) = (rng.object(&s), rng.object(&s));
            let f = rng.morphism(&s, &i, &j, 2, 2);
            let v = rng.poly(s.poly(), 2, 2);
            let ok = (|| Ok::<bool, Error>(oracle::higher_rep_apply(&s, &f, &v)? == oracle::poly_rep_apply(&s.wa, &s.phi(&f)?, &v)?))();
            done += 1;
            if !matches!(ok, Ok(true)) {
                bad += 1;
            }
        }
    }
    suite.check(format!("{name}: P' = P o Phi on {done} random morphisms"), bad == 0 && done >= morphisms, if bad > 0 { format!("{bad} failures") } else { String::new() });
}

/// Criterion 5.
pub fn oracle_suite(algs: &[FrobeniusAlgebra], rng: &mut Sampler, pairs: usize, morphisms: usize) -> Suite {
    let mut s = Suite::new("oracle");
    per_algebra(&mut s, algs, rng, |part, alg, r| oracle_checks(part, alg, r, pairs, morphisms));
    let g = Arc::new(builtin::ground());
    let one = PolyAlg::new(g.clone(), 1, Variant::Degenerate);
    let label = one.pin_label(&one.dot(0, 1)).expect("x is a pin label");
    let sess = Session::new(g, 1, Variant::Degenerate, Q::zero(), vec![label]).expect("session");
    let bl = sess.shuffles();
    let unit = sess.poly().one();
    s.record(
        "ground: black strand crossing a red strand to the right acts by Q = x",
        (|| Ok(oracle::higher_rep_apply_pieces(&sess, &bl[0], &[crate::category::Piece::G(crate::category::Gen::XRB(0))], &unit)? == sess.poly().dot(0, 1)))(),
    );
    s
}

pub fn higher_checks(suite: &mut Suite, s: &Session, rng: &mut Sampler, pairs: usize, canonical: usize, paths: usize) {
    let tag = format!(
        "{} d={} l={}{}",
        s.wa.alg().name,
        s.d,
        s.level(),
        if s.variant() == Variant::Quantum { format!(" quantum z={}", crate::rational::fmt_q(&s.wa.z)) } else { String::new() }
    );
    suite.relations(&tag, oracle::category_catalog(s));
    let objs = s.shuffles();
    let mut tri = Ok(true);
    for i in &objs {
        for j in &objs {
            if let Err(e) = s.certify_phi_basis(i, j) {
                tri = Err(e);
            }
        }
    }
    suite.record(format!("{tag}: images of canonical diagrams are triangular with pin-product diagonal"), tri);

    let mut bad = 0;
    for _ in 0..pairs {
        let (i, j, k) = (rng.object(s), rng.object(s), rng.object(s));
        let f = rng.morphism(s, &i, &j, 2, 2);
        let g = rng.morphism(s, &j, &k, 2, 2);
        let ok = (|| Ok::<bool, Error>(s.phi(&s.compose(&g, &f)?)? == s.wa.mul(&s.phi(&g)?, &s.phi(&f)?)))();
        if !matches!(ok, Ok(true)) {
            bad += 1;
        }
    }
    suite.check(format!("{tag}: functoriality on {pairs} random pairs"), bad == 0, if bad > 0 { format!("{bad} failures") } else { String::new() });

    let mut bad = 0;
    for _ in 0..canonical {
        let (i, j, k) = (rng.object(s), rng.object(s), rng.object(s));
        let (w, v) = (rng.perm(s.d), rng.perm(s.d));
        let (cf, cg) = (rng.poly(s.poly(), 2, 2), rng.poly(s.poly(), 2, 2));
        let ok = (|| {
            let f = s.basis_morphism(&i, &j, &cf, &w);
            let g = s.basis_morphism(&j, &k, &cg, &v);
            let mut pieces: Vec<crate::category::Piece> = s.canonical_diagram(&i, &j, &w)?.into_iter().map(crate::category::Piece::G).collect();
            pieces.push(crate::category::Piece::L(cf.clone()));
            pieces.extend(s.canonical_diagram(&j, &k, &v)?.into_iter().map(crate::category::Piece::G));
            pieces.push(crate::category::Piece::L(cg.clone()));
            Ok::<bool, Error>(s.normalize_pieces(&i, &pieces)? == s.compose(&g, &f)?)
        })();
        if !matches!(ok, Ok(true)) {
            bad += 1;
        }
    }
    suite.check(format!("{tag}: rewriter agrees with composition on {canonical} canonical pairs"), bad == 0, if bad > 0 { format!("{bad} failures") } else { String::new() });

    let id = s.path_identity();
    let mut mat_ok = true;
    let mut id_ok = true;
    for _ in 0..paths {
        let (u, v) = (rng.path(s, 3, 1, 1), rng.path(s, 3, 1, 1));
        let r = (|| {
            let uv = s.path_multiply(&u, &v)?;
            let m = s.block_matrix(&uv)? == s.matrix_product(&s.block_matrix(&u)?, &s.block_matrix(&v)?);
            let i = s.path_multiply(&id, &u)? == u && s.path_multiply(&u, &id)? == u;
            Ok::<(bool, bool), Error>((m, i))
        })();
        match r {
            Ok((m, i)) => {
                mat_ok &= m;
                id_ok &= i;
            }
            Err(_) => {
                mat_ok = false;
                id_ok = false;
            }
        }
    }
    suite.check(format!("{tag}: block matrices multiply like path elements"), mat_ok, "");
    suite.check(format!("{tag}: sum of idempotents is a two-sided identity"), id_ok, "");

    let mut orth = true;
    for a in &objs {
        for b in &objs {
            let ea = PathElement::from_morphism(s.identity(a));
            let eb = PathElement::from_morphism(s.identity(b));
            let p = s.path_multiply(&ea, &eb);
            orth &= match p {
                Ok(p) if a == b => p == ea,
                Ok(p) => p.blocks.is_empty(),
                Err(_) => false,
            };
        }
    }
    suite.check(format!("{tag}: idempotents are orthogonal"), orth, "");

    let mut corner_ok = true;
    let omega = s.corner_object();
    for _ in 0..paths {
        let (u, v) = (rng.wreath(&s.wa, 2, 2), rng.wreath(&s.wa, 2, 2));
        let r = (|| {
            let c = s.compose(&s.corner_embed(&u), &s.corner_embed(&v))?;
            Ok::<bool, Error>(c == s.corner_embed(&s.wa.mul(&u, &v)) && s.phi(&s.corner_embed(&u))? == u)
        })();
        corner_ok &= matches!(r, Ok(true));
    }
    suite.check(format!("{tag}: corner {} multiplies as the affine algebra", crate::category::fmt_object(&omega)), corner_ok, "");

    if objs.len() > 1 {
        let f = s.identity(&objs[0]);
        let g = s.identity(&objs[1]);
        suite.check(
            format!("{tag}: composing across different objects is rejected"),
            matches!(s.compose(&g, &f), Err(Error::IncompatibleObjects(_))),
            "",
        );
    }
}

/// Criterion 6: configurations with `d <= 2`, `ell <= 2` over the given algebras.
pub fn higher_suite(algs: &[FrobeniusAlgebra], rng: &mut Sampler, pairs: usize, canonical: usize, paths: usize) -> Suite {
    let mut suite = Suite::new("higher-level");
    per_algebra(&mut suite, algs, rng, |part, alg, r| {
        for (d, ell) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            match labels_session(alg, d, Variant::Degenerate, Q::zero(), ell) {
                Ok(s) => higher_checks(part, &s, r, pairs, canonical, paths),
                Err(e) => part.check(format!("{} d={d} l={ell}: session", alg.name), false, e.to_string()),
            }
        }
        if alg.symmetric && alg.eps == 0 {
            for (d, ell) in [(1, 1), (2, 1), (2, 2)] {
                match labels_session(alg, d, Variant::Quantum, q(1), ell) {
                    Ok(s) => higher_checks(part, &s, r, pairs / 4, canonical / 4, paths / 2),
                    Err(e) => part.check(format!("{} d={d} l={ell} quantum: session", alg.name), false, e.to_string()),
                }
            }
        }
    });
    suite
}

pub struct CycloConfig {
    pub alg: Arc<FrobeniusAlgebra>,
    pub d: usize,
    pub variant: Variant,
    pub z: Q,
    pub label: PolyElement,
    pub expected: Option<usize>,
}

pub fn cyclotomic_checks(suite: &mut Suite, cfg: &CycloConfig, rng: &mut Sampler) {
    let one = PolyAlg::new(cfg.alg.clone(), 1, cfg.variant);
    let tag = format!("{} d={} Q={}", cfg.alg.name, cfg.d, fmt_poly(&one, &cfg.label));
    let label = match one.cyclotomic_label(&cfg.label) {
        Ok(l) => l,
        Err(e) => return suite.check(format!("{tag}: label"), false, e.to_string()),
    };
    let wa = match WreathAlg::new(cfg.alg.clone(), cfg.d, cfg.variant, cfg.z.clone()) {
        Ok(w) => w,
        Err(e) => return suite.check(format!("{tag}: algebra"), false, e.to_string()),
    };
    let cy = match Cyclotomic::new(wa.clone(), label.clone()) {
        Ok(c) => c,
        Err(e) => return suite.check(format!("{tag}: monic label"), false, e.to_string()),
    };
    let mut idem = Ok(true);
    let mut in_ideal = true;
    for _ in 0..20 {
        let u = rng.wreath(&wa, 3, 3);
        match cy.reduce(&u).and_then(|r| Ok((cy.reduce(&r)? == r && cy.is_reduced(&r), r))) {
            Ok((ok, r)) => {
                if !ok {
                    idem = Ok(false);
                }
                let diff = r.sub(&u);
                let bound = diff.max_abs_exp() + cy.ell + 2;
                in_ideal &= diff.is_zero() || IdealWindow::new(&cy, bound).contains(&diff);
            }
            Err(e) => idem = Err(e),
        }
    }
    suite.record(format!("{tag}: reduction is idempotent"), idem);
    suite.check(format!("{tag}: reduce(u) - u lies in the ideal"), in_ideal, "");
    let rep = stabilized_quotient_dim(&cy, 2, 7);
    let expected = cfg.expected.unwrap_or(cy.reduced_basis_size());
    suite.check(
        format!("{tag}: oracle dimension {} stabilized at bound {}", rep.dim, rep.bound),
        rep.stabilized && rep.dim == expected && rep.dim == cy.reduced_basis_size(),
        format!("expected {expected}, spanning set of reduced words has {}", cy.reduced_basis_size()),
    );
    let pin = one.pin_label(&cfg.label);
    match pin {
        Ok(pin) => {
            let r = Session::new(cfg.alg.clone(), cfg.d, cfg.variant, cfg.z.clone(), vec![pin]).and_then(|s| cyclotomic_iso(&s, 3, 7));
            match r {
                Ok(rep) => suite.check(
                    format!("{tag}: higher-level comparison (both kernel inclusions, dimension {} vs {})", rep.cyc_dim, rep.quotient_dim),
                    rep.passed(),
                    format!("{rep:?}"),
                ),
                Err(e) => suite.check(format!("{tag}: higher-level comparison"), false, e.to_string()),
            }
        }
        Err(e) => suite.check(format!("{tag}: higher-level comparison not applicable ({e})"), true, ""),
    }
}

/// Criterion 7.
pub fn cyclotomic_suite(rng: &mut Sampler) -> Suite {
    let mut s = Suite::new("cyclotomic");
    let g = Arc::new(builtin::ground());
    let cl = Arc::new(builtin::clifford_even());
    let c2 = Arc::new(builtin::cyclic(2));
    let deg = |alg: &Arc<FrobeniusAlgebra>, text: &str| parse_poly(&PolyAlg::new(alg.clone(), 1, Variant::Degenerate), text).expect("label");
    let qua = |alg: &Arc<FrobeniusAlgebra>, text: &str| parse_poly(&PolyAlg::new(alg.clone(), 1, Variant::Quantum), text).expect("label");
    let configs = [
        CycloConfig { alg: g.clone(), d: 1, variant: Variant::Degenerate, z: Q::zero(), label: deg(&g, "x"), expected: Some(1) },
        CycloConfig { alg: g.clone(), d: 1, variant: Variant::Degenerate, z: Q::zero(), label: deg(&g, "x^2"), expected: Some(2) },
        CycloConfig { alg: g.clone(), d: 2, variant: Variant::Degenerate, z: Q::zero(), label: deg(&g, "x"), expected: Some(2) },
        CycloConfig { alg: cl.clone(), d: 1, variant: Variant::Degenerate, z: Q::zero(), label: deg(&cl, "x"), expected: Some(2) },
        CycloConfig { alg: cl.clone(), d: 1, variant: Variant::Degenerate, z: Q::zero(), label: deg(&cl, "x^2"), expected: Some(4) },
        CycloConfig { alg: g.clone(), d: 1, variant: Variant::Quantum, z: q(1), label: qua(&g, "X - 1"), expected: Some(1) },
        CycloConfig { alg: c2.clone(), d: 2, variant: Variant::Quantum, z: qf(1, 2), label: qua(&c2, "X - 1"), expected: Some(8) },
    ];
    for cfg in &configs {
        cyclotomic_checks(&mut s, cfg, rng);
    }
    s
}

fn commutes_with_generators(wa: &WreathAlg, u: &WreathElement) -> bool {
    wa.generators().iter().all(|(g, gp)| wa.supercommutator(u, g, *gp).is_zero())
}

/// Criterion 8.
pub fn center_suite(rng: &mut Sampler) -> Suite {
    let mut s = Suite::new("center");
    let g = Arc::new(builtin::ground());
    let wa = WreathAlg::degenerate(g.clone(), 2);
    let p = &wa.poly;
    let e1 = wa.from_poly(&p.dot(0, 1).add(&p.dot(1, 1)));
    let e2 = wa.from_poly(&p.mul(&p.dot(0, 1), &p.dot(1, 1)));
    let one = PolyAlg::new(g.clone(), 1, Variant::Degenerate);
    let qx = parse_poly(&one, "x^2 + 1").expect("label");
    let qq = wa.from_poly(&p.mul(&p.embed(&qx, 0), &p.embed(&qx, 1)));
    for (name, u, expect) in [
        ("x_1 + x_2", &e1, true),
        ("x_1 x_2", &e2, true),
        ("Q(x_1) Q(x_2) with Q = x^2 + 1", &qq, true),
        ("x_1", &wa.from_poly(&p.dot(0, 1)), false),
        ("s_1", &wa.crossing(0), false),
    ] {
        let got = wa.is_central(u);
        s.check(format!("ground n=2: {name} {}", if expect { "is central" } else { "is not central" }), got == expect, "");
        if got {
            s.check(format!("ground n=2: {name} supercommutes with every generator"), commutes_with_generators(&wa, u), "");
        }
    }
    let wq = WreathAlg::quantum(g.clone(), 2, q(1)).expect("quantum");
    let pq = &wq.poly;
    for (name, u, expect) in [
        ("X_1 X_2", wq.from_poly(&pq.mul(&pq.dot(0, 1), &pq.dot(1, 1))), true),
        ("X_1^-1 + X_2^-1", wq.from_poly(&pq.dot(0, -1).add(&pq.dot(1, -1))), true),
        ("X_1", wq.from_poly(&pq.dot(0, 1)), false),
        ("T_1", wq.crossing(0), false),
    ] {
        let got = wq.is_central(&u);
        s.check(format!("ground quantum n=2: {name} {}", if expect { "is central" } else { "is not central" }), got == expect, "");
        if got {
            s.check(format!("ground quantum n=2: {name} commutes with every generator"), commutes_with_generators(&wq, &u), "");
        }
    }
    for alg in [builtin::clifford_even(), builtin::clifford_odd()] {
        let alg = Arc::new(alg);
        let w2 = WreathAlg::degenerate(alg.clone(), 2);
        let cands = central_monomials(&alg, Variant::Degenerate, 2);
        for _ in 0..3 {
            let f = symmetric_central_sample(&w2.poly, &cands, rng);
            let u = w2.from_poly(&f);
            s.check(
                format!("{}: symmetric central sample {} is central", alg.name, fmt_poly(&w2.poly, &f)),
                w2.is_central(&u) && commutes_with_generators(&w2, &u),
                "",
            );
        }
    }

    let label = one.pin_label(&one.dot(0, 1)).expect("x is a pin label");
    let sess = Session::new(g, 2, Variant::Degenerate, Q::zero(), vec![label]).expect("session");
    let sp = sess.poly();
    let sym = sp.dot(0, 1).add(&sp.dot(1, 1));
    let z = sess.diagonal(&sym);
    let objs = sess.shuffles();
    s.check("path level: sum of (x_1 + x_2) 1_i is central", sess.is_central_path(&z), "");
    s.check("path level: sum of idempotents is central", sess.is_central_path(&sess.path_identity()), "");
    s.check(
        "path level: a single idempotent is not central",
        !sess.is_central_path(&PathElement::from_morphism(sess.identity(&objs[0]))),
        "",
    );
    s.check("path level: sum of x_1 1_i is not central", !sess.is_central_path(&sess.diagonal(&sp.dot(0, 1))), "");
    let mut off = z.clone();
    let extra: Morphism = sess.basis_morphism(&objs[0], &objs[1], &sp.one(), &perm::id(2));
    off = off.add(&PathElement::from_morphism(extra));
    s.check("path level: adding an off-diagonal block breaks centrality", !sess.is_central_path(&off), "");
    let mut comm = true;
    for _ in 0..5 {
        let u = rng.path(&sess, 3, 1, 1);
        comm &= matches!((sess.path_multiply(&u, &z), sess.path_multiply(&z, &u)), (Ok(a), Ok(b)) if a == b);
    }
    s.check("path level: the central element commutes with random path elements", comm, "");
    s
}

/// Centrality checks for one algebra: symmetric central samples on two strands
/// are central, a single dot and a crossing are not, and diagonals of central
/// polynomials are central in the path algebra of `sess`.
pub fn center_checks(suite: &mut Suite, alg: &Arc<FrobeniusAlgebra>, variant: Variant, z: &Q, sess: Option<&Session>, rng: &mut Sampler) {
    let name = &alg.name;
    let wa = match WreathAlg::new(alg.clone(), 2, variant, z.clone()) {
        Ok(w) => w,
        Err(e) => return suite.check(format!("{name}: center"), false, e.to_string()),
    };
    let cands = central_monomials(alg, variant, 2);
    for _ in 0..3 {
        let f = symmetric_central_sample(&wa.poly, &cands, rng);
        let u = wa.from_poly(&f);
        suite.check(
            format!("{name} n=2: symmetric central sample {} is central", fmt_poly(&wa.poly, &f)),
            wa.is_central(&u) && commutes_with_generators(&wa, &u),
            "",
        );
    }
    suite.check(format!("{name} n=2: a single dot is not central"), !wa.is_central(&wa.from_poly(&wa.poly.dot(0, 1))), "");
    suite.check(format!("{name} n=2: a crossing is not central"), !wa.is_central(&wa.crossing(0)), "");
    if let Some(sess) = sess {
        let cands = central_monomials(alg, variant, 1);
        let f = symmetric_central_sample(sess.poly(), &cands, rng);
        let zc = sess.diagonal(&f);
        suite.check(
            format!("{name} d={}: diagonal of {} is central in the path algebra", sess.d, fmt_poly(sess.poly(), &f)),
            sess.is_central_path(&zc),
            "",
        );
        suite.check(format!("{name} d={}: sum of idempotents is central", sess.d), sess.is_central_path(&sess.path_identity()), "");
    }
}

/// Inputs of a single-algebra verification run.
pub struct VerifyConfig {
    pub alg: Arc<FrobeniusAlgebra>,
    pub variant: Variant,
    pub z: Q,
    pub d: usize,
    /// One-strand labels as given; they need not all be pin labels.
    pub labels: Vec<PolyElement>,
}

/// Outcome of [`run_verify`]: one suite per area plus notes on how the inputs were used.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<Suite>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(Suite::passed)
    }
}

/// All suites restricted to one algebra. Labels that are pin labels define the
/// higher-level session; the others are used only for level-zero cyclotomic checks.
pub fn run_verify(cfg: &VerifyConfig, rng: &mut Sampler) -> VerifyReport {
    let alg = &cfg.alg;
    let one = PolyAlg::new(alg.clone(), 1, cfg.variant);
    let mut notes = Vec::new();
    let mut suites = Vec::new();

    let mut s = Suite::new("frobenius");
    frobenius_checks(&mut s, alg);
    suites.push(s);
    let mut s = Suite::new("teleporter");
    teleporter_checks(&mut s, alg);
    suites.push(s);
    let mut s = Suite::new("demazure");
    demazure_checks(&mut s, alg, &mut rng.fork("demazure"), 200);
    suites.push(s);
    let mut s = Suite::new("wreath");
    wreath_checks(&mut s, alg, &mut rng.fork("wreath"), 100, 3);
    suites.push(s);
    let mut s = Suite::new("oracle");
    if cfg.variant == Variant::Quantum {
        notes.push("the polynomial representation oracle covers the degenerate algebra only".into());
    }
    oracle_checks(&mut s, alg, &mut rng.fork("oracle"), 60, 40);
    suites.push(s);

    let mut pins = Vec::new();
    for f in &cfg.labels {
        match one.pin_label(f) {
            Ok(l) => pins.push(l),
            Err(e) => notes.push(format!("Q = {} is used for level-zero checks only: {e}", fmt_poly(&one, f))),
        }
    }
    if pins.is_empty() {
        pins = default_labels(alg, cfg.variant, 1);
        let shown: Vec<String> = pins.iter().map(|l| fmt_poly(&one, &l.element)).collect();
        notes.push(format!("higher-level checks use the default pin labels [{}]", shown.join(", ")));
    }
    let mut s = Suite::new("higher");
    let sess = match Session::new(alg.clone(), cfg.d, cfg.variant, cfg.z.clone(), pins) {
        Ok(sess) => {
            higher_checks(&mut s, &sess, &mut rng.fork("higher"), 60, 30, 10);
            Some(sess)
        }
        Err(e) => {
            s.check("session", false, format!("{}: {e}", e.code()));
            None
        }
    };
    suites.push(s);

    let mut s = Suite::new("cyclotomic");
    let mut crng = rng.fork("cyclotomic");
    let labels: Vec<PolyElement> = if cfg.labels.is_empty() {
        sess.iter().flat_map(|x| x.labels.iter().map(|l| l.element.clone())).collect()
    } else {
        cfg.labels.clone()
    };
    for label in labels {
        let c = CycloConfig { alg: alg.clone(), d: cfg.d, variant: cfg.variant, z: cfg.z.clone(), label, expected: None };
        cyclotomic_checks(&mut s, &c, &mut crng);
    }
    suites.push(s);

    let mut s = Suite::new("center");
    center_checks(&mut s, alg, cfg.variant, &cfg.z, sess.as_ref(), &mut rng.fork("center"));
    suites.push(s);
    VerifyReport { suites, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_labels_over_clifford_skip_x() {
        let labels = default_labels(&Arc::new(builtin::clifford_even()), Variant::Degenerate, 2);
        assert_eq!(labels.len(), 2);
        assert_eq!(labels[0].high_exp, 2);
    }
}
