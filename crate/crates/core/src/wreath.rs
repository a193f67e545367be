//! Affine wreath product algebras `W_n^aff(A)` and affine Frobenius Hecke
//! algebras `H_n^aff(A, z)` in the PBW normal form `a x^alpha sigma_w`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusAlgebra;
use crate::perm::{self, Perm};
use crate::poly::{add_term, Mono, PolyAlg, PolyElement, Variant};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    pub n: usize,
    pub variant: Variant,
    pub terms: BTreeMap<(Mono, Perm), Q>,
}

impl WreathElement {
    pub fn zero(n: usize, variant: Variant) -> Self {
        WreathElement { n, variant, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, w: Perm, c: Q) {
        add_term(&mut self.terms, (m, w), c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out += other;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n, self.variant);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect();
        }
        out
    }

    /// Polynomial coefficient of each permutation.
    pub fn by_perm(&self) -> BTreeMap<Perm, PolyElement> {
        let mut out: BTreeMap<Perm, PolyElement> = BTreeMap::new();
        for ((m, w), c) in &self.terms {
            out.entry(w.clone())
                .or_insert_with(|| PolyElement::zero(self.n, self.variant))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn from_by_perm(n: usize, variant: Variant, parts: &BTreeMap<Perm, PolyElement>) -> Self {
        let mut out = Self::zero(n, variant);
        for (w, f) in parts {
            for (m, c) in &f.terms {
                out.add_term(m.clone(), w.clone(), c.clone());
            }
        }
        out
    }

    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|(m, _)| m.exps.iter().sum::<i32>()).max().unwrap_or(0)
    }

    pub fn max_abs_exp(&self) -> i32 {
        self.terms.keys().flat_map(|(m, _)| m.exps.iter().map(|e| e.abs())).max().unwrap_or(0)
    }
}

/// Generators for right multiplication.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Token `a` (coordinates in B) on strand `i`.
    Token(usize, Vec<Q>),
    /// `x_i^e` / `X_i^e`; negative `e` only in the quantum variant.
    Dot(usize, i32),
    Crossing(usize),
}

#[derive(Debug, Clone)]
pub struct WreathAlg {
    pub poly: PolyAlg,
    /// Hecke parameter; ignored for the degenerate variant.
    pub z: Q,
}

impl WreathAlg {
    pub fn degenerate(alg: Arc<FrobeniusAlgebra>, n: usize) -> Self {
        WreathAlg { poly: PolyAlg::new(alg, n, Variant::Degenerate), z: Q::zero() }
    }

    /// The quantum variant needs a symmetric algebra with an even trace.
    pub fn quantum(alg: Arc<FrobeniusAlgebra>, n: usize, z: Q) -> Result<Self> {
        if !alg.symmetric || alg.eps != 0 {
            return Err(Error::WrongVariant(format!(
                "quantum algebras need a symmetric algebra with even trace; {} has eps={} symmetric={}",
                alg.name, alg.eps, alg.symmetric
            )));
        }
        Ok(WreathAlg { poly: PolyAlg::new(alg, n, Variant::Quantum), z })
    }

    pub fn new(alg: Arc<FrobeniusAlgebra>, n: usize, variant: Variant, z: Q) -> Result<Self> {
        match variant {
            Variant::Degenerate => Ok(Self::degenerate(alg, n)),
            Variant::Quantum => Self::quantum(alg, n, z),
        }
    }

    pub fn n(&self) -> usize {
        self.poly.n
    }

    pub fn variant(&self) -> Variant {
        self.poly.variant
    }

    pub fn alg(&self) -> &FrobeniusAlgebra {
        &self.poly.alg
    }

    pub fn zero(&self) -> WreathElement {
        WreathElement::zero(self.n(), self.variant())
    }

    pub fn one(&self) -> WreathElement {
        self.from_poly(&self.poly.one())
    }

    pub fn from_poly(&self, f: &PolyElement) -> WreathElement {
        self.poly_times_perm(f, &perm::id(self.n()))
    }

    pub fn poly_times_perm(&self, f: &PolyElement, w: &[u8]) -> WreathElement {
        let mut out = self.zero();
        for (m, c) in &f.terms {
            out.add_term(m.clone(), w.to_vec(), c.clone());
        }
        out
    }

    /// `sigma_w` / `T_w`.
    pub fn perm_elem(&self, w: &[u8]) -> WreathElement {
        self.poly_times_perm(&self.poly.one(), w)
    }

    pub fn crossing(&self, i: usize) -> WreathElement {
        self.perm_elem(&perm::times_s(&perm::id(self.n()), i))
    }

    /// `T_i^{-1} = T_i - z t_{i,i+1}`; in the degenerate variant `sigma_i` is an involution.
    pub fn crossing_inverse(&self, i: usize) -> WreathElement {
        match self.variant() {
            Variant::Degenerate => self.crossing(i),
            Variant::Quantum => self
                .crossing(i)
                .sub(&self.from_poly(&self.poly.tele(i).scale(&self.z))),
        }
    }

    pub fn generator(&self, g: &Generator) -> Result<WreathElement> {
        let n = self.n();
        match g {
            Generator::Token(i, a) if *i < n => Ok(self.from_poly(&self.poly.token(*i, a))),
            Generator::Dot(i, e) if *i < n => {
                if *e < 0 && self.variant() == Variant::Degenerate {
                    return Err(Error::WrongVariant("inverse dots exist only in the quantum variant".into()));
                }
                Ok(self.from_poly(&self.poly.dot(*i, *e)))
            }
            Generator::Crossing(i) if i + 1 < n => Ok(self.crossing(*i)),
            _ => Err(Error::IndexOutOfRange(format!("{g:?} on {n} strands"))),
        }
    }

    fn check(&self, u: &WreathElement) -> Result<()> {
        if u.n != self.n() || u.variant != self.variant() {
            return Err(Error::WrongVariant(format!(
                "element has n={} {:?}, expected n={} {:?}",
                u.n,
                u.variant,
                self.n(),
                self.variant()
            )));
        }
        Ok(())
    }

    /// `h sigma_i sigma_v` with `h` already on the left, as a map perm -> coefficient.
    fn left_crossing_on_perm(&self, i: usize, h: &PolyElement, v: &[u8], out: &mut BTreeMap<Perm, PolyElement>) {
        let siv = perm::s_times(i, v);
        let acc = |out: &mut BTreeMap<Perm, PolyElement>, w: Perm, f: PolyElement| {
            if f.is_zero() {
                return;
            }
            let e = out.entry(w).or_insert_with(|| self.poly.zero());
            *e += &f;
        };
        if !perm::is_left_descent(v, i) {
            acc(out, siv, h.clone());
            return;
        }
        match self.variant() {
            Variant::Degenerate => acc(out, siv, h.clone()),
            Variant::Quantum => {
                // T_i T_i T_{s_i v} = z t_{i,i+1} T_v + T_{s_i v}
                let zt = self.poly.tele(i).scale(&self.z);
                acc(out, v.to_vec(), self.poly.mul(h, &zt));
                acc(out, siv, h.clone());
            }
        }
    }

    /// `sigma_w g` rewritten as `sum_v g_v sigma_v`.
    pub fn perm_times_poly(&self, w: &[u8], g: &PolyElement) -> BTreeMap<Perm, PolyElement> {
        let mut cur: BTreeMap<Perm, PolyElement> = BTreeMap::new();
        if g.is_zero() {
            return cur;
        }
        cur.insert(perm::id(self.n()), g.clone());
        // sigma_w = sigma_{i_1} .. sigma_{i_k}; apply the rightmost crossing first
        for &i in perm::reduced_word(w).iter().rev() {
            let mut next = BTreeMap::new();
            for (v, h) in &cur {
                let sh = self.poly.s(i, h);
                self.left_crossing_on_perm(i, &sh, v, &mut next);
                let corr = match self.variant() {
                    Variant::Degenerate => self.poly.demazure(i, h).expect("valid index").scale(&-Q::one()),
                    Variant::Quantum => self.poly.delta(i, h).expect("valid index").scale(&self.z),
                };
                if !corr.is_zero() {
                    let e = next.entry(v.clone()).or_insert_with(|| self.poly.zero());
                    *e += &corr;
                }
            }
            next.retain(|_, f| !f.is_zero());
            cur = next;
        }
        cur
    }

    /// `u * g` for a polynomial `g`.
    pub fn mul_poly_right(&self, u: &WreathElement, g: &PolyElement) -> WreathElement {
        let mut out: BTreeMap<Perm, PolyElement> = BTreeMap::new();
        for (x, f) in u.by_perm() {
            for (v, h) in self.perm_times_poly(&x, g) {
                let e = out.entry(v).or_insert_with(|| self.poly.zero());
                *e += &self.poly.mul(&f, &h);
            }
        }
        out.retain(|_, f| !f.is_zero());
        WreathElement::from_by_perm(self.n(), self.variant(), &out)
    }

    pub fn mul_poly_left(&self, g: &PolyElement, u: &WreathElement) -> WreathElement {
        let mut out = self.zero();
        for (w, f) in u.by_perm() {
            out += &self.poly_times_perm(&self.poly.mul(g, &f), &w);
        }
        out
    }

    /// `u * sigma_i`.
    pub fn mul_crossing_right(&self, u: &WreathElement, i: usize) -> WreathElement {
        let mut out = self.zero();
        for ((m, w), c) in &u.terms {
            if !perm::is_right_descent(w, i) {
                out.add_term(m.clone(), perm::times_s(w, i), c.clone());
                continue;
            }
            let w1 = perm::times_s(w, i);
            out.add_term(m.clone(), w1.clone(), c.clone());
            if self.variant() == Variant::Quantum && !self.z.is_zero() {
                // f T_{w'} T_i T_i = f (w'(z t) T_w + T_{w'})
                let mut f = self.poly.zero();
                f.add_term(m.clone(), c.clone());
                let t = self.poly.permute(&w1, &self.poly.tele(i)).scale(&self.z);
                for (m2, c2) in self.poly.mul(&f, &t).terms {
                    out.add_term(m2, w.clone(), c2);
                }
            }
        }
        out
    }

    pub fn mul_generator_right(&self, u: &WreathElement, g: &Generator) -> Result<WreathElement> {
        self.check(u)?;
        match g {
            Generator::Crossing(i) if i + 1 < self.n() => Ok(self.mul_crossing_right(u, *i)),
            _ => {
                let ge = self.generator(g)?;
                Ok(self.mul_poly_right(u, &ge.by_perm()[&perm::id(self.n())]))
            }
        }
    }

    pub fn mul(&self, u: &WreathElement, v: &WreathElement) -> WreathElement {
        let mut out = self.zero();
        for (w, g) in v.by_perm() {
            let mut part = self.mul_poly_right(u, &g);
            for i in perm::reduced_word(&w) {
                part = self.mul_crossing_right(&part, i);
            }
            out += &part;
        }
        out
    }

    pub fn try_mul(&self, u: &WreathElement, v: &WreathElement) -> Result<WreathElement> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.mul(u, v))
    }

    pub fn product(&self, factors: &[WreathElement]) -> WreathElement {
        factors.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// Center test: no permutation terms and a symmetric supercentral polynomial part.
    pub fn is_central(&self, u: &WreathElement) -> bool {
        let parts = u.by_perm();
        let id = perm::id(self.n());
        if parts.keys().any(|w| *w != id) {
            return false;
        }
        match parts.get(&id) {
            None => true,
            Some(f) => self.poly.is_symmetric_central(f),
        }
    }

    /// Parity of each term (crossings are even).
    pub fn homogeneous_parts(&self, u: &WreathElement) -> [WreathElement; 2] {
        let mut parts = [self.zero(), self.zero()];
        for ((m, w), c) in &u.terms {
            parts[self.poly.mono_parity(m) as usize].add_term(m.clone(), w.clone(), c.clone());
        }
        parts
    }

    /// Supercommutator `u g - (-1)^{|u||g|} g u` with a homogeneous `g` of parity `gp`.
    pub fn supercommutator(&self, u: &WreathElement, g: &WreathElement, gp: u8) -> WreathElement {
        let mut out = self.zero();
        for (p, part) in self.homogeneous_parts(u).iter().enumerate() {
            let s = crate::rational::sign(p as u8 * gp == 1);
            out += &self.mul(part, g).sub(&self.mul(g, part).scale(&s));
        }
        out
    }

    /// All generators with their parities.
    pub fn generators(&self) -> Vec<(WreathElement, u8)> {
        let n = self.n();
        let mut out = Vec::new();
        for k in 0..n {
            for b in 0..self.alg().dim() {
                out.push((self.from_poly(&self.poly.token(k, &self.alg().basis(b))), self.alg().parity[b]));
            }
            out.push((self.from_poly(&self.poly.dot(k, 1)), self.poly.dot_parity()));
            if self.variant() == Variant::Quantum {
                out.push((self.from_poly(&self.poly.dot(k, -1)), 0));
            }
        }
        for i in 0..n.saturating_sub(1) {
            out.push((self.crossing(i), 0));
        }
        out
    }
}

impl std::ops::AddAssign<&WreathElement> for WreathElement {
    fn add_assign(&mut self, other: &WreathElement) {
        for ((m, w), c) in &other.terms {
            self.add_term(m.clone(), w.clone(), c.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;

    #[test]
    fn crossing_times_dot() {
        let w = WreathAlg::degenerate(Arc::new(builtin::ground()), 2);
        let lhs = w.mul(&w.crossing(0), &w.from_poly(&w.poly.dot(0, 1)));
        let rhs = w.mul(&w.from_poly(&w.poly.dot(1, 1)), &w.crossing(0)).sub(&w.one());
        assert_eq!(lhs, rhs);
        assert_eq!(w.mul(&w.crossing(0), &w.crossing(0)), w.one());
    }

    #[test]
    fn quantum_dot_conjugation() {
        for z in [0, 1, 2, -3] {
            let w = WreathAlg::quantum(Arc::new(builtin::ground()), 2, q(z)).unwrap();
            let t = w.crossing(0);
            let x1 = w.from_poly(&w.poly.dot(0, 1));
            let x2 = w.from_poly(&w.poly.dot(1, 1));
            assert_eq!(w.product(&[t.clone(), x1.clone(), t.clone()]), x2);
            let expect = w.mul(&x2, &t).sub(&x2.scale(&q(z)));
            assert_eq!(w.mul(&t, &x1), expect);
            assert_eq!(w.mul(&t, &w.crossing_inverse(0)), w.one());
        }
    }

    #[test]
    fn center_examples() {
        let w = WreathAlg::degenerate(Arc::new(builtin::ground()), 2);
        let e1 = w.from_poly(&w.poly.dot(0, 1).add(&w.poly.dot(1, 1)));
        assert!(w.is_central(&e1));
        assert!(!w.is_central(&w.from_poly(&w.poly.dot(0, 1))));
        assert!(!w.is_central(&w.crossing(0)));
    }
}
