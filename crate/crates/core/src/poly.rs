//! `Pol_n(A)` (dots `x_i` of parity eps, twisted by psi) and its Laurent
//! counterpart `P_n(A)` (even central dots `X_i`), in the normal form
//! `a x_1^{k_1} .. x_n^{k_n}` with all tokens left of all dots.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::frobenius::{Elem, FrobeniusAlgebra};
use crate::rational::{add_assign_q, mul_q, sign, solve, Matrix, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Degenerate,
    Quantum,
}

/// A tensor word of basis indices together with an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub word: Word,
    pub exps: Exps,
}

impl Mono {
    pub fn new(word: impl Into<Word>, exps: impl Into<Exps>) -> Self {
        Mono { word: word.into(), exps: exps.into() }
    }
}

/// Inline storage covers up to four strands without touching the heap.
pub type Word = SmallVec<[u8; 4]>;
pub type Exps = SmallVec<[i32; 4]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyElement {
    pub n: usize,
    pub variant: Variant,
    pub terms: BTreeMap<Mono, Q>,
}

pub(crate) fn add_term<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            add_assign_q(e.get_mut(), &c);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl PolyElement {
    pub fn zero(n: usize, variant: Variant) -> Self {
        PolyElement { n, variant, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        add_term(&mut self.terms, m, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out += other;
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), mul_q(x, c));
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n, self.variant);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        out
    }

    pub fn max_exp(&self, j: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exps[j]).max()
    }

    pub fn min_exp(&self, j: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exps[j]).min()
    }

    /// Largest total dot degree (sum of exponents) of any term.
    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|m| m.exps.iter().sum::<i32>()).max().unwrap_or(0)
    }

    /// Largest absolute exponent of any single dot.
    pub fn max_abs_exp(&self) -> i32 {
        self.terms.keys().flat_map(|m| m.exps.iter().map(|e| e.abs())).max().unwrap_or(0)
    }
}

fn cartesian(lists: &[Vec<(usize, Q)>]) -> Vec<(Vec<u8>, Q)> {
    let mut acc: Vec<(Vec<u8>, Q)> = vec![(Vec::with_capacity(lists.len()), Q::one())];
    for l in lists {
        let mut next = Vec::with_capacity(acc.len() * l.len());
        for (w, c) in &acc {
            for (k, x) in l {
                let mut w2 = w.clone();
                w2.push(*k as u8);
                next.push((w2, mul_q(c, x)));
            }
        }
        acc = next;
    }
    acc
}

fn elem_terms(a: &[Q]) -> Vec<(usize, Q)> {
    a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Arithmetic context: the algebra, the strand count and the variant.
#[derive(Debug)]
pub struct PolyAlg {
    pub alg: Arc<FrobeniusAlgebra>,
    pub n: usize,
    pub variant: Variant,
    dem_cache: Mutex<HashMap<(usize, Vec<i32>), PolyElement>>,
    dem_mono_cache: Mutex<Vec<HashMap<Mono, PolyElement>>>,
}

impl Clone for PolyAlg {
    fn clone(&self) -> Self {
        PolyAlg::new(self.alg.clone(), self.n, self.variant)
    }
}

impl PolyAlg {
    pub fn new(alg: Arc<FrobeniusAlgebra>, n: usize, variant: Variant) -> Self {
        PolyAlg { alg, n, variant, dem_cache: Mutex::new(HashMap::new()), dem_mono_cache: Mutex::new(Vec::new()) }
    }

    /// Parity of the dots.
    pub fn dot_parity(&self) -> u8 {
        match self.variant {
            Variant::Degenerate => self.alg.eps,
            Variant::Quantum => 0,
        }
    }

    pub fn word_parity(&self, w: &[u8]) -> u8 {
        (w.iter().map(|&b| self.alg.parity[b as usize] as u32).sum::<u32>() % 2) as u8
    }

    pub fn mono_parity(&self, m: &Mono) -> u8 {
        let d: i64 = m.exps.iter().map(|&e| e as i64).sum();
        ((self.word_parity(&m.word) as i64 + self.dot_parity() as i64 * d).rem_euclid(2)) as u8
    }

    pub fn zero(&self) -> PolyElement {
        PolyElement::zero(self.n, self.variant)
    }

    fn check(&self, f: &PolyElement) -> Result<()> {
        if f.n != self.n || f.variant != self.variant {
            return Err(Error::WrongVariant(format!(
                "element has n={} {:?}, expected n={} {:?}",
                f.n, f.variant, self.n, self.variant
            )));
        }
        Ok(())
    }

    pub fn scalar(&self, c: Q) -> PolyElement {
        let unit = elem_terms(&self.alg.unit);
        let lists = vec![unit; self.n];
        let mut out = self.zero();
        for (w, x) in cartesian(&lists) {
            out.add_term(Mono::new(w, vec![0; self.n]), x * &c);
        }
        out
    }

    pub fn one(&self) -> PolyElement {
        self.scalar(Q::one())
    }

    /// Token `a` on strand `i` (0-based).
    pub fn token(&self, i: usize, a: &[Q]) -> PolyElement {
        let unit = elem_terms(&self.alg.unit);
        let lists: Vec<_> = (0..self.n).map(|k| if k == i { elem_terms(a) } else { unit.clone() }).collect();
        let mut out = self.zero();
        for (w, x) in cartesian(&lists) {
            out.add_term(Mono::new(w, vec![0; self.n]), x);
        }
        out
    }

    /// Pure tensor `a_1 (x) .. (x) a_n`.
    pub fn tensor(&self, factors: &[Elem]) -> PolyElement {
        let lists: Vec<_> = factors.iter().map(|a| elem_terms(a)).collect();
        let mut out = self.zero();
        for (w, x) in cartesian(&lists) {
            out.add_term(Mono::new(w, vec![0; self.n]), x);
        }
        out
    }

    pub fn basis_word(&self, word: &[u8]) -> PolyElement {
        let mut out = self.zero();
        out.add_term(Mono::new(word.to_vec(), vec![0; self.n]), Q::one());
        out
    }

    /// `x_i^e` (or `X_i^e`), 0-based `i`.
    pub fn dot(&self, i: usize, e: i32) -> PolyElement {
        let mut exps = vec![0; self.n];
        exps[i] = e;
        self.monomial_times_one(exps)
    }

    pub fn monomial_times_one(&self, exps: Vec<i32>) -> PolyElement {
        let one = self.one();
        let mut out = self.zero();
        for (m, c) in one.terms {
            out.add_term(Mono::new(m.word, exps.clone()), c);
        }
        out
    }

    /// Products of basis words in `A^{(x)n}` with the Koszul sign.
    pub fn word_mul(&self, u: &[u8], v: &[u8]) -> Vec<(Vec<u8>, Q)> {
        let p = &self.alg.parity;
        let mut s = 0u32;
        for k in 0..u.len() {
            for l in 0..k {
                s += (p[u[k] as usize] * p[v[l] as usize]) as u32;
            }
        }
        let sg = sign(s % 2 == 1);
        let single = (0..u.len()).all(|k| self.alg.basis_mul(u[k] as usize, v[k] as usize).len() == 1);
        if single {
            let mut c = sg;
            let mut word = Vec::with_capacity(u.len());
            for k in 0..u.len() {
                let (j, x) = &self.alg.basis_mul(u[k] as usize, v[k] as usize)[0];
                word.push(*j as u8);
                if !x.is_one() {
                    c = mul_q(&c, x);
                }
            }
            return vec![(word, c)];
        }
        let lists: Vec<Vec<(usize, Q)>> = (0..u.len())
            .map(|k| self.alg.basis_mul(u[k] as usize, v[k] as usize).to_vec())
            .collect();
        cartesian(&lists).into_iter().map(|(w, c)| (w, mul_q(&c, &sg))).collect()
    }

    /// `x^alpha b_v = sign * psi^{-alpha}(b_v) x^alpha`, returned as the words of `psi^{-alpha}(b_v)`.
    fn dots_past_word(&self, exps: &[i32], v: &[u8]) -> Vec<(Vec<u8>, Q)> {
        if self.variant == Variant::Quantum || exps.iter().all(|&e| e == 0) {
            return vec![(v.to_vec(), Q::one())];
        }
        let total: i64 = exps.iter().map(|&e| e as i64).sum();
        let odd = self.alg.eps == 1 && self.word_parity(v) == 1 && total % 2 != 0;
        let sg = sign(odd);
        if self.alg.symmetric {
            return vec![(v.to_vec(), sg)];
        }
        let lists: Vec<Vec<(usize, Q)>> = (0..v.len())
            .map(|k| elem_terms(&self.alg.psi_pow_basis(-(exps[k] as i64), v[k] as usize)))
            .collect();
        cartesian(&lists).into_iter().map(|(w, c)| (w, mul_q(&c, &sg))).collect()
    }

    fn dot_reorder_odd(&self, a: &[i32], b: &[i32]) -> bool {
        if self.dot_parity() == 0 {
            return false;
        }
        let mut s: i64 = 0;
        for k in 0..a.len() {
            for l in 0..k {
                s += a[k] as i64 * b[l] as i64;
            }
        }
        s.rem_euclid(2) == 1
    }

    pub fn mono_mul(&self, m1: &Mono, m2: &Mono) -> Vec<(Mono, Q)> {
        let mut out = Vec::new();
        let s2 = sign(self.dot_reorder_odd(&m1.exps, &m2.exps));
        let exps: Vec<i32> = m1.exps.iter().zip(&m2.exps).map(|(a, b)| a + b).collect();
        for (v2, c1) in self.dots_past_word(&m1.exps, &m2.word) {
            for (w, c2) in self.word_mul(&m1.word, &v2) {
                out.push((Mono::new(w, exps.clone()), mul_q(&mul_q(&c1, &c2), &s2)));
            }
        }
        out
    }

    pub fn mul(&self, f: &PolyElement, g: &PolyElement) -> PolyElement {
        debug_assert!(self.check(f).is_ok() && self.check(g).is_ok());
        let mut out = self.zero();
        for (m1, c1) in &f.terms {
            for (m2, c2) in &g.terms {
                let c = mul_q(c1, c2);
                for (m, x) in self.mono_mul(m1, m2) {
                    out.add_term(m, mul_q(&x, &c));
                }
            }
        }
        out
    }

    pub fn try_mul(&self, f: &PolyElement, g: &PolyElement) -> Result<PolyElement> {
        self.check(f)?;
        self.check(g)?;
        Ok(self.mul(f, g))
    }

    /// Superpermutation action of `w` (one-line, 0-based).
    pub fn permute_mono(&self, w: &[u8], m: &Mono) -> (Mono, Q) {
        let n = self.n;
        let mut word = vec![0u8; n];
        let mut exps = vec![0i32; n];
        let p = &self.alg.parity;
        let e = self.dot_parity() as i64;
        let mut s: i64 = 0;
        for k in 0..n {
            word[w[k] as usize] = m.word[k];
            exps[w[k] as usize] = m.exps[k];
            for l in k + 1..n {
                if w[k] > w[l] {
                    s += (p[m.word[k] as usize] * p[m.word[l] as usize]) as i64;
                    s += e * m.exps[k] as i64 * m.exps[l] as i64;
                }
            }
        }
        (Mono::new(word, exps), sign(s.rem_euclid(2) == 1))
    }

    pub fn permute(&self, w: &[u8], f: &PolyElement) -> PolyElement {
        let mut out = self.zero();
        for (m, c) in &f.terms {
            let (m2, s) = self.permute_mono(w, m);
            out.add_term(m2, c * s);
        }
        out
    }

    /// `s_i` for 0-based `i`.
    pub fn s(&self, i: usize, f: &PolyElement) -> PolyElement {
        let mut w = crate::perm::id(self.n);
        w.swap(i, i + 1);
        self.permute(&w, f)
    }

    /// `t_{i,j} = sum_b (-1)^{eps b} b_i b_j^v` (0-based strands).
    pub fn teleporter(&self, i: usize, j: usize) -> Result<PolyElement> {
        if i >= self.n || j >= self.n || i == j {
            return Err(Error::IndexOutOfRange(format!("teleporter({}, {}) on {} strands", i + 1, j + 1, self.n)));
        }
        let mut out = self.zero();
        for b in 0..self.alg.dim() {
            let s = sign(self.alg.eps * self.alg.parity[b] == 1);
            let term = self.mul(&self.token(i, &self.alg.basis(b)), &self.token(j, self.alg.dual_basis(b)));
            out += &term.scale(&s);
        }
        Ok(out)
    }

    /// `t_{i,i+1}` for 0-based `i`.
    pub fn tele(&self, i: usize) -> PolyElement {
        self.teleporter(i, i + 1).expect("adjacent strands")
    }

    fn check_adjacent(&self, i: usize) -> Result<()> {
        if i + 1 >= self.n {
            return Err(Error::IndexOutOfRange(format!("operator index {} needs at least {} strands", i + 1, i + 2)));
        }
        Ok(())
    }

    /// Frobenius Demazure operator `d_i` (0-based `i`).
    pub fn demazure(&self, i: usize, f: &PolyElement) -> Result<PolyElement> {
        let mut out = self.zero();
        self.demazure_acc(i, f, &Q::one(), &mut out)?;
        Ok(out)
    }

    /// `out += c * d_i(f)`.
    pub fn demazure_acc(&self, i: usize, f: &PolyElement, c: &Q, out: &mut PolyElement) -> Result<()> {
        self.check(f)?;
        self.check_adjacent(i)?;
        if self.variant != Variant::Degenerate {
            return Err(Error::WrongVariant("the Demazure operator acts on the degenerate variant".into()));
        }
        let mut cache = self.dem_mono_cache.lock().unwrap();
        if cache.len() < self.n {
            cache.resize_with(self.n, HashMap::new);
        }
        let cache = &mut cache[i];
        for (m, x) in &f.terms {
            if m.exps[i] == 0 && m.exps[i + 1] == 0 {
                continue;
            }
            if !cache.contains_key(m) {
                let dots = self.demazure_dots(i, &m.exps);
                cache.insert(m.clone(), self.mul(&self.s(i, &self.basis_word(&m.word)), &dots));
            }
            out.add_scaled(&cache[m], &mul_q(x, c));
        }
        Ok(())
    }

    /// `d_i(x^alpha)` via the twisted Leibniz rule on `x_j * x^{alpha - e_j}`.
    fn demazure_dots(&self, i: usize, exps: &[i32]) -> PolyElement {
        let key = (i, exps.to_vec());
        if let Some(v) = self.dem_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let Some(j) = exps.iter().position(|&e| e > 0) else {
            return self.zero();
        };
        let mut rest = exps.to_vec();
        rest[j] -= 1;
        let rest_mono = self.monomial_times_one(rest.clone());
        let mut out = self.zero();
        if j == i {
            out = self.mul(&self.tele(i), &rest_mono);
        } else if j == i + 1 {
            let t = self.teleporter(i + 1, i).expect("adjacent strands");
            out = self.mul(&t, &rest_mono).scale(&-Q::one());
        }
        if rest.iter().any(|&e| e > 0) && (rest[i] > 0 || rest[i + 1] > 0) {
            let sj = if j == i { i + 1 } else if j == i + 1 { i } else { j };
            let d = self.demazure_dots(i, &rest);
            out += &self.mul(&self.dot(sj, 1), &d);
        }
        self.dem_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Quantum operator `D_i(a p) = t_{i,i+1} a X_{i+1} (s_i(p) - p) / (X_i - X_{i+1})`.
    pub fn delta(&self, i: usize, f: &PolyElement) -> Result<PolyElement> {
        self.check(f)?;
        self.check_adjacent(i)?;
        if self.variant != Variant::Quantum {
            return Err(Error::WrongVariant("the operator Delta acts on the quantum variant".into()));
        }
        let t = self.tele(i);
        let mut out = self.zero();
        for (m, c) in &f.terms {
            let quot = self.geometric_quotient(i, &m.exps);
            if quot.is_empty() {
                continue;
            }
            let mut g = self.zero();
            for (exps, x) in quot {
                let mut e2 = exps;
                e2[i + 1] += 1;
                g.add_term(Mono::new(m.word.clone(), e2), x);
            }
            out += &self.mul(&t, &g).scale(c);
        }
        Ok(out)
    }

    /// Exponent vectors and coefficients of `(s_i(X^alpha) - X^alpha) / (X_i - X_{i+1})`.
    pub fn geometric_quotient(&self, i: usize, exps: &[i32]) -> Vec<(Vec<i32>, Q)> {
        let (a, b) = (exps[i], exps[i + 1]);
        let k = a - b;
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        // u = X_i, v = X_{i+1}; (u^b v^a - u^a v^b)/(u - v)
        let (base, len, sg) = if k > 0 { (b, k, -Q::one()) } else { (a, -k, Q::one()) };
        for j in 0..len {
            let mut e = exps.to_vec();
            e[i] = base + j;
            e[i + 1] = base + len - 1 - j;
            out.push((e, sg.clone()));
        }
        out
    }

    /// Supercommutes with all tokens and dots, and is fixed by every `s_i`.
    pub fn is_symmetric_central(&self, f: &PolyElement) -> bool {
        if self.check(f).is_err() {
            return false;
        }
        for i in 0..self.n.saturating_sub(1) {
            if self.s(i, f) != *f {
                return false;
            }
        }
        self.is_central(f)
    }

    pub fn homogeneous_parts(&self, f: &PolyElement) -> [PolyElement; 2] {
        let mut parts = [self.zero(), self.zero()];
        for (m, c) in &f.terms {
            parts[self.mono_parity(m) as usize].add_term(m.clone(), c.clone());
        }
        parts
    }

    pub fn is_central(&self, f: &PolyElement) -> bool {
        let mut gens = Vec::new();
        for k in 0..self.n {
            for b in 0..self.alg.dim() {
                gens.push((self.token(k, &self.alg.basis(b)), self.alg.parity[b]));
            }
            gens.push((self.dot(k, 1), self.dot_parity()));
        }
        let parts = self.homogeneous_parts(f);
        for (p, part) in parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            for (g, gp) in &gens {
                let s = sign(p as u8 * gp == 1);
                if self.mul(part, g) != self.mul(g, part).scale(&s) {
                    return false;
                }
            }
        }
        true
    }

    /// Places a one-strand element on strand `k` (0-based).
    pub fn embed(&self, f: &PolyElement, k: usize) -> PolyElement {
        let unit = elem_terms(&self.alg.unit);
        let mut out = self.zero();
        for (m, c) in &f.terms {
            let lists: Vec<_> = (0..self.n)
                .map(|j| if j == k { vec![(m.word[0] as usize, Q::one())] } else { unit.clone() })
                .collect();
            let mut exps = vec![0; self.n];
            exps[k] = m.exps[0];
            for (w, x) in cartesian(&lists) {
                out.add_term(Mono::new(w, exps.clone()), x * c);
            }
        }
        out
    }

    fn lex_max_exps(f: &PolyElement) -> Option<Vec<i32>> {
        f.terms.keys().map(|m| m.exps.to_vec()).max()
    }

    fn coefficient_at(&self, f: &PolyElement, exps: &[i32]) -> BTreeMap<Vec<u8>, Q> {
        f.terms
            .iter()
            .filter(|(m, _)| m.exps.as_slice() == exps)
            .map(|(m, c)| (m.word.to_vec(), c.clone()))
            .collect()
    }

    fn words(&self) -> Vec<Vec<u8>> {
        let lists: Vec<Vec<(usize, Q)>> = vec![(0..self.alg.dim()).map(|b| (b, Q::one())).collect(); self.n];
        cartesian(&lists).into_iter().map(|(w, _)| w).collect()
    }

    /// Solves `T * kappa = target` for `T` in `A^{(x)n}`.
    fn right_solve(&self, kappa: &BTreeMap<Vec<u8>, Q>, target: &BTreeMap<Vec<u8>, Q>) -> Option<BTreeMap<Vec<u8>, Q>> {
        let words = self.words();
        let index: HashMap<&Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let dim = words.len();
        let mut mat: Matrix = vec![vec![Q::zero(); dim]; dim];
        for (col, u) in words.iter().enumerate() {
            for (v, c) in kappa {
                for (w, x) in self.word_mul(u, v) {
                    mat[index[&w]][col] += c * x;
                }
            }
        }
        let mut rhs = vec![Q::zero(); dim];
        for (w, c) in target {
            rhs[index[w]] = c.clone();
        }
        let sol = solve(&mat, &rhs)?;
        Some(words.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).collect())
    }

    /// `g` with `g * h = f`, by leading-term division in lex order.
    pub fn exact_divide(&self, f: &PolyElement, h: &PolyElement) -> Result<PolyElement> {
        self.check(f)?;
        self.check(h)?;
        let gamma = Self::lex_max_exps(h).ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
        let kappa_h = self.coefficient_at(h, &gamma);
        let lo: Vec<i32> = (0..self.n)
            .map(|j| match self.variant {
                Variant::Degenerate => 0,
                Variant::Quantum => f.min_exp(j).unwrap_or(0) - h.max_exp(j).unwrap_or(0),
            })
            .collect();
        let mut rem = f.clone();
        let mut quot = self.zero();
        let mut steps = 0usize;
        while let Some(alpha) = Self::lex_max_exps(&rem) {
            steps += 1;
            let shift: Vec<i32> = alpha.iter().zip(&gamma).map(|(a, g)| a - g).collect();
            if shift.iter().zip(&lo).any(|(s, l)| s < l) || steps > 100_000 {
                return Err(Error::NotDivisible("leading term is not a multiple of the divisor".into()));
            }
            // x^shift * (kappa_h x^gamma) = kappa' x^alpha
            let mut lead_h = self.zero();
            for (w, c) in &kappa_h {
                lead_h.add_term(Mono::new(w.clone(), gamma.clone()), c.clone());
            }
            let shifted = self.mul(&self.monomial_times_one(shift.clone()), &lead_h);
            let kappa = self.coefficient_at(&shifted, &alpha);
            let target = self.coefficient_at(&rem, &alpha);
            let t = self
                .right_solve(&kappa, &target)
                .ok_or_else(|| Error::NotDivisible("leading coefficient equation has no solution".into()))?;
            let mut term = self.zero();
            for (w, c) in t {
                term.add_term(Mono::new(w, shift.clone()), c);
            }
            rem = rem.sub(&self.mul(&term, h));
            quot += &term;
        }
        Ok(quot)
    }

    /// Validates an element of `Pol_1(A)` / `P_1(A)` as a pin label.
    pub fn pin_label(&self, f: &PolyElement) -> Result<PinLabel> {
        self.label(f, true)
    }

    /// Weaker check for level-zero cyclotomic quotients: `f` must be even and
    /// normal (`f Pol_1 = Pol_1 f`) rather than central.
    pub fn cyclotomic_label(&self, f: &PolyElement) -> Result<PinLabel> {
        self.label(f, false)
    }

    /// True if `f g` lies in `Pol_1 f` for every generator `g`.
    fn is_normal(&self, f: &PolyElement) -> bool {
        let tokens: Vec<PolyElement> = (0..self.alg.dim()).map(|b| self.token(0, &self.alg.basis(b))).collect();
        let x = self.dot(0, 1);
        let mut gens: Vec<(PolyElement, Vec<PolyElement>)> = tokens.iter().map(|t| (t.clone(), tokens.clone())).collect();
        let with_x: Vec<PolyElement> = tokens.iter().flat_map(|t| [t.clone(), self.mul(t, &x)]).collect();
        gens.push((x, with_x));
        for (g, cands) in gens {
            let target = self.mul(f, &g);
            let rows: Vec<PolyElement> = cands.iter().map(|h| self.mul(h, f)).collect();
            let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
            for r in rows.iter().chain(std::iter::once(&target)) {
                for m in r.terms.keys() {
                    let k = index.len();
                    index.entry(m.clone()).or_insert(k);
                }
            }
            let mut a: Matrix = vec![vec![Q::zero(); rows.len()]; index.len()];
            for (j, r) in rows.iter().enumerate() {
                for (m, c) in &r.terms {
                    a[index[m]][j] = c.clone();
                }
            }
            let mut b = vec![Q::zero(); index.len()];
            for (m, c) in &target.terms {
                b[index[m]] = c.clone();
            }
            if solve(&a, &b).is_none() {
                return false;
            }
        }
        true
    }

    fn label(&self, f: &PolyElement, central: bool) -> Result<PinLabel> {
        if self.n != 1 {
            return Err(Error::NotPinLabel("pin labels live on one strand".into()));
        }
        self.check(f)?;
        if f.is_zero() {
            return Err(Error::NotPinLabel("zero is not regular".into()));
        }
        if f.terms.keys().any(|m| self.mono_parity(m) != 0) {
            return Err(Error::NotPinLabel("not even".into()));
        }
        if central && !self.is_central(f) {
            return Err(Error::NotPinLabel("not central".into()));
        }
        if !central && !self.is_normal(f) {
            return Err(Error::NotPinLabel("the left and right ideals generated by the label differ".into()));
        }
        let hi = f.max_exp(0).unwrap();
        let lo = f.min_exp(0).unwrap();
        let coeff = |e: i32| -> Elem {
            let mut a = self.alg.zero();
            for (m, c) in &f.terms {
                if m.exps[0] == e {
                    a[m.word[0] as usize] += c;
                }
            }
            a
        };
        let lead = coeff(hi);
        if !self.alg.is_regular(&lead) {
            return Err(Error::RegularityInconclusive(format!(
                "leading coefficient {} is a zero divisor in A",
                self.alg.fmt_elem(&lead)
            )));
        }
        if self.variant == Variant::Quantum && !self.alg.is_regular(&coeff(lo)) {
            return Err(Error::RegularityInconclusive(format!(
                "trailing coefficient {} is a zero divisor in A",
                self.alg.fmt_elem(&coeff(lo))
            )));
        }
        Ok(PinLabel { element: f.clone(), lead, low_exp: lo, high_exp: hi })
    }
}

/// An even, central, regular one-strand element labelling a red strand.
#[derive(Clone, Debug, PartialEq)]
pub struct PinLabel {
    pub element: PolyElement,
    pub lead: Elem,
    pub low_exp: i32,
    pub high_exp: i32,
}

impl std::ops::AddAssign<&PolyElement> for PolyElement {
    fn add_assign(&mut self, other: &PolyElement) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;

    fn ring(alg: FrobeniusAlgebra, n: usize) -> PolyAlg {
        PolyAlg::new(Arc::new(alg), n, Variant::Degenerate)
    }

    #[test]
    fn token_past_dot_clifford_even() {
        let p = ring(builtin::clifford_even(), 1);
        let c = p.token(0, &p.alg.basis(1));
        let x = p.dot(0, 1);
        // c x = x psi(c) = -x c, so x c = -(c) x
        let cx = p.mul(&c, &x);
        assert_eq!(cx.terms.len(), 1);
        assert_eq!(cx.terms[&Mono::new(vec![1], vec![1])], q(1));
        assert_eq!(p.mul(&x, &c), cx.scale(&q(-1)));
    }

    #[test]
    fn odd_dots_anticommute() {
        let p = ring(builtin::clifford_odd(), 2);
        let a = p.mul(&p.dot(0, 1), &p.dot(1, 1));
        let b = p.mul(&p.dot(1, 1), &p.dot(0, 1));
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn classical_divided_difference() {
        let p = ring(builtin::ground(), 2);
        let d = p.demazure(0, &p.dot(0, 2)).unwrap();
        assert_eq!(d, p.dot(0, 1).add(&p.dot(1, 1)));
        let x1x2 = p.mul(&p.dot(0, 1), &p.dot(1, 1));
        assert!(p.demazure(0, &x1x2).unwrap().is_zero());
    }

    #[test]
    fn delta_of_x1() {
        let p = PolyAlg::new(Arc::new(builtin::ground()), 2, Variant::Quantum);
        let d = p.delta(0, &p.dot(0, 1)).unwrap();
        assert_eq!(d, p.dot(1, 1).scale(&q(-1)));
    }

    #[test]
    fn divide_simple() {
        let p = ring(builtin::ground(), 1);
        let x = p.dot(0, 1);
        let f = p.dot(0, 2).add(&x);
        assert_eq!(p.exact_divide(&f, &x).unwrap(), x.add(&p.one()));
        assert!(p.exact_divide(&p.one(), &x).is_err());
    }
}
