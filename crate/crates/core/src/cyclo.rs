//! Level-zero cyclotomic quotients `W_n^Q(A)` / `H_n^Q(A, z)` for monic pin labels.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::frobenius::Elem;
use crate::perm::{self, Perm};
use crate::poly::{Mono, PinLabel, PolyAlg, PolyElement, Variant};
use crate::rational::{RowSpace, Q};
use crate::wreath::{WreathAlg, WreathElement};

#[derive(Debug)]
pub struct Cyclotomic {
    pub wa: WreathAlg,
    pub label: PinLabel,
    /// `Q` shifted so its lowest exponent is zero.
    pub shifted: PolyElement,
    pub ell: i32,
    /// `Q_j` on each strand, as an element of `Pol_n` / `P_n`.
    q_on: Vec<PolyElement>,
    /// A representative of `Q_j` modulo the ideal generated by `Q_1`.
    congruence: Vec<WreathElement>,
    /// Inverse of the constant coefficient of the shifted label (quantum only).
    low_inv: Option<Elem>,
    memo: Mutex<HashMap<Key, WreathElement>>,
}

type Key = (Mono, Perm);

impl Cyclotomic {
    pub fn new(wa: WreathAlg, label: PinLabel) -> Result<Self> {
        let alg = wa.alg().clone();
        if label.lead != alg.unit {
            return Err(Error::NotMonic(format!(
                "leading coefficient is {}, not the unit",
                alg.fmt_elem(&label.lead)
            )));
        }
        let low = match wa.variant() {
            Variant::Degenerate => 0,
            Variant::Quantum => label.low_exp,
        };
        let one = PolyAlg::new(wa.poly.alg.clone(), 1, wa.variant());
        let mut shifted = one.zero();
        for (m, c) in &label.element.terms {
            shifted.add_term(Mono::new(m.word.clone(), vec![m.exps[0] - low]), c.clone());
        }
        let ell = label.high_exp - low;
        if ell == 0 {
            return Err(Error::NotMonic("label has no dots; the quotient is zero".into()));
        }
        let low_inv = if wa.variant() == Variant::Quantum {
            let mut low = alg.zero();
            for (m, c) in &shifted.terms {
                if m.exps[0] == 0 {
                    low[m.word[0] as usize] += c;
                }
            }
            Some(alg.inverse(&low).ok_or_else(|| {
                Error::NotMonic(format!("constant coefficient {} is not invertible", alg.fmt_elem(&low)))
            })?)
        } else {
            None
        };
        let n = wa.n();
        let q_on: Vec<PolyElement> = (0..n).map(|j| wa.poly.embed(&shifted, j)).collect();
        let mut congruence = vec![wa.zero()];
        for j in 0..n.saturating_sub(1) {
            let prev = &congruence[j];
            let next = match wa.variant() {
                Variant::Degenerate => {
                    // Q_{j+1} = sigma_j Q_j sigma_j + d_j(Q_j) sigma_j
                    let conj = wa.product(&[wa.crossing(j), prev.clone(), wa.crossing(j)]);
                    let d = wa.poly.demazure(j, &q_on[j])?;
                    conj.add(&wa.mul(&wa.from_poly(&d), &wa.crossing(j)))
                }
                Variant::Quantum => {
                    // Q_{j+1} = T_j Q_j T_j^{-1} - z D_j(Q_j) T_j^{-1}
                    let tinv = wa.crossing_inverse(j);
                    let conj = wa.product(&[wa.crossing(j), prev.clone(), tinv.clone()]);
                    let d = wa.poly.delta(j, &q_on[j])?.scale(&wa.z);
                    conj.sub(&wa.mul(&wa.from_poly(&d), &tinv))
                }
            };
            congruence.push(next);
        }
        Ok(Cyclotomic { wa, label, shifted, ell, q_on, congruence, low_inv, memo: Mutex::new(HashMap::new()) })
    }

    fn in_range(&self, m: &Mono) -> bool {
        m.exps.iter().all(|&e| (0..self.ell).contains(&e))
    }

    /// `m sigma_w` rewritten once modulo the ideal, lowering the first exponent outside `[0, ell)`.
    /// The result may contain further unreduced terms, including `m sigma_w` itself.
    fn step(&self, m: &Mono, w: &Perm) -> Result<WreathElement> {
        let wa = &self.wa;
        let j = m.exps.iter().position(|&e| !(0..self.ell).contains(&e)).expect("unreduced monomial");
        let mut lead = wa.poly.zero();
        if m.exps[j] >= self.ell {
            let mut e = m.exps.clone();
            e[j] -= self.ell;
            lead.add_term(Mono::new(m.word.clone(), e), Q::one());
        } else {
            let low = self.low_inv.as_ref().expect("quantum reduction");
            let tok = wa.poly.token(j, low);
            for (mm, cc) in wa.poly.mul(&wa.poly.basis_word(&m.word), &tok).terms {
                lead.add_term(Mono::new(mm.word, m.exps.clone()), cc);
            }
        }
        let p = wa.poly.mul(&lead, &self.q_on[j]);
        let coeff = p.terms.get(m).cloned().unwrap_or_else(Q::zero);
        if coeff.is_zero() {
            return Err(Error::NonTermination("label product misses the target term".into()));
        }
        let mut rest = p;
        rest.add_term(m.clone(), -coeff.clone());
        // m sigma_w = (1/coeff)(lead Q_j - rest) sigma_w, with lead Q_j ~ lead C_j
        let via = wa.mul(&wa.mul_poly_left(&lead, &self.congruence[j]), &wa.perm_elem(w));
        Ok(via.sub(&wa.poly_times_perm(&rest, w)).scale(&(Q::one() / coeff)))
    }

    /// Representative of `u` modulo the ideal with every exponent in `[0, ell)`.
    pub fn reduce(&self, u: &WreathElement) -> Result<WreathElement> {
        let mut memo = self.memo.lock().expect("reduction memo");
        let mut out = self.wa.zero();
        for ((m, w), c) in &u.terms {
            if self.in_range(m) {
                out.add_term(m.clone(), w.clone(), c.clone());
                continue;
            }
            let key = (m.clone(), w.clone());
            if !memo.contains_key(&key) {
                self.solve(key.clone(), &mut memo)?;
            }
            out += &memo[&key].scale(c);
        }
        Ok(out)
    }

    /// Reduces every term reachable from `root` by rewriting. Rewriting can cycle in
    /// the quantum case, so each strongly connected component is solved as a linear system.
    fn solve(&self, root: Key, memo: &mut HashMap<Key, WreathElement>) -> Result<()> {
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys = vec![root.clone()];
        let mut steps = Vec::new();
        index.insert(root, 0);
        while steps.len() < keys.len() {
            if keys.len() > 200_000 {
                return Err(Error::NonTermination("cyclotomic reduction exceeded its term budget".into()));
            }
            let (m, w) = &keys[steps.len()];
            let s = self.step(m, w)?;
            for k in s.terms.keys() {
                if !self.in_range(&k.0) && !memo.contains_key(k) && !index.contains_key(k) {
                    index.insert(k.clone(), keys.len());
                    keys.push(k.clone());
                }
            }
            steps.push(s);
        }
        let mut graph = DiGraph::<(), ()>::with_capacity(keys.len(), 0);
        let nodes: Vec<NodeIndex> = keys.iter().map(|_| graph.add_node(())).collect();
        for (a, s) in steps.iter().enumerate() {
            for b in s.terms.keys().filter_map(|k| index.get(k)) {
                graph.add_edge(nodes[a], nodes[*b], ());
            }
        }
        // components come out after every component they reach
        for comp in tarjan_scc(&graph) {
            let comp: Vec<usize> = comp.into_iter().map(NodeIndex::index).collect();
            let pos: HashMap<usize, usize> = comp.iter().enumerate().map(|(a, &k)| (k, a)).collect();
            let size = comp.len();
            let mut rows: Vec<(Vec<Q>, WreathElement)> = Vec::with_capacity(size);
            for &k in &comp {
                let mut coeffs = vec![Q::zero(); size];
                coeffs[pos[&k]] = Q::one();
                let mut rhs = self.wa.zero();
                for (key, c) in &steps[k].terms {
                    if self.in_range(&key.0) {
                        rhs.add_term(key.0.clone(), key.1.clone(), c.clone());
                    } else if let Some(r) = memo.get(key) {
                        rhs += &r.scale(c);
                    } else {
                        coeffs[pos[&index[key]]] -= c;
                    }
                }
                rows.push((coeffs, rhs));
            }
            for col in 0..size {
                let piv = (col..size)
                    .find(|&r| !rows[r].0[col].is_zero())
                    .ok_or_else(|| Error::NonTermination("cyclotomic rewriting cycle has no solution".into()))?;
                rows.swap(col, piv);
                let inv = Q::one() / &rows[col].0[col];
                let (pc, pr) = (rows[col].0.iter().map(|x| x * &inv).collect::<Vec<Q>>(), rows[col].1.scale(&inv));
                for (r, row) in rows.iter_mut().enumerate() {
                    if r == col || row.0[col].is_zero() {
                        continue;
                    }
                    let f = row.0[col].clone();
                    for (x, y) in row.0.iter_mut().zip(&pc) {
                        *x -= &f * y;
                    }
                    row.1 = row.1.sub(&pr.scale(&f));
                }
                rows[col] = (pc, pr);
            }
            for (&k, (_, r)) in comp.iter().zip(rows) {
                memo.insert(keys[k].clone(), r);
            }
        }
        Ok(())
    }

    pub fn is_reduced(&self, u: &WreathElement) -> bool {
        u.terms.keys().all(|(m, _)| self.in_range(m))
    }

    /// Size of the spanning set left after reduction: `ell^n * n! * m^n`.
    pub fn reduced_basis_size(&self) -> usize {
        let n = self.wa.n() as u32;
        (self.ell as usize).pow(n) * (1..=self.wa.n()).product::<usize>() * self.wa.alg().dim().pow(n)
    }

    /// Basis elements with exponents in `[0, ell)`.
    pub fn reduced_basis(&self) -> Vec<(Mono, Perm)> {
        let n = self.wa.n();
        let exps = exponent_box(n, 0, self.ell - 1);
        let words = all_words(self.wa.alg().dim(), n);
        let mut out = Vec::new();
        for w in perm::all(n) {
            for e in &exps {
                for word in &words {
                    out.push((Mono::new(word.clone(), e.clone()), w.clone()));
                }
            }
        }
        out
    }
}

pub fn all_words(m: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m as u8).map(move |b| {
                    let mut w2 = w.clone();
                    w2.push(b);
                    w2
                })
            })
            .collect();
    }
    out
}

pub fn exponent_box(n: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e| {
                (lo..=hi).map(move |x| {
                    let mut e2 = e.clone();
                    e2.push(x);
                    e2
                })
            })
            .collect();
    }
    out
}

/// Exponent vectors of the degree window: total degree `< bound` (degenerate)
/// or total absolute degree `< bound` (quantum).
pub fn window_exponents(n: usize, variant: Variant, bound: i32) -> Vec<Vec<i32>> {
    let lo = if variant == Variant::Quantum { -(bound - 1) } else { 0 };
    exponent_box(n, lo, (bound - 1).max(0))
        .into_iter()
        .filter(|e| e.iter().map(|x| x.abs()).sum::<i32>() < bound)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub bound: i32,
    pub dim: usize,
    pub next_dim: usize,
    pub stabilized: bool,
}

/// Spanning set of the ideal inside the window: `p Q_1 sigma_v` for basis `p`.
/// `Q_1` is supercentral in the polynomial part, so right factors reduce to permutations.
pub struct IdealWindow {
    index: HashMap<(Mono, Perm), usize>,
    pub space: RowSpace,
    pub ambient: usize,
}

impl IdealWindow {
    pub fn new(cy: &Cyclotomic, bound: i32) -> Self {
        let wa = &cy.wa;
        let n = wa.n();
        let words = all_words(wa.alg().dim(), n);
        let perms = perm::all(n);
        let mut index = HashMap::new();
        for e in window_exponents(n, wa.variant(), bound) {
            for w in &perms {
                for word in &words {
                    let k = index.len();
                    index.insert((Mono::new(word.clone(), e.clone()), w.clone()), k);
                }
            }
        }
        let ambient = index.len();
        let mut win = IdealWindow { index, space: RowSpace::new(), ambient };
        let q1 = wa.from_poly(&cy.q_on[0]);
        // products leaving the window are dropped by `vectorize`
        for e in window_exponents(n, wa.variant(), bound) {
            for w in &perms {
                for word in &words {
                    let mut p = wa.zero();
                    p.add_term(Mono::new(word.clone(), e.clone()), w.clone(), Q::one());
                    let pq = wa.mul(&p, &q1);
                    for v in &perms {
                        let g = wa.mul(&pq, &wa.perm_elem(v));
                        if let Some(vec) = win.vectorize(&g) {
                            win.space.insert(&vec);
                        }
                    }
                }
            }
        }
        win
    }

    pub fn vectorize(&self, u: &WreathElement) -> Option<BTreeMap<usize, Q>> {
        let mut out = BTreeMap::new();
        for (k, c) in &u.terms {
            out.insert(*self.index.get(k)?, c.clone());
        }
        Some(out)
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.space.dim()
    }

    /// True if `u` lies in the window and in the spanned part of the ideal.
    pub fn contains(&self, u: &WreathElement) -> bool {
        self.vectorize(u).map(|v| self.space.contains(&v)).unwrap_or(false)
    }
}

/// Brute-force dimension of the degree window modulo the ideal generated by `Q_1`.
pub fn quotient_dim_oracle(cy: &Cyclotomic, bound: i32) -> OracleReport {
    let a = IdealWindow::new(cy, bound).quotient_dim();
    let b = IdealWindow::new(cy, bound + 1).quotient_dim();
    OracleReport { bound, dim: a, next_dim: b, stabilized: a == b }
}

/// Raises the bound until two successive windows agree.
pub fn stabilized_quotient_dim(cy: &Cyclotomic, start: i32, max_bound: i32) -> OracleReport {
    let mut bound = start.max(1);
    let mut prev = IdealWindow::new(cy, bound).quotient_dim();
    loop {
        let next = IdealWindow::new(cy, bound + 1).quotient_dim();
        if next == prev || bound + 1 >= max_bound {
            return OracleReport { bound, dim: prev, next_dim: next, stabilized: next == prev };
        }
        bound += 1;
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;
    use std::sync::Arc;

    fn label(alg: &Arc<crate::frobenius::FrobeniusAlgebra>, variant: Variant, coeffs: &[(i32, i64)]) -> PinLabel {
        let p = PolyAlg::new(alg.clone(), 1, variant);
        let mut f = p.zero();
        for &(e, c) in coeffs {
            f += &p.dot(0, e).scale(&q(c));
        }
        p.pin_label(&f).unwrap()
    }

    #[test]
    fn ground_x_squared() {
        let alg = Arc::new(builtin::ground());
        let wa = WreathAlg::degenerate(alg.clone(), 1);
        let cy = Cyclotomic::new(wa.clone(), label(&alg, Variant::Degenerate, &[(2, 1)])).unwrap();
        let x3 = wa.from_poly(&wa.poly.dot(0, 3));
        assert!(cy.reduce(&x3).unwrap().is_zero());
        assert_eq!(cy.reduce(&wa.one()).unwrap(), wa.one());
        assert_eq!(quotient_dim_oracle(&cy, 4).dim, 2);
    }

    #[test]
    fn two_strands_x() {
        let alg = Arc::new(builtin::ground());
        let wa = WreathAlg::degenerate(alg.clone(), 2);
        let cy = Cyclotomic::new(wa.clone(), label(&alg, Variant::Degenerate, &[(1, 1)])).unwrap();
        // x_2 = sigma_1 x_1 sigma_1 + sigma_1, which is sigma_1 modulo x_1
        let x2 = wa.from_poly(&wa.poly.dot(1, 1));
        assert_eq!(cy.reduce(&x2).unwrap(), wa.crossing(0));
        let rep = stabilized_quotient_dim(&cy, 2, 6);
        assert!(rep.stabilized);
        assert_eq!(rep.dim, 2);
    }

    #[test]
    fn quantum_x_minus_one() {
        let alg = Arc::new(builtin::ground());
        let wa = WreathAlg::quantum(alg.clone(), 2, q(1)).unwrap();
        let cy = Cyclotomic::new(wa.clone(), label(&alg, Variant::Quantum, &[(1, 1), (0, -1)])).unwrap();
        let xinv = wa.from_poly(&wa.poly.dot(0, -1));
        assert_eq!(cy.reduce(&xinv).unwrap(), wa.one());
        let x2 = wa.from_poly(&wa.poly.dot(1, 2));
        let r = cy.reduce(&x2).unwrap();
        assert!(cy.is_reduced(&r));
        assert_eq!(cy.reduce(&r).unwrap(), r);
    }

    #[test]
    fn quantum_rewriting_cycle_over_cyclic2() {
        // over a nontrivial algebra, rewriting g_1 X_2 loops back to itself
        let alg = Arc::new(builtin::cyclic(2));
        let wa = WreathAlg::quantum(alg.clone(), 2, crate::rational::qf(1, 2)).unwrap();
        let cy = Cyclotomic::new(wa.clone(), label(&alg, Variant::Quantum, &[(1, 1), (0, -1)])).unwrap();
        let u = wa.from_poly(&wa.poly.mul(&wa.poly.token(0, &alg.basis(1)), &wa.poly.dot(1, 1)));
        let r = cy.reduce(&u).unwrap();
        assert!(cy.is_reduced(&r));
        assert!(IdealWindow::new(&cy, 3).contains(&r.sub(&u)));
        assert_eq!(stabilized_quotient_dim(&cy, 1, 4).dim, cy.reduced_basis_size());
    }

    #[test]
    fn clifford_even_x() {
        let alg = Arc::new(builtin::clifford_even());
        let one = PolyAlg::new(alg.clone(), 1, Variant::Degenerate);
        assert!(one.pin_label(&one.dot(0, 1)).is_err());
        let label = one.cyclotomic_label(&one.dot(0, 1)).unwrap();
        let cy = Cyclotomic::new(WreathAlg::degenerate(alg, 1), label).unwrap();
        let rep = stabilized_quotient_dim(&cy, 2, 6);
        assert!(rep.stabilized);
        assert_eq!(rep.dim, 2);
    }
}
