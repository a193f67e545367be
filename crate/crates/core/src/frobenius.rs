//! Frobenius superalgebras given by structure constants and a homogeneous trace.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, identity, inverse, mat_mul, parse_q, q, rank, sign, solve, Matrix, Q};

/// A vector in A, written in the basis B.
pub type Elem = Vec<Q>;

/// Unvalidated algebra data, as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawAlgebra {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub parity: Vec<u8>,
    pub unit: Vec<String>,
    pub mult: Vec<Vec<Vec<(usize, String)>>>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    pub parity: Vec<u8>,
    /// `mult[i][j]` lists the nonzero `(k, c)` with `b_i b_j = sum c b_k`.
    pub mult: Vec<Vec<Vec<(usize, Q)>>>,
    pub unit: Elem,
    pub trace: Elem,
    pub gram: Matrix,
    /// Row `i` holds the coordinates of the left dual `b_i^v`.
    pub dual: Matrix,
    /// Row `i` holds the coordinates of `psi(b_i)`.
    pub psi: Matrix,
    pub psi_inv: Matrix,
    pub eps: u8,
    pub symmetric: bool,
    /// `psi^k` for `k` in `0..period`, when psi has small finite order.
    psi_cycle: Option<Vec<Matrix>>,
}

fn parse_vec(v: &[String], what: &str) -> Result<Vec<Q>> {
    v.iter()
        .map(|s| parse_q(s).ok_or_else(|| Error::Input(format!("bad rational `{s}` in {what}"))))
        .collect()
}

fn apply(mat: &Matrix, a: &[Q]) -> Elem {
    let m = a.len();
    let mut out = vec![Q::zero(); m];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, x) in mat[i].iter().enumerate() {
            if !x.is_zero() {
                out[j] += ai * x;
            }
        }
    }
    out
}

impl FrobeniusAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    pub fn zero(&self) -> Elem {
        vec![Q::zero(); self.dim()]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.mult[i][j]
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Elem {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, x) in &self.mult[i][j] {
                    out[*k] += &c * x;
                }
            }
        }
        out
    }

    pub fn tr(&self, a: &[Q]) -> Q {
        a.iter().zip(&self.trace).map(|(x, t)| x * t).sum()
    }

    pub fn psi(&self, a: &[Q]) -> Elem {
        apply(&self.psi, a)
    }

    pub fn psi_inv(&self, a: &[Q]) -> Elem {
        apply(&self.psi_inv, a)
    }

    /// Coordinates of `psi^k(b_i)` for any integer `k`.
    pub fn psi_pow_basis(&self, k: i64, i: usize) -> Elem {
        if self.symmetric || k == 0 {
            return self.basis(i);
        }
        if let Some(cycle) = &self.psi_cycle {
            let p = cycle.len() as i64;
            return cycle[k.rem_euclid(p) as usize][i].clone();
        }
        let step = if k > 0 { &self.psi } else { &self.psi_inv };
        let mut v = self.basis(i);
        for _ in 0..k.unsigned_abs() {
            v = apply(step, &v);
        }
        v
    }

    pub fn dual_basis(&self, i: usize) -> &[Q] {
        &self.dual[i]
    }

    /// Parity of a nonzero homogeneous element; `None` if zero or mixed.
    pub fn parity_of(&self, a: &[Q]) -> Option<u8> {
        let ps: BTreeSet<u8> = a
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| self.parity[i])
            .collect();
        if ps.len() == 1 {
            ps.into_iter().next()
        } else {
            None
        }
    }

    pub fn left_mul_matrix(&self, a: &[Q]) -> Matrix {
        (0..self.dim()).map(|j| self.mul(a, &self.basis(j))).collect()
    }

    pub fn right_mul_matrix(&self, a: &[Q]) -> Matrix {
        (0..self.dim()).map(|j| self.mul(&self.basis(j), a)).collect()
    }

    /// Neither a left nor a right zero divisor.
    pub fn is_regular(&self, a: &[Q]) -> bool {
        let m = self.dim();
        rank(&self.left_mul_matrix(a)) == m && rank(&self.right_mul_matrix(a)) == m
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inverse(&self, a: &[Q]) -> Option<Elem> {
        // solve a * v = 1 through the left multiplication map, then check v * a = 1
        let lm = crate::rational::transpose(&self.left_mul_matrix(a));
        let v = solve(&lm, &self.unit)?;
        (self.mul(&v, a) == self.unit).then_some(v)
    }

    /// Supercommutes with every basis element, for each homogeneous component.
    pub fn is_supercentral(&self, a: &[Q]) -> bool {
        for p in 0..2u8 {
            let comp: Elem = a
                .iter()
                .enumerate()
                .map(|(i, x)| if self.parity[i] == p { x.clone() } else { Q::zero() })
                .collect();
            for j in 0..self.dim() {
                let b = self.basis(j);
                let lhs = self.mul(&comp, &b);
                let s = sign(p * self.parity[j] % 2 == 1);
                let rhs: Elem = self.mul(&b, &comp).into_iter().map(|x| x * &s).collect();
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `(b_i^v)^v` computed from the Gram matrix of the dual basis.
    pub fn double_dual(&self, i: usize) -> Elem {
        let m = self.dim();
        let g2: Matrix = (0..m)
            .map(|a| (0..m).map(|b| self.tr(&self.mul(&self.dual[a], &self.dual[b]))).collect())
            .collect();
        let d2 = inverse(&g2).expect("dual basis Gram matrix is invertible");
        let mut out = self.zero();
        for (k, c) in d2[i].iter().enumerate() {
            for (j, x) in self.dual[k].iter().enumerate() {
                out[j] += c * x;
            }
        }
        out
    }

    pub fn validate(raw: &RawAlgebra) -> Result<Self> {
        let m = raw.dim;
        if m == 0 {
            return Err(Error::Input("dim must be positive".into()));
        }
        if raw.labels.len() != m || raw.parity.len() != m || raw.unit.len() != m || raw.trace.len() != m {
            return Err(Error::Input("labels, parity, unit and trace must all have length dim".into()));
        }
        let distinct: BTreeSet<&String> = raw.labels.iter().collect();
        if distinct.len() != m {
            return Err(Error::Input("labels must be distinct".into()));
        }
        if raw.labels.iter().any(|l| l.is_empty() || l.contains(['|', '(', ')', ' ', '*'])) {
            return Err(Error::Input("labels must be nonempty and avoid `|()* `".into()));
        }
        if raw.parity.iter().any(|&p| p > 1) {
            return Err(Error::Input("parity entries must be 0 or 1".into()));
        }
        if raw.mult.len() != m || raw.mult.iter().any(|row| row.len() != m) {
            return Err(Error::Input("mult must be a dim x dim table".into()));
        }
        let mut mult = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = vec![Q::zero(); m];
                for (k, c) in &raw.mult[i][j] {
                    if *k >= m {
                        return Err(Error::Input(format!("mult[{i}][{j}] refers to basis index {k}")));
                    }
                    acc[*k] += parse_q(c).ok_or_else(|| Error::Input(format!("bad rational `{c}` in mult")))?;
                }
                mult[i][j] = acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        let unit = parse_vec(&raw.unit, "unit")?;
        let trace = parse_vec(&raw.trace, "trace")?;
        Self::from_parts(raw.name.clone(), raw.labels.clone(), raw.parity.clone(), mult, unit, trace)
    }

    pub fn from_parts(
        name: String,
        labels: Vec<String>,
        parity: Vec<u8>,
        mult: Vec<Vec<Vec<(usize, Q)>>>,
        unit: Elem,
        trace: Elem,
    ) -> Result<Self> {
        let m = labels.len();
        for i in 0..m {
            for j in 0..m {
                for (k, _) in &mult[i][j] {
                    if parity[*k] != (parity[i] + parity[j]) % 2 {
                        return Err(Error::ParityViolation(i, j, *k));
                    }
                }
            }
        }
        let mut alg = FrobeniusAlgebra {
            name,
            labels,
            parity,
            mult,
            unit,
            trace,
            gram: vec![],
            dual: vec![],
            psi: vec![],
            psi_inv: vec![],
            eps: 0,
            symmetric: true,
            psi_cycle: None,
        };
        for i in 0..m {
            for j in 0..m {
                let bij = alg.mul(&alg.basis(i), &alg.basis(j));
                for k in 0..m {
                    let l = alg.mul(&bij, &alg.basis(k));
                    let r = alg.mul(&alg.basis(i), &alg.mul(&alg.basis(j), &alg.basis(k)));
                    if l != r {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..m {
            let b = alg.basis(i);
            if alg.mul(&alg.unit, &b) != b || alg.mul(&b, &alg.unit) != b {
                return Err(Error::NoUnit(i));
            }
        }
        let support: Vec<usize> = (0..m).filter(|&i| !alg.trace[i].is_zero()).collect();
        let Some(&first) = support.first() else {
            return Err(Error::DegenerateTrace("trace is identically zero".into()));
        };
        if let Some(&other) = support.iter().find(|&&i| alg.parity[i] != alg.parity[first]) {
            return Err(Error::InhomogeneousTrace(first, other));
        }
        alg.eps = alg.parity[first];
        alg.gram = (0..m)
            .map(|i| (0..m).map(|j| alg.tr(&alg.mul(&alg.basis(i), &alg.basis(j)))).collect())
            .collect();
        let ginv = inverse(&alg.gram).ok_or_else(|| Error::DegenerateTrace("Gram matrix is singular".into()))?;
        // tr(b_i^v b_k) = sum_j D_ij G_jk = delta_ik
        alg.dual = ginv;
        // psi(b_i) = sum_k P_ik b_k with sum_k G_jk P_ik = (-1)^{p_i p_j} G_ij
        let mut psi = Vec::with_capacity(m);
        for i in 0..m {
            let rhs: Vec<Q> = (0..m)
                .map(|j| &alg.gram[i][j] * sign(alg.parity[i] * alg.parity[j] == 1))
                .collect();
            let row = solve(&alg.gram, &rhs)
                .ok_or_else(|| Error::InternalInconsistency("Nakayama system has no solution".into()))?;
            psi.push(row);
        }
        alg.psi = psi;
        alg.psi_inv = inverse(&alg.psi)
            .ok_or_else(|| Error::InternalInconsistency("Nakayama map is not invertible".into()))?;
        alg.symmetric = alg.psi == identity(m);
        alg.check_nakayama()?;
        alg.psi_cycle = alg.find_psi_cycle();
        Ok(alg)
    }

    fn check_nakayama(&self) -> Result<()> {
        let m = self.dim();
        for i in 0..m {
            for (k, x) in self.psi[i].iter().enumerate() {
                if !x.is_zero() && self.parity[k] != self.parity[i] {
                    return Err(Error::InternalInconsistency(format!("psi(b{i}) is not of the parity of b{i}")));
                }
            }
            for j in 0..m {
                let lhs = self.psi(&self.mul(&self.basis(i), &self.basis(j)));
                let rhs = self.mul(&self.psi(&self.basis(i)), &self.psi(&self.basis(j)));
                if lhs != rhs {
                    return Err(Error::InternalInconsistency(format!("psi is not multiplicative on ({i}, {j})")));
                }
            }
        }
        if self.psi(&self.unit) != self.unit {
            return Err(Error::InternalInconsistency("psi does not fix the unit".into()));
        }
        Ok(())
    }

    fn find_psi_cycle(&self) -> Option<Vec<Matrix>> {
        let m = self.dim();
        let id = identity(m);
        let mut powers = vec![id.clone()];
        let mut cur = self.psi.clone();
        for _ in 0..24 {
            if cur == id {
                return Some(powers);
            }
            powers.push(cur.clone());
            cur = mat_mul(&cur, &self.psi);
        }
        None
    }

    pub fn to_raw(&self) -> RawAlgebra {
        RawAlgebra {
            name: self.name.clone(),
            dim: self.dim(),
            labels: self.labels.clone(),
            parity: self.parity.clone(),
            unit: self.unit.iter().map(fmt_q).collect(),
            mult: self
                .mult
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(|(k, c)| (*k, fmt_q(c))).collect()).collect())
                .collect(),
            trace: self.trace.iter().map(fmt_q).collect(),
        }
    }

    /// Same multiplication, different trace.
    pub fn with_trace(&self, trace: Elem) -> Result<Self> {
        Self::from_parts(
            self.name.clone(),
            self.labels.clone(),
            self.parity.clone(),
            self.mult.clone(),
            self.unit.clone(),
            trace,
        )
    }

    pub fn fmt_elem(&self, a: &[Q]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("{}*{}", fmt_q(x), self.labels[i]))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Result of replacing the trace `tr` by `tr'(a) = tr(a u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceChange {
    pub u: Elem,
    pub u_inv: Elem,
    pub eps_new: u8,
}

pub fn change_trace(alg: &FrobeniusAlgebra, new_trace: &[Q]) -> Result<TraceChange> {
    let m = alg.dim();
    if new_trace.len() != m {
        return Err(Error::Input("new trace has the wrong length".into()));
    }
    let other = alg.with_trace(new_trace.to_vec())?;
    // tr(b_i u) = sum_k u_k G_ik
    let u = solve(&alg.gram, new_trace).ok_or_else(|| Error::NoSolution("tr(b_i u) = t'_i".into()))?;
    let pu = alg
        .parity_of(&u)
        .ok_or_else(|| Error::NoSolution("u is not homogeneous".into()))?;
    if pu != (alg.eps + other.eps) % 2 {
        return Err(Error::NoSolution("u has the wrong parity".into()));
    }
    let u_inv = alg
        .inverse(&u)
        .ok_or_else(|| Error::DegenerateTrace("u is not invertible".into()))?;
    for i in 0..m {
        let b = alg.basis(i);
        let lhs = other.psi(&b);
        let s = sign(pu * alg.parity[i] == 1);
        let rhs: Elem = alg
            .mul(&alg.mul(&u, &alg.psi(&b)), &u_inv)
            .into_iter()
            .map(|x| x * &s)
            .collect();
        if lhs != rhs {
            return Err(Error::InternalInconsistency(format!(
                "new Nakayama automorphism disagrees with the conjugation formula on b{i}"
            )));
        }
    }
    Ok(TraceChange { u, u_inv, eps_new: other.eps })
}

pub mod builtin {
    use super::*;

    fn table(m: usize, entries: &[(usize, usize, usize, i64)]) -> Vec<Vec<Vec<(usize, Q)>>> {
        let mut t = vec![vec![Vec::new(); m]; m];
        for &(i, j, k, c) in entries {
            t[i][j].push((k, q(c)));
        }
        t
    }

    pub fn ground() -> FrobeniusAlgebra {
        FrobeniusAlgebra::from_parts(
            "ground".into(),
            vec!["1".into()],
            vec![0],
            table(1, &[(0, 0, 0, 1)]),
            vec![q(1)],
            vec![q(1)],
        )
        .expect("ground ring is Frobenius")
    }

    /// Group algebra from a Cayley table `cayley[g][h] = gh`, with `tr(g) = [g = e]`.
    pub fn group(name: &str, labels: Vec<String>, cayley: &[Vec<usize>]) -> Result<FrobeniusAlgebra> {
        let m = cayley.len();
        if m == 0 || labels.len() != m || cayley.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(Error::BadCayleyTable("table must be square with entries in range".into()));
        }
        let e = (0..m)
            .find(|&e| (0..m).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::BadCayleyTable("no identity element".into()))?;
        for g in 0..m {
            for h in 0..m {
                for k in 0..m {
                    if cayley[cayley[g][h]][k] != cayley[g][cayley[h][k]] {
                        return Err(Error::BadCayleyTable(format!("not associative on ({g}, {h}, {k})")));
                    }
                }
            }
            if !(0..m).any(|h| cayley[g][h] == e && cayley[h][g] == e) {
                return Err(Error::BadCayleyTable(format!("element {g} has no inverse")));
            }
        }
        let mut mult = vec![vec![Vec::new(); m]; m];
        for g in 0..m {
            for h in 0..m {
                mult[g][h] = vec![(cayley[g][h], q(1))];
            }
        }
        let mut unit = vec![Q::zero(); m];
        unit[e] = q(1);
        FrobeniusAlgebra::from_parts(name.into(), labels, vec![0; m], mult, unit.clone(), unit)
    }

    pub fn cyclic(n: usize) -> FrobeniusAlgebra {
        let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
        let cayley: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        group(&format!("cyclic{n}"), labels, &cayley).expect("cyclic group table")
    }

    fn clifford(name: &str, trace: Vec<Q>) -> FrobeniusAlgebra {
        FrobeniusAlgebra::from_parts(
            name.into(),
            vec!["1".into(), "c".into()],
            vec![0, 1],
            table(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)]),
            vec![q(1), q(0)],
            trace,
        )
        .expect("Clifford superalgebra is Frobenius")
    }

    pub fn clifford_even() -> FrobeniusAlgebra {
        clifford("clifford_even", vec![q(1), q(0)])
    }

    pub fn clifford_odd() -> FrobeniusAlgebra {
        clifford("clifford_odd", vec![q(0), q(1)])
    }

    pub fn grassmann() -> FrobeniusAlgebra {
        FrobeniusAlgebra::from_parts(
            "grassmann".into(),
            vec!["1".into(), "x".into()],
            vec![0, 1],
            table(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]),
            vec![q(1), q(0)],
            vec![q(0), q(1)],
        )
        .expect("Grassmann superalgebra is Frobenius")
    }

    /// The builtins exercised by the verification suites.
    pub fn all() -> Vec<FrobeniusAlgebra> {
        vec![ground(), cyclic(2), cyclic(3), clifford_even(), clifford_odd(), grassmann()]
    }

    /// `ground`, `clifford_even`, `clifford_odd`, `grassmann`, `cyclicN`.
    pub fn by_name(name: &str) -> Option<FrobeniusAlgebra> {
        match name {
            "ground" => Some(ground()),
            "clifford_even" => Some(clifford_even()),
            "clifford_odd" => Some(clifford_odd()),
            "grassmann" => Some(grassmann()),
            _ => {
                let n: usize = name.strip_prefix("cyclic")?.parse().ok()?;
                (1..=12).contains(&n).then(|| cyclic(n))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    #[test]
    fn clifford_even_nakayama() {
        let a = clifford_even();
        assert_eq!(a.eps, 0);
        assert!(!a.symmetric);
        assert_eq!(a.psi, vec![vec![q(1), q(0)], vec![q(0), q(-1)]]);
    }

    #[test]
    fn clifford_odd_duals_swap() {
        let a = clifford_odd();
        assert_eq!(a.eps, 1);
        assert!(a.symmetric);
        assert_eq!(a.dual, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
    }

    #[test]
    fn mixed_trace_rejected() {
        let a = clifford_even();
        let err = a.with_trace(vec![q(1), q(1)]).unwrap_err();
        assert_eq!(err, Error::InhomogeneousTrace(0, 1));
    }

    #[test]
    fn bad_cayley_table() {
        let err = group("bad", vec!["a".into(), "b".into()], &[vec![0, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::BadCayleyTable(_)));
    }

    #[test]
    fn raw_roundtrip() {
        for a in all() {
            let b = FrobeniusAlgebra::validate(&a.to_raw()).unwrap();
            assert_eq!(a.mult, b.mult);
            assert_eq!(a.psi, b.psi);
        }
    }

    #[test]
    fn regularity() {
        let g = grassmann();
        assert!(g.is_regular(&g.unit));
        assert!(!g.is_regular(&g.basis(1)));
        assert!(g.inverse(&g.basis(1)).is_none());
        let c = clifford_even();
        assert_eq!(c.inverse(&c.basis(1)), Some(c.basis(1)));
    }
}
