//! Exact rationals and small dense/sparse linear algebra over them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type Matrix = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Parses `p`, `-p`, `p/q`.
/// Product with a fast path for integers, which skips the gcd reductions.
pub fn mul_q(a: &Q, b: &Q) -> Q {
    if a.is_integer() && b.is_integer() {
        Q::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

/// `a += b` with the same fast path as [`mul_q`].
pub fn add_assign_q(a: &mut Q, b: &Q) {
    if a.is_integer() && b.is_integer() {
        *a = Q::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    if !a[r][j].is_zero() {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Incrementally built row space of sparse vectors, kept in echelon form
/// keyed by pivot column.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
}

impl RowSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut v = v.clone();
        v.retain(|_, c| !c.is_zero());
        loop {
            let hit = v.iter().find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = hit else { return v };
            for (j, x) in &self.rows[&k] {
                let e = v.entry(*j).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(j);
                }
            }
        }
    }

    pub fn contains(&self, v: &BTreeMap<usize, Q>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Returns true if `v` enlarged the space.
    pub fn insert(&mut self, v: &BTreeMap<usize, Q>) -> bool {
        let r = self.reduce(v);
        let Some((&p, c)) = r.iter().next() else {
            return false;
        };
        let inv = c.recip();
        let r: BTreeMap<usize, Q> = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        for row in self.rows.values_mut() {
            if let Some(f) = row.get(&p).cloned() {
                for (j, x) in &r {
                    let e = row.entry(*j).or_insert_with(Q::zero);
                    *e -= &f * x;
                    if e.is_zero() {
                        row.remove(j);
                    }
                }
            }
        }
        self.rows.insert(p, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/2"), Some(qf(3, 2)));
        assert_eq!(parse_q("-4"), Some(q(-4)));
        assert_eq!(parse_q("6/4").map(|x| fmt_q(&x)), Some("3/2".into()));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&q(-7)), "-7");
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn row_space() {
        let mut rs = RowSpace::new();
        let v = |xs: &[(usize, i64)]| xs.iter().map(|(k, c)| (*k, q(*c))).collect::<BTreeMap<_, _>>();
        assert!(rs.insert(&v(&[(0, 1), (1, 1)])));
        assert!(rs.insert(&v(&[(1, 2), (2, 1)])));
        assert!(!rs.insert(&v(&[(0, 2), (1, 4), (2, 1)])));
        assert!(rs.contains(&v(&[(0, 1), (1, -1), (2, -1)])));
        assert_eq!(rs.dim(), 2);
    }
}
