//! Sparse multivariate polynomials over the rationals and fraction-free rank.
//!
//! Used as the exact fallback when randomized evaluation of a generic
//! covector cannot be verified.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::{QMatrix, Q};

/// Polynomial in a fixed number of variables; monomials keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `Σ_k coeffs[k] t_k`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[k] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Q)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d` under lex order, or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let c = rc / dc;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(e, c);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

/// Matrix with polynomial entries.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { MPoly::constant(nvars, crate::linalg::q(1)) } else { MPoly::zero(nvars) })
    }

    /// `Σ_k t_k M_k` for matrices `M_k` of equal shape.
    pub fn linear_combination(parts: &[QMatrix], rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            let coeffs: Vec<Q> = parts.iter().map(|m| m.get(i, j).clone()).collect();
            MPoly::linear(&coeffs)
        })
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.data[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows);
        let nvars = self.data.first().or(rhs.data.first()).map_or(0, |p| p.nvars);
        PolyMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = MPoly::zero(nvars);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    /// Rank over the rational function field, by Bareiss elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let nvars = m.first().map_or(0, |p| p.nvars);
        let mut prev = MPoly::constant(nvars, crate::linalg::q(1));
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let pivot = m[rank * cols + col].clone();
            for r in rank + 1..rows {
                let factor = m[r * cols + col].clone();
                for j in col + 1..cols {
                    let num = pivot.mul(&m[r * cols + j]).sub(&factor.mul(&m[rank * cols + j]));
                    m[r * cols + j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
                }
                m[r * cols + col] = MPoly::zero(nvars);
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}
