//! Bruhat order and Kazhdan-Lusztig polynomials of symmetric groups.
//!
//! `P_{x,w}` is computed column by column: for fixed `w` the engine fills in
//! `P_{x,w}` for every `x ≤ w` using a right descent `s` of `w` and `v = ws`:
//!
//! ```text
//! P_{x,w} = P_{xs,w}                                          if xs > x
//! P_{x,w} = P_{xs,v} + q P_{x,v} - Σ_z μ(z,v) q^{(ℓ(w)-ℓ(z))/2} P_{x,z}   if xs < x
//! ```
//!
//! where `z` runs over `x ≤ z < v` with `zs < z`, and `μ(z,v)` is the
//! coefficient of `q^{(ℓ(v)-ℓ(z)-1)/2}` in `P_{z,v}`. Columns are cached in a
//! shared table; inserts are idempotent so concurrent callers are safe.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Permutation of `{1..N}` in one-line notation (stored 0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn longest(n: usize) -> Self {
        Permutation((0..n as u8).rev().collect())
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::input(format!("{values:?} is not a permutation of 1..{n}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(values.iter().map(|&v| (v - 1) as u8).collect()))
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let one: Vec<usize> = images.iter().map(|&i| i + 1).collect();
        Self::from_one_line(&one)
    }

    /// Parses compact notation such as `"3412"` (sizes up to 9).
    pub fn parse(s: &str) -> Result<Self> {
        let digits: Option<Vec<usize>> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        Self::from_one_line(&digits.ok_or_else(|| Error::input(format!("cannot parse permutation {s:?}")))?)
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// `w · s_i` (swap positions `i`, `i+1`).
    pub fn times_simple(&self, i: usize) -> Self {
        let mut w = self.0.clone();
        w.swap(i, i + 1);
        Permutation(w)
    }

    /// `s_i · w` (swap values `i`, `i+1`).
    pub fn simple_times(&self, i: usize) -> Self {
        Permutation(
            self.0
                .iter()
                .map(|&v| match v as usize {
                    x if x == i => (i + 1) as u8,
                    x if x == i + 1 => i as u8,
                    _ => v,
                })
                .collect(),
        )
    }

    pub fn is_right_descent(&self, i: usize) -> bool {
        self.0[i] > self.0[i + 1]
    }

    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse().is_right_descent(i)
    }

    /// Direct sum: `other` acts on the positions after `self`.
    pub fn concat(&self, other: &Permutation) -> Permutation {
        let off = self.0.len() as u8;
        Permutation(self.0.iter().copied().chain(other.0.iter().map(|&v| v + off)).collect())
    }

    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        permute(&mut cur, 0, &mut out);
        out.sort();
        out
    }
}

fn permute(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Permutation>) {
    if k == cur.len() {
        out.push(Permutation(cur.clone()));
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        if self.size() <= 9 {
            write!(f, "{}", parts.join(""))
        } else {
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_line(&v).map_err(serde::de::Error::custom)
    }
}

/// Bruhat order via the rank criterion:
/// `u ≤ w` iff `#{a ≤ i : u(a) ≥ j} ≤ #{a ≤ i : w(a) ≥ j}` for all `i, j`.
pub fn bruhat_leq(u: &Permutation, w: &Permutation) -> Result<bool> {
    if u.size() != w.size() {
        return Err(Error::input(format!("permutations of different sizes {} and {}", u.size(), w.size())));
    }
    Ok(bruhat_leq_unchecked(u, w))
}

fn bruhat_leq_unchecked(u: &Permutation, w: &Permutation) -> bool {
    let n = u.size();
    let mut cu = vec![0i32; n + 1];
    let mut cw = vec![0i32; n + 1];
    for i in 0..n {
        // cu[j] = #{a ≤ i : u(a) ≥ j}
        for j in 0..=u.0[i] as usize {
            cu[j] += 1;
        }
        for j in 0..=w.0[i] as usize {
            cw[j] += 1;
        }
        if (0..=n).any(|j| cu[j] > cw[j]) {
            return false;
        }
    }
    true
}

/// Integer polynomial in `q`, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct KlPolynomial(pub Vec<i64>);

impl KlPolynomial {
    pub fn zero() -> Self {
        KlPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        KlPolynomial(vec![1])
    }

    pub fn from_coeffs(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        KlPolynomial(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    fn add_shifted(&mut self, other: &KlPolynomial, shift: usize, factor: i64) {
        if self.0.len() < other.0.len() + shift {
            self.0.resize(other.0.len() + shift, 0);
        }
        for (k, c) in other.0.iter().enumerate() {
            self.0[k + shift] += factor * c;
        }
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
}

impl fmt::Display for KlPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 if c == 1 => "q".to_string(),
                1 => format!("{c}q"),
                _ if c == 1 => format!("q^{k}"),
                _ => format!("{c}q^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for KlPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Column = Arc<HashMap<Permutation, KlPolynomial>>;

/// Memoized KL polynomials; cheap to share between threads.
#[derive(Default)]
pub struct KlEngine {
    columns: RwLock<HashMap<Permutation, Column>>,
}

impl KlEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `P_{u,w}`; the zero polynomial unless `u ≤ w`.
    pub fn kl_poly(&self, u: &Permutation, w: &Permutation) -> Result<KlPolynomial> {
        if u.size() != w.size() {
            return Err(Error::input(format!("permutations of different sizes {} and {}", u.size(), w.size())));
        }
        Ok(self.column(w).get(u).cloned().unwrap_or_default())
    }

    /// `μ(z, v)`: coefficient of `q^{(ℓ(v)-ℓ(z)-1)/2}` in `P_{z,v}`.
    pub fn mu(&self, z: &Permutation, v: &Permutation) -> i64 {
        mu_from(&self.column(v), z, v)
    }

    pub fn cached_columns(&self) -> usize {
        self.columns.read().len()
    }

    /// Snapshot of all cached values as `(x, w, P_{x,w})`.
    pub fn export(&self) -> Vec<(Permutation, Permutation, KlPolynomial)> {
        let cols = self.columns.read();
        let mut out: Vec<_> = cols
            .iter()
            .flat_map(|(w, col)| col.iter().map(move |(x, p)| (x.clone(), w.clone(), p.clone())))
            .collect();
        out.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
        out
    }

    /// Seeds the cache with previously exported columns. Only complete
    /// columns (all `x ≤ w` present) are accepted.
    pub fn import(&self, entries: Vec<(Permutation, Permutation, KlPolynomial)>) {
        let mut by_w: HashMap<Permutation, HashMap<Permutation, KlPolynomial>> = HashMap::new();
        for (x, w, p) in entries {
            by_w.entry(w).or_default().insert(x, p);
        }
        let mut cols = self.columns.write();
        for (w, col) in by_w {
            if col.len() == lower_interval(&w).len() {
                cols.entry(w).or_insert_with(|| Arc::new(col));
            }
        }
    }

    fn column(&self, w: &Permutation) -> Column {
        if let Some(c) = self.columns.read().get(w) {
            return c.clone();
        }
        let col = Arc::new(self.compute_column(w));
        self.columns.write().entry(w.clone()).or_insert(col).clone()
    }

    fn compute_column(&self, w: &Permutation) -> HashMap<Permutation, KlPolynomial> {
        let n = w.size();
        let Some(s) = (0..n.saturating_sub(1)).find(|&i| w.is_right_descent(i)) else {
            return HashMap::from([(w.clone(), KlPolynomial::one())]);
        };
        let v = w.times_simple(s);
        let col_v = self.column(&v);
        let lw = w.length();
        let lv = lw - 1;
        // z < v with zs < z and μ(z, v) ≠ 0
        let mut zs: Vec<(Permutation, i64, Column)> = Vec::new();
        for z in col_v.keys() {
            if z == &v || !z.is_right_descent(s) {
                continue;
            }
            let m = mu_from(&col_v, z, &v);
            if m != 0 {
                zs.push((z.clone(), m, self.column(z)));
            }
        }
        let lower = lower_interval(w);
        let mut col: HashMap<Permutation, KlPolynomial> = HashMap::with_capacity(lower.len());
        for x in lower.iter().filter(|x| x.is_right_descent(s)) {
            let xs = x.times_simple(s);
            let mut p = col_v.get(&xs).cloned().unwrap_or_default();
            if let Some(pxv) = col_v.get(x) {
                p.add_shifted(pxv, 1, 1);
            }
            for (z, m, col_z) in &zs {
                if let Some(pxz) = col_z.get(x) {
                    let shift = (lw - z.length()) / 2;
                    p.add_shifted(pxz, shift, -m);
                }
            }
            col.insert(x.clone(), p.trimmed());
        }
        for x in lower.iter().filter(|x| !x.is_right_descent(s)) {
            let p = col.get(&x.times_simple(s)).cloned().unwrap_or_default();
            col.insert(x.clone(), p);
        }
        debug_assert_eq!(lv + 1, lw);
        col
    }
}

fn mu_from(col_v: &HashMap<Permutation, KlPolynomial>, z: &Permutation, v: &Permutation) -> i64 {
    let (lz, lv) = (z.length(), v.length());
    if lz >= lv || (lv - lz) % 2 == 0 {
        return 0;
    }
    col_v.get(z).map_or(0, |p| p.coeff((lv - lz - 1) / 2))
}

/// All `x ≤ w`, found by walking down through length-decreasing transpositions.
pub fn lower_interval(w: &Permutation) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::from([w.clone()]);
    let mut stack = vec![w.clone()];
    while let Some(x) = stack.pop() {
        let n = x.size();
        for i in 0..n {
            for j in i + 1..n {
                if x.0[i] > x.0[j] {
                    let mut y = x.0.clone();
                    y.swap(i, j);
                    let y = Permutation(y);
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn bruhat_examples() {
        assert!(bruhat_leq(&p("2143"), &p("3412")).unwrap());
        assert!(bruhat_leq(&p("1234"), &p("4321")).unwrap());
        assert!(!bruhat_leq(&p("3412"), &p("2143")).unwrap());
        assert!(!bruhat_leq(&p("132"), &p("213")).unwrap());
        assert!(bruhat_leq(&p("12"), &p("123")).is_err());
    }

    #[test]
    fn lower_interval_sizes() {
        assert_eq!(lower_interval(&Permutation::longest(4)).len(), 24);
        assert_eq!(lower_interval(&p("3412")).len(), 14);
        for w in Permutation::all(4) {
            let lower = lower_interval(&w);
            for u in Permutation::all(4) {
                assert_eq!(lower.contains(&u), bruhat_leq(&u, &w).unwrap());
            }
        }
    }

    #[test]
    fn small_polynomials() {
        let e = KlEngine::new();
        assert_eq!(e.kl_poly(&p("1234"), &p("3412")).unwrap(), KlPolynomial(vec![1, 1]));
        assert_eq!(e.kl_poly(&p("2143"), &p("4231")).unwrap(), KlPolynomial(vec![1, 1]));
        assert_eq!(e.kl_poly(&p("123"), &p("321")).unwrap(), KlPolynomial::one());
        assert!(e.kl_poly(&p("3412"), &p("2143")).unwrap().is_zero());
        assert_eq!(e.kl_poly(&p("3412"), &p("3412")).unwrap(), KlPolynomial::one());
    }

    #[test]
    fn export_import_roundtrip() {
        let a = KlEngine::new();
        a.kl_poly(&Permutation::identity(4), &Permutation::longest(4)).unwrap();
        let b = KlEngine::new();
        b.import(a.export());
        assert_eq!(a.cached_columns(), b.cached_columns());
        assert_eq!(b.kl_poly(&p("1234"), &p("3412")).unwrap(), KlPolynomial(vec![1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(KlPolynomial(vec![1, 1]).to_string(), "1 + q");
        assert_eq!(KlPolynomial(vec![1, 0, 2]).to_string(), "1 + 2q^2");
        assert_eq!(p("3412").to_string(), "3412");
    }
}
