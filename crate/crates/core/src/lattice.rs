//! Integer lattices: Smith normal form and component groups of diagonalizable
//! stabilizers inside a dual torus.
//!
//! A root datum here is only the data needed for the Steinberg-type analysis:
//! the simple roots of the dual group written as characters of its maximal
//! torus, plus a list of torsion central elements written as rational
//! cocharacters `c` (meaning `t = exp(2 pi i c)`).
//!
//! The stabilizer of `x_S = sum of root vectors in S` is the diagonalizable
//! group `Hom(X / L_S, C^*)`, where `X` is the character lattice and `L_S` is
//! spanned by the roots in `S`. Its component group is dual to the torsion of
//! `X / L_S`, which the Smith normal form exposes directly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variety::Family;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::input("ragged integer matrix"));
        }
        let entries = rows.iter().flatten().map(|&v| BigInt::from(v)).collect();
        Ok(IntMatrix { rows: r, cols: c, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    *out.at(i, j) += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(k, k) * m.get(i, j) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.at(i, j) = v;
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            *self.at(dst, j) += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            *self.at(i, dst) += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            *self.at(r, j) = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation: `d = u * m * v`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, maintained alongside it.
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

/// Smith normal form `D = U·M·V` with `U`, `V` unimodular and
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m);
    (s.d, s.u, s.v)
}

pub fn smith(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        v_inv.swap_rows(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..r {
                let k = d.get(i, t).div_floor(d.get(t, t));
                if !k.is_zero() {
                    let nk = -k;
                    d.add_row(i, t, &nk);
                    u.add_row(i, t, &nk);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let k = d.get(t, j).div_floor(d.get(t, t));
                if !k.is_zero() {
                    let nk = -k.clone();
                    d.add_col(j, t, &nk);
                    v.add_col(j, t, &nk);
                    v_inv.add_row(t, j, &k);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                // a remainder survived: move the smallest entry of row/col t to the pivot
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = d.get(i, t);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = d.get(t, j);
                    if !x.is_zero() && x.abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    d.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                    v_inv.swap_rows(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d, u, v, v_inv }
}

/// Finite abelian group `Z/d_1 x ... x Z/d_k` with `d_1 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentGroup {
    pub elementary_divisors: Vec<u64>,
}

impl ComponentGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_divisors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }
}

impl fmt::Display for ComponentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.elementary_divisors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A torsion element of the dual torus, `exp(2 pi i * numerators / denominator)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterGenerator {
    pub label: String,
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl CenterGenerator {
    pub fn from_rationals(label: impl Into<String>, coords: &[BigRational]) -> Self {
        let denominator = coords.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numerators = coords.iter().map(|x| x.numer() * (&denominator / x.denom())).collect();
        CenterGenerator { label: label.into(), numerators, denominator }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub family: Family,
    pub rank: usize,
    /// Simple roots as character vectors, one row each.
    pub roots: IntMatrix,
    pub center: Vec<CenterGenerator>,
}

fn unit_root(rank: usize, plus: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; rank];
    for &(i, c) in plus {
        v[i] += c;
    }
    v
}

fn type_a_roots(n: usize) -> Vec<Vec<i64>> {
    (0..n.saturating_sub(1)).map(|i| unit_root(n, &[(i, 1), (i + 1, -1)])).collect()
}

fn minus_identity(n: usize) -> CenterGenerator {
    CenterGenerator {
        label: "-I".into(),
        numerators: vec![BigInt::one(); n],
        denominator: BigInt::from(2),
    }
}

impl RootDatum {
    pub fn new(family: Family, rank: usize, roots: Vec<Vec<i64>>, center: Vec<CenterGenerator>) -> Result<Self> {
        if roots.iter().any(|r| r.len() != rank) {
            return Err(Error::input("every root must have length equal to the rank"));
        }
        let roots = if roots.is_empty() { IntMatrix::zeros(0, rank) } else { IntMatrix::from_rows(&roots)? };
        let rd = RootDatum { family, rank, roots, center };
        rd.validate()?;
        Ok(rd)
    }

    fn validate(&self) -> Result<()> {
        for z in &self.center {
            if z.numerators.len() != self.rank {
                return Err(Error::input(format!("center generator {} has wrong length", z.label)));
            }
            if z.denominator.is_zero() {
                return Err(Error::input("center generator with zero denominator"));
            }
            for i in 0..self.roots.rows() {
                let pairing: BigInt = (0..self.rank).map(|j| self.roots.get(i, j) * &z.numerators[j]).sum();
                if !pairing.is_multiple_of(&z.denominator) {
                    return Err(Error::input(format!(
                        "center generator {} is not central: root {} pairs non-integrally",
                        z.label, i
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dual group GL(n, C): simple roots `e_i - e_{i+1}`, connected center.
    pub fn gl(n: usize) -> Self {
        RootDatum::new(Family::Gl, n, type_a_roots(n), vec![]).expect("GL root datum is valid")
    }

    /// Dual group SO(2n, C): extra simple root `e_{n-1} + e_n`, center `{±I}`.
    pub fn so_even(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("SO(2n) needs n >= 2"));
        }
        let mut roots = type_a_roots(n);
        roots.push(unit_root(n, &[(n - 2, 1), (n - 1, 1)]));
        RootDatum::new(Family::SoEven, n, roots, vec![minus_identity(n)])
    }

    /// Dual group Sp(2n, C) of SO(2n+1): extra simple root `2 e_n`, center `{±I}`.
    pub fn sp_dual(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::input("Sp(2n) needs n >= 1"));
        }
        let mut roots = type_a_roots(n);
        roots.push(unit_root(n, &[(n - 1, 2)]));
        RootDatum::new(Family::SpDual, n, roots, vec![minus_identity(n)])
    }

    /// Dual group SO(2n+1, C) of Sp(2n): extra simple root `e_n`, trivial center.
    pub fn so_odd_dual(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::input("SO(2n+1) needs n >= 1"));
        }
        let mut roots = type_a_roots(n);
        roots.push(unit_root(n, &[(n - 1, 1)]));
        RootDatum::new(Family::SoOddDual, n, roots, vec![])
    }

    pub fn for_family(family: Family, n: usize) -> Result<Self> {
        match family {
            Family::Gl => Ok(Self::gl(n)),
            Family::SoEven => Self::so_even(n),
            Family::SpDual => Self::sp_dual(n),
            Family::SoOddDual => Self::so_odd_dual(n),
        }
    }

    pub fn simple_root_count(&self) -> usize {
        self.roots.rows()
    }

    pub fn root(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|j| self.roots.get(i, j).to_i64().unwrap_or(0)).collect()
    }

    fn subset_matrix(&self, subset: &[usize]) -> Result<IntMatrix> {
        let mut entries = Vec::with_capacity(subset.len() * self.rank);
        for &s in subset {
            if s >= self.roots.rows() {
                return Err(Error::input(format!(
                    "simple root index {s} out of range (datum has {})",
                    self.roots.rows()
                )));
            }
            entries.extend((0..self.rank).map(|j| self.roots.get(s, j).clone()));
        }
        IntMatrix::new(subset.len(), self.rank, entries)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RootDatumFile = serde_json::from_str(text)?;
        file.into_datum()
    }
}

/// Component group of the stabilizer of `x_S` in the dual torus.
pub fn stabilizer_component_group(rd: &RootDatum, subset: &[usize]) -> Result<ComponentGroup> {
    let m = rd.subset_matrix(subset)?;
    Ok(component_group_of_cokernel(&smith(&m)))
}

fn component_group_of_cokernel(s: &SmithForm) -> ComponentGroup {
    let elementary_divisors = s
        .invariant_factors()
        .into_iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().expect("elementary divisor fits in u64"))
        .collect();
    ComponentGroup { elementary_divisors }
}

/// Where each central torsion element lands in the component group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterImage {
    pub group: ComponentGroup,
    /// `(label, residues)`: residues are coordinates in `Z/d_1 x ... x Z/d_k`.
    pub images: Vec<(String, Vec<u64>)>,
    /// The center surjects onto the component group, so every nontrivial
    /// local system is accounted for by a non-split pure inner form.
    pub center_surjects: bool,
}

pub fn center_image(rd: &RootDatum, subset: &[usize]) -> Result<CenterImage> {
    let m = rd.subset_matrix(subset)?;
    let s = smith(&m);
    let group = component_group_of_cokernel(&s);
    let factors = s.d.diagonal();
    // torsion coordinates: indices with d_i > 1
    let torsion: Vec<(usize, BigInt)> = (0..rd.rank)
        .filter_map(|i| {
            let d = factors.get(i).cloned().unwrap_or_else(BigInt::zero);
            (d > BigInt::one()).then_some((i, d))
        })
        .collect();

    let mut images = Vec::new();
    for z in &rd.center {
        // (V^{-1} c)_i with c = numerators / denominator
        let mut residues = Vec::with_capacity(torsion.len());
        for (i, d) in &torsion {
            let w: BigInt = (0..rd.rank).map(|j| s.v_inv.get(*i, j) * &z.numerators[j]).sum();
            let scaled = w * d;
            if !scaled.is_multiple_of(&z.denominator) {
                return Err(Error::invariant(format!(
                    "center generator {} does not lie in the stabilizer",
                    z.label
                )));
            }
            let class = (scaled / &z.denominator).mod_floor(d);
            residues.push(class.to_u64().expect("residue fits in u64"));
        }
        images.push((z.label.clone(), residues));
    }

    let center_surjects = if group.is_trivial() {
        true
    } else {
        let k = torsion.len();
        let mut rows: Vec<Vec<BigInt>> =
            images.iter().map(|(_, r)| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for (idx, (_, d)) in torsion.iter().enumerate() {
            let mut row = vec![BigInt::zero(); k];
            row[idx] = d.clone();
            rows.push(row);
        }
        let stacked = IntMatrix::new(rows.len(), k, rows.into_iter().flatten().collect())?;
        let f = smith(&stacked).invariant_factors();
        f.len() == k && f.iter().all(One::is_one)
    };

    Ok(CenterImage { group, images, center_surjects })
}

#[derive(Debug, Serialize, Deserialize)]
struct RootDatumFile {
    rank: usize,
    family: Family,
    roots: Vec<Vec<i64>>,
    #[serde(default)]
    center: Vec<Vec<String>>,
}

impl RootDatumFile {
    fn into_datum(self) -> Result<RootDatum> {
        let mut center = Vec::new();
        for (k, coords) in self.center.iter().enumerate() {
            let parsed = coords
                .iter()
                .map(|s| s.trim().parse::<BigRational>().map_err(|_| Error::input(format!("bad rational {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            center.push(CenterGenerator::from_rationals(format!("z{k}"), &parsed));
        }
        RootDatum::new(self.family, self.rank, self.roots, center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_snf(m: &IntMatrix) {
        let s = smith(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let diag = s.d.diagonal();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn snf_identity() {
        let (d, u, v) = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(d, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_one_by_one() {
        let (d, _, _) = smith_normal_form(&im(&[vec![2]]));
        assert_eq!(d, im(&[vec![2]]));
        let (d, _, _) = smith_normal_form(&im(&[vec![-5]]));
        assert_eq!(d, im(&[vec![5]]));
    }

    #[test]
    fn snf_two_by_two() {
        // hand reduction: gcd of entries is 2, |det| = 8, so diag(2, 4)
        let m = im(&[vec![2, 4], vec![6, 8]]);
        let (d, _, _) = smith_normal_form(&m);
        assert_eq!(d, im(&[vec![2, 0], vec![0, 4]]));
        check_snf(&m);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let m = im(&[vec![2, 0], vec![0, 3]]);
        let (d, _, _) = smith_normal_form(&m);
        assert_eq!(d.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_snf(&m);
        check_snf(&im(&[vec![0, 0, 0], vec![0, 4, 6], vec![3, 0, 9]]));
        check_snf(&im(&[vec![0, 2], vec![0, 0], vec![0, 7]]));
        check_snf(&IntMatrix::zeros(2, 3));
    }

    #[test]
    fn sp_dual_long_root_gives_z2() {
        for n in 2..=5 {
            let rd = RootDatum::sp_dual(n).unwrap();
            let long = n - 1;
            let g = stabilizer_component_group(&rd, &[long]).unwrap();
            assert_eq!(g.elementary_divisors, vec![2]);
            let all: Vec<usize> = (0..n).collect();
            assert_eq!(stabilizer_component_group(&rd, &all).unwrap().elementary_divisors, vec![2]);
            let ci = center_image(&rd, &[long]).unwrap();
            assert_eq!(ci.images, vec![("-I".to_string(), vec![1])]);
            assert!(ci.center_surjects);
        }
    }

    #[test]
    fn so_even_and_so_odd_extra_roots_are_connected() {
        for n in 2..=5 {
            let rd = RootDatum::so_even(n).unwrap();
            assert!(stabilizer_component_group(&rd, &[n - 1]).unwrap().is_trivial());
            // with e_{n-1} - e_n also present, t_n = ±1 survives and the center covers it
            let all: Vec<usize> = (0..n).collect();
            assert_eq!(stabilizer_component_group(&rd, &all).unwrap().elementary_divisors, vec![2]);
            assert!(center_image(&rd, &all).unwrap().center_surjects);
            let rd = RootDatum::so_odd_dual(n).unwrap();
            assert!(stabilizer_component_group(&rd, &[n - 1]).unwrap().is_trivial());
        }
    }

    #[test]
    fn trivial_group_sends_center_to_identity() {
        let rd = RootDatum::so_even(3).unwrap();
        let ci = center_image(&rd, &[0, 2]).unwrap();
        assert!(ci.group.is_trivial());
        assert!(ci.images.iter().all(|(_, r)| r.is_empty()));
        assert!(ci.center_surjects);
    }

    #[test]
    fn gl_has_no_center_generators() {
        let rd = RootDatum::gl(4);
        let ci = center_image(&rd, &[0, 1, 2]).unwrap();
        assert!(ci.images.is_empty());
        assert!(ci.group.is_trivial());
    }

    #[test]
    fn empty_subset_is_connected() {
        let rd = RootDatum::sp_dual(3).unwrap();
        assert!(stabilizer_component_group(&rd, &[]).unwrap().is_trivial());
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let rd = RootDatum::sp_dual(2).unwrap();
        assert!(matches!(stabilizer_component_group(&rd, &[5]), Err(Error::Input(_))));
    }

    #[test]
    fn json_roundtrip_of_sp4() {
        let text = r#"{"rank": 2, "family": "sp-dual", "roots": [[1,-1],[0,2]], "center": [["1/2","1/2"]]}"#;
        let rd = RootDatum::from_json(text).unwrap();
        let ci = center_image(&rd, &[1]).unwrap();
        assert_eq!(ci.group.elementary_divisors, vec![2]);
        assert!(ci.center_surjects);
        let bad = r#"{"rank": 2, "family": "sp-dual", "roots": [[1,-1],[0,2]], "center": [["1/3","0"]]}"#;
        assert!(RootDatum::from_json(bad).is_err());
    }
}
