//! Multisegments to permutations, and the multiplicity matrix.
//!
//! For one chain with node dimensions `d_0, ..., d_n` and arrows
//! `x_i : E_i -> E_{i+1}`, place the orbit representative in the matrix
//!
//! ```text
//!            C_n   C_{n-1}  ...   C_1     C_0
//!   R_0                          x_0^T    I
//!   R_1                   x_1^T   I
//!   ...
//!   R_n       I
//! ```
//!
//! (block `(R_i, C_i) = I`, block `(R_i, C_{i+1}) = x_i^T`, zero elsewhere).
//! Its north-west ranks depend only on the orbit:
//! `NW(a, b) = Σ_{p=b}^{a} d_p + r_{b-1, a+1}` when `a ≥ b - 1` and `0`
//! otherwise, with `r` set to `0` outside the grid. Second differences of `NW`
//! give a block count matrix `c(p, q)`, which is the Bruhat-cell datum of the
//! representative in the double coset space `S_{d_n..d_0} \ S_N / S_{d_n..d_0}`.
//! The permutation attached to the orbit is the longest element of that
//! double coset, after reversing the row blocks (`R_n` first).
//!
//! With this dictionary, `D ⊆ closure(C)` iff `v(D) ≤ v(C)` in Bruhat order,
//! codimensions match length differences, and the stalk of the IC sheaf of
//! `closure(C)` along `D` has Poincaré polynomial `P_{v(D), v(C)}`. The
//! multiplicity matrix therefore has
//!
//! ```text
//! entry[C][D] = [S_{π(C)} : π(D)] = P_{v(C), v(D)}(1)   if C ≤ D, else 0
//! ```
//!
//! for trivial local systems (stabilizers of general-linear orbits are
//! connected, so no other local systems occur). Disconnected chains are
//! handled block-diagonally.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conventions::FROZEN;
use crate::error::{Error, Result};
use crate::kl::{bruhat_leq, KlEngine, KlPolynomial, Permutation};
use crate::orbits::{OrbitTable, RankMatrix};
use crate::variety::{Shape, VoganVariety};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CosetRep {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KlOrder {
    /// `P_{v(smaller orbit), v(larger orbit)}`.
    SmallerFirst,
    /// `P_{v(larger orbit), v(smaller orbit)}`.
    LargerFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BridgeConvention {
    /// Reverse the row blocks (`R_n` first) before reading off the permutation.
    pub standard: bool,
    /// Use the inverse permutation.
    pub transpose: bool,
    pub rep: CosetRep,
    pub order: KlOrder,
}

impl BridgeConvention {
    pub fn all() -> Vec<BridgeConvention> {
        let mut out = Vec::new();
        for standard in [true, false] {
            for transpose in [false, true] {
                for rep in [CosetRep::Max, CosetRep::Min] {
                    for order in [KlOrder::SmallerFirst, KlOrder::LargerFirst] {
                        out.push(BridgeConvention { standard, transpose, rep, order });
                    }
                }
            }
        }
        out
    }
}

fn require_quiver(v: &VoganVariety) -> Result<()> {
    match v.shape {
        Shape::Quiver => Ok(()),
        _ => Err(Error::unsupported("the permutation bridge applies to the general-linear family only")),
    }
}

/// Block counts `c[p][q]` for one component (positions `0..=n`).
pub fn block_counts(dims: &[usize], r: impl Fn(usize, usize) -> usize) -> Result<Vec<Vec<usize>>> {
    let n1 = dims.len();
    let rank = |i: i64, j: i64| -> i64 {
        if i < 0 || j >= n1 as i64 {
            0
        } else {
            r(i as usize, j as usize) as i64
        }
    };
    let nw = |a: i64, b: i64| -> i64 {
        if a < 0 || b >= n1 as i64 || a + 1 < b {
            return 0;
        }
        let s: i64 = (b.max(0)..=a).map(|p| dims[p as usize] as i64).sum();
        s + rank(b - 1, a + 1)
    };
    let mut c = vec![vec![0usize; n1]; n1];
    for p in 0..n1 as i64 {
        for q in 0..n1 as i64 {
            let v = nw(p, q) - nw(p - 1, q) - nw(p, q + 1) + nw(p - 1, q + 1);
            if v < 0 {
                return Err(Error::invariant(format!("negative block count at ({p},{q})")));
            }
            c[p as usize][q as usize] = v as usize;
        }
    }
    for p in 0..n1 {
        let row: usize = c[p].iter().sum();
        let col: usize = c.iter().map(|row| row[p]).sum();
        if row != dims[p] || col != dims[p] {
            return Err(Error::invariant("block counts do not match the dimension vector"));
        }
    }
    Ok(c)
}

fn component_permutation(dims: &[usize], counts: &[Vec<usize>], conv: BridgeConvention) -> Vec<usize> {
    let n1 = dims.len();
    let row_order: Vec<usize> = if conv.standard { (0..n1).rev().collect() } else { (0..n1).collect() };
    let col_order: Vec<usize> = (0..n1).rev().collect();
    let mut col_start = vec![0usize; n1];
    let mut acc = 0;
    for &q in &col_order {
        col_start[q] = acc;
        acc += dims[q];
    }
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); n1];
    for &q in &col_order {
        let mut used = 0;
        for &p in &row_order {
            for k in 0..counts[p][q] {
                let col = match conv.rep {
                    CosetRep::Max => col_start[q] + dims[q] - 1 - used - k,
                    CosetRep::Min => col_start[q] + used + k,
                };
                assigned[p].push(col);
            }
            used += counts[p][q];
        }
    }
    let mut images = Vec::with_capacity(acc);
    for &p in &row_order {
        let mut cols = assigned[p].clone();
        match conv.rep {
            CosetRep::Max => cols.sort_unstable_by(|a, b| b.cmp(a)),
            CosetRep::Min => cols.sort_unstable(),
        }
        images.extend(cols);
    }
    images
}

/// Bridge permutation of the orbit with rank data `rank`.
pub fn permutation_from_ranks(v: &VoganVariety, rank: &RankMatrix, conv: BridgeConvention) -> Result<Permutation> {
    require_quiver(v)?;
    let mut total = Permutation::identity(0);
    for comp in &v.components {
        let dims: Vec<usize> = comp.iter().map(|&n| v.nodes[n].dim).collect();
        let chain = v.nodes[comp[0]].chain;
        let idx: Vec<i64> = comp.iter().map(|&n| v.nodes[n].index).collect();
        let counts = block_counts(&dims, |i, j| rank.get(chain, idx[i], idx[j]))?;
        let mut p = Permutation::from_images(component_permutation(&dims, &counts, conv))?;
        if conv.transpose {
            p = p.inverse();
        }
        total = total.concat(&p);
    }
    Ok(total)
}

pub fn multisegment_to_permutation(v: &VoganVariety, m: &crate::orbits::Multisegment) -> Result<Permutation> {
    permutation_from_ranks(v, &crate::orbits::rank_matrix(m, &v.dims), FROZEN)
}

pub fn bridge_permutations(t: &OrbitTable, conv: BridgeConvention) -> Result<Vec<Permutation>> {
    t.orbits.iter().map(|o| permutation_from_ranks(&t.variety, &o.rank_matrix, conv)).collect()
}

/// `P` for the pair (smaller orbit, larger orbit) under the given convention.
pub fn bridge_poly(engine: &KlEngine, conv: BridgeConvention, smaller: &Permutation, larger: &Permutation) -> Result<KlPolynomial> {
    match conv.order {
        KlOrder::SmallerFirst => engine.kl_poly(smaller, larger),
        KlOrder::LargerFirst => engine.kl_poly(larger, smaller),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixStatus {
    /// Every entry computed from KL polynomials.
    Computed,
    /// Only entries fixed by smooth closures are filled in.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityMatrix {
    /// Orbit ids labelling rows and columns.
    pub labels: Vec<usize>,
    /// `entries[C][D] = [S_{π(C)} : π(D)]`; `None` when undetermined.
    pub entries: Vec<Vec<Option<u64>>>,
    pub status: MatrixStatus,
}

impl MultiplicityMatrix {
    pub fn get(&self, c: usize, d: usize) -> Option<u64> {
        self.entries[c][d]
    }

    pub fn row(&self, c: usize) -> Vec<Option<u64>> {
        self.entries[c].clone()
    }

    pub fn column(&self, d: usize) -> Vec<Option<u64>> {
        self.entries.iter().map(|r| r[d]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("orbit");
        for l in &self.labels {
            out.push_str(&format!(",{l}"));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.entries) {
            out.push_str(&l.to_string());
            for e in row {
                match e {
                    Some(v) => out.push_str(&format!(",{v}")),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn multiplicity_matrix(t: &OrbitTable, engine: &KlEngine) -> Result<MultiplicityMatrix> {
    multiplicity_matrix_with(t, engine, FROZEN)
}

pub fn multiplicity_matrix_with(t: &OrbitTable, engine: &KlEngine, conv: BridgeConvention) -> Result<MultiplicityMatrix> {
    require_quiver(&t.variety)?;
    let perms = bridge_permutations(t, conv)?;
    let n = t.len();
    let entries: Vec<Vec<Option<u64>>> = (0..n)
        .into_par_iter()
        .map(|c| {
            (0..n)
                .map(|d| {
                    if !t.leq(c, d) {
                        return Ok(Some(0));
                    }
                    let p = bridge_poly(engine, conv, &perms[c], &perms[d])?;
                    Ok(Some(p.eval_at_one().max(0) as u64))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(MultiplicityMatrix { labels: (0..n).collect(), entries, status: MatrixStatus::Computed })
}

/// Matrix with only the columns of smooth-closure orbits filled in.
pub fn partial_multiplicity_matrix(t: &OrbitTable, smooth: &[bool]) -> MultiplicityMatrix {
    let n = t.len();
    let entries = (0..n)
        .map(|c| (0..n).map(|d| smooth[d].then(|| u64::from(t.leq(c, d)))).collect())
        .collect();
    MultiplicityMatrix { labels: (0..n).collect(), entries, status: MatrixStatus::Partial }
}

/// All KL polynomials `P_{v(D), v(C)}` for `D ≤ C` equal 1.
pub fn rationally_smooth(t: &OrbitTable, engine: &KlEngine, c: usize) -> Result<bool> {
    rationally_smooth_with(t, engine, FROZEN, c)
}

pub fn rationally_smooth_with(t: &OrbitTable, engine: &KlEngine, conv: BridgeConvention, c: usize) -> Result<bool> {
    require_quiver(&t.variety)?;
    let perms = bridge_permutations(t, conv)?;
    for d in (0..t.len()).filter(|&d| t.leq(d, c)) {
        if bridge_poly(engine, conv, &perms[d], &perms[c])? != KlPolynomial::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether Bruhat order on bridge permutations reproduces the closure order.
pub fn closure_matches_bruhat(t: &OrbitTable, conv: BridgeConvention) -> Result<bool> {
    let perms = bridge_permutations(t, conv)?;
    for a in 0..t.len() {
        for b in 0..t.len() {
            let bruhat = match conv.order {
                KlOrder::SmallerFirst => bruhat_leq(&perms[a], &perms[b])?,
                KlOrder::LargerFirst => bruhat_leq(&perms[b], &perms[a])?,
            };
            if bruhat != t.leq(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the smooth-closure indicator property and the open-orbit identity
/// row for one convention, without masking entries by the closure order.
pub fn convention_passes(t: &OrbitTable, engine: &KlEngine, smooth: &[bool], conv: BridgeConvention) -> Result<bool> {
    let perms = bridge_permutations(t, conv)?;
    let value = |c: usize, d: usize| -> Result<i64> { Ok(bridge_poly(engine, conv, &perms[c], &perms[d])?.eval_at_one()) };
    let open = t.open_id();
    for d in 0..t.len() {
        if value(open, d)? != i64::from(d == open) {
            return Ok(false);
        }
        if smooth[d] {
            for c in 0..t.len() {
                if value(c, d)? != i64::from(t.leq(c, d)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Conventions passing the checks on the calibration varieties.
pub fn calibrate(engine: &KlEngine) -> Result<Vec<BridgeConvention>> {
    use crate::geometry::is_smooth_closure;
    use crate::variety::{build_variety, Family, GradedDims};
    let mut tables = Vec::new();
    for dims in [GradedDims::steinberg(3)?, GradedDims::two_eigenvalue(2)?] {
        let t = OrbitTable::new(build_variety(&dims, Family::Gl)?)?;
        let smooth: Vec<bool> = (0..t.len()).map(|c| is_smooth_closure(&t, c)).collect::<Result<_>>()?;
        tables.push((t, smooth));
    }
    let mut passing = Vec::new();
    for conv in BridgeConvention::all() {
        let mut ok = true;
        for (t, smooth) in &tables {
            ok &= convention_passes(t, engine, smooth, conv)?;
        }
        if ok {
            passing.push(conv);
        }
    }
    Ok(passing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{Multisegment, Segment};
    use crate::variety::{build_variety, Family, GradedDims};

    fn table(dims: GradedDims) -> OrbitTable {
        OrbitTable::new(build_variety(&dims, Family::Gl).unwrap()).unwrap()
    }

    #[test]
    fn frozen_convention_passes_calibration() {
        let passing = calibrate(&KlEngine::new()).unwrap();
        assert!(passing.contains(&FROZEN), "frozen convention fails calibration; passing: {passing:?}");
    }

    #[test]
    fn steinberg_gl2_permutations() {
        let t = table(GradedDims::steinberg(2).unwrap());
        let perms = bridge_permutations(&t, FROZEN).unwrap();
        assert_eq!(perms[t.closed_id()], Permutation::parse("12").unwrap());
        assert_eq!(perms[t.open_id()], Permutation::parse("21").unwrap());
    }

    #[test]
    fn two_eigenvalue_rank_one_is_singular() {
        let t = table(GradedDims::two_eigenvalue(2).unwrap());
        let e = KlEngine::new();
        let perms = bridge_permutations(&t, FROZEN).unwrap();
        assert_eq!(e.kl_poly(&perms[0], &perms[1]).unwrap(), KlPolynomial(vec![1, 1]));
        let m = multiplicity_matrix(&t, &e).unwrap();
        assert_eq!(m.get(0, 1), Some(2));
        assert!(!rationally_smooth(&t, &e, 1).unwrap());
        assert!(rationally_smooth(&t, &e, 0).unwrap());
        assert!(rationally_smooth(&t, &e, 2).unwrap());
    }

    #[test]
    fn closure_is_bruhat_and_codimension_is_length() {
        for dims in [&[1usize, 2, 1][..], &[2, 2, 1], &[1, 1, 1, 1], &[2, 3]] {
            let t = table(GradedDims::single(crate::variety::Exponent::from_integer(0), dims).unwrap());
            assert!(closure_matches_bruhat(&t, FROZEN).unwrap());
            let perms = bridge_permutations(&t, FROZEN).unwrap();
            for a in 0..t.len() {
                for b in 0..t.len() {
                    if t.leq(a, b) {
                        assert_eq!(t.orbits[b].dim - t.orbits[a].dim, perms[b].length() - perms[a].length());
                    }
                }
            }
        }
    }

    #[test]
    fn nw_ranks_match_block_matrix() {
        // multisegment {[0,2],[1],[2]} on dims (1,2,2)
        let dims = GradedDims::single(crate::variety::Exponent::from_integer(0), &[1, 2, 2]).unwrap();
        let v = build_variety(&dims, Family::Gl).unwrap();
        let m = Multisegment::new(vec![Segment::new(0, 0, 2), Segment::new(0, 1, 1), Segment::new(0, 2, 2)]);
        let x = crate::orbits::representative(&v, &m).unwrap();
        let r = crate::orbits::rank_matrix(&m, &dims);
        let d = [1usize, 2, 2];
        let counts = block_counts(&d, |i, j| r.get(0, i as i64, j as i64)).unwrap();
        // assemble the block matrix and compare every north-west rank
        let off = |p: usize| -> usize { d[..p].iter().sum() };
        let coloff = |q: usize| -> usize { d[q + 1..].iter().sum() };
        let big = crate::linalg::QMatrix::from_fn(5, 5, |i, j| {
            let p = (0..3).find(|&p| i >= off(p) && i < off(p) + d[p]).unwrap();
            let q = (0..3).find(|&q| j >= coloff(q) && j < coloff(q) + d[q]).unwrap();
            let (li, lj) = (i - off(p), j - coloff(q));
            if q == p {
                crate::linalg::q(i64::from(li == lj))
            } else if q == p + 1 {
                x.blocks[p].get(lj, li).clone()
            } else {
                crate::linalg::q(0)
            }
        });
        for a in 0..3 {
            for b in 0..3 {
                let rows = off(a) + d[a];
                let cols = coloff(b) + d[b];
                let sub = crate::linalg::QMatrix::from_fn(rows, cols, |i, j| big.get(i, j).clone());
                let expected: usize = (0..=a).flat_map(|p| (b..3).map(move |q| (p, q))).map(|(p, q)| counts[p][q]).sum();
                assert_eq!(sub.rank(), expected, "NW({a},{b})");
            }
        }
    }
}
