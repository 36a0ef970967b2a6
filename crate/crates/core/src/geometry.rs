//! Tangent spaces of orbit closures, conormal spaces and Pyasetskii duality.
//!
//! Smoothness of `closure(C)` is decided by the Jacobian criterion. The
//! closure is cut out by the rank conditions `rank(c_ij) ≤ r_ij(C)` on the
//! composed arrow maps; for equioriented type-A quivers these minors
//! generate a reduced ideal (a classical theorem this module relies on), and
//! the same holds for the symmetric and alternating determinantal loci of the
//! two-eigenvalue families. At a point `x` with `rank c_ij(x) = r_ij(C)` the
//! derivative of the minors is `coker(c_x) ∘ dc_x(v) ∘ ker(c_x)`; where the
//! rank is strictly smaller every minor vanishes to order at least two and
//! contributes nothing. Steinberg-shape closures are coordinate subspaces.
//!
//! The dual orbit `C*` is the orbit of a generic covector `ξ` in the
//! conormal space `{ξ ∈ V* : [x, ξ] = 0}` at a representative `x` of `C`.
//! Genericity is obtained by random rational combinations of a conormal
//! basis. A sample is accepted when two independent samples land in the same
//! orbit and the sampled orbit passes the Lagrangian check
//! `N_x ⊆ T_ξ C*`; after a bounded number of failures the orbit is computed
//! symbolically from ranks over the function field of the conormal space.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_of_vectors, QMatrix, Q};
use crate::orbits::{closure_leq, multisegment_from_ranks, Multisegment, OrbitLabel, OrbitRecord, OrbitTable, RankMatrix, Segment};
use crate::poly::PolyMatrix;
use crate::variety::{Family, Orientation, Point, Shape, VoganVariety};

/// Sample coordinates are `p / q` with `|p|, q ≤ 2^16`.
pub const SAMPLE_BOUND: i64 = 1 << 16;
pub const MAX_RETRIES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReport {
    pub orbit: usize,
    pub stratum: usize,
    pub tangent_dim: usize,
    pub smooth_at: bool,
}

/// Arrow indices applied, in order, by the composite between component
/// positions `a < b`.
fn composite_steps(v: &VoganVariety, comp: &[usize], a: usize, b: usize) -> Vec<usize> {
    let forward: Vec<usize> = (a..b).map(|k| v.arrow_between(comp[k], comp[k + 1])).collect();
    match v.orientation {
        Orientation::Up => forward,
        Orientation::Down => forward.into_iter().rev().collect(),
    }
}

/// Composite `c_x` and its derivative in direction `dir`.
fn composite_with_derivative(steps: &[usize], x: &Point, dir: &Point, source_dim: usize) -> (QMatrix, QMatrix) {
    let mut m = QMatrix::identity(source_dim);
    let mut dm = QMatrix::zeros(source_dim, source_dim);
    for &ai in steps {
        let (xa, ba) = (&x.blocks[ai], &dir.blocks[ai]);
        dm = xa.mul(&dm).add(&ba.mul(&m));
        m = xa.mul(&m);
    }
    (m, dm)
}

/// Dimension of the Zariski tangent space of `closure(c)` at the representative of `d`.
pub fn tangent_dim_at(v: &VoganVariety, c: &OrbitRecord, d: &OrbitRecord) -> Result<usize> {
    if !closure_leq(d, c)? {
        return Err(Error::input(format!("orbit {} is not in the closure of orbit {}", d.id, c.id)));
    }
    if let OrbitLabel::Subset(s) = &c.label {
        // closure(C_S) is the coordinate subspace spanned by S
        let eqs: Vec<Vec<Q>> = (0..v.total_dim)
            .filter(|i| !s.contains(i))
            .map(|i| {
                let mut e = vec![Q::zero(); v.total_dim];
                e[i] = crate::linalg::q(1);
                e
            })
            .collect();
        return Ok(v.total_dim - rank_of_vectors(v.total_dim, &eqs));
    }
    let x = &d.representative;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for comp in &v.components {
        for a in 0..comp.len() {
            for b in a + 1..comp.len() {
                let (na, nb) = (v.nodes[comp[a]], v.nodes[comp[b]]);
                let (ia, ib) = (na.index, nb.index);
                if d.rank_matrix.get(na.chain, ia, ib) != c.rank_matrix.get(na.chain, ia, ib) {
                    continue;
                }
                let steps = composite_steps(v, comp, a, b);
                let src = match v.orientation {
                    Orientation::Up => na.dim,
                    Orientation::Down => nb.dim,
                };
                let (cx, _) = composite_with_derivative(&steps, x, &v.zero(), src);
                let ker = cx.nullspace();
                let coker = cx.left_nullspace();
                if ker.is_empty() || coker.is_empty() {
                    continue;
                }
                let kmat = QMatrix::from_columns(cx.cols(), &ker);
                let lmat = QMatrix::from_columns(cx.rows(), &coker).transpose();
                let per_basis: Vec<Vec<Q>> = v
                    .basis
                    .iter()
                    .map(|bv| {
                        let (_, dc) = composite_with_derivative(&steps, x, bv, src);
                        lmat.mul(&dc).mul(&kmat).entries().to_vec()
                    })
                    .collect();
                let neqs = per_basis.first().map_or(0, Vec::len);
                for e in 0..neqs {
                    rows.push(per_basis.iter().map(|col| col[e].clone()).collect());
                }
            }
        }
    }
    let rank = if rows.is_empty() { 0 } else { QMatrix::from_fn(rows.len(), v.total_dim, |i, j| rows[i][j].clone()).rank() };
    Ok(v.total_dim - rank)
}

/// Tangent reports of `closure(orbit c)` along every stratum in it.
pub fn tangent_reports(t: &OrbitTable, c: usize) -> Result<Vec<TangentReport>> {
    let co = &t.orbits[c];
    (0..t.len())
        .into_par_iter()
        .filter(|&d| t.leq(d, c))
        .map(|d| {
            let tangent_dim = tangent_dim_at(&t.variety, co, &t.orbits[d])?;
            if tangent_dim < co.dim {
                return Err(Error::invariant(format!("tangent space of orbit {c} at orbit {d} is smaller than the orbit")));
            }
            Ok(TangentReport { orbit: c, stratum: d, tangent_dim, smooth_at: tangent_dim == co.dim })
        })
        .collect()
}

pub fn is_smooth_closure(t: &OrbitTable, c: usize) -> Result<bool> {
    Ok(tangent_reports(t, c)?.iter().all(|r| r.smooth_at))
}

/// Basis of `{ξ ∈ V* : [x, ξ] = 0}`, as points of `dual`.
pub fn conormal_space(v: &VoganVariety, dual: &VoganVariety, x: &Point) -> Vec<Point> {
    if dual.basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Q>> = dual.basis.iter().map(|b| lie_flatten(&v.bracket(x, b))).collect();
    let len = cols[0].len();
    if len == 0 {
        return dual.basis.clone();
    }
    QMatrix::from_columns(len, &cols).nullspace().iter().map(|c| dual.point_from_coords(c)).collect()
}

fn lie_flatten(a: &[QMatrix]) -> Vec<Q> {
    a.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualStrategy {
    /// Random rational samples with verification, then symbolic fallback.
    Randomized { seed: u64 },
    /// Ranks over the function field of the conormal space.
    Symbolic,
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    let num = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let den = rng.gen_range(1..=SAMPLE_BOUND);
    Q::new(BigInt::from(num), BigInt::from(den))
}

fn combine(dual: &VoganVariety, basis: &[Point], coeffs: &[Q]) -> Point {
    let mut p = dual.zero();
    for (b, c) in basis.iter().zip(coeffs) {
        p = p.add(&b.scale(c));
    }
    p
}

/// `N_x ⊆ T_ξ (H·ξ)`.
fn lagrangian_check(dual: &VoganVariety, normal: &[Point], xi: &Point) -> bool {
    let tangent: Vec<Vec<Q>> = dual.lie_basis.iter().map(|a| dual.act(a, xi).flatten()).collect();
    let len = xi.flatten().len();
    if normal.is_empty() {
        return true;
    }
    let base = rank_of_vectors(len, &tangent);
    let mut all = tangent;
    all.extend(normal.iter().map(Point::flatten));
    rank_of_vectors(len, &all) == base
}

/// Id of the orbit `C*` in `dual` paired with orbit `c` of `t`.
pub fn pyasetskii_dual(t: &OrbitTable, dual: &OrbitTable, c: usize, strategy: DualStrategy) -> Result<usize> {
    let (v, dv) = (&t.variety, &dual.variety);
    if dv.orientation != v.orientation.flip() || dv.dims != v.dims || dv.family != v.family {
        return Err(Error::input("second table is not the dual of the first"));
    }
    let x = &t.orbits[c].representative;
    let normal = conormal_space(v, dv, x);
    if normal.is_empty() {
        return dual.classify(&dv.zero());
    }
    match strategy {
        DualStrategy::Symbolic => symbolic_dual(dual, &normal),
        DualStrategy::Randomized { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            for _ in 0..MAX_RETRIES {
                let a: Vec<Q> = (0..normal.len()).map(|_| random_rational(&mut rng)).collect();
                let b: Vec<Q> = (0..normal.len()).map(|_| random_rational(&mut rng)).collect();
                let (xa, xb) = (combine(dv, &normal, &a), combine(dv, &normal, &b));
                let (Ok(ia), Ok(ib)) = (dual.classify(&xa), dual.classify(&xb)) else {
                    continue;
                };
                if ia == ib && lagrangian_check(dv, &normal, &xa) {
                    return Ok(ia);
                }
            }
            symbolic_dual(dual, &normal)
        }
    }
}

fn symbolic_dual(dual: &OrbitTable, normal: &[Point]) -> Result<usize> {
    let dv = &dual.variety;
    let label = match &dv.shape {
        Shape::Steinberg { .. } => {
            let coords: Vec<Vec<Q>> = normal.iter().map(|p| dv.coords(p)).collect();
            OrbitLabel::Subset((0..dv.total_dim).filter(|&i| coords.iter().any(|c| !c[i].is_zero())).collect())
        }
        Shape::TwoEigenvalue { .. } => OrbitLabel::Rank(symbolic_block(normal, 0).rank()),
        Shape::Quiver => {
            let mut entries = std::collections::BTreeMap::new();
            for comp in &dv.components {
                for a in 0..comp.len() {
                    let na = dv.nodes[comp[a]];
                    entries.insert((na.chain, na.index, na.index), na.dim);
                    for b in a + 1..comp.len() {
                        let nb = dv.nodes[comp[b]];
                        let steps = composite_steps(dv, comp, a, b);
                        let src = match dv.orientation {
                            Orientation::Up => na.dim,
                            Orientation::Down => nb.dim,
                        };
                        let mut m = PolyMatrix::identity(normal.len(), src);
                        for ai in steps {
                            m = symbolic_block(normal, ai).mul(&m);
                        }
                        entries.insert((na.chain, na.index, nb.index), m.rank());
                    }
                }
            }
            OrbitLabel::Multisegment(multisegment_from_ranks(&RankMatrix { entries })?)
        }
    };
    dual.find(&label).ok_or_else(|| Error::invariant(format!("symbolic dual {label} is not an orbit")))
}

fn symbolic_block(normal: &[Point], arrow: usize) -> PolyMatrix {
    let parts: Vec<QMatrix> = normal.iter().map(|p| p.blocks[arrow].clone()).collect();
    let (r, c) = (parts[0].rows(), parts[0].cols());
    PolyMatrix::linear_combination(&parts, r, c)
}

/// Duality as a map from orbit ids of `t` to orbit ids of `dual`.
pub fn dual_map(t: &OrbitTable, dual: &OrbitTable, strategy: DualStrategy) -> Result<Vec<usize>> {
    (0..t.len()).into_par_iter().map(|c| pyasetskii_dual(t, dual, c, strategy)).collect()
}

/// Moeglin-Waldspurger involution on a general-linear multisegment.
///
/// Each pass, within one chain:
/// 1. take the largest end `e` among the remaining segments, and among the
///    segments ending at `e` the shortest one;
/// 2. repeatedly look for a segment ending one step lower whose start is
///    strictly smaller than the start of the segment just taken, choosing the
///    shortest such segment, until none exists;
/// 3. if `k` segments were taken, emit `[e - k + 1, e]` and shorten every
///    taken segment by removing its last point (dropping emptied ones).
///
/// The emitted segments form the dual multisegment.
pub fn mw_involution(v: &VoganVariety, m: &Multisegment) -> Result<Multisegment> {
    if v.family != Family::Gl {
        return Err(Error::unsupported("the Moeglin-Waldspurger algorithm applies to the general-linear family only"));
    }
    Ok(mw_multisegment(m))
}

pub fn mw_multisegment(m: &Multisegment) -> Multisegment {
    let mut segs: Vec<Segment> = m.segments().to_vec();
    let mut out = Vec::new();
    while !segs.is_empty() {
        let chain = segs.iter().map(|s| s.chain).min().expect("nonempty");
        let e = segs.iter().filter(|s| s.chain == chain).map(|s| s.end).max().expect("nonempty");
        let first = (0..segs.len())
            .filter(|&i| segs[i].chain == chain && segs[i].end == e)
            .max_by_key(|&i| segs[i].start)
            .expect("segment with maximal end");
        let mut taken = vec![first];
        let (mut start, mut end) = (segs[first].start, e);
        while let Some(next) = (0..segs.len())
            .filter(|&i| segs[i].chain == chain && segs[i].end == end - 1 && segs[i].start < start)
            .max_by_key(|&i| segs[i].start)
        {
            taken.push(next);
            start = segs[next].start;
            end -= 1;
        }
        out.push(Segment::new(chain, e - taken.len() as i64 + 1, e));
        for &i in &taken {
            segs[i].end -= 1;
        }
        segs.retain(|s| s.start <= s.end);
    }
    Multisegment::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{build_variety, Exponent, GradedDims};

    fn tables(dims: &GradedDims, family: Family) -> (OrbitTable, OrbitTable) {
        let v = build_variety(dims, family).unwrap();
        let d = v.dual();
        (OrbitTable::new(v).unwrap(), OrbitTable::new(d).unwrap())
    }

    #[test]
    fn determinantal_cone_is_singular() {
        let (t, _) = tables(&GradedDims::two_eigenvalue(2).unwrap(), Family::Gl);
        assert_eq!(tangent_dim_at(&t.variety, &t.orbits[1], &t.orbits[0]).unwrap(), 4);
        assert_eq!(tangent_dim_at(&t.variety, &t.orbits[1], &t.orbits[1]).unwrap(), 3);
        assert!(!is_smooth_closure(&t, 1).unwrap());
        assert!(is_smooth_closure(&t, 0).unwrap());
        assert!(is_smooth_closure(&t, 2).unwrap());
        assert!(tangent_dim_at(&t.variety, &t.orbits[0], &t.orbits[1]).is_err());
    }

    #[test]
    fn steinberg_closures_are_smooth() {
        for fam in [Family::Gl, Family::SpDual] {
            let (t, _) = tables(&GradedDims::steinberg(4).unwrap(), fam);
            for c in 0..t.len() {
                assert!(is_smooth_closure(&t, c).unwrap());
            }
        }
    }

    #[test]
    fn conormal_dimensions() {
        let (t, d) = tables(&GradedDims::single(Exponent::zero(), &[1, 2, 1]).unwrap(), Family::Gl);
        for o in &t.orbits {
            let n = conormal_space(&t.variety, &d.variety, &o.representative);
            assert_eq!(n.len(), t.variety.total_dim - o.dim);
            for xi in &n {
                assert!(t.variety.bracket(&o.representative, xi).iter().all(QMatrix::is_zero));
            }
        }
        // Steinberg GL_2: at x = arrow 1 the only covector is 0
        let (t, d) = tables(&GradedDims::steinberg(2).unwrap(), Family::Gl);
        assert!(conormal_space(&t.variety, &d.variety, &t.orbits[t.open_id()].representative).is_empty());
        assert_eq!(conormal_space(&t.variety, &d.variety, &t.variety.zero()).len(), 1);
    }

    #[test]
    fn steinberg_gl2_duality_swaps() {
        let (t, d) = tables(&GradedDims::steinberg(2).unwrap(), Family::Gl);
        let map = dual_map(&t, &d, DualStrategy::Randomized { seed: 0 }).unwrap();
        assert_eq!(map[t.closed_id()], d.open_id());
        assert_eq!(map[t.open_id()], d.closed_id());
    }

    #[test]
    fn randomized_and_symbolic_agree() {
        let dims = GradedDims::single(Exponent::zero(), &[1, 2, 2, 1]).unwrap();
        let (t, d) = tables(&dims, Family::Gl);
        let a = dual_map(&t, &d, DualStrategy::Randomized { seed: 7 }).unwrap();
        let b = dual_map(&t, &d, DualStrategy::Symbolic).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mw_examples() {
        let m = Multisegment::new(vec![Segment::new(0, 1, 2)]);
        assert_eq!(mw_multisegment(&m), Multisegment::new(vec![Segment::new(0, 1, 1), Segment::new(0, 2, 2)]));
        let zero = Multisegment::new((0..4).map(|k| Segment::new(0, k, k)).collect());
        assert_eq!(mw_multisegment(&zero), Multisegment::new(vec![Segment::new(0, 0, 3)]));
        let v = build_variety(&GradedDims::steinberg(4).unwrap(), Family::SpDual).unwrap();
        assert!(matches!(mw_involution(&v, &zero), Err(Error::Unsupported(_))));
    }
}
