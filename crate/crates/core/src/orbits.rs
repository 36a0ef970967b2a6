//! Orbit enumeration, rank invariants and the closure order.
//!
//! General-linear orbits are multisegments: multisets of intervals of grid
//! indices within one chain, covering each grid point exactly `d_e` times.
//! The rank matrix `r_ij` (number of segments containing `[i, j]`) is a
//! complete invariant, and `D ⊆ closure(C)` iff `r(D) ≤ r(C)` entrywise.
//!
//! The classical example families use their own labels (subsets of the
//! simple roots, or the rank of the matrix `X`) but every orbit also carries
//! the rank data of its representative in the ambient general-linear
//! realization.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_of_vectors, Q};
use crate::variety::{format_exponent, Form, GradedDims, Orientation, Point, Shape, VoganVariety};

/// Closed interval `[start, end]` of grid indices inside one chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub chain: usize,
    pub start: i64,
    pub end: i64,
}

impl Segment {
    pub fn new(chain: usize, start: i64, end: i64) -> Self {
        debug_assert!(start <= end);
        Segment { chain, start, end }
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, chain: usize, i: i64, j: i64) -> bool {
        self.chain == chain && self.start <= i && j <= self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multisegment {
    segments: Vec<Segment>,
}

impl Multisegment {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        Multisegment { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of segments through each `(chain, grid index)`.
    pub fn coverage(&self) -> BTreeMap<(usize, i64), usize> {
        let mut cov = BTreeMap::new();
        for s in &self.segments {
            for k in s.start..=s.end {
                *cov.entry((s.chain, k)).or_insert(0) += 1;
            }
        }
        cov
    }

    pub fn covers(&self, dims: &GradedDims) -> bool {
        let expected: BTreeMap<(usize, i64), usize> = dims
            .chains
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| ch.dims.iter().map(move |(&k, &d)| ((c, k), d)))
            .collect();
        self.coverage() == expected
    }

    /// Text form with exponents, e.g. `{[-1/2,1/2],[1/2]}`.
    pub fn display(&self, dims: &GradedDims) -> String {
        let parts: Vec<String> = self
            .segments
            .iter()
            .map(|s| {
                let ch = &dims.chains[s.chain];
                let (a, b) = (format_exponent(ch.exponent(s.start)), format_exponent(ch.exponent(s.end)));
                if s.start == s.end {
                    format!("[{a}]")
                } else {
                    format!("[{a},{b}]")
                }
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// `r[(chain, i, j)]` for `i ≤ j` in one connected run of the chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RankMatrix {
    pub entries: BTreeMap<(usize, i64, i64), usize>,
}

impl RankMatrix {
    pub fn get(&self, chain: usize, i: i64, j: i64) -> usize {
        self.entries.get(&(chain, i, j)).copied().unwrap_or(0)
    }

    pub fn dominated_by(&self, other: &RankMatrix) -> bool {
        self.entries.iter().all(|(k, &v)| v <= other.entries.get(k).copied().unwrap_or(0))
    }

    fn values(&self) -> Vec<usize> {
        self.entries.values().copied().collect()
    }

    /// Segment multiplicities by inclusion-exclusion.
    pub fn segment_counts(&self) -> Result<BTreeMap<(usize, i64, i64), usize>> {
        let mut out = BTreeMap::new();
        for &(c, i, j) in self.entries.keys() {
            let m = self.get(c, i, j) as i64 - self.get(c, i - 1, j) as i64 - self.get(c, i, j + 1) as i64
                + self.get(c, i - 1, j + 1) as i64;
            if m < 0 {
                return Err(Error::input(format!("rank data is not realizable at ({c},{i},{j})")));
            }
            if m > 0 {
                out.insert((c, i, j), m as usize);
            }
        }
        Ok(out)
    }
}

pub fn rank_keys(dims: &GradedDims) -> Vec<(usize, i64, i64)> {
    let mut keys = Vec::new();
    for (c, ch) in dims.chains.iter().enumerate() {
        for run in ch.runs() {
            for (a, &i) in run.iter().enumerate() {
                for &j in &run[a..] {
                    keys.push((c, i, j));
                }
            }
        }
    }
    keys
}

pub fn rank_matrix(m: &Multisegment, dims: &GradedDims) -> RankMatrix {
    let entries = rank_keys(dims)
        .into_iter()
        .map(|(c, i, j)| ((c, i, j), m.segments.iter().filter(|s| s.contains(c, i, j)).count()))
        .collect();
    RankMatrix { entries }
}

pub fn multisegment_from_ranks(r: &RankMatrix) -> Result<Multisegment> {
    let mut segs = Vec::new();
    for ((c, i, j), m) in r.segment_counts()? {
        segs.extend(std::iter::repeat_n(Segment::new(c, i, j), m));
    }
    Ok(Multisegment::new(segs))
}

/// All multisegments with the given coverage, longest segments tried first.
pub fn enumerate_multisegments(dims: &GradedDims) -> Vec<Multisegment> {
    let mut per_component: Vec<Vec<Vec<Segment>>> = Vec::new();
    for (c, ch) in dims.chains.iter().enumerate() {
        for run in ch.runs() {
            let residual: Vec<usize> = run.iter().map(|&k| ch.dim(k)).collect();
            let mut found = Vec::new();
            let mut current = Vec::new();
            extend_run(c, run[0], residual, None, &mut current, &mut found);
            per_component.push(found);
        }
    }
    let mut out = vec![Vec::new()];
    for options in per_component {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for opt in &options {
                let mut segs: Vec<Segment> = prefix.clone();
                segs.extend_from_slice(opt);
                next.push(segs);
            }
        }
        out = next;
    }
    out.into_iter().map(Multisegment::new).collect()
}

fn extend_run(
    chain: usize,
    base: i64,
    mut residual: Vec<usize>,
    last: Option<(usize, usize)>,
    current: &mut Vec<Segment>,
    found: &mut Vec<Vec<Segment>>,
) {
    // segments are produced in (start ascending, end descending) order
    let Some(start) = residual.iter().position(|&r| r > 0) else {
        found.push(current.clone());
        return;
    };
    let mut reach = start;
    while reach + 1 < residual.len() && residual[reach + 1] > 0 {
        reach += 1;
    }
    let max_end = match last {
        Some((ls, le)) if ls == start => reach.min(le),
        _ => reach,
    };
    for end in (start..=max_end).rev() {
        for r in &mut residual[start..=end] {
            *r -= 1;
        }
        current.push(Segment::new(chain, base + start as i64, base + end as i64));
        extend_run(chain, base, residual.clone(), Some((start, end)), current, found);
        current.pop();
        for r in &mut residual[start..=end] {
            *r += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    /// General-linear orbit, named by its multisegment.
    Multisegment(Multisegment),
    /// Steinberg-shape orbit `C_S`, `S` a set of simple-root indices (0-based).
    Subset(Vec<usize>),
    /// Two-eigenvalue orbit of matrices of the given rank.
    Rank(usize),
}

impl OrbitLabel {
    pub fn display(&self, dims: &GradedDims) -> String {
        match self {
            OrbitLabel::Multisegment(m) => m.display(dims),
            OrbitLabel::Subset(s) => {
                let parts: Vec<String> = s.iter().map(|i| format!("a{}", i + 1)).collect();
                format!("S={{{}}}", parts.join(","))
            }
            OrbitLabel::Rank(r) => format!("rank {r}"),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Multisegment(m) => write!(f, "{:?}", m.segments),
            other => f.write_str(&other.display(&GradedDims::default())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub id: usize,
    pub label: OrbitLabel,
    /// Multisegment of the representative in the general-linear realization.
    pub multisegment: Multisegment,
    pub rank_matrix: RankMatrix,
    pub dim: usize,
    pub representative: Point,
    pub is_open: bool,
    pub is_closed: bool,
    pub(crate) variety_key: String,
}

/// Rank data of a point of the ambient arrow space (either orientation).
pub fn point_rank_matrix(v: &VoganVariety, x: &Point) -> RankMatrix {
    let mut entries = BTreeMap::new();
    for comp in &v.components {
        for (a, &ni) in comp.iter().enumerate() {
            let node = v.nodes[ni];
            entries.insert((node.chain, node.index, node.index), node.dim);
            for &nj in &comp[a + 1..] {
                let r = v.composite(x, ni, nj).rank();
                entries.insert((node.chain, node.index, v.nodes[nj].index), r);
            }
        }
    }
    RankMatrix { entries }
}

/// Shift-operator representative: one Jordan-type block per segment.
pub fn representative(v: &VoganVariety, m: &Multisegment) -> Result<Point> {
    if !m.covers(&v.dims) {
        return Err(Error::input("multisegment does not cover the dimension vector"));
    }
    let node_of: BTreeMap<(usize, i64), usize> =
        v.nodes.iter().enumerate().map(|(id, n)| ((n.chain, n.index), id)).collect();
    let mut next_slot = vec![0usize; v.nodes.len()];
    let mut x = v.zero();
    for s in m.segments() {
        let mut prev: Option<(usize, usize)> = None;
        for k in s.start..=s.end {
            let n = node_of[&(s.chain, k)];
            let slot = next_slot[n];
            next_slot[n] += 1;
            if let Some((pn, ps)) = prev {
                let ai = v.arrow_between(pn, n);
                match v.orientation {
                    Orientation::Up => x.blocks[ai].set(slot, ps, Q::one()),
                    Orientation::Down => x.blocks[ai].set(ps, slot, Q::one()),
                }
            }
            prev = Some((n, slot));
        }
    }
    Ok(x)
}

/// Rank of `A ↦ [A, x]` on the degree-zero Lie algebra.
pub fn orbit_dim(v: &VoganVariety, x: &Point) -> usize {
    let images: Vec<Vec<Q>> = v.lie_basis.iter().map(|a| v.act(a, x).flatten()).collect();
    let len = images.first().map_or(0, Vec::len);
    rank_of_vectors(len, &images)
}

/// Orbit label of an arbitrary point of `v`.
pub fn classify_point(v: &VoganVariety, x: &Point) -> Result<OrbitLabel> {
    match &v.shape {
        Shape::Quiver => Ok(OrbitLabel::Multisegment(multisegment_from_ranks(&point_rank_matrix(v, x))?)),
        Shape::Steinberg { .. } => {
            Ok(OrbitLabel::Subset(v.coords(x).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()))
        }
        Shape::TwoEigenvalue { .. } => Ok(OrbitLabel::Rank(x.blocks[0].rank())),
    }
}

fn classical_points(v: &VoganVariety) -> Vec<(OrbitLabel, Point)> {
    match &v.shape {
        Shape::Quiver => unreachable!(),
        Shape::Steinberg { .. } => {
            let r = v.total_dim;
            (0u64..1 << r)
                .map(|mask| {
                    let subset: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
                    let p = crate::variety::steinberg_point(v, &subset);
                    (OrbitLabel::Subset(subset), p)
                })
                .collect()
        }
        Shape::TwoEigenvalue { n, form } => {
            let n = *n;
            // basis index of the (i, j) entry, i <= j (i < j when alternating)
            let index = |i: usize, j: usize| -> usize {
                match form {
                    Form::Symmetric => (0..i).map(|a| n - a).sum::<usize>() + (j - i),
                    Form::Alternating => (0..i).map(|a| n - a - 1).sum::<usize>() + (j - i - 1),
                }
            };
            let ranks: Vec<usize> = match form {
                Form::Symmetric => (0..=n).collect(),
                Form::Alternating => (0..=n).step_by(2).collect(),
            };
            ranks
                .into_iter()
                .map(|r| {
                    let mut coords = vec![Q::zero(); v.total_dim];
                    match form {
                        Form::Symmetric => (0..r).for_each(|i| coords[index(i, i)] = Q::one()),
                        Form::Alternating => (0..r / 2).for_each(|k| coords[index(2 * k, 2 * k + 1)] = Q::one()),
                    }
                    (OrbitLabel::Rank(r), v.point_from_coords(&coords))
                })
                .collect()
        }
    }
}

pub fn enumerate_orbits(v: &VoganVariety) -> Result<Vec<OrbitRecord>> {
    let points: Vec<(OrbitLabel, Point)> = match v.shape {
        Shape::Quiver => enumerate_multisegments(&v.dims)
            .into_iter()
            .map(|m| representative(v, &m).map(|x| (OrbitLabel::Multisegment(m), x)))
            .collect::<Result<_>>()?,
        _ => classical_points(v),
    };
    let key = v.key();
    let mut records: Vec<OrbitRecord> = points
        .into_par_iter()
        .map(|(label, x)| {
            let rank_matrix = point_rank_matrix(v, &x);
            let multisegment = multisegment_from_ranks(&rank_matrix)?;
            let dim = orbit_dim(v, &x);
            Ok(OrbitRecord {
                id: 0,
                label,
                multisegment,
                rank_matrix,
                dim,
                representative: x,
                is_open: dim == v.total_dim,
                is_closed: dim == 0,
                variety_key: key.clone(),
            })
        })
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| {
        (a.dim, a.rank_matrix.values(), &a.label).cmp(&(b.dim, b.rank_matrix.values(), &b.label))
    });
    for (id, r) in records.iter_mut().enumerate() {
        r.id = id;
    }
    let opens = records.iter().filter(|r| r.is_open).count();
    let closeds = records.iter().filter(|r| r.is_closed).count();
    if opens != 1 || closeds != 1 {
        return Err(Error::invariant(format!("expected one open and one closed orbit, found {opens} and {closeds}")));
    }
    Ok(records)
}

/// `a ⊆ closure(b)`.
pub fn closure_leq(a: &OrbitRecord, b: &OrbitRecord) -> Result<bool> {
    if a.variety_key != b.variety_key {
        return Err(Error::input("orbits belong to different varieties"));
    }
    match (&a.label, &b.label) {
        (OrbitLabel::Multisegment(_), OrbitLabel::Multisegment(_)) => Ok(a.rank_matrix.dominated_by(&b.rank_matrix)),
        (OrbitLabel::Subset(s), OrbitLabel::Subset(t)) => Ok(s.iter().all(|i| t.contains(i))),
        (OrbitLabel::Rank(r), OrbitLabel::Rank(s)) => Ok(r <= s),
        _ => Err(Error::input("orbits belong to different varieties")),
    }
}

/// A variety with its orbits and closure relation.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub variety: VoganVariety,
    pub orbits: Vec<OrbitRecord>,
    leq: Vec<Vec<bool>>,
}

impl OrbitTable {
    pub fn new(variety: VoganVariety) -> Result<Self> {
        let orbits = enumerate_orbits(&variety)?;
        let mut leq = vec![vec![false; orbits.len()]; orbits.len()];
        for a in &orbits {
            for b in &orbits {
                leq[a.id][b.id] = closure_leq(a, b)?;
            }
        }
        Ok(OrbitTable { variety, orbits, leq })
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Orbit `a` lies in the closure of orbit `b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn open_id(&self) -> usize {
        self.orbits.iter().position(|o| o.is_open).expect("orbit tables have an open orbit")
    }

    pub fn closed_id(&self) -> usize {
        self.orbits.iter().position(|o| o.is_closed).expect("orbit tables have a closed orbit")
    }

    pub fn find(&self, label: &OrbitLabel) -> Option<usize> {
        self.orbits.iter().position(|o| &o.label == label)
    }

    pub fn classify(&self, x: &Point) -> Result<usize> {
        let label = classify_point(&self.variety, x)?;
        self.find(&label).ok_or_else(|| Error::invariant(format!("point classified as {label}, which is not in the table")))
    }

    /// Covering relations `(lower, upper)`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        hasse(self)
    }
}

pub fn hasse(t: &OrbitTable) -> Vec<(usize, usize)> {
    let n = t.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !t.leq(a, b) {
                continue;
            }
            let covered = (0..n).all(|c| c == a || c == b || !(t.leq(a, c) && t.leq(c, b)));
            if covered {
                edges.push((a, b));
            }
        }
    }
    edges
}
