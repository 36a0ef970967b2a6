//! Graded vector spaces attached to unramified infinitesimal parameters.
//!
//! An unramified infinitesimal parameter is recorded by its eigenvalue data:
//! one or more *chains*, each a set of exponents `offset + k` (`k` an integer
//! grid index) carrying the dimension of the `q^{offset + k}` eigenspace.
//! Exponents in different chains never differ by an integer.
//!
//! Arrow convention: `x` maps the exponent-`e` eigenspace to the
//! exponent-`e + 1` eigenspace. This is [`Orientation::Up`]; the dual space is
//! realized as the opposite orientation [`Orientation::Down`] and paired with
//! `V` through `tr(x ξ)`.
//!
//! Every variety, including the classical example families, is realized
//! inside the general-linear arrow space `⊕ Hom(E_e, E_{e+1})` of its
//! standard representation. The classical families use the following bases:
//!
//! * Steinberg shape: one root vector `E_α` per simple root, written in the
//!   standard basis `e_1..e_n, (e_0), e_{-n}..e_{-1}` with the form
//!   `B(e_i, e_{-i}) = 1` (`e_0` self-paired for odd orthogonal groups). The
//!   symmetry group is the diagonal torus.
//! * Two-eigenvalue shape: `V` is a space of `n x n` matrices `X` mapping
//!   `E_{-1/2} = span(e_{-j})` to `E_{1/2} = span(e_i)`. For dual group
//!   `Sp(2n)` the form forces `X` symmetric with basis
//!   `E_{i,-j} + E_{j,-i}` (`i < j`) and `E_{i,-i}`; for `SO(2n)` it forces
//!   `X` alternating with basis `E_{i,-j} - E_{j,-i}` (`i < j`). The symmetry
//!   group is the Levi `GL_n`, acting by `X ↦ g X g^T`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::RootDatum;
use crate::linalg::{q, QMatrix, Q};

pub type Exponent = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Dual group GL(n, C).
    Gl,
    /// Dual group SO(2n, C), for G = SO(2n).
    SoEven,
    /// Dual group Sp(2n, C), for G = SO(2n+1).
    SpDual,
    /// Dual group SO(2n+1, C), for G = Sp(2n).
    SoOddDual,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::SoEven => "so-even",
            Family::SpDual => "sp-dual",
            Family::SoOddDual => "so-odd-dual",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl" => Ok(Family::Gl),
            "so-even" => Ok(Family::SoEven),
            "sp-dual" => Ok(Family::SpDual),
            "so-odd-dual" => Ok(Family::SoOddDual),
            other => Err(Error::input(format!(
                "unknown family {other:?} (expected gl, so-even, sp-dual or so-odd-dual)"
            ))),
        }
    }
}

/// One q-power chain: grid index `k` stands for the exponent `offset + k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub offset: Exponent,
    pub dims: BTreeMap<i64, usize>,
}

impl Chain {
    pub fn contiguous(offset: Exponent, dims: &[usize]) -> Self {
        let dims = dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(k, &d)| (k as i64, d)).collect();
        Chain { offset, dims }
    }

    pub fn exponent(&self, index: i64) -> Exponent {
        self.offset + Exponent::from_integer(index)
    }

    pub fn dim(&self, index: i64) -> usize {
        self.dims.get(&index).copied().unwrap_or(0)
    }

    /// Maximal runs of consecutive grid indices.
    pub fn runs(&self) -> Vec<Vec<i64>> {
        let mut runs: Vec<Vec<i64>> = Vec::new();
        for &k in self.dims.keys() {
            match runs.last_mut() {
                Some(run) if *run.last().unwrap() + 1 == k => run.push(k),
                _ => runs.push(vec![k]),
            }
        }
        runs
    }

    /// Normalizes so that the smallest grid index is 0.
    fn normalized(&self) -> Chain {
        let Some(&lo) = self.dims.keys().next() else {
            return self.clone();
        };
        Chain {
            offset: self.offset + Exponent::from_integer(lo),
            dims: self.dims.iter().map(|(&k, &d)| (k - lo, d)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedDims {
    pub chains: Vec<Chain>,
}

impl GradedDims {
    pub fn new(chains: Vec<Chain>) -> Result<Self> {
        let chains: Vec<Chain> = chains.into_iter().filter(|c| !c.dims.is_empty()).map(|c| c.normalized()).collect();
        for (a, ca) in chains.iter().enumerate() {
            for cb in &chains[a + 1..] {
                if (ca.offset - cb.offset).is_integer() {
                    return Err(Error::input(format!(
                        "chains with offsets {} and {} differ by an integer; merge them into one chain",
                        ca.offset, cb.offset
                    )));
                }
            }
        }
        Ok(GradedDims { chains })
    }

    /// Single chain, `dims[k]` at exponent `offset + k`; zero entries are gaps.
    pub fn single(offset: Exponent, dims: &[usize]) -> Result<Self> {
        Self::new(vec![Chain::contiguous(offset, dims)])
    }

    /// Eigenvalues `q^{(n-1)/2}, ..., q^{(1-n)/2}`, each with multiplicity one.
    pub fn steinberg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("Steinberg parameter needs n >= 1"));
        }
        Self::single(Exponent::new(1 - n as i64, 2), &vec![1; n])
    }

    /// Eigenvalues `q^{1/2}` and `q^{-1/2}`, each with multiplicity `n`.
    pub fn two_eigenvalue(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("two-eigenvalue parameter needs n >= 1"));
        }
        Self::single(Exponent::new(-1, 2), &[n, n])
    }

    /// Steinberg parameter of the rank-`n` group of `family` in its standard representation.
    pub fn steinberg_for(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("Steinberg parameter needs n >= 1"));
        }
        match family {
            Family::Gl => Self::steinberg(n),
            Family::SpDual => Self::steinberg(2 * n),
            Family::SoOddDual => Self::steinberg(2 * n + 1),
            Family::SoEven => {
                if n < 2 {
                    return Err(Error::input("so-even Steinberg parameter needs n >= 2"));
                }
                let mut dims = vec![1; 2 * n - 1];
                dims[n - 1] = 2;
                Self::single(Exponent::from_integer(1 - n as i64), &dims)
            }
        }
    }

    pub fn total_rank(&self) -> usize {
        self.chains.iter().flat_map(|c| c.dims.values()).sum()
    }

    pub fn from_spec(spec: &VarietySpec) -> Result<Self> {
        let mut chains = Vec::with_capacity(spec.chains.len());
        for c in &spec.chains {
            chains.push(Chain::contiguous(parse_exponent(&c.offset)?, &c.dims));
        }
        Self::new(chains)
    }

    pub fn to_spec(&self, family: Family) -> VarietySpec {
        VarietySpec {
            family,
            chains: self
                .chains
                .iter()
                .map(|c| {
                    let hi = c.dims.keys().next_back().copied().unwrap_or(-1);
                    ChainSpec {
                        offset: format_exponent(c.offset),
                        dims: (0..=hi).map(|k| c.dim(k)).collect(),
                    }
                })
                .collect(),
        }
    }
}

pub fn parse_exponent(s: &str) -> Result<Exponent> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => n.trim().parse::<i64>().ok().zip(d.trim().parse::<i64>().ok()).and_then(|(n, d)| {
            (d != 0).then(|| Exponent::new(n, d))
        }),
        None => t.parse::<i64>().ok().map(Exponent::from_integer),
    };
    parsed.ok_or_else(|| Error::input(format!("cannot parse exponent {s:?}")))
}

pub fn format_exponent(e: Exponent) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Variety specification file: `{ family, chains: [ { offset, dims } ] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub family: Family,
    pub chains: Vec<ChainSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    #[serde(deserialize_with = "de_exponent_string")]
    pub offset: String,
    pub dims: Vec<usize>,
}

fn de_exponent_string<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::Int(i) => i.to_string(),
        Raw::Text(s) => s,
    })
}

impl VarietySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Arrows `E_e -> E_{e+1}`: the Vogan variety itself.
    Up,
    /// Arrows `E_{e+1} -> E_e`: its dual.
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Symmetric,
    Alternating,
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// All of `⊕ Hom(E_e, E_{e+1})` under `∏ GL(E_e)`.
    Quiver,
    /// `⊕_{α simple} g_α` under the maximal torus.
    Steinberg { root_datum: RootDatum },
    /// (Anti)symmetric `n x n` matrices under `GL_n`.
    TwoEigenvalue { n: usize, form: Form },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Quiver => "quiver",
            Shape::Steinberg { .. } => "steinberg",
            Shape::TwoEigenvalue { .. } => "two-eigenvalue",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub chain: usize,
    pub index: i64,
    pub dim: usize,
}

/// Arrow between two consecutive nodes of one chain (`lo` has the smaller exponent).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub lo: usize,
    pub hi: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpace {
    pub chain: usize,
    pub source: String,
    pub target: String,
    pub rows: usize,
    pub cols: usize,
}

/// A point of the ambient arrow space: one matrix per arrow, mapping in the
/// direction given by the variety's orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub blocks: Vec<QMatrix>,
}

impl Point {
    pub fn flatten(&self) -> Vec<Q> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(QMatrix::is_zero)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn transpose(&self) -> Point {
        Point { blocks: self.blocks.iter().map(QMatrix::transpose).collect() }
    }
}

/// An element of the degree-zero Lie algebra: one square block per node.
pub type LieElement = Vec<QMatrix>;

#[derive(Clone, Debug)]
pub struct VoganVariety {
    pub dims: GradedDims,
    pub family: Family,
    pub shape: Shape,
    pub orientation: Orientation,
    pub nodes: Vec<Node>,
    pub arrows: Vec<Arrow>,
    /// Node indices of each connected run, in increasing exponent.
    pub components: Vec<Vec<usize>>,
    pub arrow_spaces: Vec<ArrowSpace>,
    /// Basis of `V` inside the ambient arrow space.
    pub basis: Vec<Point>,
    /// Basis of `Lie(H)`.
    pub lie_basis: Vec<LieElement>,
    pub total_dim: usize,
    pub group_dim: usize,
    /// For each basis vector, a flattened position where it alone is nonzero.
    pivots: Vec<usize>,
}

const SUPPORTED_SHAPES: &str = "gl: any chains; sp-dual: Steinberg (dims 1^(2n) at offset -(2n-1)/2) or \
two-eigenvalue (dims (n,n) at offset -1/2); so-even: Steinberg (dims 1^(n-1),2,1^(n-1) at offset -(n-1), n>=2) \
or two-eigenvalue (dims (n,n) at offset -1/2); so-odd-dual: Steinberg (dims 1^(2n+1) at offset -n)";

pub fn build_variety(dims: &GradedDims, family: Family) -> Result<VoganVariety> {
    match family {
        Family::Gl => Ok(quiver_variety(dims, family)),
        _ => classical_variety(dims, family),
    }
}

/// `dim H_λ` for the variety.
pub fn group_dim(v: &VoganVariety) -> usize {
    v.group_dim
}

fn layout(dims: &GradedDims) -> (Vec<Node>, Vec<Arrow>, Vec<Vec<usize>>) {
    let mut nodes = Vec::new();
    let mut arrows = Vec::new();
    let mut components = Vec::new();
    for (c, chain) in dims.chains.iter().enumerate() {
        for run in chain.runs() {
            let mut comp = Vec::new();
            for &k in &run {
                let id = nodes.len();
                nodes.push(Node { chain: c, index: k, dim: chain.dim(k) });
                if let Some(&prev) = comp.last() {
                    arrows.push(Arrow { lo: prev, hi: id });
                }
                comp.push(id);
            }
            components.push(comp);
        }
    }
    (nodes, arrows, components)
}

fn arrow_spaces(dims: &GradedDims, nodes: &[Node], arrows: &[Arrow]) -> Vec<ArrowSpace> {
    arrows
        .iter()
        .map(|a| {
            let (lo, hi) = (nodes[a.lo], nodes[a.hi]);
            let chain = &dims.chains[lo.chain];
            ArrowSpace {
                chain: lo.chain,
                source: format_exponent(chain.exponent(lo.index)),
                target: format_exponent(chain.exponent(hi.index)),
                rows: hi.dim,
                cols: lo.dim,
            }
        })
        .collect()
}

fn quiver_variety(dims: &GradedDims, family: Family) -> VoganVariety {
    let (nodes, arrows, components) = layout(dims);
    let mut basis = Vec::new();
    for (ai, a) in arrows.iter().enumerate() {
        let (r, c) = (nodes[a.hi].dim, nodes[a.lo].dim);
        for i in 0..r {
            for j in 0..c {
                let mut p = zero_point(&nodes, &arrows, Orientation::Up);
                p.blocks[ai].set(i, j, Q::one());
                basis.push(p);
            }
        }
    }
    let mut lie_basis = Vec::new();
    for (ni, n) in nodes.iter().enumerate() {
        for i in 0..n.dim {
            for j in 0..n.dim {
                let mut el = zero_lie(&nodes);
                el[ni].set(i, j, Q::one());
                lie_basis.push(el);
            }
        }
    }
    finish(dims.clone(), family, Shape::Quiver, nodes, arrows, components, basis, lie_basis)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    dims: GradedDims,
    family: Family,
    shape: Shape,
    nodes: Vec<Node>,
    arrows: Vec<Arrow>,
    components: Vec<Vec<usize>>,
    basis: Vec<Point>,
    lie_basis: Vec<LieElement>,
) -> VoganVariety {
    let arrow_spaces = arrow_spaces(&dims, &nodes, &arrows);
    let pivots = find_pivots(&basis);
    VoganVariety {
        total_dim: basis.len(),
        group_dim: lie_basis.len(),
        dims,
        family,
        shape,
        orientation: Orientation::Up,
        nodes,
        arrows,
        components,
        arrow_spaces,
        basis,
        lie_basis,
        pivots,
    }
}

fn find_pivots(basis: &[Point]) -> Vec<usize> {
    let flat: Vec<Vec<Q>> = basis.iter().map(Point::flatten).collect();
    (0..flat.len())
        .map(|b| {
            (0..flat[b].len())
                .find(|&pos| !flat[b][pos].is_zero() && flat.iter().enumerate().all(|(o, v)| o == b || v[pos].is_zero()))
                .expect("variety bases have disjoint supports")
        })
        .collect()
}

pub(crate) fn zero_point(nodes: &[Node], arrows: &[Arrow], orientation: Orientation) -> Point {
    Point {
        blocks: arrows
            .iter()
            .map(|a| match orientation {
                Orientation::Up => QMatrix::zeros(nodes[a.hi].dim, nodes[a.lo].dim),
                Orientation::Down => QMatrix::zeros(nodes[a.lo].dim, nodes[a.hi].dim),
            })
            .collect(),
    }
}

fn zero_lie(nodes: &[Node]) -> LieElement {
    nodes.iter().map(|n| QMatrix::zeros(n.dim, n.dim)).collect()
}

impl VoganVariety {
    /// The dual space `V*`, realized with reversed arrows.
    pub fn dual(&self) -> VoganVariety {
        let mut d = self.clone();
        d.orientation = self.orientation.flip();
        d.basis = self.basis.iter().map(Point::transpose).collect();
        d.pivots = find_pivots(&d.basis);
        d
    }

    pub fn zero(&self) -> Point {
        zero_point(&self.nodes, &self.arrows, self.orientation)
    }

    /// Canonical description used to check two records come from the same variety.
    pub fn key(&self) -> String {
        let spec = self.dims.to_spec(self.family);
        format!(
            "{}|{}|{:?}|{}",
            self.family,
            self.shape.name(),
            self.orientation,
            serde_json::to_string(&spec.chains).unwrap_or_default()
        )
    }

    pub fn point_from_coords(&self, coords: &[Q]) -> Point {
        let mut p = self.zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                p = p.add(&b.scale(c));
            }
        }
        p
    }

    /// Coordinates of a point of `V` in the variety basis.
    pub fn coords(&self, p: &Point) -> Vec<Q> {
        let flat = p.flatten();
        self.basis
            .iter()
            .zip(&self.pivots)
            .map(|(b, &pos)| &flat[pos] / &b.flatten()[pos])
            .collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.point_from_coords(&self.coords(p)) == *p
    }

    /// `[A, x]` for `A` in the degree-zero Lie algebra.
    pub fn act(&self, a: &LieElement, x: &Point) -> Point {
        let blocks = self
            .arrows
            .iter()
            .zip(&x.blocks)
            .map(|(ar, xb)| match self.orientation {
                Orientation::Up => a[ar.hi].mul(xb).sub(&xb.mul(&a[ar.lo])),
                Orientation::Down => a[ar.lo].mul(xb).sub(&xb.mul(&a[ar.hi])),
            })
            .collect();
        Point { blocks }
    }

    /// `[x, ξ]` for `x` in this variety and `ξ` in the opposite orientation.
    pub fn bracket(&self, x: &Point, xi: &Point) -> LieElement {
        let mut out = zero_lie(&self.nodes);
        for (ai, ar) in self.arrows.iter().enumerate() {
            let (xa, ya) = (&x.blocks[ai], &xi.blocks[ai]);
            // x_a ξ_a lands on the target of x_a, ξ_a x_a on its source
            let (t, s) = match self.orientation {
                Orientation::Up => (ar.hi, ar.lo),
                Orientation::Down => (ar.lo, ar.hi),
            };
            out[t] = out[t].add(&xa.mul(ya));
            out[s] = out[s].sub(&ya.mul(xa));
        }
        out
    }

    /// Composite of the arrows between nodes `i < j` of one component, in
    /// the direction of the orientation.
    pub fn composite(&self, x: &Point, i: usize, j: usize) -> QMatrix {
        debug_assert!(i < j);
        match self.orientation {
            Orientation::Up => {
                let mut m = QMatrix::identity(self.nodes[i].dim);
                for k in i..j {
                    m = x.blocks[self.arrow_between(k, k + 1)].mul(&m);
                }
                m
            }
            Orientation::Down => {
                let mut m = QMatrix::identity(self.nodes[j].dim);
                for k in (i..j).rev() {
                    m = x.blocks[self.arrow_between(k, k + 1)].mul(&m);
                }
                m
            }
        }
    }

    pub(crate) fn arrow_between(&self, lo: usize, hi: usize) -> usize {
        self.arrows
            .iter()
            .position(|a| a.lo == lo && a.hi == hi)
            .expect("consecutive nodes of a component are joined by an arrow")
    }

    pub fn node_exponent(&self, n: usize) -> Exponent {
        let node = self.nodes[n];
        self.dims.chains[node.chain].exponent(node.index)
    }

    /// Realizes a point given as weighted elementary matrices `E_{a,b}` (mapping
    /// basis label `b` to label `a`) of a classical model.
    fn point_from_terms(&self, model: &LabelMap, terms: &[(i64, i64, i64)]) -> Point {
        let mut p = self.zero();
        for &(coef, a, b) in terms {
            let (na, pa) = model.place(a);
            let (nb, pb) = model.place(b);
            let ai = self.arrow_between(nb, na);
            let cur = p.blocks[ai].get(pa, pb).clone();
            p.blocks[ai].set(pa, pb, cur + q(coef));
        }
        p
    }
}

/// Placement of standard-representation basis labels (`±i`, `0`) on nodes.
struct LabelMap {
    places: BTreeMap<i64, (usize, usize)>,
}

impl LabelMap {
    fn place(&self, label: i64) -> (usize, usize) {
        self.places[&label]
    }
}

fn expect_single_chain(dims: &GradedDims) -> Option<&Chain> {
    match dims.chains.as_slice() {
        [c] if c.runs().len() == 1 => Some(c),
        _ => None,
    }
}

fn classical_variety(dims: &GradedDims, family: Family) -> Result<VoganVariety> {
    let unsupported = || Error::unsupported(format!("{family} with these dims; supported shapes are {SUPPORTED_SHAPES}"));
    let chain = expect_single_chain(dims).ok_or_else(unsupported)?;
    let dv: Vec<usize> = chain.dims.values().copied().collect();
    let len = dv.len() as i64;
    let offset = chain.offset;

    let steinberg_rank = match family {
        Family::SpDual if len % 2 == 0 && dv.iter().all(|&d| d == 1) && offset == Exponent::new(1 - len, 2) => {
            Some((len / 2) as usize)
        }
        Family::SoOddDual if len % 2 == 1 && len >= 3 && dv.iter().all(|&d| d == 1) && offset == Exponent::new(1 - len, 2) => {
            Some((len / 2) as usize)
        }
        Family::SoEven if len % 2 == 1 && len >= 3 && offset == Exponent::new(1 - len, 2) => {
            let mid = (len / 2) as usize;
            let ok = dv.iter().enumerate().all(|(k, &d)| d == if k == mid { 2 } else { 1 });
            ok.then_some(mid + 1)
        }
        _ => None,
    };
    if let Some(n) = steinberg_rank {
        return steinberg_classical(dims, family, n);
    }
    if dv.len() == 2 && dv[0] == dv[1] && offset == Exponent::new(-1, 2) {
        let form = match family {
            Family::SpDual => Form::Symmetric,
            Family::SoEven => Form::Alternating,
            _ => return Err(unsupported()),
        };
        return two_eigenvalue_classical(dims, family, dv[0], form);
    }
    Err(unsupported())
}

/// Exponent (times two) of each standard basis label at the Steinberg parameter.
fn steinberg_labels(family: Family, n: usize) -> Vec<(i64, Exponent)> {
    let n = n as i64;
    let lam = |i: i64| -> Exponent {
        match family {
            Family::SpDual => Exponent::new(2 * (n - i) + 1, 2),
            Family::SoOddDual => Exponent::from_integer(n - i + 1),
            Family::SoEven => Exponent::from_integer(n - i),
            Family::Gl => unreachable!(),
        }
    };
    let mut labels = Vec::new();
    for i in 1..=n {
        labels.push((i, lam(i)));
        labels.push((-i, -lam(i)));
    }
    if family == Family::SoOddDual {
        labels.push((0, Exponent::zero()));
    }
    labels
}

fn label_map(v: &VoganVariety, labels: &[(i64, Exponent)]) -> LabelMap {
    let mut by_node: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &(label, e) in labels {
        let node = (0..v.nodes.len()).find(|&n| v.node_exponent(n) == e).expect("label exponent lies on the grid");
        by_node.entry(node).or_default().push(label);
    }
    let mut places = BTreeMap::new();
    for (node, mut ls) in by_node {
        // positive labels first, then negative ones by absolute value
        ls.sort_by_key(|&l| (l <= 0, l.abs()));
        for (pos, l) in ls.into_iter().enumerate() {
            places.insert(l, (node, pos));
        }
    }
    LabelMap { places }
}

/// Simple root vectors as weighted elementary matrices `(coef, a, b)`.
fn simple_root_vectors(family: Family, n: usize) -> Vec<Vec<(i64, i64, i64)>> {
    let n = n as i64;
    let mut out: Vec<Vec<(i64, i64, i64)>> = (1..n).map(|i| vec![(1, i, i + 1), (-1, -(i + 1), -i)]).collect();
    out.push(match family {
        Family::SpDual => vec![(1, n, -n)],
        Family::SoOddDual => vec![(1, n, 0), (-1, 0, -n)],
        Family::SoEven => vec![(1, n - 1, -n), (-1, n, -(n - 1))],
        Family::Gl => unreachable!(),
    });
    out
}

fn steinberg_classical(dims: &GradedDims, family: Family, n: usize) -> Result<VoganVariety> {
    let root_datum = RootDatum::for_family(family, n)?;
    let skeleton = quiver_variety(dims, family);
    let labels = steinberg_labels(family, n);
    let map = label_map(&skeleton, &labels);
    let basis: Vec<Point> =
        simple_root_vectors(family, n).iter().map(|terms| skeleton.point_from_terms(&map, terms)).collect();
    let lie_basis: Vec<LieElement> = (1..=n as i64)
        .map(|i| {
            let mut el = zero_lie(&skeleton.nodes);
            let (na, pa) = map.place(i);
            let (nb, pb) = map.place(-i);
            el[na].set(pa, pa, Q::one());
            el[nb].set(pb, pb, -Q::one());
            el
        })
        .collect();
    let VoganVariety { nodes, arrows, components, .. } = skeleton;
    Ok(finish(dims.clone(), family, Shape::Steinberg { root_datum }, nodes, arrows, components, basis, lie_basis))
}

fn two_eigenvalue_classical(dims: &GradedDims, family: Family, n: usize, form: Form) -> Result<VoganVariety> {
    let skeleton = quiver_variety(dims, family);
    // node 0 carries e_{-1..-n} (exponent -1/2), node 1 carries e_{1..n}
    let mut basis = Vec::new();
    for i in 0..n {
        let start = match form {
            Form::Symmetric => i,
            Form::Alternating => i + 1,
        };
        for j in start..n {
            let mut p = skeleton.zero();
            let sign = match form {
                Form::Symmetric => Q::one(),
                Form::Alternating => -Q::one(),
            };
            p.blocks[0].set(i, j, Q::one());
            if i != j {
                p.blocks[0].set(j, i, sign);
            }
            basis.push(p);
        }
    }
    let mut lie_basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut el = zero_lie(&skeleton.nodes);
            el[1].set(i, j, Q::one());
            el[0].set(j, i, -Q::one());
            lie_basis.push(el);
        }
    }
    let VoganVariety { nodes, arrows, components, .. } = skeleton;
    Ok(finish(dims.clone(), family, Shape::TwoEigenvalue { n, form }, nodes, arrows, components, basis, lie_basis))
}

impl Shape {
    pub fn steinberg_root_datum(&self) -> Option<&RootDatum> {
        match self {
            Shape::Steinberg { root_datum } => Some(root_datum),
            _ => None,
        }
    }
}

/// Point `Σ_{α ∈ S} E_α` of a Steinberg-shape variety.
pub(crate) fn steinberg_point(v: &VoganVariety, subset: &[usize]) -> Point {
    let mut coords = vec![Q::zero(); v.total_dim];
    for &s in subset {
        coords[s] = Q::one();
    }
    v.point_from_coords(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steinberg_gl3() {
        let v = build_variety(&GradedDims::steinberg(3).unwrap(), Family::Gl).unwrap();
        assert_eq!(v.total_dim, 2);
        assert_eq!(group_dim(&v), 3);
        assert_eq!(v.arrow_spaces[0].source, "-1");
        assert_eq!(v.arrow_spaces[1].target, "1");
    }

    #[test]
    fn two_eigenvalue_gl() {
        for n in 1..=4 {
            let v = build_variety(&GradedDims::two_eigenvalue(n).unwrap(), Family::Gl).unwrap();
            assert_eq!(v.total_dim, n * n);
            assert_eq!(v.group_dim, 2 * n * n);
        }
    }

    #[test]
    fn single_exponent_is_a_point() {
        let v = build_variety(&GradedDims::single(Exponent::zero(), &[3]).unwrap(), Family::Gl).unwrap();
        assert_eq!(v.total_dim, 0);
        assert_eq!(v.group_dim, 9);
    }

    #[test]
    fn empty_dims() {
        let v = build_variety(&GradedDims::default(), Family::Gl).unwrap();
        assert_eq!((v.total_dim, v.group_dim), (0, 0));
    }

    #[test]
    fn total_dim_matches_arrow_sum_and_basis_rank() {
        let dims = GradedDims::single(Exponent::zero(), &[2, 3, 0, 1, 2]).unwrap();
        let v = build_variety(&dims, Family::Gl).unwrap();
        assert_eq!(v.total_dim, 6 + 2);
        let flat: Vec<Vec<Q>> = v.basis.iter().map(Point::flatten).collect();
        let len = flat.first().map_or(0, Vec::len);
        assert_eq!(crate::linalg::rank_of_vectors(len, &flat), v.total_dim);
        assert_eq!(v.components.len(), 2);
    }

    #[test]
    fn classical_shapes() {
        let sp = build_variety(&GradedDims::steinberg(4).unwrap(), Family::SpDual).unwrap();
        assert_eq!((sp.total_dim, sp.group_dim), (2, 2));
        let so_odd = build_variety(&GradedDims::steinberg(5).unwrap(), Family::SoOddDual).unwrap();
        assert_eq!((so_odd.total_dim, so_odd.group_dim), (2, 2));
        let so_even_dims = GradedDims::single(Exponent::from_integer(-2), &[1, 1, 2, 1, 1]).unwrap();
        let so_even = build_variety(&so_even_dims, Family::SoEven).unwrap();
        assert_eq!((so_even.total_dim, so_even.group_dim), (3, 3));
        let sym = build_variety(&GradedDims::two_eigenvalue(3).unwrap(), Family::SpDual).unwrap();
        assert_eq!((sym.total_dim, sym.group_dim), (6, 9));
        let alt = build_variety(&GradedDims::two_eigenvalue(3).unwrap(), Family::SoEven).unwrap();
        assert_eq!(alt.total_dim, 3);
        let err = build_variety(&GradedDims::two_eigenvalue(2).unwrap(), Family::SoOddDual).unwrap_err();
        assert!(matches!(err, Error::Unsupported(ref m) if m.contains("supported shapes")));
    }

    #[test]
    fn classical_bases_are_stable_under_the_lie_algebra() {
        let cases = [
            (GradedDims::steinberg(6).unwrap(), Family::SpDual),
            (GradedDims::steinberg(7).unwrap(), Family::SoOddDual),
            (GradedDims::single(Exponent::from_integer(-2), &[1, 1, 2, 1, 1]).unwrap(), Family::SoEven),
            (GradedDims::two_eigenvalue(3).unwrap(), Family::SpDual),
            (GradedDims::two_eigenvalue(3).unwrap(), Family::SoEven),
        ];
        for (dims, fam) in cases {
            let v = build_variety(&dims, fam).unwrap();
            for x in &v.basis {
                for a in &v.lie_basis {
                    assert!(v.contains(&v.act(a, x)), "{fam} basis not h-stable");
                }
            }
            let d = v.dual();
            for x in &d.basis {
                for a in &d.lie_basis {
                    assert!(d.contains(&d.act(a, x)));
                }
            }
        }
    }

    #[test]
    fn spec_file_parsing() {
        let spec = VarietySpec::from_json(r#"{"family":"gl","chains":[{"offset":"-1/2","dims":[2,2]},{"offset":0,"dims":[1]}]}"#).unwrap();
        let dims = GradedDims::from_spec(&spec).unwrap();
        assert_eq!(dims.chains.len(), 2);
        assert_eq!(dims.chains[0].offset, Exponent::new(-1, 2));
        assert_eq!(dims.to_spec(Family::Gl).chains[1].offset, "0");
        let clash = VarietySpec::from_json(r#"{"family":"gl","chains":[{"offset":"0","dims":[1]},{"offset":"2","dims":[1]}]}"#).unwrap();
        assert!(GradedDims::from_spec(&clash).is_err());
    }
}
