//! Arthur-type orbits: decompositions into zero-centered rectangles.
//!
//! An unramified Arthur parameter `⊕ S_d(x) ⊠ S_a(y)` restricts to the
//! multisegment made of `a` segments of length `d` whose starting exponents
//! are consecutive. Boundedness forces every such rectangle to be centered at
//! exponent `0`, so an orbit is of Arthur type exactly when its multisegment
//! splits into zero-centered rectangles.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::{Multisegment, OrbitTable, Segment};
use crate::variety::{format_exponent, Exponent, GradedDims};

/// `a` segments of length `d` with consecutive starts, centered at `center`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle {
    pub chain: usize,
    pub d: usize,
    pub a: usize,
    pub center: Exponent,
}

#[derive(Serialize, Deserialize)]
struct RectangleDto {
    chain: usize,
    d: usize,
    a: usize,
    center: String,
}

impl Serialize for Rectangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RectangleDto { chain: self.chain, d: self.d, a: self.a, center: format_exponent(self.center) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rectangle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = RectangleDto::deserialize(d)?;
        let center = crate::variety::parse_exponent(&dto.center).map_err(serde::de::Error::custom)?;
        Ok(Rectangle { chain: dto.chain, d: dto.d, a: dto.a, center })
    }
}

impl Rectangle {
    /// Exponent of the first segment's start.
    pub fn first_start(&self) -> Exponent {
        self.center - Ratio::new((self.a + self.d) as i64 - 2, 2)
    }
}

/// Expands a rectangle on the grid of `dims`.
pub fn rectangle_multisegment(dims: &GradedDims, rect: &Rectangle) -> Result<Multisegment> {
    if rect.d == 0 || rect.a == 0 {
        return Err(Error::input("rectangle needs d, a >= 1"));
    }
    let chain = dims
        .chains
        .get(rect.chain)
        .ok_or_else(|| Error::input(format!("no chain {}", rect.chain)))?;
    let s = rect.first_start() - chain.offset;
    if !s.is_integer() {
        return Err(Error::input(format!(
            "a rectangle with d={}, a={} cannot be centered at {} on this grid",
            rect.d,
            rect.a,
            format_exponent(rect.center)
        )));
    }
    let s = s.to_integer();
    Ok(Multisegment::new(
        (0..rect.a as i64).map(|k| Segment::new(rect.chain, s + k, s + k + rect.d as i64 - 1)).collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArthurVerdict {
    pub is_arthur: bool,
    pub decomposition: Vec<Rectangle>,
    /// Qualifications of the verdict, if any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub const ASYMMETRIC_NOTE: &str = "dimension vector is not symmetric about exponent 0, so no orbit is of Arthur type";
pub const MULTI_CHAIN_NOTE: &str = "per-chain criterion: each chain is tested separately for zero-centered rectangles";

pub fn is_symmetric(dims: &GradedDims) -> bool {
    let mut by_exp: BTreeMap<Exponent, usize> = BTreeMap::new();
    for ch in &dims.chains {
        for (&k, &d) in &ch.dims {
            *by_exp.entry(ch.exponent(k)).or_insert(0) += d;
        }
    }
    by_exp.iter().all(|(e, d)| by_exp.get(&-*e) == Some(d))
}

/// Searches for a zero-centered rectangle decomposition of `m`.
pub fn is_arthur_type(dims: &GradedDims, m: &Multisegment) -> ArthurVerdict {
    let mut notes = Vec::new();
    if dims.chains.len() > 1 {
        notes.push(MULTI_CHAIN_NOTE.to_string());
    }
    if !is_symmetric(dims) {
        notes.push(ASYMMETRIC_NOTE.to_string());
        return ArthurVerdict { is_arthur: false, decomposition: Vec::new(), notes };
    }
    let mut decomposition = Vec::new();
    for (c, chain) in dims.chains.iter().enumerate() {
        let segs: Vec<Segment> = m.segments().iter().copied().filter(|s| s.chain == c).collect();
        let mut found = Vec::new();
        if !search(chain.offset, c, segs, &mut found) {
            return ArthurVerdict { is_arthur: false, decomposition: Vec::new(), notes };
        }
        decomposition.extend(found);
    }
    ArthurVerdict { is_arthur: true, decomposition, notes }
}

fn search(offset: Exponent, chain: usize, remaining: Vec<Segment>, out: &mut Vec<Rectangle>) -> bool {
    let Some(longest) = remaining.iter().copied().max_by(|x, y| x.len().cmp(&y.len()).then(y.start.cmp(&x.start))) else {
        return true;
    };
    let d = longest.len();
    let same_len = remaining.iter().filter(|s| s.len() == d).count();
    for a in (1..=same_len).rev() {
        // zero-centered rectangle with these d, a
        let first = -Ratio::new((a + d) as i64 - 2, 2) - offset;
        if !first.is_integer() {
            continue;
        }
        let s0 = first.to_integer();
        if longest.start < s0 || longest.start >= s0 + a as i64 {
            continue;
        }
        let mut rest = remaining.clone();
        let mut ok = true;
        for k in 0..a as i64 {
            let seg = Segment::new(chain, s0 + k, s0 + k + d as i64 - 1);
            match rest.iter().position(|s| *s == seg) {
                Some(i) => {
                    rest.swap_remove(i);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        out.push(Rectangle { chain, d, a, center: Exponent::zero() });
        if search(offset, chain, rest, out) {
            return true;
        }
        out.pop();
    }
    false
}

/// Aggregated cell of the speculation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Yes,
    No,
    Mixed,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Cell {
    fn of(values: impl Iterator<Item = bool>) -> Cell {
        let (mut yes, mut no) = (false, false);
        for v in values {
            if v {
                yes = true;
            } else {
                no = true;
            }
        }
        match (yes, no) {
            (true, false) => Cell::Yes,
            (false, true) => Cell::No,
            (true, true) => Cell::Mixed,
            (false, false) => Cell::NotApplicable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cell::Yes => "Yes",
            Cell::No => "No",
            Cell::Mixed => "Mixed",
            Cell::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeculationRow {
    pub orbit: usize,
    pub label: String,
    pub open_or_closed: bool,
    pub smooth_closure: bool,
    pub arthur: bool,
    /// Arthur type, not open, not closed, and smooth closure.
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeculationGroup {
    pub group: String,
    pub smooth_closure: Cell,
    pub orbit_arthur: Cell,
    /// Arthur type of `π(C, 1)`; for trivial local systems this is the orbit verdict.
    pub rep_arthur: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeculationReport {
    pub rows: Vec<SpeculationRow>,
    pub table: Vec<SpeculationGroup>,
    pub violations: Vec<usize>,
}

pub fn speculation_report(t: &OrbitTable, smooth: &[bool], verdicts: &[ArthurVerdict]) -> SpeculationReport {
    let rows: Vec<SpeculationRow> = t
        .orbits
        .iter()
        .map(|o| {
            let oc = o.is_open || o.is_closed;
            let (s, a) = (smooth[o.id], verdicts[o.id].is_arthur);
            SpeculationRow {
                orbit: o.id,
                label: o.label.display(&t.variety.dims),
                open_or_closed: oc,
                smooth_closure: s,
                arthur: a,
                violation: a && !oc && s,
            }
        })
        .collect();
    let group = |name: &str, pick: bool| {
        let sel = || rows.iter().filter(move |r| r.open_or_closed == pick);
        SpeculationGroup {
            group: name.to_string(),
            smooth_closure: Cell::of(sel().map(|r| r.smooth_closure)),
            orbit_arthur: Cell::of(sel().map(|r| r.arthur)),
            rep_arthur: Cell::of(sel().map(|r| r.arthur)),
        }
    };
    let table = vec![group("Open/Closed", true), group("Non-Open/Closed", false)];
    let violations = rows.iter().filter(|r| r.violation).map(|r| r.orbit).collect();
    SpeculationReport { rows, table, violations }
}

impl SpeculationReport {
    /// Aligned text table in the layout `group | C̄ smooth | C Arthur | π(C,L) Arthur`.
    pub fn to_text(&self, title: &str) -> String {
        let header = [title, "C̄ Smooth", "C Arthur type", "π(C,L) Arthur type"];
        let body: Vec<[String; 4]> = self
            .table
            .iter()
            .map(|g| {
                [
                    g.group.clone(),
                    g.smooth_closure.as_str().to_string(),
                    g.orbit_arthur.as_str().to_string(),
                    g.rep_arthur.as_str().to_string(),
                ]
            })
            .collect();
        render_table(&header.map(String::from), &body)
    }
}

pub(crate) fn render_table<const N: usize>(header: &[String; N], body: &[[String; N]]) -> String {
    let mut width = [0usize; N];
    for row in std::iter::once(header).chain(body.iter()) {
        for (w, cell) in width.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |row: &[String; N]| -> String {
        let cells: Vec<String> =
            row.iter().zip(width.iter()).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        format!("| {} |", cells.join(" | "))
    };
    let rule = format!("|{}|", width.iter().map(|w| "-".repeat(w + 2)).collect::<Vec<_>>().join("|"));
    let mut out = vec![line(header), rule];
    out.extend(body.iter().map(line));
    out.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{build_variety, Family};

    #[test]
    fn rectangle_expansion() {
        let dims = GradedDims::steinberg(3).unwrap();
        let open = rectangle_multisegment(&dims, &Rectangle { chain: 0, d: 3, a: 1, center: Exponent::zero() }).unwrap();
        assert_eq!(open, Multisegment::new(vec![Segment::new(0, 0, 2)]));
        let closed = rectangle_multisegment(&dims, &Rectangle { chain: 0, d: 1, a: 3, center: Exponent::zero() }).unwrap();
        assert_eq!(closed.len(), 3);
        let two = GradedDims::two_eigenvalue(1).unwrap();
        let seg = rectangle_multisegment(&two, &Rectangle { chain: 0, d: 2, a: 1, center: Exponent::zero() }).unwrap();
        assert_eq!(seg, Multisegment::new(vec![Segment::new(0, 0, 1)]));
        assert!(rectangle_multisegment(&dims, &Rectangle { chain: 0, d: 2, a: 1, center: Exponent::zero() }).is_err());
    }

    #[test]
    fn steinberg_gl3_middle_orbits_are_not_arthur() {
        let dims = GradedDims::steinberg(3).unwrap();
        let t = OrbitTable::new(build_variety(&dims, Family::Gl).unwrap()).unwrap();
        for o in &t.orbits {
            let v = is_arthur_type(&dims, &o.multisegment);
            assert_eq!(v.is_arthur, o.is_open || o.is_closed, "{:?}", o.multisegment);
        }
    }

    #[test]
    fn two_eigenvalue_orbits_are_arthur() {
        for n in 1..=4 {
            let dims = GradedDims::two_eigenvalue(n).unwrap();
            let t = OrbitTable::new(build_variety(&dims, Family::Gl).unwrap()).unwrap();
            for (r, o) in t.orbits.iter().enumerate() {
                let v = is_arthur_type(&dims, &o.multisegment);
                assert!(v.is_arthur);
                let mut shapes: Vec<(usize, usize)> = v.decomposition.iter().map(|x| (x.d, x.a)).collect();
                shapes.sort();
                let mut expected = vec![(1, 2); n - r];
                expected.extend(vec![(2, 1); r]);
                assert_eq!(shapes, expected);
            }
        }
    }

    #[test]
    fn asymmetric_grid_has_no_arthur_orbits() {
        let dims = GradedDims::single(Exponent::zero(), &[1, 1]).unwrap();
        let m = Multisegment::new(vec![Segment::new(0, 0, 1)]);
        let v = is_arthur_type(&dims, &m);
        assert!(!v.is_arthur);
        assert_eq!(v.notes, vec![ASYMMETRIC_NOTE.to_string()]);
    }

    #[test]
    fn table_text() {
        let dims = GradedDims::steinberg(3).unwrap();
        let t = OrbitTable::new(build_variety(&dims, Family::Gl).unwrap()).unwrap();
        let verdicts: Vec<ArthurVerdict> = t.orbits.iter().map(|o| is_arthur_type(&dims, &o.multisegment)).collect();
        let rep = speculation_report(&t, &vec![true; t.len()], &verdicts);
        let cells: Vec<[Cell; 3]> = rep.table.iter().map(|g| [g.smooth_closure, g.orbit_arthur, g.rep_arthur]).collect();
        assert_eq!(cells, vec![[Cell::Yes; 3], [Cell::Yes, Cell::No, Cell::No]]);
        assert!(rep.violations.is_empty());
        assert!(rep.to_text("Steinberg").contains("| Non-Open/Closed | Yes"));
    }
}
