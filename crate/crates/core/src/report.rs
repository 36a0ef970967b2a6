//! End-to-end analysis of one variety, serialized as an [`OrbitReport`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arthur::{is_arthur_type, is_symmetric, render_table, speculation_report, ArthurVerdict, SpeculationReport, ASYMMETRIC_NOTE};
use crate::bridge::{self, BridgeConvention, MultiplicityMatrix};
use crate::conventions::FROZEN;
use crate::error::{Error, Result};
use crate::geometry::{dual_map, tangent_reports, DualStrategy, TangentReport};
use crate::kl::KlEngine;
use crate::lattice::{center_image, CenterImage, ComponentGroup};
use crate::orbits::{OrbitLabel, OrbitTable};
use crate::variety::{build_variety, format_exponent, ArrowSpace, Family, GradedDims, Shape, VarietySpec};

pub const TOOL: &str = "voganlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const ABV_SINGLETON_NOTE: &str =
    "closure is smooth, so the ABV packet of the trivial-local-system representation is the singleton {phi_C} (singleton theorem for smooth orbit closures; not computed from vanishing cycles)";
pub const PARTIAL_MATRIX_NOTE: &str =
    "classical family: only the columns of smooth-closure orbits are determined (indicator of the closure)";
pub const TWO_EIG_GROUP_NOTE: &str =
    "component groups are computed for torus stabilizers only; two-eigenvalue classical stabilizers are not tori";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyEcho {
    pub spec: VarietySpec,
    pub shape: String,
    pub total_dim: usize,
    pub group_dim: usize,
    pub arrow_spaces: Vec<ArrowSpace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionEcho {
    /// Arrows of `V` raise the exponent by one.
    pub arrow_orientation: String,
    /// Pairing between `V` and `V*`.
    pub pairing: String,
    pub bridge: BridgeConvention,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub chain: usize,
    pub start: String,
    pub end: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub chain: usize,
    pub from: String,
    pub to: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub id: usize,
    pub label: String,
    pub multisegment: Vec<SegmentEntry>,
    pub rank_matrix: Vec<RankEntry>,
    pub dim: usize,
    pub codim: usize,
    /// One rational matrix per arrow space, entries as `p/q` strings.
    pub representative: Vec<Vec<Vec<String>>>,
    pub open: bool,
    pub closed: bool,
    pub smooth_closure: bool,
    /// KL cross-check; `null` outside the general-linear family.
    pub rationally_smooth: Option<bool>,
    pub tangent: Vec<TangentReport>,
    pub arthur: ArthurVerdict,
    /// Id of the Pyasetskii dual orbit in the table of `V*`.
    pub dual: usize,
    pub dual_label: String,
    pub component_group: Option<CenterImage>,
    pub abv_singleton: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub tool: String,
    pub version: String,
    pub variety: VarietyEcho,
    pub conventions: ConventionEcho,
    pub orbits: Vec<OrbitEntry>,
    /// Covering relations `[lower, upper]` of the closure order.
    pub hasse: Vec<[usize; 2]>,
    pub multiplicity: MultiplicityMatrix,
    pub speculation: SpeculationReport,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub seed: u64,
}

pub fn analyze_spec(spec: &VarietySpec, opts: AnalysisOptions, engine: &KlEngine) -> Result<OrbitReport> {
    analyze(&GradedDims::from_spec(spec)?, spec.family, opts, engine)
}

pub fn analyze(dims: &GradedDims, family: Family, opts: AnalysisOptions, engine: &KlEngine) -> Result<OrbitReport> {
    let v = build_variety(dims, family)?;
    let t = OrbitTable::new(v.clone())?;
    let dual_t = OrbitTable::new(v.dual())?;
    let n = t.len();
    let gl = matches!(v.shape, Shape::Quiver);

    let tangents: Vec<Vec<TangentReport>> = (0..n).into_par_iter().map(|c| tangent_reports(&t, c)).collect::<Result<_>>()?;
    let smooth: Vec<bool> = tangents.iter().map(|ts| ts.iter().all(|r| r.smooth_at)).collect();
    let rational: Vec<Option<bool>> = if gl {
        (0..n).into_par_iter().map(|c| bridge::rationally_smooth(&t, engine, c).map(Some)).collect::<Result<_>>()?
    } else {
        vec![None; n]
    };
    let duals = dual_map(&t, &dual_t, DualStrategy::Randomized { seed: opts.seed })?;
    let verdicts: Vec<ArthurVerdict> = t.orbits.iter().map(|o| is_arthur_type(dims, &o.multisegment)).collect();
    let multiplicity =
        if gl { bridge::multiplicity_matrix(&t, engine)? } else { bridge::partial_multiplicity_matrix(&t, &smooth) };
    let speculation = speculation_report(&t, &smooth, &verdicts);

    let mut notes = Vec::new();
    if !is_symmetric(dims) {
        notes.push(ASYMMETRIC_NOTE.to_string());
    }
    if !gl {
        notes.push(PARTIAL_MATRIX_NOTE.to_string());
    }
    if matches!(v.shape, Shape::TwoEigenvalue { .. }) {
        notes.push(TWO_EIG_GROUP_NOTE.to_string());
    }

    let mut orbits = Vec::with_capacity(n);
    for (o, tangent) in t.orbits.iter().zip(tangents) {
        let component_group = match (&v.shape, &o.label) {
            (Shape::Quiver, _) => {
                Some(CenterImage { group: ComponentGroup::trivial(), images: Vec::new(), center_surjects: true })
            }
            (Shape::Steinberg { root_datum }, OrbitLabel::Subset(s)) => Some(center_image(root_datum, s)?),
            (Shape::Steinberg { .. }, _) => return Err(Error::invariant("Steinberg orbit without a subset label")),
            (Shape::TwoEigenvalue { .. }, _) => None,
        };
        let dual = duals[o.id];
        orbits.push(OrbitEntry {
            id: o.id,
            label: o.label.display(dims),
            multisegment: o
                .multisegment
                .segments()
                .iter()
                .map(|s| {
                    let ch = &dims.chains[s.chain];
                    SegmentEntry {
                        chain: s.chain,
                        start: format_exponent(ch.exponent(s.start)),
                        end: format_exponent(ch.exponent(s.end)),
                    }
                })
                .collect(),
            rank_matrix: o
                .rank_matrix
                .entries
                .iter()
                .map(|(&(chain, i, j), &rank)| {
                    let ch = &dims.chains[chain];
                    RankEntry { chain, from: format_exponent(ch.exponent(i)), to: format_exponent(ch.exponent(j)), rank }
                })
                .collect(),
            dim: o.dim,
            codim: v.total_dim - o.dim,
            representative: o
                .representative
                .blocks
                .iter()
                .map(|b| (0..b.rows()).map(|i| (0..b.cols()).map(|j| b.get(i, j).to_string()).collect()).collect())
                .collect(),
            open: o.is_open,
            closed: o.is_closed,
            smooth_closure: smooth[o.id],
            rationally_smooth: rational[o.id],
            tangent,
            arthur: verdicts[o.id].clone(),
            dual,
            dual_label: dual_t.orbits[dual].label.display(dims),
            component_group,
            abv_singleton: smooth[o.id].then(|| ABV_SINGLETON_NOTE.to_string()),
        });
    }

    Ok(OrbitReport {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        variety: VarietyEcho {
            spec: dims.to_spec(family),
            shape: v.shape.name().to_string(),
            total_dim: v.total_dim,
            group_dim: v.group_dim,
            arrow_spaces: v.arrow_spaces.clone(),
        },
        conventions: ConventionEcho {
            arrow_orientation: "e -> e+1".to_string(),
            pairing: "trace(x xi), V* = transposed arrows".to_string(),
            bridge: FROZEN,
            seed: opts.seed,
        },
        orbits,
        hasse: t.hasse().into_iter().map(|(a, b)| [a, b]).collect(),
        multiplicity,
        speculation,
        notes,
    })
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

impl OrbitReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let chains: Vec<String> =
            self.variety.spec.chains.iter().map(|c| format!("offset {} dims {:?}", c.offset, c.dims)).collect();
        out.push_str(&format!(
            "{} {}: family {}, shape {}, dim V = {}, dim H = {}\n",
            self.tool,
            self.version,
            self.variety.spec.family,
            self.variety.shape,
            self.variety.total_dim,
            self.variety.group_dim
        ));
        out.push_str(&format!("chains: {}\nseed: {}\n\n", chains.join("; "), self.conventions.seed));

        let header = ["id", "orbit", "dim", "open", "closed", "smooth", "arthur", "dual", "A_x"].map(String::from);
        let body: Vec<[String; 9]> = self
            .orbits
            .iter()
            .map(|o| {
                [
                    o.id.to_string(),
                    o.label.clone(),
                    o.dim.to_string(),
                    yes_no(o.open),
                    yes_no(o.closed),
                    yes_no(o.smooth_closure),
                    yes_no(o.arthur.is_arthur),
                    format!("{} {}", o.dual, o.dual_label),
                    o.component_group.as_ref().map_or("n/a".to_string(), |g| g.group.to_string()),
                ]
            })
            .collect();
        out.push_str(&render_table(&header, &body));

        let edges: Vec<String> = self.hasse.iter().map(|[a, b]| format!("{a}<{b}")).collect();
        out.push_str(&format!("\nclosure covers: {}\n", if edges.is_empty() { "none".into() } else { edges.join(" ") }));

        out.push_str(&format!("\nmultiplicity matrix ({:?}), entry[C][D] = [S_C : pi_D]\n", self.multiplicity.status));
        for row in &self.multiplicity.entries {
            let cells: Vec<String> = row.iter().map(|e| e.map_or("?".to_string(), |v| v.to_string())).collect();
            out.push_str(&format!("  {}\n", cells.join(" ")));
        }

        out.push('\n');
        out.push_str(&self.speculation.to_text(""));
        if !self.speculation.violations.is_empty() {
            out.push_str(&format!("violations: {:?}\n", self.speculation.violations));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Covering digraph of the closure order in DOT syntax.
pub fn closure_dot(t: &OrbitTable) -> String {
    let mut out = String::from("digraph closure {\n  rankdir=BT;\n");
    for o in &t.orbits {
        let label = o.label.display(&t.variety.dims).replace('"', "\\\"");
        out.push_str(&format!("  n{} [label=\"{}\\ndim {}\"];\n", o.id, label, o.dim));
    }
    for (a, b) in t.hasse() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_steinberg_report() {
        let engine = KlEngine::new();
        let r = analyze(&GradedDims::steinberg(3).unwrap(), Family::Gl, AnalysisOptions::default(), &engine).unwrap();
        assert_eq!(r.orbits.len(), 4);
        assert!(r.orbits.iter().all(|o| o.smooth_closure && o.rationally_smooth == Some(true)));
        assert!(r.orbits.iter().all(|o| o.abv_singleton.is_some()));
        assert_eq!(r.hasse.len(), 4);
        let back = OrbitReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn classical_report_has_partial_matrix() {
        let engine = KlEngine::new();
        let r = analyze(&GradedDims::steinberg_for(Family::SpDual, 3).unwrap(), Family::SpDual, AnalysisOptions::default(), &engine).unwrap();
        assert_eq!(r.multiplicity.status, bridge::MatrixStatus::Partial);
        assert!(r.orbits.iter().all(|o| o.rationally_smooth.is_none()));
        let open = r.orbits.iter().find(|o| o.open).unwrap();
        assert_eq!(open.component_group.as_ref().unwrap().group.elementary_divisors, vec![2]);
    }

    #[test]
    fn point_variety_is_trivial() {
        let engine = KlEngine::new();
        let dims = GradedDims::single(0.into(), &[3]).unwrap();
        let r = analyze(&dims, Family::Gl, AnalysisOptions::default(), &engine).unwrap();
        assert_eq!(r.orbits.len(), 1);
        assert!(r.hasse.is_empty());
        let t = OrbitTable::new(build_variety(&dims, Family::Gl).unwrap()).unwrap();
        let dot = closure_dot(&t);
        assert!(dot.contains("n0 [label=\"{[0],[0],[0]}\\ndim 0\"]"), "{dot}");
        assert!(!dot.contains("->"));
    }
}
