//! Curated orbit tables shipped as data files.

use serde::{Deserialize, Serialize};

use crate::arthur::render_table;
use crate::error::{Error, Result};

const SO7_CFMMX16: &str = include_str!("../data/so7-cfmmx16.json");

pub const NAMES: &[&str] = &["so7-cfmmx16"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    pub open_or_closed: bool,
    pub smooth_closure: bool,
    pub arthur: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuratedDataset {
    pub name: String,
    pub title: String,
    pub provenance: String,
    pub notes: Vec<String>,
    pub header: [String; 4],
    pub rows: Vec<DatasetRow>,
}

/// Rows with identical flags, merged in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetGroup {
    pub labels: Vec<String>,
    pub open_or_closed: bool,
    pub smooth_closure: bool,
    pub arthur: bool,
}

pub fn load(name: &str) -> Result<CuratedDataset> {
    let text = match name {
        "so7-cfmmx16" => SO7_CFMMX16,
        _ => return Err(Error::input(format!("unknown dataset {name:?}; available: {}", NAMES.join(", ")))),
    };
    Ok(serde_json::from_str(text)?)
}

fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

impl CuratedDataset {
    pub fn groups(&self) -> Vec<DatasetGroup> {
        let mut out: Vec<DatasetGroup> = Vec::new();
        for r in &self.rows {
            match out.iter_mut().find(|g| {
                (g.open_or_closed, g.smooth_closure, g.arthur) == (r.open_or_closed, r.smooth_closure, r.arthur)
            }) {
                Some(g) => g.labels.push(r.label.clone()),
                None => out.push(DatasetGroup {
                    labels: vec![r.label.clone()],
                    open_or_closed: r.open_or_closed,
                    smooth_closure: r.smooth_closure,
                    arthur: r.arthur,
                }),
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let body: Vec<[String; 4]> = self
            .groups()
            .iter()
            .map(|g| [g.labels.join(", "), yes_no(g.open_or_closed), yes_no(g.smooth_closure), yes_no(g.arthur)])
            .collect();
        let mut out = format!("{}\nsource: {}\n", self.title, self.provenance);
        out.push_str(&render_table(&self.header, &body));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }

    /// Rows that are neither open nor closed and break "Arthur type iff closure not smooth".
    pub fn check(&self) -> Vec<&DatasetRow> {
        self.rows.iter().filter(|r| !r.open_or_closed && r.arthur == r.smooth_closure).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so7_table_groups() {
        let d = load("so7-cfmmx16").unwrap();
        assert_eq!(d.rows.len(), 8);
        let g = d.groups();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].labels, ["φ_0", "φ_7"]);
        assert_eq!((g[0].open_or_closed, g[0].smooth_closure, g[0].arthur), (true, true, true));
        assert_eq!(g[1].labels, ["φ_2", "φ_4", "φ_5", "φ_6"]);
        assert_eq!((g[1].open_or_closed, g[1].smooth_closure, g[1].arthur), (false, false, true));
        assert_eq!(g[2].labels, ["φ_1", "φ_3"]);
        assert_eq!((g[2].open_or_closed, g[2].smooth_closure, g[2].arthur), (false, true, false));
        assert!(d.check().is_empty());
        assert!(d.provenance.contains("Chapter 16"));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load("nope"), Err(Error::Input(_))));
    }
}
