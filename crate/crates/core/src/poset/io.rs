use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{ElementId, FinitePoset};
use crate::error::{input, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: i64,
    pub label: String,
}

/// Wire form of a poset: elements, cover pairs `[lower, upper]`, optional bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<i64>,
}

impl PosetJson {
    pub fn from_poset(poset: &FinitePoset) -> Self {
        PosetJson {
            elements: (0..poset.len())
                .map(|x| ElementJson {
                    id: x as i64,
                    label: poset.label(x).to_string(),
                })
                .collect(),
            covers: poset.covers().map(|(a, b)| [a as i64, b as i64]).collect(),
            bottom: poset.bottom().map(|b| b as i64),
            top: poset.top().map(|t| t as i64),
        }
    }

    /// Rebuilds the poset; ids may be any distinct integers and are renumbered in listing order.
    pub fn to_poset(&self) -> Result<FinitePoset> {
        let mut index: HashMap<i64, ElementId> = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.id, i).is_some() {
                return input(format!("duplicate element id {}", e.id));
            }
        }
        let lookup = |id: i64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| crate::Error::Input(format!("cover refers to unknown element id {id}")))
        };
        let mut covers = Vec::with_capacity(self.covers.len());
        for [a, b] in &self.covers {
            covers.push((lookup(*a)?, lookup(*b)?));
        }
        let bottom = self.bottom.map(lookup).transpose()?;
        let top = self.top.map(lookup).transpose()?;
        let labels = self.elements.iter().map(|e| e.label.clone()).collect();
        FinitePoset::from_covers(labels, &covers, bottom, top)
    }
}

impl FinitePoset {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PosetJson::from_poset(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: PosetJson = serde_json::from_str(text)?;
        wire.to_poset()
    }

    /// Element ids sorted by rank, then label.
    pub fn display_order(&self) -> Vec<ElementId> {
        let heights = self.heights();
        let mut ids: Vec<_> = (0..self.len()).collect();
        ids.sort_by(|&a, &b| heights[a].cmp(&heights[b]).then_with(|| self.label(a).cmp(self.label(b))));
        ids
    }

    /// Graphviz source for the Hasse diagram, one `rank=same` group per rank.
    pub fn to_dot(&self, name: &str) -> String {
        let heights = self.heights();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=plaintext];");
        let max = heights.iter().copied().max().unwrap_or(0);
        let order = self.display_order();
        for r in 0..=max {
            let row: Vec<_> = order.iter().copied().filter(|&x| heights[x] == r).collect();
            if row.is_empty() {
                continue;
            }
            let _ = write!(out, "  {{ rank=same;");
            for x in row {
                let _ = write!(out, " n{x} [label=\"{}\"];", escape(self.label(x)));
            }
            let _ = writeln!(out, " }}");
        }
        let mut edges: Vec<_> = self.covers().collect();
        edges.sort_by(|&(a, b), &(c, d)| {
            (heights[a], self.label(a), self.label(b)).cmp(&(heights[c], self.label(c), self.label(d)))
        });
        for (a, b) in edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }

    /// One line per rank listing its labels.
    pub fn to_text(&self) -> String {
        let heights = self.heights();
        let mut out = String::new();
        let max = heights.iter().copied().max().unwrap_or(0);
        let order = self.display_order();
        for r in 0..=max {
            let row: Vec<_> = order.iter().filter(|&&x| heights[x] == r).map(|&x| self.label(x)).collect();
            if !row.is_empty() {
                let _ = writeln!(out, "rank {r}: {}", row.join(" "));
            }
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
