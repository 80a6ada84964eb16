//! The embedded example modules, stored as presentation files.

use crate::algebra::{quotient_by_relations, ModuleRep, Presentation};
use crate::error::{Error, Result};
use crate::presentation::parse_presentation;

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        id: "periodic",
        description: "p=2, r=3, M = F/<Xu, ZYu, Yu-Xv>, dim 7",
        text: include_str!("../corpus/periodic.pres"),
    },
    CorpusEntry {
        id: "odd-p3",
        description: "p=3, r=2, M = F/<X^2u, Yu-Xv, XYu, Y^2u>, dim 6",
        text: include_str!("../corpus/odd_p3.pres"),
    },
    CorpusEntry {
        id: "odd-p5",
        description: "p=5, r=2, M = F/<X^2u, Yu-Xv, XYu, Y^2u>, dim 8",
        text: include_str!("../corpus/odd_p5.pres"),
    },
    CorpusEntry {
        id: "growth",
        description: "p=2, r=3, M = F/<Zu, Yu-Xv, YZv>, dim 6",
        text: include_str!("../corpus/growth.pres"),
    },
];

/// Golden numbers with provenance tags, as JSON.
pub const MANIFEST: &str = include_str!("../corpus/manifest.json");

pub fn entry(id: &str) -> Result<&'static CorpusEntry> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::InvalidModule(format!("no corpus entry `{id}`")))
}

pub fn presentation(id: &str) -> Result<Presentation> {
    parse_presentation(entry(id)?.text)
}

pub fn load(id: &str) -> Result<ModuleRep> {
    quotient_by_relations(&presentation(id)?)
}

pub fn periodic_module() -> ModuleRep {
    load("periodic").expect("embedded corpus file")
}

/// The odd-characteristic example; embedded for p = 3 and p = 5.
pub fn odd_module(p: u32) -> ModuleRep {
    load(&format!("odd-p{p}")).unwrap_or_else(|_| panic!("no embedded module for p = {p}"))
}

pub fn growth_module() -> ModuleRep {
    load("growth").expect("embedded corpus file")
}

/// Position of the basis vector carrying `label`.
pub fn basis_index(m: &ModuleRep, label: &str) -> Option<usize> {
    m.labels()?.iter().position(|l| l == label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_dimensions() {
        assert_eq!(periodic_module().dim(), 7);
        assert_eq!(odd_module(3).dim(), 6);
        assert_eq!(odd_module(5).dim(), 8);
        assert_eq!(growth_module().dim(), 6);
    }

    #[test]
    fn odd_example_basis() {
        let m = odd_module(5);
        let mut labels = m.labels().unwrap().to_vec();
        labels.sort();
        let mut expected: Vec<String> =
            ["Xu", "u", "Yu", "v", "Yv", "Y^2v", "Y^3v", "Y^4v"].iter().map(|s| s.to_string()).collect();
        expected.sort();
        assert_eq!(labels, expected);
    }

    #[test]
    fn manifest_is_valid_json() {
        let v: serde_json::Value = serde_json::from_str(MANIFEST).unwrap();
        assert!(v.get("entries").is_some());
    }
}
