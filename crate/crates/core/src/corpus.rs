//! Built-in example diagrams with their expected invariants.

use serde::Serialize;

use crate::linkdiag::{parse_diagram, Diagram};

/// A named diagram and the values the pipeline should reproduce on it.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    /// |K / (1+t)K|, 0 if infinite
    pub determinant: u64,
    pub imq_size: Option<usize>,
    pub notes: &'static str,
}

impl CorpusEntry {
    pub fn diagram(&self) -> Diagram {
        parse_diagram(self.source).expect("corpus diagram is valid")
    }
}

const HOPF: &str = r#"{
  "components": [["a1"], ["a2"]],
  "crossings": [
    {"over": "a2", "right": "a1", "left": "a1", "writhe": 1},
    {"over": "a1", "right": "a2", "left": "a2", "writhe": 1}
  ]
}"#;

const VIRTUAL_HOPF: &str = r#"{
  "components": [["a1'"], ["a2'"]],
  "crossings": [
    {"over": "a2'", "right": "a1'", "left": "a1'", "writhe": 1}
  ]
}"#;

// Relations: a1 = (1-t)a5 + t a3, a4 = (1-t)a3 + t a5, a2 = (1-t)a4 + t a5,
// a1 = (1-t)a2 + t a3, a4 = (1-t)a1 + t a2.
const WHITEHEAD: &str = r#"{
  "components": [["a2", "a5", "a4"], ["a1", "a3"]],
  "crossings": [
    {"over": "a5", "right": "a3", "left": "a1", "writhe": 1},
    {"over": "a3", "right": "a5", "left": "a4", "writhe": 1},
    {"over": "a4", "right": "a5", "left": "a2", "writhe": -1},
    {"over": "a2", "right": "a3", "left": "a1", "writhe": -1},
    {"over": "a1", "right": "a2", "left": "a4", "writhe": -1}
  ]
}"#;

// Same over/right/left data as WHITEHEAD with every writhe negated, which reverses
// the direction of travel along each component.
const WHITEHEAD_MIRROR: &str = r#"{
  "components": [["a2'", "a4'", "a5'"], ["a1'", "a3'"]],
  "crossings": [
    {"over": "a5'", "right": "a3'", "left": "a1'", "writhe": -1},
    {"over": "a3'", "right": "a5'", "left": "a4'", "writhe": -1},
    {"over": "a4'", "right": "a5'", "left": "a2'", "writhe": 1},
    {"over": "a2'", "right": "a3'", "left": "a1'", "writhe": 1},
    {"over": "a1'", "right": "a2'", "left": "a4'", "writhe": 1}
  ]
}"#;

// The last crossing (a7 = (1-t)a5 + t a2) is fixed by the two-slots-per-arc count
// together with the longitude -a4 + a6 of the first component.
const L7_2_8: &str = r#"{
  "components": [["a2", "a4", "a5", "a6", "a7"], ["a1", "a3"]],
  "crossings": [
    {"over": "a7", "right": "a3", "left": "a1", "writhe": -1},
    {"over": "a2", "right": "a3", "left": "a1", "writhe": 1},
    {"over": "a1", "right": "a7", "left": "a6", "writhe": -1},
    {"over": "a4", "right": "a6", "left": "a5", "writhe": -1},
    {"over": "a7", "right": "a5", "left": "a4", "writhe": -1},
    {"over": "a1", "right": "a2", "left": "a4", "writhe": 1},
    {"over": "a5", "right": "a2", "left": "a7", "writhe": -1}
  ]
}"#;

const TREFOIL: &str = r#"{
  "components": [["a1", "a2", "a3"]],
  "crossings": [
    {"over": "a3", "right": "a1", "left": "a2", "writhe": 1},
    {"over": "a1", "right": "a2", "left": "a3", "writhe": 1},
    {"over": "a2", "right": "a3", "left": "a1", "writhe": 1}
  ]
}"#;

const UNKNOT: &str = r#"{
  "components": [["a1"]],
  "crossings": []
}"#;

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "hopf",
        description: "classical Hopf link",
        source: HOPF,
        determinant: 2,
        imq_size: Some(2),
        notes: "two singleton orbits; MQ has two elements",
    },
    CorpusEntry {
        name: "virtual-hopf",
        description: "virtual Hopf link (one classical crossing)",
        source: VIRTUAL_HOPF,
        determinant: 2,
        imq_size: Some(3),
        notes: "IMQ is a singleton orbit plus a two-element orbit; MQ is infinite",
    },
    CorpusEntry {
        name: "whitehead",
        description: "Whitehead's link W",
        source: WHITEHEAD,
        determinant: 8,
        imq_size: Some(8),
        notes: "M = Λ ⊕ Λ/(1-t)^3; longitude of K2 is (1-t)^2(a5 - a3)",
    },
    CorpusEntry {
        name: "whitehead-mirror",
        description: "orientation-reversed mirror W' of Whitehead's link",
        source: WHITEHEAD_MIRROR,
        determinant: 8,
        imq_size: Some(8),
        notes: "same module as W; longitudes have the opposite sign",
    },
    CorpusEntry {
        name: "7-2-8",
        description: "the two-component link 7^2_8",
        source: L7_2_8,
        determinant: 8,
        imq_size: Some(8),
        notes: "same enhanced module as W; one component is a trefoil",
    },
    CorpusEntry {
        name: "trefoil",
        description: "positive trefoil",
        source: TREFOIL,
        determinant: 3,
        imq_size: Some(3),
        notes: "IMQ is the dihedral quandle of order 3",
    },
    CorpusEntry {
        name: "unknot",
        description: "crossingless unknot",
        source: UNKNOT,
        determinant: 1,
        imq_size: Some(1),
        notes: "",
    },
];

pub fn lookup(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{LaurentPoly, ScalarRing};
    use crate::modpres::{present_reduced_module, specialized_module};

    #[test]
    fn all_entries_parse() {
        for e in CORPUS {
            let d = e.diagram();
            assert!(d.mu() >= 1, "{}", e.name);
        }
        assert!(lookup("whitehead").is_some());
        assert!(lookup("nope").is_none());
    }

    /// Evaluate `Σ coeff · arc` in the specialized reduced module.
    fn element(d: &Diagram, ring: &ScalarRing, terms: &[(&str, LaurentPoly)]) -> Vec<i64> {
        let pm = specialized_module(&present_reduced_module(d), ring).unwrap();
        let mut v = vec![LaurentPoly::zero(); d.arcs().len()];
        for (name, c) in terms {
            let a = d.arc_id(name).unwrap();
            v[a] = &v[a] + c;
        }
        pm.to_module_big(&crate::modpres::specialize_vector(&v, ring).unwrap())
    }

    #[test]
    fn whitehead_relation_cube() {
        // (1-t)^3 (a3 - a5) = 0 while (1-t)^2 (a3 - a5) ≠ 0 at t = -1 over Z
        let d = lookup("whitehead").unwrap().diagram();
        let r = ScalarRing::new(0, -1).unwrap();
        let c3 = LaurentPoly::one_minus_t().pow(3);
        let c2 = LaurentPoly::one_minus_t().pow(2);
        let zero3 = element(&d, &r, &[("a3", c3.clone()), ("a5", -c3)]);
        assert!(zero3.iter().all(|&x| x == 0));
        let nz = element(&d, &r, &[("a3", c2.clone()), ("a5", -c2)]);
        assert!(nz.iter().any(|&x| x != 0));
    }

    #[test]
    fn seven_two_eight_relation_cube() {
        let d = lookup("7-2-8").unwrap().diagram();
        let r = ScalarRing::new(27, 4).unwrap();
        let c3 = LaurentPoly::one_minus_t().pow(3);
        let zero3 = element(&d, &r, &[("a1", c3.clone()), ("a7", -c3)]);
        assert!(zero3.iter().all(|&x| x == 0));
        // a5 = a6 in the module
        let one = LaurentPoly::one();
        let diff = element(&d, &r, &[("a5", one.clone()), ("a6", -one)]);
        assert!(diff.iter().all(|&x| x == 0));
    }
}
