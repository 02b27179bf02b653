//! Oriented virtual link diagrams: arcs, classical crossings, components.
//!
//! Virtual crossings never cut arcs and contribute no relations, so they are
//! simply absent from the model.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod alternate;
mod pd;

pub use alternate::{
    index_components, make_alternating_writhes, ComponentIndexing, IndexedComponent, KinkMove,
};
pub use pd::import_pd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    Validation(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("cannot infer orientation: {0}")]
    AmbiguousOrientation(String),
    #[error("diagram does not have alternating writhes: {0}")]
    NotAlternating(String),
}

/// A classical crossing; `right` is b1 and `left` is b2 relative to the over-arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub over: String,
    pub right: String,
    pub left: String,
    pub writhe: i8,
}

impl Crossing {
    pub fn new(over: &str, right: &str, left: &str, writhe: i8) -> Self {
        Self {
            over: over.into(),
            right: right.into(),
            left: left.into(),
            writhe,
        }
    }

    /// The underpass arc entering the crossing: b1 at positive crossings, b2 at negative ones.
    pub fn incoming(&self) -> &str {
        if self.writhe > 0 {
            &self.right
        } else {
            &self.left
        }
    }

    pub fn outgoing(&self) -> &str {
        if self.writhe > 0 {
            &self.left
        } else {
            &self.right
        }
    }
}

/// Which underpass position of a crossing an arc occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Right,
    Left,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    components: Vec<Vec<String>>,
    crossings: Vec<Crossing>,
}

/// A validated diagram. Component `i` (0-based here) lists its arcs in cyclic traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    components: Vec<Vec<String>>,
    crossings: Vec<Crossing>,
    arcs: Vec<String>,
    arc_index: HashMap<String, usize>,
    component_of: Vec<usize>,
}

impl Diagram {
    /// Build and validate.
    pub fn new(
        components: Vec<Vec<String>>,
        crossings: Vec<Crossing>,
    ) -> Result<Self, DiagramError> {
        let mut arcs = Vec::new();
        let mut arc_index = HashMap::new();
        let mut component_of = Vec::new();
        if components.is_empty() {
            return Err(DiagramError::Validation(
                "a diagram needs at least one component".into(),
            ));
        }
        for (ci, comp) in components.iter().enumerate() {
            if comp.is_empty() {
                return Err(DiagramError::Validation(format!(
                    "component {} has no arcs",
                    ci + 1
                )));
            }
            for a in comp {
                if arc_index.insert(a.clone(), arcs.len()).is_some() {
                    return Err(DiagramError::Validation(format!("arc {a:?} listed twice")));
                }
                arcs.push(a.clone());
                component_of.push(ci);
            }
        }
        let d = Self {
            components,
            crossings,
            arcs,
            arc_index,
            component_of,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut slots = vec![0usize; self.arcs.len()];
        let mut under_pairs: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (k, c) in self.crossings.iter().enumerate() {
            if c.writhe != 1 && c.writhe != -1 {
                return Err(DiagramError::Validation(format!(
                    "crossing {} has writhe {}",
                    k + 1,
                    c.writhe
                )));
            }
            let mut ids = [0usize; 3];
            for (slot, name) in ids.iter_mut().zip([&c.over, &c.right, &c.left]) {
                *slot = self.arc_id(name).ok_or_else(|| {
                    DiagramError::Validation(format!(
                        "crossing {} names unknown arc {name:?}",
                        k + 1
                    ))
                })?;
            }
            slots[ids[1]] += 1;
            slots[ids[2]] += 1;
            let key = (ids[1].min(ids[2]), ids[1].max(ids[2]));
            *under_pairs.entry(key).or_default() += 1;
        }
        for (ci, comp) in self.components.iter().enumerate() {
            let total: usize = comp.iter().map(|a| slots[self.arc_index[a]]).sum();
            if total == 0 {
                if comp.len() != 1 {
                    return Err(DiagramError::Validation(format!(
                        "component {} never passes under but has {} arcs",
                        ci + 1,
                        comp.len()
                    )));
                }
                continue;
            }
            for a in comp {
                let n = slots[self.arc_index[a]];
                if n != 2 {
                    return Err(DiagramError::Validation(format!(
                        "arc {a:?} occupies {n} underpass slots (expected 2)"
                    )));
                }
            }
            for (k, a) in comp.iter().enumerate() {
                let b = &comp[(k + 1) % comp.len()];
                let (x, y) = (self.arc_index[a], self.arc_index[b]);
                *under_pairs.entry((x.min(y), x.max(y))).or_default() -= 1;
            }
        }
        if let Some(((x, y), _)) = under_pairs.iter().find(|(_, v)| **v != 0) {
            return Err(DiagramError::Validation(format!(
                "arcs {:?} and {:?} meet at a different number of crossings than the traversal order implies",
                self.arcs[*x], self.arcs[*y]
            )));
        }
        Ok(())
    }

    pub fn components(&self) -> &[Vec<String>] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// All arcs, component by component.
    pub fn arcs(&self) -> &[String] {
        &self.arcs
    }

    pub fn arc_id(&self, name: &str) -> Option<usize> {
        self.arc_index.get(name).copied()
    }

    /// 0-based component index of an arc.
    pub fn kappa(&self, arc: usize) -> usize {
        self.component_of[arc]
    }

    pub fn kappa_of(&self, name: &str) -> usize {
        self.component_of[self.arc_index[name]]
    }

    pub fn mu(&self) -> usize {
        self.components.len()
    }

    /// (over, b1, b2) arc ids of crossing `k`.
    pub fn crossing_ids(&self, k: usize) -> (usize, usize, usize) {
        let c = &self.crossings[k];
        (
            self.arc_index[&c.over],
            self.arc_index[&c.right],
            self.arc_index[&c.left],
        )
    }

    /// Underpass slots occupied by each arc, as (crossing, slot) pairs.
    pub fn slots(&self) -> Vec<Vec<(usize, Slot)>> {
        let mut out = vec![Vec::new(); self.arcs.len()];
        for (k, c) in self.crossings.iter().enumerate() {
            out[self.arc_index[&c.right]].push((k, Slot::Right));
            out[self.arc_index[&c.left]].push((k, Slot::Left));
        }
        out
    }

    /// Sum of the writhes at an arc's underpass slots; lies in {-2, 0, 2} for multi-slot arcs.
    pub fn end_writhe_sum(&self, arc: usize) -> i64 {
        self.crossings
            .iter()
            .map(|c| {
                let n = (c.right == self.arcs[arc]) as i64 + (c.left == self.arcs[arc]) as i64;
                n * c.writhe as i64
            })
            .sum()
    }

    pub fn has_alternating_writhes(&self) -> bool {
        let slots = self.slots();
        (0..self.arcs.len()).all(|a| !slots[a].is_empty() && self.end_writhe_sum(a) == 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DiagramJson {
            components: self.components.clone(),
            crossings: self.crossings.clone(),
        })
        .expect("diagram serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson {
            components: self.components.clone(),
            crossings: self.crossings.clone(),
        })
        .expect("diagram serializes")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Parse the JSON diagram format and validate it.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let raw: DiagramJson =
        serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
    Diagram::new(raw.components, raw.crossings)
}

/// Parse either format: PD text (`PD[...]`) or JSON.
pub fn parse_any(text: &str) -> Result<Diagram, DiagramError> {
    if text.trim_start().starts_with("PD[") {
        import_pd(text)
    } else {
        parse_diagram(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = r#"{"components": [["a1"], ["a2"]],
        "crossings": [{"over":"a2","right":"a1","left":"a1","writhe":1},
                      {"over":"a1","right":"a2","left":"a2","writhe":1}]}"#;

    #[test]
    fn parses_hopf() {
        let d = parse_diagram(HOPF).unwrap();
        assert_eq!(d.mu(), 2);
        assert_eq!(d.arcs().len(), 2);
        assert_eq!(d.crossings().len(), 2);
        assert_eq!(d.kappa_of("a2"), 1);
    }

    #[test]
    fn parses_virtual_hopf() {
        let d = parse_diagram(
            r#"{"components": [["a1'"], ["a2'"]],
                "crossings": [{"over":"a2'","right":"a1'","left":"a1'","writhe":1}]}"#,
        )
        .unwrap();
        assert_eq!((d.mu(), d.arcs().len(), d.crossings().len()), (2, 2, 1));
    }

    #[test]
    fn rejects_three_slots() {
        let text = r#"{"components": [["a1","a2"]],
            "crossings": [{"over":"a2","right":"a1","left":"a2","writhe":1},
                          {"over":"a1","right":"a1","left":"a2","writhe":1},
                          {"over":"a1","right":"a1","left":"a1","writhe":1}]}"#;
        match parse_diagram(text) {
            Err(DiagramError::Validation(msg)) => assert!(msg.contains("slots"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_diagram("{"), Err(DiagramError::Parse(_))));
        let unknown = r#"{"components": [["a"]], "crossings": [{"over":"b","right":"a","left":"a","writhe":1}]}"#;
        assert!(matches!(
            parse_diagram(unknown),
            Err(DiagramError::Validation(_))
        ));
        let writhe = r#"{"components": [["a"]], "crossings": [{"over":"a","right":"a","left":"a","writhe":2}]}"#;
        assert!(matches!(
            parse_diagram(writhe),
            Err(DiagramError::Validation(_))
        ));
        let free = r#"{"components": [["a","b"]], "crossings": []}"#;
        assert!(matches!(
            parse_diagram(free),
            Err(DiagramError::Validation(_))
        ));
        let dup = r#"{"components": [["a"],["a"]], "crossings": []}"#;
        assert!(matches!(
            parse_diagram(dup),
            Err(DiagramError::Validation(_))
        ));
    }

    #[test]
    fn rejects_disconnected_under_pairs() {
        // each arc has two slots but the pairs disagree with the listed cyclic order
        let text = r#"{"components": [["a","b","c"]],
            "crossings": [{"over":"a","right":"a","left":"a","writhe":1},
                          {"over":"b","right":"b","left":"c","writhe":1},
                          {"over":"c","right":"b","left":"c","writhe":1}]}"#;
        assert!(matches!(
            parse_diagram(text),
            Err(DiagramError::Validation(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = parse_diagram(HOPF).unwrap();
        assert_eq!(parse_diagram(&d.to_json()).unwrap(), d);
    }
}
