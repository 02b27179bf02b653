//! Making writhes alternate with R1 kinks, and the per-component traversal indexing.

use std::collections::HashSet;

use serde::Serialize;

use super::{Crossing, Diagram, DiagramError, Slot};

/// One inserted Reidemeister I kink.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KinkMove {
    /// arc cut by the kink; it keeps its name on the part before the kink
    pub arc: String,
    pub new_arc: String,
    pub writhe: i8,
}

/// Traversal data of one component, all lists of length `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedComponent {
    pub arcs: Vec<String>,
    /// indices into the diagram's crossing list
    pub crossings: Vec<usize>,
    pub overs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentIndexing {
    pub components: Vec<IndexedComponent>,
}

fn slot_arc(c: &Crossing, s: Slot) -> &str {
    match s {
        Slot::Right => &c.right,
        Slot::Left => &c.left,
    }
}

fn set_slot(c: &mut Crossing, s: Slot, name: String) {
    match s {
        Slot::Right => c.right = name,
        Slot::Left => c.left = name,
    }
}

fn incoming_slot(c: &Crossing) -> Slot {
    if c.writhe > 0 {
        Slot::Right
    } else {
        Slot::Left
    }
}

/// End slot (where the arc enters its terminal crossing) and start slot of every arc.
///
/// Uses the writhe orientation rule when the component obeys it, and otherwise pairs
/// consecutive arcs of the listed cyclic order.
fn arc_ends(d: &Diagram) -> Vec<Option<((usize, Slot), (usize, Slot))>> {
    let slots = d.slots();
    let mut out = vec![None; d.arcs().len()];
    for comp in d.components() {
        let ids: Vec<usize> = comp
            .iter()
            .map(|a| d.arc_id(a).expect("known arc"))
            .collect();
        if ids.iter().all(|&a| slots[a].is_empty()) {
            continue;
        }
        let by_rule: Option<Vec<_>> = ids
            .iter()
            .map(|&a| {
                let ins: Vec<_> = slots[a]
                    .iter()
                    .copied()
                    .filter(|&(k, s)| incoming_slot(&d.crossings()[k]) == s)
                    .collect();
                let outs: Vec<_> = slots[a]
                    .iter()
                    .copied()
                    .filter(|&(k, s)| incoming_slot(&d.crossings()[k]) != s)
                    .collect();
                (ins.len() == 1 && outs.len() == 1).then(|| (ins[0], outs[0]))
            })
            .collect();
        if let Some(ends) = by_rule {
            for (&a, e) in ids.iter().zip(ends) {
                out[a] = Some(e);
            }
            continue;
        }
        let mut used: HashSet<(usize, Slot)> = HashSet::new();
        let n = ids.len();
        let mut end_of = vec![None; n];
        let mut start_of = vec![None; n];
        for k in 0..n {
            let (a, b) = (ids[k], ids[(k + 1) % n]);
            let found = slots[a].iter().copied().find(|&(c, s)| {
                let other = match s {
                    Slot::Right => Slot::Left,
                    Slot::Left => Slot::Right,
                };
                !used.contains(&(c, s))
                    && !used.contains(&(c, other))
                    && d.arc_id(slot_arc(&d.crossings()[c], other)) == Some(b)
            });
            let (c, s) = found.expect("validated under pairs match cyclic order");
            let other = if s == Slot::Right {
                Slot::Left
            } else {
                Slot::Right
            };
            used.insert((c, s));
            used.insert((c, other));
            end_of[k] = Some((c, s));
            start_of[(k + 1) % n] = Some((c, other));
        }
        for k in 0..n {
            out[ids[k]] = Some((end_of[k].expect("end"), start_of[k].expect("start")));
        }
    }
    out
}

fn fresh_name(base: &str, taken: &mut HashSet<String>) -> String {
    let mut k = 1;
    loop {
        let cand = format!("{base}~{k}");
        if taken.insert(cand.clone()) {
            return cand;
        }
        k += 1;
    }
}

/// Insert R1 kinks until every arc underpasses once at each writhe sign.
///
/// An arc whose two ends carry the same writhe ε gets a kink of writhe -ε just
/// before its terminal crossing; a component that never passes under gets a
/// positive and a negative kink.
pub fn make_alternating_writhes(d: &Diagram) -> (Diagram, Vec<KinkMove>) {
    let ends = arc_ends(d);
    let mut taken: HashSet<String> = d.arcs().iter().cloned().collect();
    let mut crossings = d.crossings().to_vec();
    let mut components = Vec::new();
    let mut log = Vec::new();
    for comp in d.components() {
        let mut new_comp = Vec::new();
        let ids: Vec<usize> = comp
            .iter()
            .map(|a| d.arc_id(a).expect("known arc"))
            .collect();
        if ids.len() == 1 && ends[ids[0]].is_none() {
            let a = comp[0].clone();
            let x = fresh_name(&a, &mut taken);
            crossings.push(Crossing::new(&a, &a, &x, 1));
            crossings.push(Crossing::new(&x, &a, &x, -1));
            log.push(KinkMove {
                arc: a.clone(),
                new_arc: x.clone(),
                writhe: 1,
            });
            log.push(KinkMove {
                arc: x.clone(),
                new_arc: a.clone(),
                writhe: -1,
            });
            components.push(vec![a, x]);
            continue;
        }
        for (name, &id) in comp.iter().zip(&ids) {
            new_comp.push(name.clone());
            let ((ec, es), (sc, _)) = ends[id].expect("component has crossings");
            let eps = d.crossings()[ec].writhe;
            if d.crossings()[sc].writhe != eps {
                continue;
            }
            let b_new = fresh_name(name, &mut taken);
            set_slot(&mut crossings[ec], es, b_new.clone());
            let kink = if eps > 0 {
                Crossing::new(name, &b_new, name, -1)
            } else {
                Crossing::new(name, name, &b_new, 1)
            };
            crossings.push(kink);
            log.push(KinkMove {
                arc: name.clone(),
                new_arc: b_new.clone(),
                writhe: -eps,
            });
            new_comp.push(b_new);
        }
        components.push(new_comp);
    }
    let out = Diagram::new(components, crossings).expect("R1 kinks preserve validity");
    (out, log)
}

/// Index every component from its base arc b_{i0}, the least-named arc running from
/// a positive crossing to a negative one.
pub fn index_components(d: &Diagram) -> Result<ComponentIndexing, DiagramError> {
    let slots = d.slots();
    let cr = d.crossings();
    let mut components = Vec::new();
    for (ci, comp) in d.components().iter().enumerate() {
        // rule-based ends; any deviation means the writhes cannot alternate along the traversal
        let mut end = Vec::new();
        let mut start = Vec::new();
        for a in comp {
            let id = d.arc_id(a).expect("known arc");
            let ins: Vec<usize> = slots[id]
                .iter()
                .filter(|&&(k, s)| incoming_slot(&cr[k]) == s)
                .map(|&(k, _)| k)
                .collect();
            let outs: Vec<usize> = slots[id]
                .iter()
                .filter(|&&(k, s)| incoming_slot(&cr[k]) != s)
                .map(|&(k, _)| k)
                .collect();
            if ins.len() != 1 || outs.len() != 1 {
                return Err(DiagramError::NotAlternating(format!(
                    "arc {a:?} does not enter and leave exactly one crossing"
                )));
            }
            end.push(ins[0]);
            start.push(outs[0]);
        }
        let base = comp
            .iter()
            .enumerate()
            .filter(|&(k, _)| cr[end[k]].writhe < 0 && cr[start[k]].writhe > 0)
            .map(|(k, a)| (a, k))
            .min()
            .ok_or_else(|| {
                DiagramError::NotAlternating(format!(
                    "component {} has no eligible base arc",
                    ci + 1
                ))
            })?
            .1;
        let pos = |name: &str| comp.iter().position(|a| a == name);
        let mut arcs = Vec::new();
        let mut crossings = Vec::new();
        let mut overs = Vec::new();
        let mut k = base;
        loop {
            let j = arcs.len();
            let c = end[k];
            let want = if j % 2 == 0 { -1 } else { 1 };
            if cr[c].writhe != want {
                return Err(DiagramError::NotAlternating(format!(
                    "crossing {} at position {j} of component {} has writhe {}",
                    c + 1,
                    ci + 1,
                    cr[c].writhe
                )));
            }
            arcs.push(comp[k].clone());
            crossings.push(c);
            overs.push(cr[c].over.clone());
            k = pos(cr[c].outgoing()).ok_or_else(|| {
                DiagramError::NotAlternating(format!("traversal leaves component {}", ci + 1))
            })?;
            if k == base || arcs.len() > comp.len() {
                break;
            }
        }
        if k != base || arcs.len() != comp.len() || arcs.len() % 2 != 0 {
            return Err(DiagramError::NotAlternating(format!(
                "traversal of component {} does not close up over its arcs",
                ci + 1
            )));
        }
        let n2 = arcs.len();
        for j in 0..n2 {
            let c = &cr[crossings[j]];
            let (r, l) = if j % 2 == 0 {
                (&arcs[(j + 1) % n2], &arcs[j])
            } else {
                (&arcs[j], &arcs[(j + 1) % n2])
            };
            if &c.right != r || &c.left != l {
                return Err(DiagramError::NotAlternating(format!(
                    "crossing {} does not match the indexing slot pattern",
                    crossings[j] + 1
                )));
            }
        }
        components.push(IndexedComponent {
            arcs,
            crossings,
            overs,
        });
    }
    Ok(ComponentIndexing { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::parse_diagram;

    fn trefoil() -> Diagram {
        Diagram::new(
            vec![vec!["a1".into(), "a2".into(), "a3".into()]],
            vec![
                Crossing::new("a3", "a1", "a2", 1),
                Crossing::new("a1", "a2", "a3", 1),
                Crossing::new("a2", "a3", "a1", 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trefoil_becomes_alternating() {
        let (d, log) = make_alternating_writhes(&trefoil());
        assert_eq!(log.len(), 3);
        assert!(d.has_alternating_writhes());
        let idx = index_components(&d).unwrap();
        assert_eq!(idx.components[0].arcs.len(), 6);
        for comp in &idx.components {
            for (j, &c) in comp.crossings.iter().enumerate() {
                assert_eq!(d.crossings()[c].writhe, if j % 2 == 0 { -1 } else { 1 });
            }
        }
    }

    #[test]
    fn idempotent() {
        let (d, _) = make_alternating_writhes(&trefoil());
        let (d2, log) = make_alternating_writhes(&d);
        assert!(log.is_empty());
        assert_eq!(d, d2);
    }

    #[test]
    fn free_component_gets_kink_pair() {
        let d = Diagram::new(vec![vec!["u".into()]], vec![]).unwrap();
        let (a, log) = make_alternating_writhes(&d);
        assert_eq!(log.len(), 2);
        let idx = index_components(&a).unwrap();
        assert_eq!(idx.components[0].arcs.len(), 2);
    }

    #[test]
    fn two_arc_component() {
        // a positive kink followed by a negative kink
        let d = Diagram::new(
            vec![vec!["p".into(), "q".into()]],
            vec![
                Crossing::new("p", "p", "q", 1),
                Crossing::new("q", "p", "q", -1),
            ],
        )
        .unwrap();
        let idx = index_components(&d).unwrap();
        assert_eq!(
            idx.components[0].arcs,
            vec!["q".to_string(), "p".to_string()]
        );
    }

    #[test]
    fn non_alternating_rejected() {
        assert!(matches!(
            index_components(&trefoil()),
            Err(DiagramError::NotAlternating(_))
        ));
        let hopf = parse_diagram(
            r#"{"components": [["a1"], ["a2"]],
                "crossings": [{"over":"a2","right":"a1","left":"a1","writhe":1},
                              {"over":"a1","right":"a2","left":"a2","writhe":1}]}"#,
        )
        .unwrap();
        assert!(index_components(&hopf).is_err());
        let (alt, _) = make_alternating_writhes(&hopf);
        assert!(index_components(&alt).is_ok());
    }
}
