//! Planar diagram (PD) code import for classical links.
//!
//! `X[i,j,k,l]` lists edge labels counterclockwise from the incoming underpass edge
//! `i`; `k` leaves along the understrand and `j`, `l` carry the overstrand. The
//! crossing is positive when the overstrand runs from `l` to `j`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Crossing, Diagram, DiagramError};

fn parse_tuples(text: &str) -> Result<Vec<[u64; 4]>, DiagramError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = s
        .strip_prefix("PD[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| DiagramError::Parse("expected PD[...]".into()))?;
    let mut out = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let open = rest
            .find('[')
            .ok_or_else(|| DiagramError::Parse(format!("expected '[' in {rest:?}")))?;
        let head = &rest[..open];
        let close = rest[open..]
            .find(']')
            .map(|p| p + open)
            .ok_or_else(|| DiagramError::Parse("unbalanced bracket".into()))?;
        let args = &rest[open + 1..close];
        match head {
            "X" => {}
            "" => return Err(DiagramError::Parse("missing crossing head".into())),
            other => {
                return Err(DiagramError::Unsupported(format!(
                    "crossing type {other}[...]"
                )))
            }
        }
        let nums: Result<Vec<u64>, _> = args.split(',').map(str::parse).collect();
        let nums = nums.map_err(|_| DiagramError::Parse(format!("bad labels in X[{args}]")))?;
        let tuple: [u64; 4] = nums.try_into().map_err(|v: Vec<u64>| {
            DiagramError::Parse(format!("X[...] needs 4 labels, got {}", v.len()))
        })?;
        out.push(tuple);
        rest = &rest[close + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    Ok(out)
}

/// Convert a PD code into a diagram.
pub fn import_pd(text: &str) -> Result<Diagram, DiagramError> {
    let xs = parse_tuples(text)?;
    // occurrences of each edge as (crossing, position)
    let mut occ: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in xs.iter().enumerate() {
        for (p, &e) in x.iter().enumerate() {
            occ.entry(e).or_default().push((c, p));
        }
    }
    for (e, o) in &occ {
        if o.len() != 2 {
            return Err(DiagramError::Parse(format!(
                "edge {e} appears {} times",
                o.len()
            )));
        }
    }
    // head[c][p]: Some(true) if the edge at (c, p) enters crossing c
    let mut head: Vec<[Option<bool>; 4]> = vec![[None; 4]; xs.len()];
    for h in head.iter_mut() {
        h[0] = Some(true);
        h[2] = Some(false);
    }
    let other_pos = |p: usize| match p {
        1 => 3,
        3 => 1,
        0 => 2,
        _ => 0,
    };
    let mut changed = true;
    while changed {
        changed = false;
        for o in occ.values() {
            let [(c0, p0), (c1, p1)] = [o[0], o[1]];
            for ((ca, pa), (cb, pb)) in [((c0, p0), (c1, p1)), ((c1, p1), (c0, p0))] {
                if let Some(v) = head[ca][pa] {
                    match head[cb][pb] {
                        None => {
                            head[cb][pb] = Some(!v);
                            let q = other_pos(pb);
                            head[cb][q] = Some(v);
                            changed = true;
                        }
                        Some(w) if w == v => {
                            return Err(DiagramError::AmbiguousOrientation(format!(
                                "edge labels at crossing {} contradict each other",
                                cb + 1
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    // components as edge sets: i~k and j~l join edges along a strand
    let labels: Vec<u64> = occ.keys().copied().collect();
    let idx: HashMap<u64, usize> = labels.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for x in &xs {
        for (a, b) in [(x[0], x[2]), (x[1], x[3])] {
            let (ra, rb) = (find(&mut parent, idx[&a]), find(&mut parent, idx[&b]));
            parent[ra] = rb;
        }
    }
    let mut comp_edges: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    for &e in &labels {
        let r = find(&mut parent, idx[&e]);
        comp_edges.entry(r).or_default().insert(e);
    }
    let successor = |e: u64| -> u64 {
        let set = &comp_edges[&find(&mut parent.clone(), idx[&e])];
        set.range(e + 1..)
            .next()
            .copied()
            .unwrap_or(*set.iter().next().expect("nonempty"))
    };
    for (c, x) in xs.iter().enumerate() {
        if head[c][1].is_some() {
            continue;
        }
        let (j, l) = (x[1], x[3]);
        let l_to_j = successor(l) == j;
        let j_to_l = successor(j) == l;
        if l_to_j == j_to_l {
            return Err(DiagramError::AmbiguousOrientation(format!(
                "overstrand direction at crossing {}",
                c + 1
            )));
        }
        head[c][3] = Some(l_to_j);
        head[c][1] = Some(!l_to_j);
    }

    // next edge along the strand: leaving the crossing where `e` enters, unless it enters as an underpass
    let mut next_edge: HashMap<u64, u64> = HashMap::new();
    let mut ends_under: BTreeSet<u64> = BTreeSet::new();
    let mut starts_under: BTreeSet<u64> = BTreeSet::new();
    for (c, x) in xs.iter().enumerate() {
        next_edge.insert(x[0], x[2]);
        ends_under.insert(x[0]);
        starts_under.insert(x[2]);
        if head[c][1] == Some(true) {
            next_edge.insert(x[1], x[3]);
        } else {
            next_edge.insert(x[3], x[1]);
        }
    }
    let mut arc_of: HashMap<u64, String> = HashMap::new();
    let mut components: Vec<Vec<String>> = Vec::new();
    let mut comps: Vec<&BTreeSet<u64>> = comp_edges.values().collect();
    comps.sort_by_key(|s| *s.iter().next().expect("nonempty"));
    for set in comps {
        let starts: Vec<u64> = set
            .iter()
            .copied()
            .filter(|e| starts_under.contains(e))
            .collect();
        if starts.is_empty() {
            let name = format!("a{}", set.iter().next().expect("nonempty"));
            for &e in set {
                arc_of.insert(e, name.clone());
            }
            components.push(vec![name]);
            continue;
        }
        let mut names = Vec::new();
        let mut e = starts[0];
        loop {
            let name = format!("a{e}");
            names.push(name.clone());
            loop {
                arc_of.insert(e, name.clone());
                let ended = ends_under.contains(&e);
                e = next_edge[&e];
                if ended {
                    break;
                }
            }
            if e == starts[0] {
                break;
            }
            if names.len() > set.len() {
                return Err(DiagramError::AmbiguousOrientation(
                    "strand does not close up".into(),
                ));
            }
        }
        components.push(names);
    }
    let crossings = xs
        .iter()
        .enumerate()
        .map(|(c, x)| {
            let over = arc_of[&x[1]].clone();
            let incoming = arc_of[&x[0]].clone();
            let outgoing = arc_of[&x[2]].clone();
            if head[c][3] == Some(true) {
                Crossing {
                    over,
                    right: incoming,
                    left: outgoing,
                    writhe: 1,
                }
            } else {
                Crossing {
                    over,
                    right: outgoing,
                    left: incoming,
                    writhe: -1,
                }
            }
        })
        .collect();
    Diagram::new(components, crossings)
}
