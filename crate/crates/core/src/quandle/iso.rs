//! Isomorphism search between finite medial quandles.

use super::{displacement_group, FiniteQuandle, QuandleError, DEFAULT_DIS_CAP};

pub const DEFAULT_ISO_CAP: usize = 512;

/// Work budget, counted in propagated pairs.
const SEARCH_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `map[x]` is the image of `x`
    Isomorphic(Vec<usize>),
    SizeMismatch,
    OrbitSizeMismatch,
    DisplacementMismatch,
    ProfileMismatch,
    /// backtracking exhausted every candidate
    Exhausted,
    /// the search budget ran out before a decision
    Undecided,
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Elements grouped by equal right translation `β_y`.
fn beta_classes(q: &FiniteQuandle) -> Vec<usize> {
    let mut seen: std::collections::HashMap<Vec<u32>, usize> = std::collections::HashMap::new();
    (0..q.size())
        .map(|y| {
            let k = seen.len();
            *seen.entry(q.beta(y)).or_insert(k)
        })
        .collect()
}

fn class_sizes(ids: &[usize]) -> Vec<usize> {
    let mut size = vec![0; ids.len()];
    for &i in ids {
        size[i] += 1;
    }
    size
}

/// Partitions of the elements that isomorphisms carry onto each other.
fn partitions(q: &FiniteQuandle) -> [Vec<usize>; 2] {
    [q.orbit_ids(), beta_classes(q)]
}

/// Per-element invariants preserved by isomorphisms.
fn profiles(q: &FiniteQuandle, parts: &[Vec<usize>; 2]) -> Vec<Vec<usize>> {
    let n = q.size();
    let (ids, bids) = (&parts[0], &parts[1]);
    let (osize, bsize) = (class_sizes(ids), class_sizes(bids));
    (0..n)
        .map(|x| {
            // cycle type of β_x, then the fixed points of y ↦ x ▷ y
            let mut seen = vec![false; n];
            let mut cycles = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let (mut c, mut len) = (s, 0);
                while !seen[c] {
                    seen[c] = true;
                    c = q.op(c, x);
                    len += 1;
                }
                cycles.push(len);
            }
            cycles.sort_unstable();
            let left_fixed = (0..n).filter(|&y| q.op(x, y) == x).count();
            let mut p = vec![osize[ids[x]], bsize[bids[x]], left_fixed];
            p.extend(cycles);
            p
        })
        .collect()
}

struct Search<'a> {
    a: &'a FiniteQuandle,
    b: &'a FiniteQuandle,
    pa: Vec<Vec<usize>>,
    pb: Vec<Vec<usize>>,
    parts_a: [Vec<usize>; 2],
    parts_b: [Vec<usize>; 2],
    /// class correspondences so far, with the number of assignments using each
    class_map: [Vec<(usize, usize)>; 2],
    class_rev: [Vec<usize>; 2],
    gens: Vec<usize>,
    f: Vec<usize>,
    used: Vec<bool>,
    dom: Vec<usize>,
    work: u64,
}

const NONE: usize = usize::MAX;

impl Search<'_> {
    fn assign(&mut self, x: usize, y: usize) -> bool {
        if self.used[y] || self.pa[x] != self.pb[y] {
            return false;
        }
        for k in 0..2 {
            let (ca, cb) = (self.parts_a[k][x], self.parts_b[k][y]);
            let (img, _) = self.class_map[k][ca];
            if (img != NONE && img != cb) || (img == NONE && self.class_rev[k][cb] != NONE) {
                return false;
            }
        }
        for k in 0..2 {
            let (ca, cb) = (self.parts_a[k][x], self.parts_b[k][y]);
            self.class_map[k][ca] = (cb, self.class_map[k][ca].1 + 1);
            self.class_rev[k][cb] = ca;
        }
        self.f[x] = y;
        self.used[y] = true;
        self.dom.push(x);
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.dom.len() > len {
            let x = self.dom.pop().expect("nonempty");
            for k in 0..2 {
                let ca = self.parts_a[k][x];
                let (cb, count) = self.class_map[k][ca];
                self.class_map[k][ca] = if count == 1 {
                    self.class_rev[k][cb] = NONE;
                    (NONE, 0)
                } else {
                    (cb, count - 1)
                };
            }
            self.used[self.f[x]] = false;
            self.f[x] = NONE;
        }
    }

    /// Close the domain under the operations, checking consistency.
    fn propagate(&mut self, mut done: usize) -> bool {
        let (a, b) = (self.a, self.b);
        while done < self.dom.len() {
            let x = self.dom[done];
            for j in 0..=done {
                let z = self.dom[j];
                self.work += 1;
                let (fx, fz) = (self.f[x], self.f[z]);
                let pairs = [
                    (a.op(x, z), b.op(fx, fz)),
                    (a.op(z, x), b.op(fz, fx)),
                    (a.op_inv(x, z), b.op_inv(fx, fz)),
                    (a.op_inv(z, x), b.op_inv(fz, fx)),
                ];
                for (u, v) in pairs {
                    if self.f[u] == NONE {
                        if !self.assign(u, v) {
                            return false;
                        }
                    } else if self.f[u] != v {
                        return false;
                    }
                }
            }
            done += 1;
        }
        true
    }

    fn run(&mut self, k: usize) -> Option<bool> {
        if self.work > SEARCH_BUDGET {
            return None;
        }
        if k == self.gens.len() {
            return Some(true);
        }
        let x = self.gens[k];
        if self.f[x] != NONE {
            return self.run(k + 1);
        }
        let start = self.dom.len();
        for y in 0..self.b.size() {
            if !self.assign(x, y) {
                continue;
            }
            if self.propagate(start) {
                match self.run(k + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.undo_to(start);
        }
        Some(false)
    }
}

/// Greedy generating set: add an element outside the current subquandle,
/// preferring orbits that have no generator yet.
fn generating_set(q: &FiniteQuandle) -> Vec<usize> {
    let n = q.size();
    let ids = q.orbit_ids();
    let mut gens: Vec<usize> = Vec::new();
    let mut inside = vec![false; n];
    let mut touched = vec![false; n];
    while let Some(x) = (0..n)
        .find(|&x| !inside[x] && !touched[ids[x]])
        .or_else(|| (0..n).find(|&x| !inside[x]))
    {
        gens.push(x);
        touched[ids[x]] = true;
        for y in q.generated(&gens) {
            inside[y] = true;
        }
    }
    gens
}

/// Find an isomorphism `a → b`, or report why none exists.
pub fn iso_search(
    a: &FiniteQuandle,
    b: &FiniteQuandle,
    cap: usize,
) -> Result<IsoOutcome, QuandleError> {
    if a.size() > cap || b.size() > cap {
        return Err(QuandleError::SizeCap(a.size().max(b.size()) as u64));
    }
    if a.size() != b.size() {
        return Ok(IsoOutcome::SizeMismatch);
    }
    if a.orbit_sizes() != b.orbit_sizes() {
        return Ok(IsoOutcome::OrbitSizeMismatch);
    }
    if let (Ok(da), Ok(db)) = (
        displacement_group(a, DEFAULT_DIS_CAP),
        displacement_group(b, DEFAULT_DIS_CAP),
    ) {
        if da.module.factors() != db.module.factors() {
            return Ok(IsoOutcome::DisplacementMismatch);
        }
    }
    let (parts_a, parts_b) = (partitions(a), partitions(b));
    let (pa, pb) = (profiles(a, &parts_a), profiles(b, &parts_b));
    let (mut sa, mut sb) = (pa.clone(), pb.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(IsoOutcome::ProfileMismatch);
    }
    let n = a.size();
    let mut s = Search {
        a,
        b,
        pa,
        pb,
        parts_a,
        parts_b,
        class_map: [vec![(NONE, 0); n], vec![(NONE, 0); n]],
        class_rev: [vec![NONE; n], vec![NONE; n]],
        gens: generating_set(a),
        f: vec![NONE; n],
        used: vec![false; n],
        dom: Vec::new(),
        work: 0,
    };
    Ok(match s.run(0) {
        Some(true) => {
            let f = s.f;
            debug_assert!((0..n).all(|x| (0..n).all(|y| f[a.op(x, y)] == b.op(f[x], f[y]))));
            IsoOutcome::Isomorphic(f)
        }
        Some(false) => IsoOutcome::Exhausted,
        None => IsoOutcome::Undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_dihedral() {
        let q = FiniteQuandle::dihedral(5);
        // relabel by x ↦ 3x + 1
        let p = |x: usize| (3 * x + 1) % 5;
        let mut inv = [0; 5];
        for x in 0..5 {
            inv[p(x)] = x;
        }
        let r = FiniteQuandle::from_fn(5, |x, y| p(q.op(inv[x], inv[y]))).unwrap();
        let out = iso_search(&q, &r, DEFAULT_ISO_CAP).unwrap();
        let IsoOutcome::Isomorphic(f) = out else {
            panic!("{out:?}")
        };
        assert!((0..5).all(|x| (0..5).all(|y| f[q.op(x, y)] == r.op(f[x], f[y]))));
    }

    #[test]
    fn size_and_orbit_mismatch() {
        let a = FiniteQuandle::trivial(2);
        let b = FiniteQuandle::trivial(3);
        assert_eq!(
            iso_search(&a, &b, DEFAULT_ISO_CAP).unwrap(),
            IsoOutcome::SizeMismatch
        );
        let c = FiniteQuandle::dihedral(3);
        assert_eq!(
            iso_search(&b, &c, DEFAULT_ISO_CAP).unwrap(),
            IsoOutcome::OrbitSizeMismatch
        );
    }

    #[test]
    fn non_isomorphic_affine() {
        // connected affine quandles on Z/7 are isomorphic only for equal t
        let a = FiniteQuandle::affine_cyclic(7, 3).unwrap();
        let b = FiniteQuandle::affine_cyclic(7, 5).unwrap();
        let out = iso_search(&a, &b, DEFAULT_ISO_CAP).unwrap();
        assert!(!out.is_isomorphic());
        assert!(iso_search(&a, &a, DEFAULT_ISO_CAP).unwrap().is_isomorphic());
    }

    #[test]
    fn cap_enforced() {
        let a = FiniteQuandle::trivial(3);
        assert!(matches!(
            iso_search(&a, &a, 2),
            Err(QuandleError::SizeCap(3))
        ));
    }
}
