//! Finite quandles given by operation tables.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

mod congruence;
mod dis;
mod iso;

pub use congruence::{congruence_quotient, CongruenceMode, QuandleCongruence};
pub use dis::{
    displacement_group, is_semiregular, rebuild_via_structure_theorem, DisplacementGroup, Rebuilt,
};
pub use iso::{iso_search, IsoOutcome, DEFAULT_ISO_CAP};

use crate::modpres::ModError;

pub const DEFAULT_DIS_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuandleError {
    #[error("right translation by {0} is not a permutation")]
    NotInvertible(usize),
    #[error("operation table has {got} entries, expected {want}")]
    Shape { got: usize, want: usize },
    #[error("size {0} exceeds the configured cap")]
    SizeCap(u64),
    #[error("displacements do not commute; the quandle is not medial")]
    NotMedial,
    #[error("structure check failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Module(#[from] ModError),
}

/// `op[x][y] = x ▷ y`, stored flat, with the table of `x ▷^{-1} y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuandle {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
}

/// One failed instance of a quandle axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Idempotence {
        x: usize,
    },
    Medial {
        w: usize,
        x: usize,
        y: usize,
        z: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub idempotence_failures: usize,
    pub medial_failures: u64,
    /// the first few violations, in scan order
    pub examples: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.idempotence_failures == 0 && self.medial_failures == 0
    }
}

const REPORT_EXAMPLES: usize = 16;

impl FiniteQuandle {
    /// `table[x * n + y] = x ▷ y`. Right translations must be permutations.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self, QuandleError> {
        if table.len() != n * n {
            return Err(QuandleError::Shape {
                got: table.len(),
                want: n * n,
            });
        }
        let mut inv = vec![u32::MAX; n * n];
        for y in 0..n {
            for x in 0..n {
                let z = table[x * n + y] as usize;
                if z >= n || inv[z * n + y] != u32::MAX {
                    return Err(QuandleError::NotInvertible(y));
                }
                inv[z * n + y] = x as u32;
            }
        }
        Ok(Self {
            n,
            table,
            inv,
            labels: None,
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, QuandleError> {
        let mut t = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                t.push(f(x, y) as u32);
            }
        }
        Self::from_table(n, t)
    }

    /// Dihedral quandle `x ▷ y = 2y - x mod n`.
    pub fn dihedral(n: usize) -> Self {
        Self::from_fn(n, |x, y| (2 * y + n - x % n) % n).expect("dihedral table")
    }

    /// Trivial quandle `x ▷ y = x`.
    pub fn trivial(n: usize) -> Self {
        Self::from_fn(n, |x, _| x).expect("trivial table")
    }

    /// Affine quandle `x ▷ y = u x + (1-u) y` on `Z/m`.
    pub fn affine_cyclic(m: usize, u: i64) -> Result<Self, QuandleError> {
        let mi = m as i64;
        Self::from_fn(m, |x, y| {
            (u * x as i64 + (1 - u) * y as i64).rem_euclid(mi) as usize
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    /// The unique `z` with `z ▷ y = x`.
    #[inline]
    pub fn op_inv(&self, x: usize, y: usize) -> usize {
        self.inv[x * self.n + y] as usize
    }

    /// Right translation `β_y` as a permutation.
    pub fn beta(&self, y: usize) -> Vec<u32> {
        (0..self.n).map(|x| self.table[x * self.n + y]).collect()
    }

    pub fn beta_inv(&self, y: usize) -> Vec<u32> {
        (0..self.n).map(|x| self.inv[x * self.n + y]).collect()
    }

    pub fn table_rows(&self) -> Vec<Vec<u32>> {
        self.table
            .chunks(self.n.max(1))
            .map(<[u32]>::to_vec)
            .take(self.n)
            .collect()
    }

    /// Every violated idempotence and mediality instance (right invertibility holds by construction).
    pub fn check_medial_axioms(&self) -> AxiomReport {
        let n = self.n;
        let mut rep = AxiomReport::default();
        for x in 0..n {
            if self.op(x, x) != x {
                rep.idempotence_failures += 1;
                if rep.examples.len() < REPORT_EXAMPLES {
                    rep.examples.push(Violation::Idempotence { x });
                }
            }
        }
        for w in 0..n {
            for x in 0..n {
                let wx = self.op(w, x);
                for y in 0..n {
                    let wy = self.op(w, y);
                    for z in 0..n {
                        if self.op(wx, self.op(y, z)) != self.op(wy, self.op(x, z)) {
                            rep.medial_failures += 1;
                            if rep.examples.len() < REPORT_EXAMPLES {
                                rep.examples.push(Violation::Medial { w, x, y, z });
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    pub fn is_medial_quandle(&self) -> bool {
        self.check_medial_axioms().is_empty()
    }

    /// Self-distributivity `(x ▷ y) ▷ z = (x ▷ z) ▷ (y ▷ z)`.
    pub fn is_self_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| self.op(self.op(x, y), z) == self.op(self.op(x, z), self.op(y, z)))
            })
        })
    }

    pub fn is_involutory(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.op(self.op(x, y), y) == x))
    }

    /// Orbit index of every element; orbits numbered by their least element.
    pub fn orbit_ids(&self) -> Vec<usize> {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, self.op(x, y)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut ids = vec![0; n];
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let k = seen.len();
            ids[x] = *seen.entry(r).or_insert(k);
        }
        ids
    }

    /// Orbits as sorted element lists, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let ids = self.orbit_ids();
        let k = ids.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); k];
        for (x, &i) in ids.iter().enumerate() {
            out[i].push(x);
        }
        out
    }

    /// Sorted multiset of orbit sizes.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    /// The subquandle generated by `gens` (closed under `▷` and `▷^{-1}`).
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        let mut list: Vec<usize> = Vec::new();
        for &g in gens {
            if !inside[g] {
                inside[g] = true;
                list.push(g);
            }
        }
        let mut k = 0;
        while k < list.len() {
            let a = list[k];
            for j in 0..=k {
                let b = list[j];
                for z in [
                    self.op(a, b),
                    self.op(b, a),
                    self.op_inv(a, b),
                    self.op_inv(b, a),
                ] {
                    if !inside[z] {
                        inside[z] = true;
                        list.push(z);
                    }
                }
            }
            k += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "size": self.n,
            "labels": self.labels,
            "table": self.table_rows(),
        })
    }
}
