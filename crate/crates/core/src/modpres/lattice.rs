//! Integer lattices (subgroups of Z^n) in canonical row Hermite normal form.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{integer_kernel, IntMatrix};

/// Row-echelon basis with positive pivots and reduced entries above each pivot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("lattice entry exceeds i64")
}

fn sub_mul(a: &mut [i128], b: &[i128], q: i128) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x
            .checked_sub(q.checked_mul(*y).expect("lattice overflow"))
            .expect("lattice overflow");
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_generators(
            dim,
            (0..dim).map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                e
            }),
        )
    }

    pub fn from_generators<I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        let mut rows: Vec<Vec<i128>> = gens
            .into_iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator of wrong length");
                g.into_iter().map(i128::from).collect::<Vec<_>>()
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        let mut basis: Vec<Vec<i128>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            loop {
                rows.retain(|r| r.iter().any(|&x| x != 0));
                let Some(k) = (0..rows.len())
                    .filter(|&k| rows[k][col] != 0)
                    .min_by_key(|&k| rows[k][col].abs())
                else {
                    break;
                };
                let piv = rows.swap_remove(k);
                let mut done = true;
                for r in rows.iter_mut() {
                    if r[col] != 0 {
                        let q = r[col].div_euclid(piv[col]);
                        sub_mul(r, &piv, q);
                        done &= r[col] == 0;
                    }
                }
                if done {
                    let mut piv = piv;
                    if piv[col] < 0 {
                        piv.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis.push(piv);
                    pivots.push(col);
                    break;
                }
                rows.push(piv);
            }
        }
        for k in 0..basis.len() {
            let pc = pivots[k];
            let p = basis[k][pc];
            let (above, rest) = basis.split_at_mut(k);
            for r in above.iter_mut() {
                let q = r[pc].div_euclid(p);
                sub_mul(r, &rest[0], q);
            }
        }
        Self {
            dim,
            basis: basis
                .into_iter()
                .map(|r| r.into_iter().map(narrow).collect())
                .collect(),
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// `[Z^n : L]`, or None when the rank is deficient.
    pub fn index(&self) -> Option<u64> {
        if !self.is_full_rank() {
            return None;
        }
        self.basis
            .iter()
            .zip(&self.pivots)
            .try_fold(1u64, |acc, (r, &pc)| acc.checked_mul(r[pc] as u64))
    }

    /// Canonical representative of `v + L`: every pivot coordinate lands in `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (r, &pc) in self.basis.iter().zip(&self.pivots) {
            let q = w[pc].div_euclid(r[pc] as i128);
            if q != 0 {
                let r: Vec<i128> = r.iter().map(|&x| x as i128).collect();
                sub_mul(&mut w, &r, q);
            }
        }
        w.into_iter().map(narrow).collect()
    }

    /// Coefficients of `v` in the basis, if `v ∈ L`.
    pub fn coords_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut out = Vec::with_capacity(self.basis.len());
        let mut k = 0;
        for col in 0..self.dim {
            if k < self.pivots.len() && self.pivots[k] == col {
                let p = self.basis[k][col] as i128;
                if w[col] % p != 0 {
                    return None;
                }
                let q = w[col] / p;
                let r: Vec<i128> = self.basis[k].iter().map(|&x| x as i128).collect();
                sub_mul(&mut w, &r, q);
                out.push(narrow(q));
                k += 1;
            } else if w[col] != 0 {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coords_of(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|r| self.contains(r))
    }

    pub fn join(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(self.dim, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let (r1, r2) = (self.rank(), other.rank());
        if r1 == 0 || r2 == 0 {
            return Lattice::zero(self.dim);
        }
        let mut m = IntMatrix::zeros(self.dim, r1 + r2);
        for (j, r) in self.basis.iter().enumerate() {
            for (i, &x) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        for (j, r) in other.basis.iter().enumerate() {
            for (i, &x) in r.iter().enumerate() {
                m[(i, r1 + j)] = BigInt::from(-x);
            }
        }
        let gens = integer_kernel(&m).into_iter().map(|k| {
            let mut v = vec![0i128; self.dim];
            for (j, r) in self.basis.iter().enumerate() {
                let c = k[j].to_i128().expect("kernel coefficient exceeds i128");
                for (x, &y) in v.iter_mut().zip(r) {
                    *x += c * y as i128;
                }
            }
            v.into_iter().map(narrow).collect()
        });
        Lattice::from_generators(self.dim, gens)
    }

    /// Coset representatives of `Z^n / L` in lexicographic order; requires full rank.
    pub fn coset_reps(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_full_rank() {
            return None;
        }
        let bounds: Vec<i64> = self
            .basis
            .iter()
            .zip(&self.pivots)
            .map(|(r, &pc)| r[pc])
            .collect();
        let total: usize = bounds.iter().map(|&b| b as usize).product();
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0i64; self.dim];
        for _ in 0..total {
            out.push(cur.clone());
            for k in (0..self.dim).rev() {
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        Some(out)
    }
}
