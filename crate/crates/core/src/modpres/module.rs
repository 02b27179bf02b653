//! Finitely generated abelian groups with an automorphism `t`, in invariant-factor coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{integer_kernel, smith_normal_form, IntMatrix, Lattice, ModError};
use crate::laurent::LaurentPoly;

/// `Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_i | d_{i+1}`, infinite factors (`0`) last, and `t` as a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteModule {
    factors: Vec<i64>,
    t: Vec<Vec<i64>>,
    t_inv: Vec<Vec<i64>>,
}

/// A subgroup, stored as its preimage lattice in `Z^k` (which contains the relation lattice).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    lattice: Lattice,
}

/// A module together with the maps to and from the generators of the presentation it came from.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub module: FiniteModule,
    /// `k × ngens`: generator vector to module coordinates
    pub to_coords: Vec<Vec<i64>>,
    /// `ngens × k`: module coordinates to a generator vector
    pub from_coords: Vec<Vec<i64>>,
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i128> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum())
        .collect()
}

fn big_to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("module coordinate exceeds i64")
}

impl FiniteModule {
    /// Build from factors and `t`; `t^{-1}` is recovered by powering `t` (finite modules only).
    pub fn new(factors: Vec<i64>, t: Vec<Vec<i64>>) -> Result<Self, ModError> {
        let k = factors.len();
        if t.len() != k || t.iter().any(|r| r.len() != k) {
            return Err(ModError::Shape(
                "t matrix does not match the factor list".into(),
            ));
        }
        let mut m = Self {
            factors,
            t: t.clone(),
            t_inv: t,
        };
        m.t = m.reduce_matrix(&m.t);
        if !m.respects_factors(&m.t) {
            return Err(ModError::Shape(
                "t does not preserve the relation lattice".into(),
            ));
        }
        m.t_inv = m.find_inverse()?;
        Ok(m)
    }

    pub(crate) fn with_inverse(factors: Vec<i64>, t: Vec<Vec<i64>>, t_inv: Vec<Vec<i64>>) -> Self {
        let mut m = Self { factors, t, t_inv };
        m.t = m.reduce_matrix(&m.t);
        m.t_inv = m.reduce_matrix(&m.t_inv);
        m
    }

    /// The zero module.
    pub fn trivial() -> Self {
        Self {
            factors: vec![],
            t: vec![],
            t_inv: vec![],
        }
    }

    /// Cyclic `Z/d` with `t` acting as multiplication by `u`.
    pub fn cyclic(d: i64, u: i64) -> Result<Self, ModError> {
        Self::new(vec![d], vec![vec![u]])
    }

    fn reduce_matrix(&self, m: &[Vec<i64>]) -> Vec<Vec<i64>> {
        m.iter()
            .zip(&self.factors)
            .map(|(r, &d)| {
                r.iter()
                    .map(|&x| if d > 0 { x.rem_euclid(d) } else { x })
                    .collect()
            })
            .collect()
    }

    fn respects_factors(&self, m: &[Vec<i64>]) -> bool {
        // column j times d_j must vanish in every coordinate
        (0..self.dim()).all(|j| {
            let d = self.factors[j];
            (0..self.dim()).all(|i| {
                let di = self.factors[i];
                if d == 0 {
                    true
                } else if di == 0 {
                    m[i][j] == 0
                } else {
                    (m[i][j] as i128 * d as i128) % di as i128 == 0
                }
            })
        })
    }

    fn find_inverse(&self) -> Result<Vec<Vec<i64>>, ModError> {
        let k = self.dim();
        let mut basis: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                e
            })
            .collect();
        let orig = basis.clone();
        let cap = self.order().unwrap_or(0).max(1);
        if self.order().is_none() {
            // infinite: t must be invertible over Z on the free part; solve by unimodularity
            return self.inverse_by_solving();
        }
        // t^n = id for some n <= |Aut|; iterate images of the standard basis
        let mut prev = basis.clone();
        for _ in 0..=cap.min(1 << 22) {
            let next: Vec<Vec<i64>> = basis.iter().map(|v| self.apply_t(v)).collect();
            if next == orig {
                // prev = t^{n-1} on the basis, so prev is t^{-1}
                let mut inv = vec![vec![0; k]; k];
                for (j, col) in prev.iter().enumerate() {
                    for i in 0..k {
                        inv[i][j] = col[i];
                    }
                }
                return Ok(inv);
            }
            prev = next.clone();
            basis = next;
        }
        Err(ModError::NotInvertible)
    }

    fn inverse_by_solving(&self) -> Result<Vec<Vec<i64>>, ModError> {
        // solve e_j = T x + D y through the Smith form of [T | D]
        let k = self.dim();
        let mut a = IntMatrix::zeros(k, 2 * k);
        for i in 0..k {
            for l in 0..k {
                a[(i, l)] = BigInt::from(self.t[i][l]);
            }
            a[(i, k + i)] = BigInt::from(self.factors[i]);
        }
        let snf = smith_normal_form(&a);
        if snf.rank < k || (0..k).any(|i| snf.s[(i, i)] != BigInt::from(1)) {
            return Err(ModError::NotInvertible);
        }
        let mut inv = vec![vec![0; k]; k];
        for j in 0..k {
            let ue: Vec<BigInt> = (0..k).map(|i| snf.u[(i, j)].clone()).collect();
            for (i, row) in inv.iter_mut().enumerate() {
                let x: BigInt = (0..k).map(|l| &snf.v[(i, l)] * &ue[l]).sum();
                row[j] = big_to_i64(&x);
            }
        }
        Ok(self.reduce_matrix(&inv))
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn t_matrix(&self) -> &[Vec<i64>] {
        &self.t
    }

    pub fn t_inv_matrix(&self) -> &[Vec<i64>] {
        &self.t_inv
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// Number of infinite cyclic factors.
    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    /// Finite factors only.
    pub fn torsion(&self) -> Vec<i64> {
        self.factors.iter().copied().filter(|&d| d > 0).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.factors
            .iter()
            .try_fold(1u64, |a, &d| a.checked_mul(d as u64))
    }

    /// Exponent of the torsion subgroup.
    pub fn exponent(&self) -> i64 {
        self.torsion().into_iter().fold(1, |a, d| a.lcm(&d))
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i64> {
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| {
                if d > 0 {
                    x.rem_euclid(d as i128) as i64
                } else {
                    i64::try_from(x).expect("module coordinate exceeds i64")
                }
            })
            .collect()
    }

    pub fn reduce64(&self, v: &[i64]) -> Vec<i64> {
        self.reduce(&v.iter().map(|&x| x as i128).collect::<Vec<_>>())
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(
            &a.iter()
                .zip(b)
                .map(|(&x, &y)| x as i128 + y as i128)
                .collect::<Vec<_>>(),
        )
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(
            &a.iter()
                .zip(b)
                .map(|(&x, &y)| x as i128 - y as i128)
                .collect::<Vec<_>>(),
        )
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|&x| -(x as i128)).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: i64, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|&x| c as i128 * x as i128).collect::<Vec<_>>())
    }

    pub fn apply_t(&self, v: &[i64]) -> Vec<i64> {
        self.reduce(&mat_vec(&self.t, v))
    }

    pub fn apply_t_inv(&self, v: &[i64]) -> Vec<i64> {
        self.reduce(&mat_vec(&self.t_inv, v))
    }

    /// `p(t) · v`.
    pub fn apply_lp(&self, p: &LaurentPoly, v: &[i64]) -> Vec<i64> {
        let mut acc = self.zero();
        for (e, c) in p.terms() {
            let mut w = v.to_vec();
            for _ in 0..e.unsigned_abs() {
                w = if e > 0 {
                    self.apply_t(&w)
                } else {
                    self.apply_t_inv(&w)
                };
            }
            let c = if self.is_finite() {
                c.mod_floor(&BigInt::from(self.exponent()))
            } else {
                c.clone()
            };
            acc = self.add(&acc, &self.scale(big_to_i64(&c), &w));
        }
        acc
    }

    /// `(1 - t) v`.
    pub fn one_minus_t(&self, v: &[i64]) -> Vec<i64> {
        self.sub(v, &self.apply_t(v))
    }

    /// Additive order of `v`, or 0 if infinite.
    pub fn element_order(&self, v: &[i64]) -> i64 {
        let v = self.reduce64(v);
        let mut ord = 1i64;
        for (&x, &d) in v.iter().zip(&self.factors) {
            if x == 0 {
                continue;
            }
            if d == 0 {
                return 0;
            }
            ord = ord.lcm(&(d / x.gcd(&d)));
        }
        ord
    }

    /// All elements in lexicographic order, if at most `cap` of them.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<i64>>, ModError> {
        let n = self.order().ok_or(ModError::InfiniteUnsupported)?;
        if n > cap {
            return Err(ModError::SizeCap(n));
        }
        Ok(Lattice::from_generators(self.dim(), self.relation_rows())
            .coset_reps()
            .expect("finite"))
    }

    fn relation_rows(&self) -> Vec<Vec<i64>> {
        let k = self.dim();
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| {
                let mut e = vec![0; k];
                e[i] = d;
                e
            })
            .collect()
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(self.dim(), self.relation_rows())
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Submodule {
        Submodule {
            lattice: Lattice::from_generators(
                self.dim(),
                self.relation_rows().into_iter().chain(gens.iter().cloned()),
            ),
        }
    }

    pub fn subgroup_from_lattice(&self, lattice: &Lattice) -> Submodule {
        self.subgroup(lattice.basis())
    }

    /// The Λ-submodule generated by `gens`.
    pub fn submodule(&self, gens: &[Vec<i64>]) -> Submodule {
        self.t_closure(&self.subgroup(gens))
    }

    pub fn t_closure(&self, x: &Submodule) -> Submodule {
        let mut cur = x.clone();
        loop {
            let extra: Vec<Vec<i64>> = cur
                .lattice
                .basis()
                .iter()
                .flat_map(|g| [self.apply_t(g), self.apply_t_inv(g)])
                .collect();
            let next = self.subgroup(
                &cur.lattice
                    .basis()
                    .iter()
                    .cloned()
                    .chain(extra)
                    .collect::<Vec<_>>(),
            );
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_t_closed(&self, x: &Submodule) -> bool {
        x.lattice
            .basis()
            .iter()
            .all(|g| x.contains(&self.apply_t(g)) && x.contains(&self.apply_t_inv(g)))
    }

    pub fn zero_submodule(&self) -> Submodule {
        self.subgroup(&[])
    }

    pub fn whole(&self) -> Submodule {
        Submodule {
            lattice: Lattice::full(self.dim()),
        }
    }

    /// Image of the whole module under `p(t)`.
    pub fn image_of_lp(&self, p: &LaurentPoly) -> Submodule {
        let k = self.dim();
        let gens: Vec<Vec<i64>> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                self.apply_lp(p, &e)
            })
            .collect();
        self.subgroup(&gens)
    }

    /// `|N / X|`, or None if infinite.
    pub fn index_of(&self, x: &Submodule) -> Option<u64> {
        x.lattice.index()
    }

    /// `|X|`, or None if infinite.
    pub fn order_of(&self, x: &Submodule) -> Option<u64> {
        let n = self.order()?;
        Some(n / x.lattice.index()?)
    }

    /// Canonical representative of `v + X`.
    pub fn coset_rep(&self, x: &Submodule, v: &[i64]) -> Vec<i64> {
        x.lattice.reduce(v)
    }

    /// Canonical coset representatives of `N / X` in lexicographic order.
    pub fn coset_reps(&self, x: &Submodule, cap: u64) -> Result<Vec<Vec<i64>>, ModError> {
        let n = x.lattice.index().ok_or(ModError::InfiniteUnsupported)?;
        if n > cap {
            return Err(ModError::SizeCap(n));
        }
        Ok(x.lattice.coset_reps().expect("finite index"))
    }

    pub fn quotient_by(&self, x: &Submodule) -> PresentedModule {
        let k = self.dim();
        let rels = IntMatrix::from_cols(k, x.lattice.basis());
        cokernel(&rels, 0, &self.t, &self.t_inv)
    }

    /// Kernel of the homomorphism `N → target` given by `h` (`target.dim() × N.dim()`).
    pub fn hom_kernel(&self, h: &[Vec<i64>], target: &FiniteModule) -> Submodule {
        let (k1, k2) = (self.dim(), target.dim());
        let mut m = IntMatrix::zeros(k2, k1 + k2);
        for i in 0..k2 {
            for j in 0..k1 {
                m[(i, j)] = BigInt::from(h[i][j]);
            }
            m[(i, k1 + i)] = BigInt::from(-target.factors[i]);
        }
        let gens: Vec<Vec<i64>> = integer_kernel(&m)
            .iter()
            .map(|v| v[..k1].iter().map(big_to_i64).collect())
            .collect();
        self.subgroup(&gens)
    }

    /// Invariant factors of `X` as an abstract group.
    pub fn structure_of(&self, x: &Submodule) -> Vec<i64> {
        let rel = self.relation_lattice();
        let r = x.lattice.rank();
        let cols: Vec<Vec<i64>> = rel
            .basis()
            .iter()
            .map(|v| x.lattice.coords_of(v).expect("relations lie in X"))
            .collect();
        let m = IntMatrix::from_cols(r, &cols);
        let snf = smith_normal_form(&m);
        let mut d: Vec<i64> = snf.diagonal().iter().map(big_to_i64).collect();
        d.resize(r, 0);
        d.into_iter().filter(|&x| x != 1).collect()
    }

    pub fn intersect(&self, a: &Submodule, b: &Submodule) -> Submodule {
        Submodule {
            lattice: a.lattice.intersect(&b.lattice),
        }
    }

    pub fn join(&self, a: &Submodule, b: &Submodule) -> Submodule {
        Submodule {
            lattice: a.lattice.join(&b.lattice),
        }
    }

    /// Check `t ∘ t^{-1} = id` and that `t` respects the factors.
    pub fn is_consistent(&self) -> bool {
        let k = self.dim();
        self.respects_factors(&self.t)
            && self.respects_factors(&self.t_inv)
            && (0..k).all(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                self.apply_t(&self.apply_t_inv(&e)) == e && self.apply_t_inv(&self.apply_t(&e)) == e
            })
    }
}

impl Submodule {
    pub fn contains(&self, v: &[i64]) -> bool {
        self.lattice.contains(v)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Basis vectors of the preimage lattice (they generate the submodule).
    pub fn generators(&self) -> &[Vec<i64>] {
        self.lattice.basis()
    }

    pub fn contains_sub(&self, other: &Submodule) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }
}

impl PresentedModule {
    /// Image of a generator vector.
    pub fn to_module(&self, v: &[i64]) -> Vec<i64> {
        self.module.reduce(&mat_vec(&self.to_coords, v))
    }

    pub fn to_module_big(&self, v: &[BigInt]) -> Vec<i64> {
        let w: Vec<BigInt> = self
            .to_coords
            .iter()
            .zip(self.module.factors())
            .map(|(r, &d)| {
                let s: BigInt = r.iter().zip(v).map(|(&a, b)| BigInt::from(a) * b).sum();
                if d > 0 {
                    s.mod_floor(&BigInt::from(d))
                } else {
                    s
                }
            })
            .collect();
        w.iter().map(big_to_i64).collect()
    }

    /// A generator vector representing module element `x`.
    pub fn lift(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.from_coords, x)
            .into_iter()
            .map(|v| i64::try_from(v).expect("lift exceeds i64"))
            .collect()
    }

    pub fn ngens(&self) -> usize {
        self.from_coords.len()
    }
}

/// Cokernel of `rels` (`ngens × nrels`, one relation per column), optionally modulo `m`,
/// with `t` acting on generators by `t` / `t_inv`.
pub fn cokernel(
    rels: &IntMatrix,
    modulus: u64,
    t: &[Vec<i64>],
    t_inv: &[Vec<i64>],
) -> PresentedModule {
    let n = rels.rows();
    let extra = if modulus > 0 { n } else { 0 };
    let mut a = IntMatrix::zeros(n, rels.cols() + extra);
    for i in 0..n {
        for j in 0..rels.cols() {
            a[(i, j)] = rels[(i, j)].clone();
        }
        if modulus > 0 {
            a[(i, rels.cols() + i)] = BigInt::from(modulus);
        }
    }
    let snf = smith_normal_form(&a);
    let mut diag: Vec<BigInt> = snf.diagonal();
    diag.resize(n, BigInt::zero());
    let kept: Vec<usize> = (0..n).filter(|&k| diag[k] != BigInt::from(1)).collect();
    let factors: Vec<i64> = kept.iter().map(|&k| big_to_i64(&diag[k])).collect();
    let to_coords: Vec<Vec<i64>> = kept
        .iter()
        .zip(&factors)
        .map(|(&k, &d)| {
            snf.u
                .row(k)
                .iter()
                .map(|x| {
                    if d > 0 {
                        big_to_i64(&x.mod_floor(&BigInt::from(d)))
                    } else {
                        big_to_i64(x)
                    }
                })
                .collect()
        })
        .collect();
    let from_coords: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            kept.iter()
                .map(|&k| big_to_i64(&snf.u_inv[(i, k)]))
                .collect()
        })
        .collect();
    let conj = |m: &[Vec<i64>]| -> Vec<Vec<i64>> {
        let k = kept.len();
        let mut out = vec![vec![0i64; k]; k];
        for j in 0..k {
            let col: Vec<i64> = from_coords.iter().map(|r| r[j]).collect();
            let img = mat_vec(m, &col);
            let img: Vec<i64> = img
                .into_iter()
                .map(|x| i64::try_from(x).expect("overflow"))
                .collect();
            let c = mat_vec(&to_coords, &img);
            for i in 0..k {
                let d = factors[i] as i128;
                out[i][j] =
                    i64::try_from(if d > 0 { c[i].rem_euclid(d) } else { c[i] }).expect("overflow");
            }
        }
        out
    };
    let module = FiniteModule::with_inverse(factors.clone(), conj(t), conj(t_inv));
    PresentedModule {
        module,
        to_coords,
        from_coords,
    }
}
