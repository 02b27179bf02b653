//! Medial quandles `Q(N, (n_i), (X_i))` built from a finite Λ-module, offsets and submodules.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::modpres::{smith_normal_form, FiniteModule, IntMatrix, ModError, Submodule};
use crate::quandle::{FiniteQuandle, QuandleError};

pub const DEFAULT_POINT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MedialError {
    #[error("(1-t) does not kill X_{0}")]
    HypothesisViolated(usize),
    #[error("a part N/X_i is infinite")]
    InfiniteUnsupported,
    #[error("S is not closed under t")]
    NotSubmodule,
    #[error("quandle would have more than {0} elements")]
    SizeCap(u64),
    #[error("malformed data: {0}")]
    Shape(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Quandle(#[from] QuandleError),
}

/// Module `N`, one offset `n_i ∈ N` and one submodule `X_i` per orbit.
#[derive(Clone, Debug)]
pub struct Def1Data {
    pub module: FiniteModule,
    pub offsets: Vec<Vec<i64>>,
    pub subs: Vec<Submodule>,
}

#[derive(Serialize)]
struct Def1Json {
    factors: Vec<i64>,
    t: Vec<Vec<i64>>,
    offsets: Vec<Vec<i64>>,
    subgroups: Vec<Vec<Vec<i64>>>,
}

impl Def1Data {
    /// Offsets are shifted so that `n_1 = 0`.
    pub fn new(
        module: FiniteModule,
        offsets: Vec<Vec<i64>>,
        subs: Vec<Submodule>,
    ) -> Result<Self, MedialError> {
        if offsets.len() != subs.len() || offsets.is_empty() {
            return Err(MedialError::Shape(
                "need one offset and one submodule per orbit".into(),
            ));
        }
        let k = module.dim();
        if offsets.iter().any(|v| v.len() != k) || subs.iter().any(|x| x.lattice().dim() != k) {
            return Err(MedialError::Shape("dimension mismatch".into()));
        }
        let base = offsets[0].clone();
        let offsets = offsets.iter().map(|v| module.sub(v, &base)).collect();
        Ok(Self {
            module,
            offsets,
            subs,
        })
    }

    /// One orbit, `X = 0`: the affine quandle on `N`.
    pub fn affine(module: FiniteModule) -> Self {
        let z = module.zero();
        let x = module.zero_submodule();
        Self {
            module,
            offsets: vec![z],
            subs: vec![x],
        }
    }

    pub fn mu(&self) -> usize {
        self.offsets.len()
    }

    /// First `i` with `(1-t) X_i ≠ 0`.
    pub fn hypothesis_failure(&self) -> Option<usize> {
        let m = &self.module;
        self.subs.iter().position(|x| {
            x.generators()
                .iter()
                .any(|g| m.one_minus_t(g).iter().any(|&c| c != 0))
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(Def1Json {
            factors: self.module.factors().to_vec(),
            t: self.module.t_matrix().to_vec(),
            offsets: self.offsets.clone(),
            subgroups: self.subs.iter().map(|x| x.generators().to_vec()).collect(),
        })
        .expect("serializable")
    }
}

/// The quandle of a [`Def1Data`], with points `(i, coset rep of X_i)`.
#[derive(Clone, Debug)]
pub struct Def1Quandle {
    pub data: Def1Data,
    pub quandle: FiniteQuandle,
    pub points: Vec<(usize, Vec<i64>)>,
    lookup: Vec<HashMap<Vec<i64>, usize>>,
}

impl Def1Quandle {
    /// Index of the point `v + X_i` in part `i`.
    pub fn index_of(&self, i: usize, v: &[i64]) -> usize {
        let rep = self.data.subs[i]
            .lattice()
            .reduce(&self.data.module.reduce64(v));
        self.lookup[i][&rep]
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.lookup.iter().map(HashMap::len).collect()
    }

    /// The permutation `x@i ↦ (x + n)@i`.
    pub fn translation(&self, n: &[i64]) -> Vec<u32> {
        self.points
            .iter()
            .map(|(i, v)| self.index_of(*i, &self.data.module.add(v, n)) as u32)
            .collect()
    }
}

fn check_parts(data: &Def1Data, cap: u64) -> Result<Vec<Vec<Vec<i64>>>, MedialError> {
    if let Some(i) = data.hypothesis_failure() {
        return Err(MedialError::HypothesisViolated(i));
    }
    let mut total = 0u64;
    let mut parts = Vec::new();
    for x in &data.subs {
        let idx = data
            .module
            .index_of(x)
            .ok_or(MedialError::InfiniteUnsupported)?;
        total = total.saturating_add(idx);
        if total > cap {
            return Err(MedialError::SizeCap(total));
        }
        parts.push(data.module.coset_reps(x, cap).map_err(|e| match e {
            ModError::SizeCap(n) => MedialError::SizeCap(n),
            other => MedialError::Module(other),
        })?);
    }
    Ok(parts)
}

/// `x@i ▷ y@j = (n_j - n_i + t x + (1-t) y) + X_i`.
pub fn build_def1(data: &Def1Data, cap: u64) -> Result<Def1Quandle, MedialError> {
    let parts = check_parts(data, cap)?;
    let m = &data.module;
    let mut points = Vec::new();
    let mut lookup = Vec::new();
    for (i, reps) in parts.into_iter().enumerate() {
        let mut h = HashMap::with_capacity(reps.len());
        for v in reps {
            h.insert(v.clone(), points.len());
            points.push((i, v));
        }
        lookup.push(h);
    }
    let n = points.len();
    let tx: Vec<Vec<i64>> = points.iter().map(|(_, v)| m.apply_t(v)).collect();
    let sy: Vec<Vec<i64>> = points
        .iter()
        .map(|(j, v)| m.add(&m.one_minus_t(v), &data.offsets[*j]))
        .collect();
    let mut table = Vec::with_capacity(n * n);
    for (a, (i, _)) in points.iter().enumerate() {
        let base = m.sub(&tx[a], &data.offsets[*i]);
        let x = &data.subs[*i];
        for s in &sy {
            let rep = x.lattice().reduce(&m.add(&base, s));
            table.push(lookup[*i][&rep] as u32);
        }
    }
    let quandle = FiniteQuandle::from_table(n, table)?;
    Ok(Def1Quandle {
        data: data.clone(),
        quandle,
        points,
        lookup,
    })
}

/// Data with offsets `n_i + (1-t)(s_i - s_1)` and the isomorphism `x@i ↦ (x - s_i + s_1)@i` onto it.
pub fn shift_iso(
    data: &Def1Data,
    shifts: &[Vec<i64>],
    cap: u64,
) -> Result<(Def1Quandle, Vec<usize>), MedialError> {
    if shifts.len() != data.mu() {
        return Err(MedialError::Shape("one shift per orbit".into()));
    }
    let m = &data.module;
    let rel: Vec<Vec<i64>> = shifts.iter().map(|s| m.sub(s, &shifts[0])).collect();
    let offsets = data
        .offsets
        .iter()
        .zip(&rel)
        .map(|(n, s)| m.add(n, &m.one_minus_t(s)))
        .collect();
    let shifted = Def1Data {
        module: m.clone(),
        offsets,
        subs: data.subs.clone(),
    };
    let q = build_def1(data, cap)?;
    let q2 = build_def1(&shifted, cap)?;
    let f: Vec<usize> = q
        .points
        .iter()
        .map(|(i, v)| q2.index_of(*i, &m.sub(v, &rel[*i])))
        .collect();
    certify_iso(&q.quandle, &q2.quandle, &f)?;
    Ok((q2, f))
}

/// Check that `f` is a bijective homomorphism.
pub fn certify_iso(a: &FiniteQuandle, b: &FiniteQuandle, f: &[usize]) -> Result<(), MedialError> {
    certify_hom(a, b, f)?;
    let mut seen = vec![false; b.size()];
    for &y in f {
        if std::mem::replace(&mut seen[y], true) {
            return Err(MedialError::Certificate("map is not injective".into()));
        }
    }
    if a.size() != b.size() {
        return Err(MedialError::Certificate("map is not surjective".into()));
    }
    Ok(())
}

pub fn certify_hom(a: &FiniteQuandle, b: &FiniteQuandle, f: &[usize]) -> Result<(), MedialError> {
    for x in 0..a.size() {
        for y in 0..a.size() {
            if f[a.op(x, y)] != b.op(f[x], f[y]) {
                return Err(MedialError::Certificate(format!(
                    "f({x} ▷ {y}) ≠ f({x}) ▷ f({y})"
                )));
            }
        }
    }
    Ok(())
}

/// `N′` (generated by `∩X_i`, `(1-t)N` and the `n_j - n_k`) and the kernel `∩X_i` of `n ↦ d_n`.
#[derive(Clone, Debug)]
pub struct DisplacementModule {
    pub n_prime: Submodule,
    pub kernel: Submodule,
    /// invariant factors of `N′ / ∩X_i`
    pub structure: Vec<i64>,
}

impl DisplacementModule {
    pub fn order(&self) -> u64 {
        self.structure.iter().map(|&d| d as u64).product()
    }
}

/// Invariant factors of `big / small` (lattices in the same coordinates, `small ⊆ big`).
pub fn relative_structure(big: &Submodule, small: &Submodule) -> Vec<i64> {
    let r = big.lattice().rank();
    let cols: Vec<Vec<i64>> = small
        .generators()
        .iter()
        .map(|v| big.lattice().coords_of(v).expect("small lies in big"))
        .collect();
    let snf = smith_normal_form(&IntMatrix::from_cols(r, &cols));
    let mut d: Vec<i64> = snf
        .diagonal()
        .iter()
        .map(|x| i64::try_from(x).expect("factor fits i64"))
        .collect();
    d.resize(r, 0);
    d.into_iter().filter(|&x| x != 1).collect()
}

pub fn displacement_module(data: &Def1Data) -> Result<DisplacementModule, MedialError> {
    let m = &data.module;
    if data.subs.iter().any(|x| m.index_of(x).is_none()) {
        return Err(MedialError::InfiniteUnsupported);
    }
    let kernel = data.subs[1..]
        .iter()
        .fold(data.subs[0].clone(), |acc, x| m.intersect(&acc, x));
    let mut gens: Vec<Vec<i64>> = kernel.generators().to_vec();
    gens.extend(
        m.image_of_lp(&LaurentPoly::one_minus_t())
            .generators()
            .iter()
            .cloned(),
    );
    gens.extend(data.offsets.iter().cloned());
    let n_prime = m.submodule(&gens);
    let structure = relative_structure(&n_prime, &kernel);
    if structure.contains(&0) {
        return Err(MedialError::InfiniteUnsupported);
    }
    Ok(DisplacementModule {
        n_prime,
        kernel,
        structure,
    })
}

/// The natural map into an affine quandle: `x@i ↦ (i, n_i + (1-t)x)`.
///
/// The tag `i` stands for a basis vector `e_i` with `t e_i = e_i` in the ambient module `N ⊕ Z^μ`,
/// so that `m_i = e_i + n_i` and `(i, v) ▷ (j, w) = (i, t v + (1-t) w)`.
#[derive(Clone, Debug)]
pub struct NaturalMap {
    pub map: Vec<usize>,
    pub image: FiniteQuandle,
    pub image_points: Vec<(usize, Vec<i64>)>,
}

impl NaturalMap {
    pub fn is_injective(&self) -> bool {
        self.image.size() == self.map.len()
    }
}

pub fn natural_map(q: &Def1Quandle) -> Result<NaturalMap, MedialError> {
    let data = &q.data;
    let m = &data.module;
    let mut image_points: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut index: HashMap<(usize, Vec<i64>), usize> = HashMap::new();
    let mut map = Vec::with_capacity(q.points.len());
    for (i, v) in &q.points {
        let key = (*i, m.add(&data.offsets[*i], &m.one_minus_t(v)));
        let k = *index.entry(key.clone()).or_insert_with(|| {
            image_points.push(key);
            image_points.len() - 1
        });
        map.push(k);
    }
    let n = image_points.len();
    let mut table = Vec::with_capacity(n * n);
    for (i, v) in &image_points {
        let tv = m.apply_t(v);
        for (_, w) in &image_points {
            let z = (*i, m.add(&tv, &m.one_minus_t(w)));
            let k = index
                .get(&z)
                .ok_or_else(|| MedialError::Certificate("image is not closed".into()))?;
            table.push(*k as u32);
        }
    }
    let image = FiniteQuandle::from_table(n, table)?;
    certify_hom(&q.quandle, &image, &map)?;
    Ok(NaturalMap {
        map,
        image,
        image_points,
    })
}

/// `S = ⟨(1-t^2)N, (1+t)(n_j - n_i)⟩` as a subgroup.
pub fn involutory_subgroup(data: &Def1Data) -> Submodule {
    let m = &data.module;
    let p = LaurentPoly::one() - LaurentPoly::t().pow(2);
    let mut gens: Vec<Vec<i64>> = m.image_of_lp(&p).generators().to_vec();
    let one_plus_t = LaurentPoly::one() + LaurentPoly::t();
    for a in &data.offsets {
        for b in &data.offsets {
            gens.push(m.apply_lp(&one_plus_t, &m.sub(b, a)));
        }
    }
    m.subgroup(&gens)
}

/// The data `(N/S, π(n_i), π(X_i))` describing the involutory quotient.
pub fn involutory_def1(data: &Def1Data) -> Result<Def1Data, MedialError> {
    let m = &data.module;
    let s = involutory_subgroup(data);
    if !m.is_t_closed(&s) {
        return Err(MedialError::NotSubmodule);
    }
    let pm = m.quotient_by(&s);
    let q = &pm.module;
    let offsets = data.offsets.iter().map(|v| pm.to_module(v)).collect();
    let subs = data
        .subs
        .iter()
        .map(|x| {
            q.subgroup(
                &x.generators()
                    .iter()
                    .map(|g| pm.to_module(g))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(Def1Data {
        module: q.clone(),
        offsets,
        subs,
    })
}
