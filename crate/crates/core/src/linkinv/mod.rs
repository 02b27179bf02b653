//! Link invariants: longitudes, the specialized kernel module, medial and involutory medial quandles.

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, RingElem, ScalarRing};
use crate::linkdiag::{Diagram, DiagramError};
use crate::medialq::{build_def1, displacement_module, Def1Data, Def1Quandle, MedialError};
use crate::modpres::{
    cokernel, kernel_coords, present_kernel, present_reduced_module, specialize_vector,
    specialized_module, IntMatrix, ModError, PresentedModule,
};
use crate::quandle::QuandleError;

mod compare;
mod fingerprint;
mod xi;

pub use compare::{compare_links, CompareVerdict, IsoVerdict};
pub use fingerprint::{default_panel, fingerprint, EnhancedFingerprint, RingRecord, ScalarSet};
pub use xi::{xi_verify, XiReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Ring(#[from] LaurentError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Medial(#[from] MedialError),
    #[error(transparent)]
    Quandle(#[from] QuandleError),
    #[error("arc {0} has an odd writhe sum at its ends")]
    HalfIntegral(String),
    #[error("the specialized module is infinite")]
    InfiniteUnsupported,
}

impl LinkError {
    /// Caps exceeded anywhere in the pipeline.
    pub fn is_size_cap(&self) -> bool {
        matches!(
            self,
            LinkError::Module(ModError::SizeCap(_))
                | LinkError::Medial(MedialError::SizeCap(_))
                | LinkError::Quandle(QuandleError::SizeCap(_))
        )
    }
}

/// Value of `φ_τ` on an arc: the Λ coordinate after base change, and the `Z^{μ-1}` part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiValue {
    pub first: RingElem,
    pub rest: Vec<i64>,
}

pub fn phi_values(d: &Diagram, ring: &ScalarRing) -> Vec<PhiValue> {
    let mu = d.mu();
    (0..d.arcs().len())
        .map(|a| {
            let mut rest = vec![0; mu.saturating_sub(1)];
            let k = d.kappa(a);
            if k > 0 {
                rest[k - 1] = 1;
            }
            PhiValue {
                first: ring.one(),
                rest,
            }
        })
        .collect()
}

/// Apply `φ_τ` to an arc-coefficient vector.
pub fn phi_apply(d: &Diagram, ring: &ScalarRing, v: &[LaurentPoly]) -> Result<PhiValue, LinkError> {
    let mut first = ring.zero();
    let mut rest = vec![0i64; d.mu().saturating_sub(1)];
    for (a, c) in v.iter().enumerate() {
        first = ring.add(&first, &ring.specialize(c)?);
        let k = d.kappa(a);
        if k > 0 {
            rest[k - 1] += i64::try_from(c.augment()).expect("augmentation fits i64");
        }
    }
    Ok(PhiValue { first, rest })
}

/// Every crossing relation maps to zero under `φ_τ`.
pub fn phi_kills_relations(d: &Diagram, ring: &ScalarRing) -> Result<bool, LinkError> {
    for col in &present_reduced_module(d).rels {
        let v = phi_apply(d, ring, col)?;
        if !v.first.is_zero() || v.rest.iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `χ_i` as arc-coefficient vectors over Λ.
pub fn longitudes(d: &Diagram) -> Result<Vec<Vec<LaurentPoly>>, LinkError> {
    let n = d.arcs().len();
    let mut chi = vec![vec![LaurentPoly::zero(); n]; d.mu()];
    for (k, c) in d.crossings().iter().enumerate() {
        let (a, b1, _) = d.crossing_ids(k);
        let i = d.kappa(b1);
        chi[i][a] = &chi[i][a] + &LaurentPoly::constant(c.writhe as i64);
    }
    let alternating = d.has_alternating_writhes();
    for b in 0..n {
        let s = d.end_writhe_sum(b);
        if s % 2 != 0 {
            return Err(LinkError::HalfIntegral(d.arcs()[b].clone()));
        }
        debug_assert!(!alternating || s == 0);
        let i = d.kappa(b);
        chi[i][b] = &chi[i][b] - &LaurentPoly::constant(s / 2);
    }
    Ok(chi)
}

/// The least arc of each component; component 1's is the kernel base point.
pub fn meridian_arcs(d: &Diagram) -> Vec<usize> {
    d.components()
        .iter()
        .map(|c| {
            d.arc_id(c.iter().min().expect("nonempty component"))
                .expect("arc")
        })
        .collect()
}

/// `K ⊗ R` with the images of longitudes and meridian differences.
#[derive(Clone, Debug)]
pub struct LinkModules {
    pub ring: ScalarRing,
    pub reduced: PresentedModule,
    pub kernel: PresentedModule,
    /// arc-vectors of the longitudes over Λ
    pub chi_arcs: Vec<Vec<LaurentPoly>>,
    /// `χ_i` in kernel coordinates
    pub chi: Vec<Vec<i64>>,
    /// `n_i = m_i - m_1` in kernel coordinates
    pub meridians: Vec<Vec<i64>>,
}

impl LinkModules {
    pub fn kernel_order(&self) -> Option<u64> {
        self.kernel.module.order()
    }
}

/// Image in `K ⊗ R` of an arc-vector with total coefficient 0.
pub fn kernel_element(
    d: &Diagram,
    kernel: &PresentedModule,
    ring: &ScalarRing,
    v: &[LaurentPoly],
) -> Result<Vec<i64>, LinkError> {
    let coords = kernel_coords(d, v);
    Ok(kernel.to_module_big(&specialize_vector(&coords, ring)?))
}

/// Arc-vector `a - b`.
pub fn arc_difference(d: &Diagram, a: usize, b: usize) -> Vec<LaurentPoly> {
    let mut v = vec![LaurentPoly::zero(); d.arcs().len()];
    v[a] = &v[a] + &LaurentPoly::one();
    v[b] = &v[b] - &LaurentPoly::one();
    v
}

pub fn link_modules(d: &Diagram, ring: &ScalarRing) -> Result<LinkModules, LinkError> {
    let reduced = specialized_module(&present_reduced_module(d), ring)?;
    let kernel = specialized_module(&present_kernel(d), ring)?;
    let chi_arcs = longitudes(d)?;
    let chi = chi_arcs
        .iter()
        .map(|v| kernel_element(d, &kernel, ring, v))
        .collect::<Result<Vec<_>, _>>()?;
    let mer = meridian_arcs(d);
    let meridians = mer
        .iter()
        .map(|&m| kernel_element(d, &kernel, ring, &arc_difference(d, m, mer[0])))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinkModules {
        ring: ring.clone(),
        reduced,
        kernel,
        chi_arcs,
        chi,
        meridians,
    })
}

/// `Q(K ⊗ R, (n_i), (⟨χ_i⟩))`.
pub fn def1_data(lm: &LinkModules) -> Result<Def1Data, LinkError> {
    let n = &lm.kernel.module;
    let subs = lm
        .chi
        .iter()
        .map(|c| n.subgroup(std::slice::from_ref(c)))
        .collect();
    Ok(Def1Data::new(n.clone(), lm.meridians.clone(), subs)?)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MqReport {
    pub ring: String,
    pub mu: usize,
    pub size: usize,
    pub orbit_sizes: Vec<usize>,
    /// invariant factors of `Dis`, from the module description
    pub dis_factors: Vec<i64>,
    pub kernel_factors: Vec<i64>,
    pub data: serde_json::Value,
}

#[derive(Clone, Debug)]
pub struct MqResult {
    pub report: MqReport,
    pub quandle: Def1Quandle,
}

pub const DEFAULT_QUANDLE_CAP: u64 = 100_000;

fn report_for(lm: &LinkModules, q: &Def1Quandle) -> Result<MqReport, LinkError> {
    let dm = displacement_module(&q.data)?;
    Ok(MqReport {
        ring: lm.ring.to_string(),
        mu: q.data.mu(),
        size: q.quandle.size(),
        orbit_sizes: q.quandle.orbit_sizes(),
        dis_factors: dm.structure,
        kernel_factors: lm.kernel.module.factors().to_vec(),
        data: q.data.to_json_value(),
    })
}

/// The medial quandle of the link, computed over `R`.
pub fn mq_specialized(d: &Diagram, ring: &ScalarRing, cap: u64) -> Result<MqResult, LinkError> {
    let lm = link_modules(d, ring)?;
    mq_from_modules(&lm, cap)
}

pub fn mq_from_modules(lm: &LinkModules, cap: u64) -> Result<MqResult, LinkError> {
    let data = def1_data(lm)?;
    let quandle = build_def1(&data, cap).map_err(|e| match e {
        MedialError::InfiniteUnsupported => LinkError::InfiniteUnsupported,
        other => LinkError::Medial(other),
    })?;
    Ok(MqResult {
        report: report_for(lm, &quandle)?,
        quandle,
    })
}

/// The ring `Z` with `t = -1`, which realizes `K / (1+t)K`.
pub fn involutory_ring() -> ScalarRing {
    ScalarRing::new(0, -1).expect("-1 is a unit")
}

#[derive(Clone, Debug)]
pub enum ImqOutcome {
    Finite(Box<MqResult>),
    /// `A = K/(1+t)K` or a part `A/X_i` is infinite
    Infinite {
        free_rank: usize,
        torsion: Vec<i64>,
    },
}

impl ImqOutcome {
    pub fn size(&self) -> Option<usize> {
        match self {
            ImqOutcome::Finite(r) => Some(r.report.size),
            ImqOutcome::Infinite { .. } => None,
        }
    }
}

/// The involutory medial quandle, via `A = K/(1+t)K`.
pub fn imq(d: &Diagram, cap: u64) -> Result<ImqOutcome, LinkError> {
    let lm = link_modules(d, &involutory_ring())?;
    match mq_from_modules(&lm, cap) {
        Ok(r) => Ok(ImqOutcome::Finite(Box::new(r))),
        Err(LinkError::InfiniteUnsupported) => {
            let m = &lm.kernel.module;
            Ok(ImqOutcome::Infinite {
                free_rank: m.free_rank(),
                torsion: m.torsion(),
            })
        }
        Err(e) => Err(e),
    }
}

/// `|K / (1+t)K|`, or 0 if infinite.
pub fn determinant(d: &Diagram) -> Result<u64, LinkError> {
    let k = specialized_module(&present_kernel(d), &involutory_ring())?;
    Ok(k.module.order().unwrap_or(0))
}

/// Two routes to `ker φ_τ` on `K ⊗ R`: the image of `1-u`, and the kernel of the map to `(R/(1-u)R)^{μ-1}`.
pub fn oldprop_check(d: &Diagram, ring: &ScalarRing) -> Result<bool, LinkError> {
    let kernel = specialized_module(&present_kernel(d), ring)?;
    let km = &kernel.module;
    let image = km.image_of_lp(&LaurentPoly::one_minus_t());

    let deg = ring.degree();
    let mu = d.mu();
    let parts = mu - 1;
    // R/(1-u)R, μ-1 times, with t acting trivially
    let block = ring.mul_matrix(&ring.specialize(&LaurentPoly::one_minus_t())?);
    let mut rel = IntMatrix::zeros(parts * deg, parts * deg);
    for p in 0..parts {
        for i in 0..deg {
            for k in 0..deg {
                rel[(p * deg + i, p * deg + k)] = block[i][k].clone();
            }
        }
    }
    let id: Vec<Vec<i64>> = (0..parts * deg)
        .map(|i| (0..parts * deg).map(|j| (i == j) as i64).collect())
        .collect();
    let target = cokernel(&rel, ring.modulus(), &id, &id);

    // generator g_a contributes its block to component κ(a) (component 1 is dropped)
    let star = meridian_arcs(d)[0];
    let gen_arcs: Vec<usize> = (0..d.arcs().len()).filter(|&a| a != star).collect();
    let k1 = km.dim();
    let mut h = vec![vec![0i64; k1]; target.module.dim()];
    for col in 0..k1 {
        let mut e = vec![0i64; k1];
        e[col] = 1;
        let g = kernel.lift(&e);
        let mut img = vec![0i64; parts * deg];
        for (gi, &a) in gen_arcs.iter().enumerate() {
            let c = d.kappa(a);
            if c == 0 {
                continue;
            }
            for i in 0..deg {
                img[(c - 1) * deg + i] += g[gi * deg + i];
            }
        }
        let v = target.to_module(&img);
        for (r, x) in v.into_iter().enumerate() {
            h[r][col] = x;
        }
    }
    let kernel_route = km.hom_kernel(&h, &target.module);
    Ok(kernel_route == image)
}
