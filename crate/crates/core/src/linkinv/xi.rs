//! The arc map `ξ` into `Q_D` and its certificates.

use serde::Serialize;

use super::{arc_difference, kernel_element, link_modules, LinkError};
use crate::laurent::{LaurentPoly, ScalarRing};
use crate::linkdiag::{index_components, Diagram};
use crate::medialq::{build_def1, Def1Data, MedialError};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct XiReport {
    pub ring: String,
    pub quandle_size: usize,
    /// `ξ_i(b_{i0})` is the zero coset
    pub base_zero: bool,
    /// `(1-t) ξ_i(b_{ij}) = b_{ij} - b_{i0}`
    pub difference_identity: bool,
    /// `ξ(b_2(c)) = ξ(b_1(c)) ▷ ξ(a(c))` at every crossing
    pub crossing_relations: bool,
    /// `ξ(A(D))` generates `Q_D`
    pub generates: bool,
    /// orbits of `Q_D` are the parts `Q_i`, and arcs of `K_i` land in `Q_i`
    pub orbit_separation: bool,
}

impl XiReport {
    pub fn all_pass(&self) -> bool {
        self.base_zero
            && self.difference_identity
            && self.crossing_relations
            && self.generates
            && self.orbit_separation
    }
}

/// Check the `ξ` certificates on a diagram with alternating writhes.
pub fn xi_verify(d: &Diagram, ring: &ScalarRing, cap: u64) -> Result<XiReport, LinkError> {
    let idx = index_components(d)?;
    let lm = link_modules(d, ring)?;
    let km = &lm.kernel.module;
    let n_arcs = d.arcs().len();
    let id = |name: &str| d.arc_id(name).expect("indexed arc");

    let b10 = id(&idx.components[0].arcs[0]);
    let offsets = idx
        .components
        .iter()
        .map(|c| kernel_element(d, &lm.kernel, ring, &arc_difference(d, id(&c.arcs[0]), b10)))
        .collect::<Result<Vec<_>, _>>()?;
    let subs = lm
        .chi
        .iter()
        .map(|c| km.subgroup(std::slice::from_ref(c)))
        .collect();
    let data = Def1Data::new(km.clone(), offsets, subs)?;
    let q = build_def1(&data, cap).map_err(|e| match e {
        MedialError::InfiniteUnsupported => LinkError::InfiniteUnsupported,
        other => LinkError::Medial(other),
    })?;

    let mut xi: Vec<Option<Vec<i64>>> = vec![None; n_arcs];
    let mut difference_identity = true;
    let mut base_zero = true;
    for comp in &idx.components {
        let b0 = id(&comp.arcs[0]);
        let mut acc = vec![LaurentPoly::zero(); n_arcs];
        for (j, name) in comp.arcs.iter().enumerate() {
            if j > 0 {
                let a = id(&comp.overs[j - 1]);
                let sign = if (j - 1) % 2 == 0 { -1 } else { 1 };
                acc[a] = &acc[a] + &LaurentPoly::constant(sign);
            }
            let v: Vec<LaurentPoly> = if j % 2 == 0 {
                acc.clone()
            } else {
                let mut w = acc.clone();
                w[b0] = &w[b0] + &LaurentPoly::one();
                w.iter().map(|p| p * &LaurentPoly::t_inv()).collect()
            };
            let x = kernel_element(d, &lm.kernel, ring, &v)?;
            let b = id(name);
            let rhs = kernel_element(d, &lm.kernel, ring, &arc_difference(d, b, b0))?;
            difference_identity &= km.one_minus_t(&x) == rhs;
            if j == 0 {
                base_zero &= x.iter().all(|&c| c == 0);
            }
            xi[b] = Some(x);
        }
    }
    let point: Vec<usize> = (0..n_arcs)
        .map(|a| q.index_of(d.kappa(a), xi[a].as_ref().expect("every arc is indexed")))
        .collect();
    for comp in &idx.components {
        let b0 = id(&comp.arcs[0]);
        base_zero &= point[b0] == q.index_of(d.kappa(b0), &km.zero());
    }

    let quandle = &q.quandle;
    let crossing_relations = (0..d.crossings().len()).all(|k| {
        let (a, b1, b2) = d.crossing_ids(k);
        point[b2] == quandle.op(point[b1], point[a])
    });
    let generates = quandle.generated(&point).len() == quandle.size();
    let ids = quandle.orbit_ids();
    let orbit_separation = q.points.iter().enumerate().all(|(x, (i, _))| ids[x] == *i)
        && (0..n_arcs).all(|a| q.points[point[a]].0 == d.kappa(a));

    Ok(XiReport {
        ring: ring.to_string(),
        quandle_size: quandle.size(),
        base_zero,
        difference_identity,
        crossing_relations,
        generates,
        orbit_separation,
    })
}
