//! Module and enhanced-module fingerprints over a panel of scalar rings.

use num_bigint::BigInt;
use serde::Serialize;

use super::{link_modules, LinkError, LinkModules};
use crate::laurent::{LaurentPoly, ScalarRing};
use crate::linkdiag::Diagram;
use crate::modpres::FiniteModule;

/// Rings with more elements than this get no scalar-set records.
const SCALAR_ENUM_CAP: u64 = 4096;
const MAX_DEPTH: u32 = 8;

pub fn default_panel() -> Vec<ScalarRing> {
    [(0, -1), (27, 4), (5, 2), (9, 2), (16, 3)]
        .iter()
        .map(|&(m, u)| ScalarRing::new(m, u).expect("panel rings are valid"))
        .collect()
}

/// A set of scalars `c ∈ R` attached to an ordered pair of components.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScalarSet {
    pub i: usize,
    pub j: usize,
    /// None when `R` is too large to enumerate
    pub values: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RingRecord {
    pub ring: String,
    pub reduced_factors: Vec<i64>,
    pub kernel_factors: Vec<i64>,
    /// order of `χ_i` (0 = infinite)
    pub longitude_orders: Vec<i64>,
    /// order of `n_i` in `K / (1-t)K`
    pub meridian_orders: Vec<i64>,
    /// largest `k ≤ 8` with `χ_i ∈ (1-t)^k K`
    pub longitude_depth: Vec<u32>,
    /// `{c : χ_i = c χ_j}`
    pub proportional: Vec<ScalarSet>,
    /// `{c : χ_i ∈ c (n_j + (1-t)K)}`, `j ≥ 2`; sees the sign of a longitude relative to the meridians
    pub sign: Vec<ScalarSet>,
}

impl RingRecord {
    /// The part determined by the bare module.
    pub fn module_part(&self) -> (&str, &[i64], &[i64]) {
        (&self.ring, &self.reduced_factors, &self.kernel_factors)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EnhancedFingerprint {
    pub mu: usize,
    pub records: Vec<RingRecord>,
}

impl EnhancedFingerprint {
    pub fn module_equal(&self, other: &Self) -> bool {
        self.mu == other.mu
            && self.records.len() == other.records.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .all(|(a, b)| a.module_part() == b.module_part())
    }
}

/// Ring elements as Laurent polynomials in the power basis, for enumeration.
fn ring_elements(ring: &ScalarRing) -> Option<Vec<(String, LaurentPoly)>> {
    let size = ring.order()?;
    if size > SCALAR_ENUM_CAP {
        return None;
    }
    let m = ring.modulus();
    let d = ring.degree();
    Some(
        (0..size)
            .map(|mut k| {
                let mut coeffs = Vec::with_capacity(d);
                for _ in 0..d {
                    coeffs.push((k % m) as i64);
                    k /= m;
                }
                let p = LaurentPoly::from_terms(
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(e, &c)| (e as i64, BigInt::from(c))),
                );
                let label = if d == 1 {
                    coeffs[0].to_string()
                } else {
                    p.to_string()
                };
                (label, p)
            })
            .collect(),
    )
}

fn longitude_depth(n: &FiniteModule, chi: &[i64]) -> u32 {
    let mut k = 0;
    while k < MAX_DEPTH
        && n.image_of_lp(&LaurentPoly::one_minus_t().pow(k + 1))
            .contains(chi)
    {
        k += 1;
    }
    k
}

fn record(lm: &LinkModules) -> RingRecord {
    let n = &lm.kernel.module;
    let mu = lm.chi.len();
    let one_minus_t = LaurentPoly::one_minus_t();
    let ikt = n.image_of_lp(&one_minus_t);
    let quotient = n.quotient_by(&ikt);
    let scalars = ring_elements(&lm.ring);

    let mut proportional = Vec::new();
    let mut sign = Vec::new();
    for i in 0..mu {
        for j in 0..mu {
            if i != j {
                let values = scalars.as_ref().map(|cs| {
                    cs.iter()
                        .filter(|(_, c)| n.apply_lp(c, &lm.chi[j]) == lm.chi[i])
                        .map(|(l, _)| l.clone())
                        .collect()
                });
                proportional.push(ScalarSet {
                    i: i + 1,
                    j: j + 1,
                    values,
                });
            }
            if j >= 1 {
                let values = scalars.as_ref().map(|cs| {
                    cs.iter()
                        .filter(|(_, c)| {
                            let diff = n.sub(&lm.chi[i], &n.apply_lp(c, &lm.meridians[j]));
                            n.image_of_lp(&(c * &one_minus_t)).contains(&diff)
                        })
                        .map(|(l, _)| l.clone())
                        .collect()
                });
                sign.push(ScalarSet {
                    i: i + 1,
                    j: j + 1,
                    values,
                });
            }
        }
    }
    RingRecord {
        ring: lm.ring.to_string(),
        reduced_factors: lm.reduced.module.factors().to_vec(),
        kernel_factors: n.factors().to_vec(),
        longitude_orders: lm.chi.iter().map(|c| n.element_order(c)).collect(),
        meridian_orders: lm
            .meridians
            .iter()
            .map(|v| quotient.module.element_order(&quotient.to_module(v)))
            .collect(),
        longitude_depth: lm.chi.iter().map(|c| longitude_depth(n, c)).collect(),
        proportional,
        sign,
    }
}

pub fn fingerprint(d: &Diagram, panel: &[ScalarRing]) -> Result<EnhancedFingerprint, LinkError> {
    let records = panel
        .iter()
        .map(|r| link_modules(d, r).map(|lm| record(&lm)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EnhancedFingerprint {
        mu: d.mu(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lookup;

    #[test]
    fn whitehead_sign_record_at_27_4() {
        let panel = vec![ScalarRing::new(27, 4).unwrap()];
        let w = fingerprint(&lookup("whitehead").unwrap().diagram(), &panel).unwrap();
        let wm = fingerprint(&lookup("whitehead-mirror").unwrap().diagram(), &panel).unwrap();
        assert!(w.module_equal(&wm));
        assert_ne!(w.records[0].sign, wm.records[0].sign);
        assert_eq!(w.records[0].kernel_factors, vec![27]);
    }

    #[test]
    fn knot_longitude_is_zero() {
        let f = fingerprint(&lookup("trefoil").unwrap().diagram(), &default_panel()).unwrap();
        assert!(f.records.iter().all(|r| r.longitude_orders == vec![1]));
    }
}
