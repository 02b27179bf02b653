//! Presentations of the reduced Alexander module and of the augmentation kernel.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{cokernel, IntMatrix, ModError, PresentedModule};
use crate::laurent::{LaurentPoly, ScalarRing};
use crate::linkdiag::Diagram;

/// Generators and relation columns over Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPresentation {
    pub gens: Vec<String>,
    /// one column per relation, each of length `gens.len()`
    pub rels: Vec<Vec<LaurentPoly>>,
}

/// The base change of a Λ-presentation to a scalar ring, as integer data.
#[derive(Clone, Debug)]
pub struct IntPresentation {
    pub gens: Vec<String>,
    pub ring: ScalarRing,
    /// `gens.len() × (relations · deg)`
    pub matrix: IntMatrix,
    pub t: Vec<Vec<i64>>,
    pub t_inv: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct PresentationJson {
    gens: Vec<String>,
    relations: Vec<Vec<String>>,
}

impl LambdaPresentation {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PresentationJson {
            gens: self.gens.clone(),
            relations: self
                .rels
                .iter()
                .map(|c| c.iter().map(|p| p.to_string()).collect())
                .collect(),
        })
        .expect("serializable")
    }
}

/// The column `(1 - t) a(c) + t b1(c) - b2(c)` for every crossing, over all arcs.
fn crossing_columns(d: &Diagram) -> Vec<Vec<LaurentPoly>> {
    let n = d.arcs().len();
    (0..d.crossings().len())
        .map(|k| {
            let (a, b1, b2) = d.crossing_ids(k);
            let mut col = vec![LaurentPoly::zero(); n];
            col[a] = &col[a] + &LaurentPoly::one_minus_t();
            col[b1] = &col[b1] + &LaurentPoly::t();
            col[b2] = &col[b2] - &LaurentPoly::one();
            col
        })
        .collect()
}

/// Presentation of the reduced Alexander module: arcs modulo crossing relations.
pub fn present_reduced_module(d: &Diagram) -> LambdaPresentation {
    LambdaPresentation {
        gens: d.arcs().to_vec(),
        rels: crossing_columns(d),
    }
}

/// The arc used as base point of the augmentation kernel: least name in component 1.
pub fn base_arc(d: &Diagram) -> usize {
    let name = d.components()[0].iter().min().expect("component has arcs");
    d.arc_id(name).expect("known arc")
}

/// Rewrite an arc-vector with total coefficient 0 in the kernel generators `g_a = a - a*`.
pub fn kernel_coords(d: &Diagram, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let total = v.iter().fold(LaurentPoly::zero(), |acc, x| acc + x);
    assert!(
        total.is_zero(),
        "arc vector does not lie in the augmentation kernel"
    );
    let star = base_arc(d);
    v.iter()
        .enumerate()
        .filter(|&(a, _)| a != star)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Presentation of the kernel of the augmentation `arc ↦ 1`, on generators `g_a = a - a*`.
pub fn present_kernel(d: &Diagram) -> LambdaPresentation {
    let star = base_arc(d);
    let gens = d
        .arcs()
        .iter()
        .enumerate()
        .filter(|&(a, _)| a != star)
        .map(|(_, name)| format!("g_{name}"))
        .collect();
    let rels = crossing_columns(d)
        .iter()
        .map(|c| kernel_coords(d, c))
        .collect();
    LambdaPresentation { gens, rels }
}

/// Coefficient blocks of a Λ-vector after base change; block `g` has `deg R` entries.
pub fn specialize_vector(v: &[LaurentPoly], ring: &ScalarRing) -> Result<Vec<BigInt>, ModError> {
    let mut out = Vec::with_capacity(v.len() * ring.degree());
    for p in v {
        out.extend(ring.specialize(p).map_err(ModError::Ring)?.coeffs);
    }
    Ok(out)
}

fn small(m: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("ring matrix entry exceeds i64"))
                .collect()
        })
        .collect()
}

/// Base change of a Λ-presentation along `t ↦ u`.
pub fn specialize_presentation(
    p: &LambdaPresentation,
    ring: &ScalarRing,
) -> Result<IntPresentation, ModError> {
    let d = ring.degree();
    let n = p.gens.len();
    let gens: Vec<String> = if d == 1 {
        p.gens.clone()
    } else {
        p.gens
            .iter()
            .flat_map(|g| (0..d).map(move |k| format!("{g}*t^{k}")))
            .collect()
    };
    let mut matrix = IntMatrix::zeros(n * d, p.rels.len() * d);
    for (r, col) in p.rels.iter().enumerate() {
        for (g, entry) in col.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let e = ring.specialize(entry).map_err(ModError::Ring)?;
            let block = ring.mul_matrix(&e);
            for i in 0..d {
                for k in 0..d {
                    matrix[(g * d + i, r * d + k)] = block[i][k].clone();
                }
            }
        }
    }
    let tb = small(&ring.mul_matrix(ring.t_image()));
    let tib = small(&ring.mul_matrix(ring.t_inv_image()));
    let block_diag = |b: &Vec<Vec<i64>>| {
        let mut m = vec![vec![0i64; n * d]; n * d];
        for g in 0..n {
            for i in 0..d {
                for k in 0..d {
                    m[g * d + i][g * d + k] = b[i][k];
                }
            }
        }
        m
    };
    Ok(IntPresentation {
        gens,
        ring: ring.clone(),
        matrix,
        t: block_diag(&tb),
        t_inv: block_diag(&tib),
    })
}

/// Cokernel of a specialized presentation, with its t-action.
pub fn finite_module_from(p: &IntPresentation) -> PresentedModule {
    cokernel(&p.matrix, p.ring.modulus(), &p.t, &p.t_inv)
}

/// Convenience: specialize and take the cokernel.
pub fn specialized_module(
    p: &LambdaPresentation,
    ring: &ScalarRing,
) -> Result<PresentedModule, ModError> {
    Ok(finite_module_from(&specialize_presentation(p, ring)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{Crossing, Diagram};
    use num_traits::Zero;

    fn hopf() -> Diagram {
        Diagram::new(
            vec![vec!["a1".into()], vec!["a2".into()]],
            vec![
                Crossing::new("a2", "a1", "a1", 1),
                Crossing::new("a1", "a2", "a2", 1),
            ],
        )
        .unwrap()
    }

    fn virtual_hopf() -> Diagram {
        Diagram::new(
            vec![vec!["a1'".into()], vec!["a2'".into()]],
            vec![Crossing::new("a2'", "a1'", "a1'", 1)],
        )
        .unwrap()
    }

    #[test]
    fn reduced_columns_have_zero_augmentation() {
        let p = present_reduced_module(&hopf());
        assert_eq!(p.gens.len(), 2);
        assert_eq!(p.rels.len(), 2);
        for col in &p.rels {
            let s: BigInt = col.iter().map(|x| x.augment()).sum();
            assert!(s.is_zero());
        }
        // (1 - t)(a2 - a1)
        assert_eq!(p.rels[0][1], LaurentPoly::one_minus_t());
        assert_eq!(p.rels[0][0], LaurentPoly::t() - LaurentPoly::one());
    }

    #[test]
    fn hopf_kernel() {
        let k = present_kernel(&hopf());
        assert_eq!(k.gens, vec!["g_a2".to_string()]);
        // brute force: K ⊗ Z/m with t = u has order gcd(1 - u, m)
        for (m, u) in [(5u64, 2i64), (9, 4), (16, 3), (27, 4), (7, 1)] {
            let r = ScalarRing::new(m, u).unwrap();
            let pm = specialized_module(&k, &r).unwrap();
            let expect = num_integer::Integer::gcd(&(1 - u), &(m as i64));
            assert_eq!(pm.module.order(), Some(expect as u64), "ring {m}:{u}");
        }
    }

    #[test]
    fn virtual_hopf_kernel() {
        let k = present_kernel(&virtual_hopf());
        assert_eq!((k.gens.len(), k.rels.len()), (1, 1));
        let r = ScalarRing::new(6, 1).unwrap();
        let pm = specialized_module(&k, &r).unwrap();
        assert_eq!(pm.module.factors(), &[6]);
        assert_eq!(pm.module.t_matrix(), &[vec![1]]);
    }

    #[test]
    fn unknot_kernel_is_trivial() {
        let d = Diagram::new(vec![vec!["a1".into()]], vec![]).unwrap();
        let k = present_kernel(&d);
        assert!(k.gens.is_empty());
        let pm = specialized_module(&k, &ScalarRing::new(0, -1).unwrap()).unwrap();
        assert_eq!(pm.module.order(), Some(1));
    }

    #[test]
    fn augmentation_collapses_at_u_one() {
        let k = present_kernel(&hopf());
        let p = specialize_presentation(&k, &ScalarRing::new(0, 1).unwrap()).unwrap();
        assert!((0..p.matrix.rows()).all(|i| p.matrix.row(i).iter().all(Zero::is_zero)));
    }

    #[test]
    fn polynomial_ring_base_change() {
        // Hopf kernel Λ/(1-t) over F_4 = Z/2[t]/(t^2+t+1) with t ↦ t: 1 - t is a unit, so K ⊗ R = 0
        let r: ScalarRing = "2:t|t^2 + t + 1".parse().unwrap();
        let pm = specialized_module(&present_kernel(&hopf()), &r).unwrap();
        assert_eq!(pm.module.order(), Some(1));
        // over Z/2[t]/(t^2+1), 1 - t is nilpotent: K ⊗ R = R/(1-t) ≅ Z/2
        let r: ScalarRing = "2:t|t^2 + 1".parse().unwrap();
        let pm = specialized_module(&present_kernel(&hopf()), &r).unwrap();
        assert_eq!(pm.module.order(), Some(2));
    }
}
