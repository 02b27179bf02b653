//! The displacement group `Dis(Q)` as a finite Λ-module, and the rebuild of `Q` from it.

use std::collections::HashMap;

use super::{FiniteQuandle, QuandleError};
use crate::medialq::{build_def1, certify_iso, Def1Data, Def1Quandle, MedialError};
use crate::modpres::{cokernel, FiniteModule, IntMatrix, Submodule};

type Perm = Vec<u32>;

/// `p ∘ q` (apply `q` first).
fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

/// Elements of `Dis(Q)` as permutations, with coordinates in an invariant-factor basis.
/// `t` acts by conjugation with `β_base`.
#[derive(Clone, Debug)]
pub struct DisplacementGroup {
    pub base: usize,
    pub module: FiniteModule,
    perms: Vec<Perm>,
    coords: Vec<Vec<i64>>,
    by_perm: HashMap<Perm, usize>,
    by_coords: HashMap<Vec<i64>, usize>,
}

impl DisplacementGroup {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn coords(&self, k: usize) -> &[i64] {
        &self.coords[k]
    }

    /// Index of a displacement given by its module coordinates.
    pub fn by_coords(&self, v: &[i64]) -> Option<usize> {
        self.by_coords.get(&self.module.reduce64(v)).copied()
    }

    pub fn by_perm(&self, p: &[u32]) -> Option<usize> {
        self.by_perm.get(p).copied()
    }

    pub fn is_identity(&self, k: usize) -> bool {
        self.perms[k]
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn has_fixed_point(&self, k: usize) -> bool {
        self.perms[k]
            .iter()
            .enumerate()
            .any(|(i, &x)| i == x as usize)
    }

    /// `Fix(q) = {d : d(q) = q}` as a subgroup of the module.
    pub fn fix(&self, q: usize) -> Submodule {
        let gens: Vec<Vec<i64>> = (0..self.order())
            .filter(|&k| self.perms[k][q] as usize == q)
            .map(|k| self.coords[k].clone())
            .collect();
        self.module.subgroup(&gens)
    }

    /// `{d(q) : d ∈ Dis(Q)}`, sorted.
    pub fn orbit_of(&self, q: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.perms.iter().map(|p| p[q] as usize).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// Conjugation `β_y d β_y^{-1}` agrees with the module `t` on every element.
    pub fn t_agrees_at(&self, q: &FiniteQuandle, y: usize) -> bool {
        let (b, bi) = (q.beta(y), q.beta_inv(y));
        (0..self.order()).all(|k| {
            let c = compose(&b, &compose(&self.perms[k], &bi));
            self.by_perm(&c)
                .is_some_and(|j| self.coords[j] == self.module.apply_t(&self.coords[k]))
        })
    }

    /// Every displacement with a fixed point satisfies `t·d = d`.
    pub fn fixed_point_lemma_holds(&self) -> bool {
        (0..self.order())
            .filter(|&k| self.has_fixed_point(k))
            .all(|k| self.module.apply_t(&self.coords[k]) == self.coords[k])
    }
}

/// `Dis(Q)` from the generators `β_y β_{q0}^{-1}` with `q0 = 0`.
pub fn displacement_group(q: &FiniteQuandle, cap: u64) -> Result<DisplacementGroup, QuandleError> {
    let n = q.size();
    let identity: Perm = (0..n as u32).collect();
    let base = 0usize;
    let b0i = if n > 0 { q.beta_inv(base) } else { Vec::new() };

    let mut gens: Vec<Perm> = Vec::new();
    for y in 0..n {
        let g = compose(&q.beta(y), &b0i);
        if g != identity && !gens.contains(&g) {
            gens.push(g);
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            if compose(a, b) != compose(b, a) {
                return Err(QuandleError::NotMedial);
            }
        }
    }

    // grow the group one cyclic factor at a time
    let mut perms: Vec<Perm> = vec![identity.clone()];
    let mut exps: Vec<Vec<i64>> = vec![Vec::new()];
    let mut by_perm: HashMap<Perm, usize> = HashMap::from([(identity, 0)]);
    let mut basis: Vec<Perm> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for g in &gens {
        if by_perm.contains_key(g) {
            continue;
        }
        let s = basis.len();
        let mut p = g.clone();
        let mut r = 1i64;
        while !by_perm.contains_key(&p) {
            p = compose(g, &p);
            r += 1;
        }
        let total = perms.len() as u64 * r as u64;
        if total > cap {
            return Err(QuandleError::SizeCap(total));
        }
        let mut rel = exps[by_perm[&p]].clone();
        rel.resize(s + 1, 0);
        for x in &mut rel {
            *x = -*x;
        }
        rel[s] += r;
        relations.push(rel);
        for e in &mut exps {
            e.resize(s + 1, 0);
        }
        let old = perms.len();
        let mut gk = g.clone();
        for k in 1..r {
            for h in 0..old {
                let np = compose(&gk, &perms[h]);
                let mut ne = exps[h].clone();
                ne[s] = k;
                by_perm.insert(np.clone(), perms.len());
                perms.push(np);
                exps.push(ne);
            }
            gk = compose(g, &gk);
        }
        basis.push(g.clone());
    }

    let s = basis.len();
    for r in &mut relations {
        r.resize(s, 0);
    }
    let conj = |b: &Perm, bi: &Perm| -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = basis
            .iter()
            .map(|h| exps[by_perm[&compose(b, &compose(h, bi))]].clone())
            .collect();
        (0..s)
            .map(|i| (0..s).map(|j| cols[j][i]).collect())
            .collect()
    };
    let (t, t_inv) = if n > 0 {
        let (b0, b0i) = (q.beta(base), q.beta_inv(base));
        (conj(&b0, &b0i), conj(&b0i, &b0))
    } else {
        (Vec::new(), Vec::new())
    };
    let rel = IntMatrix::from_cols(s, &relations);
    let pm = cokernel(&rel, 0, &t, &t_inv);
    let coords: Vec<Vec<i64>> = exps.iter().map(|e| pm.to_module(e)).collect();
    let by_coords: HashMap<Vec<i64>, usize> = coords
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, c)| (c, k))
        .collect();
    if by_coords.len() != perms.len() || pm.module.order() != Some(perms.len() as u64) {
        return Err(QuandleError::Certificate(
            "displacement coordinates are not a bijection".into(),
        ));
    }
    Ok(DisplacementGroup {
        base,
        module: pm.module,
        perms,
        coords,
        by_perm,
        by_coords,
    })
}

/// Every non-identity displacement is fixed-point free.
pub fn is_semiregular(q: &FiniteQuandle, cap: u64) -> Result<bool, QuandleError> {
    let dis = displacement_group(q, cap)?;
    Ok((0..dis.order()).all(|k| dis.is_identity(k) || !dis.has_fixed_point(k)))
}

/// `Q` rebuilt as `Q(Dis(Q), (β_{q_i} β_{q_1}^{-1}), (Fix(q_i)))`, with the certified isomorphism.
#[derive(Clone, Debug)]
pub struct Rebuilt {
    pub dis: DisplacementGroup,
    /// least element of each orbit
    pub orbit_reps: Vec<usize>,
    pub def1: Def1Quandle,
    /// point of `def1` ↦ element of `Q`
    pub iso: Vec<usize>,
}

impl Rebuilt {
    pub fn data(&self) -> &Def1Data {
        &self.def1.data
    }
}

pub fn rebuild_via_structure_theorem(q: &FiniteQuandle, cap: u64) -> Result<Rebuilt, QuandleError> {
    let dis = displacement_group(q, cap)?;
    let orbit_reps: Vec<usize> = q.orbits().iter().map(|o| o[0]).collect();
    let b0i = q.beta_inv(orbit_reps[0]);
    let mut offsets = Vec::new();
    for &r in &orbit_reps {
        let d = compose(&q.beta(r), &b0i);
        let k = dis
            .by_perm(&d)
            .ok_or_else(|| QuandleError::Certificate("β_q β_q0^{-1} is not in Dis".into()))?;
        offsets.push(dis.coords[k].clone());
    }
    let subs: Vec<Submodule> = orbit_reps.iter().map(|&r| dis.fix(r)).collect();
    let wrap = |e: MedialError| match e {
        MedialError::SizeCap(n) => QuandleError::SizeCap(n),
        other => QuandleError::Certificate(other.to_string()),
    };
    let data = Def1Data::new(dis.module.clone(), offsets, subs).map_err(wrap)?;
    let def1 = build_def1(&data, cap).map_err(wrap)?;
    let iso: Vec<usize> = def1
        .points
        .iter()
        .map(|(i, v)| {
            let k = dis.by_coords(v).expect("coset rep is a displacement");
            dis.perms[k][orbit_reps[*i]] as usize
        })
        .collect();
    certify_iso(&def1.quandle, q, &iso).map_err(wrap)?;
    Ok(Rebuilt {
        dis,
        orbit_reps,
        def1,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::DEFAULT_DIS_CAP;

    #[test]
    fn dihedral_three() {
        let q = FiniteQuandle::dihedral(3);
        let d = displacement_group(&q, DEFAULT_DIS_CAP).unwrap();
        assert_eq!(d.module.factors(), &[3]);
        assert_eq!(d.module.t_matrix(), &[vec![2]]);
        assert!(d.t_agrees_at(&q, 1));
        assert!(d.fixed_point_lemma_holds());
        let r = rebuild_via_structure_theorem(&q, DEFAULT_DIS_CAP).unwrap();
        assert_eq!(r.def1.quandle.size(), 3);
    }

    #[test]
    fn trivial_quandle() {
        let q = FiniteQuandle::trivial(4);
        let d = displacement_group(&q, DEFAULT_DIS_CAP).unwrap();
        assert_eq!(d.order(), 1);
        assert!(is_semiregular(&q, DEFAULT_DIS_CAP).unwrap());
        let r = rebuild_via_structure_theorem(&q, DEFAULT_DIS_CAP).unwrap();
        assert_eq!(r.data().module.order(), Some(1));
        assert_eq!(r.data().mu(), 4);
    }

    #[test]
    fn orbit_times_stabilizer() {
        let q = FiniteQuandle::affine_cyclic(12, 5).unwrap();
        let d = displacement_group(&q, DEFAULT_DIS_CAP).unwrap();
        for x in 0..q.size() {
            let orbit = d.orbit_of(x);
            assert_eq!(
                orbit.len() as u64 * d.module.order_of(&d.fix(x)).unwrap(),
                d.order() as u64
            );
            assert!(q.orbits().contains(&orbit));
        }
    }

    #[test]
    fn non_medial_rejected() {
        // transpositions of S_4 under conjugation
        let ts: Vec<[usize; 4]> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(a, b)| {
                let mut p = [0, 1, 2, 3];
                p.swap(a, b);
                p
            })
            .collect();
        let conj = |x: &[usize; 4], y: &[usize; 4]| -> [usize; 4] {
            let mut r = [0; 4];
            for i in 0..4 {
                r[i] = y[x[y[i]]];
            }
            r
        };
        let q = FiniteQuandle::from_fn(6, |x, y| {
            ts.iter().position(|p| *p == conj(&ts[x], &ts[y])).unwrap()
        })
        .unwrap();
        assert!(q.is_self_distributive());
        assert!(!q.is_medial_quandle());
        assert_eq!(
            displacement_group(&q, DEFAULT_DIS_CAP).unwrap_err(),
            QuandleError::NotMedial
        );
    }
}
