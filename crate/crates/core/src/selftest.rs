//! Built-in end-to-end checks, run by `medlink selftest`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{lookup, CORPUS};
use crate::laurent::{LaurentPoly, ScalarRing};
use crate::linkdiag::make_alternating_writhes;
use crate::linkinv::{
    compare_links, default_panel, determinant, fingerprint, imq, link_modules, mq_specialized,
    oldprop_check, xi_verify, ImqOutcome, DEFAULT_QUANDLE_CAP,
};
use crate::medialq::{
    build_def1, displacement_module, involutory_def1, natural_map, Def1Data, Def1Quandle,
};
use crate::modpres::{
    smith_normal_form, specialized_module, FiniteModule, IntMatrix, LambdaPresentation,
};
use crate::quandle::{
    congruence_quotient, displacement_group, iso_search, rebuild_via_structure_theorem,
    CongruenceMode, DEFAULT_DIS_CAP, DEFAULT_ISO_CAP,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

type Check = Result<String, String>;

fn result(id: &str, name: &str, c: Check) -> CriterionResult {
    let (pass, detail) = match c {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id: id.into(),
        name: name.into(),
        pass,
        detail,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn imq_size(name: &str) -> Result<usize, String> {
    let d = lookup(name).ok_or("missing corpus entry")?.diagram();
    imq(&d, DEFAULT_QUANDLE_CAP)
        .map_err(err)?
        .size()
        .ok_or_else(|| format!("IMQ({name}) is infinite"))
}

fn corpus_cardinalities() -> Check {
    let hopf = lookup("hopf").expect("corpus").diagram();
    let z1 = ScalarRing::new(0, 1).map_err(err)?;
    let mq_h = mq_specialized(&hopf, &z1, DEFAULT_QUANDLE_CAP)
        .map_err(err)?
        .report
        .size;
    ensure(mq_h == 2, || format!("|MQ(H)| = {mq_h}"))?;
    for (name, want) in [
        ("hopf", 2),
        ("virtual-hopf", 3),
        ("trefoil", 3),
        ("unknot", 1),
        ("whitehead", 8),
        ("7-2-8", 8),
    ] {
        let got = imq_size(name)?;
        ensure(got == want, || {
            format!("|IMQ({name})| = {got}, expected {want}")
        })?;
    }
    for name in ["whitehead", "7-2-8"] {
        let d = lookup(name).expect("corpus").diagram();
        let det = determinant(&d).map_err(err)?;
        ensure(det == 8, || format!("det({name}) = {det}"))?;
        let size = imq_size(name)? as u64;
        ensure(d.mu() as u64 * det / 2 == size, || {
            format!("μ|det|/2 ≠ |IMQ| for {name}")
        })?;
    }
    Ok("|MQ(H)|=2, IMQ sizes H=2 H'=3 trefoil=3 unknot=1 W=7²₈=8, det=8".into())
}

fn module_fingerprints() -> Check {
    let panel = default_panel();
    let names = ["whitehead", "whitehead-mirror", "7-2-8"];
    let fps: Vec<_> = names
        .iter()
        .map(|n| fingerprint(&lookup(n).expect("corpus").diagram(), &panel))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(fps.iter().all(|f| f.module_equal(&fps[0])), || {
        "module fingerprints differ".into()
    })?;
    // reference module Λ ⊕ Λ/(1-t)^3
    let reference = LambdaPresentation {
        gens: vec!["x".into(), "y".into()],
        rels: vec![vec![LaurentPoly::zero(), LaurentPoly::one_minus_t().pow(3)]],
    };
    for (r, rec) in panel.iter().zip(&fps[0].records) {
        let m = specialized_module(&reference, r).map_err(err)?;
        ensure(m.module.factors() == rec.reduced_factors.as_slice(), || {
            format!(
                "M at {r} is {:?}, reference {:?}",
                rec.reduced_factors,
                m.module.factors()
            )
        })?;
    }
    ensure(fps[0].records[0].kernel_factors == [8], || {
        "K at 0:-1 is not Z/8".into()
    })?;
    ensure(fps[0].records[1].kernel_factors == [27], || {
        "K at 27:4 is not Z/27".into()
    })?;
    Ok(
        "W, W', 7²₈ agree on all panel rings; M matches Λ ⊕ Λ/(1-t)^3; K(0:-1)=Z/8, K(27:4)=Z/27"
            .into(),
    )
}

fn separation() -> Check {
    let panel = default_panel();
    let w = lookup("whitehead").expect("corpus").diagram();
    let wm = lookup("whitehead-mirror").expect("corpus").diagram();
    let l = lookup("7-2-8").expect("corpus").diagram();
    let a = compare_links(&w, &wm, &panel).map_err(err)?;
    ensure(
        a.module_equal && !a.enhanced_equal && a.imq.is_isomorphic(),
        || format!("W vs W': {}", a.summary()),
    )?;
    let witness = a
        .enhanced_witness
        .as_ref()
        .map(|v| v["left"]["ring"].clone());
    ensure(witness == Some(serde_json::json!("27:4")), || {
        format!("W vs W' witness ring {witness:?}")
    })?;
    let wrec = &fingerprint(&w, &panel).map_err(err)?.records[1];
    let mrec = &fingerprint(&wm, &panel).map_err(err)?.records[1];
    ensure(wrec.sign != mrec.sign, || {
        "sign records agree at 27:4".into()
    })?;
    let b = compare_links(&w, &l, &panel).map_err(err)?;
    ensure(
        b.module_equal && b.enhanced_equal && b.imq.is_isomorphic(),
        || format!("W vs 7²₈: {}", b.summary()),
    )?;
    Ok(format!(
        "W vs W': {}; W vs 7²₈: {}",
        short(&a.summary()),
        short(&b.summary())
    ))
}

fn short(s: &str) -> String {
    s.split("; MQ[").next().unwrap_or(s).to_string()
}

fn virtual_hopf_growth() -> Check {
    let d = lookup("virtual-hopf").expect("corpus").diagram();
    let mut sizes = Vec::new();
    for m in [2u64, 3, 5, 7] {
        let r = ScalarRing::new(m, 1).map_err(err)?;
        let size = mq_specialized(&d, &r, DEFAULT_QUANDLE_CAP)
            .map_err(err)?
            .report
            .size;
        ensure(size as u64 == 1 + m, || {
            format!("|MQ(H', ({m},1))| = {size}")
        })?;
        sizes.push(size);
    }
    Ok(format!("sizes {sizes:?} for m = 2, 3, 5, 7"))
}

fn knot_affineness() -> Check {
    let mut checked = 0;
    for name in ["trefoil", "unknot"] {
        let d = lookup(name).expect("corpus").diagram();
        for r in default_panel() {
            let lm = link_modules(&d, &r).map_err(err)?;
            ensure(lm.chi[0].iter().all(|&x| x == 0), || {
                format!("χ_1({name}) ≠ 0 at {r}")
            })?;
            if lm.kernel.module.order().is_none() {
                return Err(format!("K({name}) infinite at {r}"));
            }
            let q = mq_specialized(&d, &r, DEFAULT_QUANDLE_CAP).map_err(err)?;
            ensure(q.report.orbit_sizes.len() == 1, || {
                format!("{name} at {r} has several orbits")
            })?;
            let affine = build_def1(
                &Def1Data::affine(lm.kernel.module.clone()),
                DEFAULT_QUANDLE_CAP,
            )
            .map_err(err)?;
            let iso =
                iso_search(&q.quandle.quandle, &affine.quandle, DEFAULT_ISO_CAP).map_err(err)?;
            ensure(iso.is_isomorphic(), || format!("{name} at {r}: {iso:?}"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (knot, ring) pairs single-orbit, affine, χ_1 = 0"
    ))
}

/// A random `Q(N, (n_i), (X_i))` instance with `|N| ≤ 64` and at most 64 points.
pub fn random_def1(rng: &mut ChaCha8Rng) -> (Def1Data, Def1Quandle) {
    loop {
        let m = rng.gen_range(2..=64u64);
        let u = rng.gen_range(1..m as i64);
        if u.gcd(&(m as i64)) != 1 {
            continue;
        }
        let ring = ScalarRing::new(m, u).expect("unit");
        let ngens = rng.gen_range(1..=2usize);
        let nrels = rng.gen_range(0..=2usize);
        let rels = (0..nrels)
            .map(|_| {
                (0..ngens)
                    .map(|_| {
                        LaurentPoly::from_terms(
                            (0..3).map(|e| (e, BigInt::from(rng.gen_range(-3..=3i64)))),
                        )
                    })
                    .collect()
            })
            .collect();
        let p = LambdaPresentation {
            gens: (0..ngens).map(|g| format!("x{g}")).collect(),
            rels,
        };
        let n = specialized_module(&p, &ring).expect("specializes").module;
        if n.order()
            .is_none_or(|o| o > 64 || (o < 4 && rng.gen_bool(0.9)))
        {
            continue;
        }
        let ann: Vec<Vec<i64>> = annihilator_of_one_minus_t(&n);
        let elems = n.elements(64).expect("finite");
        let mu = rng.gen_range(1..=3usize);
        let offsets = (0..mu)
            .map(|_| elems[rng.gen_range(0..elems.len())].clone())
            .collect();
        let subs = (0..mu)
            .map(|_| {
                let g = if rng.gen_bool(0.3) {
                    n.zero()
                } else {
                    ann[rng.gen_range(0..ann.len())].clone()
                };
                n.subgroup(&[g])
            })
            .collect();
        let data = Def1Data::new(n, offsets, subs).expect("shapes agree");
        if let Ok(q) = build_def1(&data, 64) {
            return (data, q);
        }
    }
}

fn annihilator_of_one_minus_t(n: &FiniteModule) -> Vec<Vec<i64>> {
    n.elements(64)
        .expect("finite")
        .into_iter()
        .filter(|v| n.one_minus_t(v).iter().all(|&x| x == 0))
        .collect()
}

fn def1_properties(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        let (data, q) = random_def1(&mut rng);
        let ctx = || {
            format!(
                "instance {k}: factors {:?}, μ = {}",
                data.module.factors(),
                data.mu()
            )
        };
        ensure(q.quandle.check_medial_axioms().is_empty(), || {
            format!("{}: axioms fail", ctx())
        })?;
        let dm = displacement_module(&data).map_err(err)?;
        let np = dm.n_prime.lattice().clone();
        let nprime: Vec<Vec<i64>> = data
            .module
            .elements(64)
            .map_err(err)?
            .into_iter()
            .filter(|v| np.contains(v))
            .collect();
        let ids = q.quandle.orbit_ids();
        for (x, (i, v)) in q.points.iter().enumerate() {
            let mut coset: Vec<usize> = nprime
                .iter()
                .map(|n| q.index_of(*i, &data.module.add(v, n)))
                .collect();
            coset.sort_unstable();
            coset.dedup();
            let orbit: Vec<usize> = (0..ids.len()).filter(|&y| ids[y] == ids[x]).collect();
            ensure(coset == orbit, || {
                format!("{}: orbit of point {x} is not x + N'", ctx())
            })?;
        }
        let dis = displacement_group(&q.quandle, DEFAULT_DIS_CAP).map_err(err)?;
        ensure(dis.order() as u64 == dm.order(), || {
            format!("{}: |Dis| {} vs |N'/∩X| {}", ctx(), dis.order(), dm.order())
        })?;
        ensure(dis.fixed_point_lemma_holds(), || {
            format!("{}: fixed-point lemma fails", ctx())
        })?;
        let rebuilt = rebuild_via_structure_theorem(&q.quandle, DEFAULT_DIS_CAP).map_err(err)?;
        ensure(
            iso_search(&rebuilt.def1.quandle, &q.quandle, DEFAULT_ISO_CAP)
                .map_err(err)?
                .is_isomorphic(),
            || format!("{}: rebuild not isomorphic", ctx()),
        )?;
        let inv = build_def1(&involutory_def1(&data).map_err(err)?, 64).map_err(err)?;
        let (_, cq) = congruence_quotient(&q.quandle, &CongruenceMode::Involutory, DEFAULT_DIS_CAP)
            .map_err(err)?;
        ensure(inv.quandle.is_involutory(), || {
            format!("{}: involutory data is not involutory", ctx())
        })?;
        ensure(
            iso_search(&inv.quandle, &cq, DEFAULT_ISO_CAP)
                .map_err(err)?
                .is_isomorphic(),
            || format!("{}: involutory routes disagree", ctx()),
        )?;
    }
    Ok(format!("{count} random instances: axioms, orbits = x + N', |Dis|, fixed-point lemma, rebuild, involutory routes"))
}

fn corpus_properties() -> Check {
    let panel = default_panel();
    let r27 = ScalarRing::new(27, 4).map_err(err)?;
    let mut n = 0;
    for e in CORPUS {
        let d = e.diagram();
        for r in &panel {
            ensure(oldprop_check(&d, r).map_err(err)?, || {
                format!("ker φ_τ ≠ (1-u)K for {} at {r}", e.name)
            })?;
            if let Ok(q) = mq_specialized(&d, r, DEFAULT_QUANDLE_CAP) {
                let nm = natural_map(&q.quandle).map_err(err)?;
                let (_, sq) = congruence_quotient(
                    &q.quandle.quandle,
                    &CongruenceMode::Semiregular,
                    DEFAULT_DIS_CAP,
                )
                .map_err(err)?;
                ensure(
                    iso_search(&sq, &nm.image, DEFAULT_ISO_CAP)
                        .map_err(err)?
                        .is_isomorphic(),
                    || format!("semiregular quotient ≠ natural image for {} at {r}", e.name),
                )?;
                ensure(q.quandle.quandle.orbits().len() == d.mu(), || {
                    format!("{} at {r}: orbit count", e.name)
                })?;
                n += 1;
            }
        }
        let (alt, _) = make_alternating_writhes(&d);
        let xr = xi_verify(&alt, &r27, DEFAULT_QUANDLE_CAP).map_err(err)?;
        ensure(xr.all_pass(), || {
            format!("ξ certificates fail for {}: {xr:?}", e.name)
        })?;
        if let ImqOutcome::Finite(q) = imq(&d, DEFAULT_QUANDLE_CAP).map_err(err)? {
            let a = link_modules(&d, &ScalarRing::new(0, -1).map_err(err)?)
                .map_err(err)?
                .kernel_order()
                .unwrap_or(0);
            let (mu, size) = (d.mu() as u64, q.report.size as u64);
            ensure(mu * a <= 2 * size && size <= mu * a, || {
                format!("IMQ bounds fail for {}", e.name)
            })?;
        }
    }
    Ok(format!(
        "oldprop, ξ certificates, IMQ bounds, semiregular cross-check on {n} corpus quandles"
    ))
}

fn minor_gcd_oracle(a: &[Vec<i64>], k: usize) -> BigInt {
    fn det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in subsets(a.len(), k) {
        for cs in subsets(a[0].len(), k) {
            let m: Vec<Vec<i128>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect())
                .collect();
            g = g.gcd(&BigInt::from(det(&m)));
        }
    }
    g
}

fn snf_oracle(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    for k in 0..count {
        let (r, c) = (rng.gen_range(1..=5usize), rng.gen_range(1..=5usize));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(r, c, &rows);
        let snf = smith_normal_form(&a);
        ensure(&(&snf.u * &a) * &snf.v == snf.s, || {
            format!("matrix {k}: U A V ≠ S")
        })?;
        ensure(
            snf.u.det().abs() == BigInt::from(1) && snf.v.det().abs() == BigInt::from(1),
            || format!("matrix {k}: transforms not unimodular"),
        )?;
        ensure(snf.s.is_diagonal(), || {
            format!("matrix {k}: S not diagonal")
        })?;
        let d = snf.diagonal();
        let mut prod = BigInt::from(1);
        for i in 0..r.min(c) {
            let di = d.get(i).cloned().unwrap_or_default();
            ensure(!di.is_negative(), || {
                format!("matrix {k}: negative invariant factor")
            })?;
            if i + 1 < d.len() {
                ensure(
                    d[i + 1].is_zero() || (!di.is_zero() && (&d[i + 1] % &di).is_zero()),
                    || format!("matrix {k}: divisibility chain broken"),
                )?;
            }
            prod *= &di;
            ensure(prod == minor_gcd_oracle(&rows, i + 1), || {
                format!("matrix {k}: minor gcd mismatch at {}", i + 1)
            })?;
        }
    }
    Ok(format!(
        "{count} random matrices: UAV = S, unimodular, divisibility, minor gcds"
    ))
}

/// Run every criterion; `quick` lowers the random instance counts.
pub fn run(seed: u64, quick: bool) -> Vec<CriterionResult> {
    let (n_def1, n_snf) = if quick { (20, 200) } else { (100, 1000) };
    vec![
        result("1", "corpus cardinalities", corpus_cardinalities()),
        result("2", "module fingerprints", module_fingerprints()),
        result("3", "separation", separation()),
        result("4", "virtual Hopf growth", virtual_hopf_growth()),
        result("5", "knot affineness", knot_affineness()),
        result(
            "6a",
            "orbit-data quandle properties",
            def1_properties(seed, n_def1),
        ),
        result("6b", "corpus properties", corpus_properties()),
        result("7", "SNF oracle", snf_oracle(seed, n_snf)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minor_oracle_small() {
        assert_eq!(
            minor_gcd_oracle(&[vec![2, 4], vec![0, 6]], 1),
            BigInt::from(2)
        );
        assert_eq!(
            minor_gcd_oracle(&[vec![2, 4], vec![0, 6]], 2),
            BigInt::from(12)
        );
    }

    #[test]
    fn quick_run_passes() {
        for r in run(DEFAULT_SEED, true) {
            assert!(r.pass, "{}", r.line());
        }
    }
}
