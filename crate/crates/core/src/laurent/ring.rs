//! Finite (or integral) scalar rings used to specialize Λ-modules.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{LaurentError, LaurentPoly};

const MAX_ENUM_RING: u64 = 1 << 20;

/// Residue `coeffs[0] + coeffs[1] t + ...` of degree below `deg f`, or a plain scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElem {
    pub coeffs: Vec<BigInt>,
}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The scalar value when the ring has no polynomial modulus.
    pub fn scalar(&self) -> &BigInt {
        &self.coeffs[0]
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let p = LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(e, c)| (e as i64, c.clone())),
        );
        write!(f, "{p}")
    }
}

/// `Z/m` (or `Z` when `m = 0`), optionally extended to `Z/m[t]/(f)`, with `t` sent to `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarRing {
    modulus: u64,
    /// monic, ascending coefficients, `len = deg f + 1`
    poly_modulus: Option<Vec<BigInt>>,
    t_image: RingElem,
    t_inv: RingElem,
}

impl ScalarRing {
    /// `Z/m` with `t ↦ u`; `m = 0` means the integers.
    pub fn new(modulus: u64, u: i64) -> Result<Self, LaurentError> {
        Self::build(
            modulus,
            None,
            RingElem {
                coeffs: vec![BigInt::from(u)],
            },
        )
    }

    /// `Z/m[t]/(f)` with `t ↦ u(t)`. `f` must be monic of positive degree and `m > 0`.
    pub fn with_poly(modulus: u64, f: &LaurentPoly, u: &LaurentPoly) -> Result<Self, LaurentError> {
        if modulus == 0 {
            return Err(LaurentError::UnsupportedRing(
                "polynomial modulus needs m > 0".into(),
            ));
        }
        let lo = f.min_exp().unwrap_or(0);
        let hi = f.max_exp().unwrap_or(0);
        if lo < 0 || hi < 1 || !f.coeff(hi).is_one() {
            return Err(LaurentError::UnsupportedRing(format!(
                "modulus {f} is not monic of positive degree"
            )));
        }
        let fc: Vec<BigInt> = (0..=hi).map(|e| f.coeff(e)).collect();
        let deg = hi as usize;
        let probe = Self {
            modulus,
            poly_modulus: Some(fc.clone()),
            t_image: RingElem {
                coeffs: vec![BigInt::zero(); deg],
            },
            t_inv: RingElem {
                coeffs: vec![BigInt::zero(); deg],
            },
        };
        // t itself must be a unit of the ambient ring to evaluate negative powers of u's variable
        let t_var = probe.reduce_poly(&LaurentPoly::t())?;
        let t_var_inv = probe.inverse(&t_var).ok_or_else(|| {
            LaurentError::UnsupportedRing(format!("t is not invertible modulo {f}"))
        })?;
        let mut with_t = probe.clone();
        with_t.t_image = t_var;
        with_t.t_inv = t_var_inv;
        let image = with_t.specialize(u)?;
        Self::build(modulus, Some(fc), image)
    }

    fn build(
        modulus: u64,
        poly_modulus: Option<Vec<BigInt>>,
        u: RingElem,
    ) -> Result<Self, LaurentError> {
        let mut ring = Self {
            modulus,
            poly_modulus,
            t_image: u.clone(),
            t_inv: u,
        };
        ring.t_image = ring.reduce(ring.t_image.clone());
        match ring.inverse(&ring.t_image) {
            Some(inv) => {
                ring.t_inv = inv;
                Ok(ring)
            }
            None => Err(LaurentError::NonUnitT(ring.to_string())),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn t_image(&self) -> &RingElem {
        &self.t_image
    }

    pub fn t_inv_image(&self) -> &RingElem {
        &self.t_inv
    }

    pub fn poly_modulus(&self) -> Option<&[BigInt]> {
        self.poly_modulus.as_deref()
    }

    /// Rank of the ring as a Z/m-module (1 without a polynomial modulus).
    pub fn degree(&self) -> usize {
        self.poly_modulus.as_ref().map_or(1, |f| f.len() - 1)
    }

    /// The ring's order, or None for Z.
    pub fn order(&self) -> Option<u64> {
        if self.modulus == 0 {
            return None;
        }
        self.modulus.checked_pow(self.degree() as u32)
    }

    fn reduce_scalar(&self, c: BigInt) -> BigInt {
        if self.modulus == 0 {
            c
        } else {
            c.mod_floor(&BigInt::from(self.modulus))
        }
    }

    /// Reduce an arbitrary coefficient vector (ascending powers) into canonical form.
    pub fn reduce(&self, e: RingElem) -> RingElem {
        let mut c = e.coeffs;
        if let Some(f) = &self.poly_modulus {
            let d = f.len() - 1;
            while c.len() > d {
                let top = c.pop().expect("nonempty");
                if top.is_zero() {
                    continue;
                }
                let shift = c.len() - d;
                for (k, fk) in f.iter().take(d).enumerate() {
                    c[shift + k] -= &top * fk;
                }
            }
            c.resize(d, BigInt::zero());
        } else {
            if c.is_empty() {
                c.push(BigInt::zero());
            }
            assert_eq!(
                c.len(),
                1,
                "scalar ring element with polynomial coefficients"
            );
        }
        RingElem {
            coeffs: c.into_iter().map(|x| self.reduce_scalar(x)).collect(),
        }
    }

    fn reduce_poly(&self, p: &LaurentPoly) -> Result<RingElem, LaurentError> {
        if p.min_exp().is_some_and(|e| e < 0) {
            return Err(LaurentError::UnsupportedRing(
                "negative exponent in residue".into(),
            ));
        }
        let hi = p.max_exp().unwrap_or(0).max(0) as usize;
        Ok(self.reduce(RingElem {
            coeffs: (0..=hi).map(|e| p.coeff(e as i64)).collect(),
        }))
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> RingElem {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = n.into();
        self.reduce(RingElem { coeffs: c })
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.reduce(RingElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        self.reduce(RingElem {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        })
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut c = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        self.reduce(RingElem { coeffs: c })
    }

    pub fn pow(&self, a: &RingElem, mut n: u64) -> RingElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: &RingElem) -> Option<RingElem> {
        if self.poly_modulus.is_none() {
            let x = a.scalar();
            if self.modulus == 0 {
                return if x.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                };
            }
            let m = BigInt::from(self.modulus);
            let g = x.extended_gcd(&m);
            if !g.gcd.is_one() {
                return None;
            }
            return Some(self.from_int(g.x));
        }
        // finite ring: the unit group is finite, so a unit returns to 1 under powering
        let size = self.order().filter(|&n| n <= MAX_ENUM_RING)?;
        let one = self.one();
        let mut seen: HashMap<RingElem, u64> = HashMap::new();
        let mut p = a.clone();
        for k in 1..=size {
            if p == one {
                return Some(if k == 1 { one } else { self.pow(a, k - 1) });
            }
            if seen.insert(p.clone(), k).is_some() {
                return None;
            }
            p = self.mul(&p, a);
        }
        None
    }

    /// Evaluate a Laurent polynomial at `t = u`.
    pub fn specialize(&self, a: &LaurentPoly) -> Result<RingElem, LaurentError> {
        let mut acc = self.zero();
        for (e, c) in a.terms() {
            let base = if e >= 0 { &self.t_image } else { &self.t_inv };
            let term = self.mul(&self.pow(base, e.unsigned_abs()), &self.from_int(c.clone()));
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a` on the Z/m-basis `1, t, ..., t^{d-1}`; column k is `a·t^k`.
    pub fn mul_matrix(&self, a: &RingElem) -> Vec<Vec<BigInt>> {
        let d = self.degree();
        let mut m = vec![vec![BigInt::zero(); d]; d];
        for k in 0..d {
            let mut basis = vec![BigInt::zero(); d];
            basis[k] = BigInt::one();
            let col = self.mul(a, &RingElem { coeffs: basis });
            for (r, v) in col.coeffs.into_iter().enumerate() {
                m[r][k] = v;
            }
        }
        m
    }

    /// Integer representative of a scalar element, when it fits.
    pub fn scalar_i64(&self, a: &RingElem) -> Option<i64> {
        if self.degree() == 1 {
            a.scalar().to_i64()
        } else {
            None
        }
    }
}

/// Evaluate `a` at `t = u` in `R`.
pub fn lp_specialize(a: &LaurentPoly, ring: &ScalarRing) -> Result<RingElem, LaurentError> {
    ring.specialize(a)
}

/// True iff `a = ±t^k`.
pub fn lp_is_unit(a: &LaurentPoly) -> bool {
    a.is_unit()
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modulus, self.t_image)?;
        if let Some(p) = &self.poly_modulus {
            let poly =
                LaurentPoly::from_terms(p.iter().enumerate().map(|(e, c)| (e as i64, c.clone())));
            write!(f, "|{poly}")?;
        }
        Ok(())
    }
}

impl FromStr for ScalarRing {
    type Err = LaurentError;

    /// `m:u` for `Z/m` with `t ↦ u`, or `m:u(t)|f(t)` for `Z/m[t]/(f)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, rest) = s
            .split_once(':')
            .ok_or_else(|| LaurentError::Parse(format!("ring {s:?} is not of the form m:u")))?;
        let m: u64 = m
            .trim()
            .parse()
            .map_err(|_| LaurentError::Parse(format!("bad modulus in {s:?}")))?;
        match rest.split_once('|') {
            None => {
                let u: i64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| LaurentError::Parse(format!("bad t image in {s:?}")))?;
                Self::new(m, u)
            }
            Some((u, f)) => Self::with_poly(m, &f.parse()?, &u.parse()?),
        }
    }
}

impl Serialize for ScalarRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn int(r: &ScalarRing, p: &str) -> BigInt {
        r.specialize(&lp(p)).unwrap().scalar().clone()
    }

    #[test]
    fn specialize_examples() {
        let z = ScalarRing::new(0, -1).unwrap();
        assert_eq!(int(&z, "(1 - t)*(1 - t)*(1 - t)"), BigInt::from(8));
        assert_eq!(int(&z, "1 + t"), BigInt::zero());
        let r = ScalarRing::new(27, 4).unwrap();
        // (1-4)^3 = -27
        assert_eq!(int(&r, "(1 - t)*(1 - t)*(1 - t)"), BigInt::zero());
        assert_eq!(int(&r, "t^-1"), BigInt::from(7)); // 4*7 = 28
    }

    #[test]
    fn non_unit_rejected() {
        assert!(matches!(
            ScalarRing::new(27, 3),
            Err(LaurentError::NonUnitT(_))
        ));
        assert!(matches!(
            ScalarRing::new(0, 2),
            Err(LaurentError::NonUnitT(_))
        ));
        assert!(ScalarRing::new(0, 1).is_ok());
    }

    #[test]
    fn poly_ring() {
        // F_4 = Z/2[t]/(t^2+t+1), t ↦ t: 1 - t is a unit, t^3 = 1
        let r: ScalarRing = "2:t|t^2 + t + 1".parse().unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.specialize(&lp("t^3")).unwrap(), r.one());
        assert_eq!(
            r.specialize(&lp("t^-1")).unwrap(),
            r.specialize(&lp("t^2")).unwrap()
        );
        let x = r.specialize(&lp("1 - t")).unwrap();
        assert!(r.inverse(&x).is_some());
        assert_eq!(
            r.mul_matrix(r.t_image()),
            vec![
                vec![BigInt::zero(), BigInt::one()],
                vec![BigInt::one(), BigInt::one()]
            ]
        );
        assert!("0:t|t^2 + 1".parse::<ScalarRing>().is_err());
        assert!("3:t|2*t^2 + 1".parse::<ScalarRing>().is_err());
    }

    #[test]
    fn parse_render() {
        let r: ScalarRing = "27:4".parse().unwrap();
        assert_eq!(r.to_string(), "27:4");
        let r: ScalarRing = "0:-1".parse().unwrap();
        assert_eq!(r.to_string(), "0:-1");
        assert!("27".parse::<ScalarRing>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i64..5, -6i64..7), 0..5).prop_map(LaurentPoly::from_terms)
    }

    fn arb_ring() -> impl Strategy<Value = ScalarRing> {
        prop_oneof![
            Just(ScalarRing::new(0, -1).unwrap()),
            Just(ScalarRing::new(0, 1).unwrap()),
            Just(ScalarRing::new(27, 4).unwrap()),
            Just(ScalarRing::new(5, 2).unwrap()),
            Just(ScalarRing::new(16, 3).unwrap()),
            Just("3:t|t^2 + 1".parse::<ScalarRing>().unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn specialize_is_homomorphism(a in arb_poly(), b in arb_poly(), r in arb_ring()) {
            let sa = r.specialize(&a).unwrap();
            let sb = r.specialize(&b).unwrap();
            prop_assert_eq!(r.specialize(&(&a * &b)).unwrap(), r.mul(&sa, &sb));
            prop_assert_eq!(r.specialize(&(&a + &b)).unwrap(), r.add(&sa, &sb));
        }

        #[test]
        fn specialize_at_one_is_augment(a in arb_poly()) {
            let r = ScalarRing::new(0, 1).unwrap();
            prop_assert_eq!(r.specialize(&a).unwrap().scalar().clone(), a.augment());
        }
    }
}
