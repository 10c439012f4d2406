//! Cusps of `Γ₁(q)`, the multiplier `v(γ) = ζ^b`, cusp parameters and the
//! Riemann–Roch count of the `ζ`-eigenspace.
//!
//! For the weight-2 automorphic factor `(cz + d)² ζ^b` on `Γ₁(q)`, a cusp
//! `r/s` with matrix `L = (r x; s y)` has width `n` (least `n` with
//! `L Pⁿ L⁻¹ ∈ Γ₁(q)`) and parameter `κ ∈ [0, 1)` defined by
//! `v(L Pⁿ L⁻¹) = exp(2πiκ)`. Only the cusps `r/q` have `κ ≠ 0`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{zeta_power, CycloNumber};
use crate::field::{ext_gcd, is_prime, is_supported_prime, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModCurveError {
    #[error("q = {0} is not supported here")]
    UnsupportedPrime(u64),
    #[error("{0} is not in Γ₁({1})")]
    NotInGroup(IntMatrix, u64),
    #[error("{r}/{s} is not a reduced fraction")]
    InvalidCusp { r: i64, s: i64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// A 2×2 integer matrix of determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let m = |x: i64, y: i64, z: i64, w: i64| {
            i64::try_from(x as i128 * y as i128 + z as i128 * w as i128)
                .expect("matrix entry overflow")
        };
        IntMatrix {
            a: m(self.a, o.a, self.b, o.c),
            b: m(self.a, o.b, self.b, o.d),
            c: m(self.c, o.a, self.d, o.c),
            d: m(self.c, o.b, self.d, o.d),
        }
    }

    pub fn inverse(&self) -> IntMatrix {
        IntMatrix::new(self.d, -self.b, -self.c, self.a)
    }

    /// `Pⁿ = (1 n; 0 1)`.
    pub fn translation(n: i64) -> IntMatrix {
        IntMatrix::new(1, n, 0, 1)
    }

    pub fn in_gamma1(&self, q: u64) -> bool {
        self.det() == 1
            && reduce(self.a, q) == 1
            && reduce(self.d, q) == 1
            && reduce(self.c, q) == 0
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `μ = [PSL₂(Z) : Γ₁(q)·{±1}] = (q² − 1)/2` for a prime `q ≥ 5`.
pub fn gamma1_index(q: u64) -> u64 {
    (q * q - 1) / 2
}

fn check_prime_level(q: u64) -> Result<(), ModCurveError> {
    if q >= 5 && is_prime(q) {
        Ok(())
    } else {
        Err(ModCurveError::UnsupportedPrime(q))
    }
}

/// A cusp `r/s` in lowest terms with `s ≥ 0`; `∞ = 1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cusp {
    pub r: i64,
    pub s: i64,
}

impl Cusp {
    pub fn new(r: i64, s: i64) -> Result<Self, ModCurveError> {
        let (g, _, _) = ext_gcd(r, s);
        if g != 1 {
            return Err(ModCurveError::InvalidCusp { r, s });
        }
        Ok(if s < 0 {
            Cusp { r: -r, s: -s }
        } else {
            Cusp { r, s }
        })
    }

    pub fn infinity() -> Self {
        Cusp { r: 1, s: 0 }
    }

    /// A matrix `L = (r x; s y) ∈ SL₂(Z)` with `L∞ = r/s`.
    pub fn matrix(&self) -> IntMatrix {
        // r·y − x·s = 1
        let (_, y, t) = ext_gcd(self.r, self.s);
        IntMatrix::new(self.r, -t, self.s, y)
    }

    /// Orbit key under `Γ₁(q)`: `(r, s) ~ ±(r + js, s) (mod q)`.
    pub fn class_key(&self, q: u64) -> CuspClass {
        let (r, s) = (reduce(self.r, q), reduce(self.s, q));
        let fold = |x: u64| x.min(q - x);
        if s == 0 {
            CuspClass::Vertical(fold(r))
        } else {
            CuspClass::Horizontal(fold(s))
        }
    }

    /// The canonical representative of this cusp's `Γ₁(q)`-orbit.
    pub fn canonical(&self, q: u64) -> Cusp {
        self.class_key(q).representative(q)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.s)
    }
}

/// `Γ₁(q)`-orbit of a cusp at prime level: `Vertical(r)` collects `±r/q`
/// (and `∞`), `Horizontal(s)` the cusps with denominator `±s ≢ 0 (mod q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CuspClass {
    Vertical(u64),
    Horizontal(u64),
}

impl CuspClass {
    pub fn representative(&self, q: u64) -> Cusp {
        match *self {
            CuspClass::Vertical(r) => Cusp {
                r: r as i64,
                s: q as i64,
            },
            CuspClass::Horizontal(s) => Cusp { r: 1, s: s as i64 },
        }
    }
}

/// Direct form of the equivalence criterion: some sign and `j` with
/// `(r', s') ≡ ±(r + js, s) (mod q)`.
pub fn cusps_equivalent(q: u64, x: &Cusp, y: &Cusp) -> bool {
    let target = (reduce(y.r, q), reduce(y.s, q));
    (0..q as i64).any(|j| {
        let r = x.r + j * x.s;
        [1i64, -1]
            .iter()
            .any(|&e| (reduce(e * r, q), reduce(e * x.s, q)) == target)
    })
}

/// `L Pⁿ L⁻¹ = (1 − nrs, nr²; −ns², 1 + nrs)`.
pub fn stabilizer_matrix(cusp: &Cusp, n: i64) -> IntMatrix {
    let (r, s) = (cusp.r, cusp.s);
    IntMatrix::new(1 - n * r * s, n * r * r, -n * s * s, 1 + n * r * s)
}

/// Least `n` with `L Pⁿ L⁻¹ ∈ Γ₁(q)`. At prime level the width divides `q`,
/// so only `n = 1` and `n = q` are tried.
pub fn cusp_width(q: u64, cusp: &Cusp) -> Result<u64, ModCurveError> {
    check_prime_level(q)?;
    let l = cusp.matrix();
    for n in [1, q] {
        let displayed = stabilizer_matrix(cusp, n as i64);
        let product = l.mul(&IntMatrix::translation(n as i64)).mul(&l.inverse());
        if displayed != product {
            return Err(ModCurveError::InternalInconsistency(format!(
                "L P^{n} L^-1 = {product}, expected {displayed}"
            )));
        }
        if displayed.in_gamma1(q) {
            return Ok(n);
        }
    }
    Err(ModCurveError::InternalInconsistency(format!(
        "no width found for {cusp} at level {q}"
    )))
}

/// Exponent `b mod q` of `v(γ) = ζ_q^b`.
pub fn multiplier_exponent(q: u64, gamma: &IntMatrix) -> Result<u64, ModCurveError> {
    if !gamma.in_gamma1(q) {
        return Err(ModCurveError::NotInGroup(*gamma, q));
    }
    Ok(reduce(gamma.b, q))
}

/// The multiplier `v(γ) = ζ_q^b` of the weight-2 factor `(cz + d)² ζ^b`.
pub fn multiplier_v(q: u64, gamma: &IntMatrix) -> Result<CycloNumber, ModCurveError> {
    Ok(zeta_power(q, multiplier_exponent(q, gamma)? as i64))
}

/// `κ ∈ [0, 1)` with `v(L P^{n_L} L⁻¹) = exp(2πiκ)`.
pub fn cusp_parameter(q: u64, cusp: &Cusp) -> Result<BigRational, ModCurveError> {
    let n = cusp_width(q, cusp)?;
    let stab = stabilizer_matrix(cusp, n as i64);
    let b = multiplier_exponent(q, &stab)?;
    Ok(BigRational::new(BigInt::from(b), BigInt::from(q)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspData {
    pub cusp: Cusp,
    pub width: u64,
    #[serde(serialize_with = "crate::export::ser_rational")]
    pub kappa: BigRational,
}

/// All `q − 1` inequivalent cusps of `Γ₁(q)`: first `r/q` for
/// `r = 1..(q-1)/2` (width 1), then `1/s` for `s = 1..(q-1)/2` (width `q`).
pub fn cusp_representatives(q: u64) -> Result<Vec<CuspData>, ModCurveError> {
    check_prime_level(q)?;
    let half = (q - 1) / 2;
    (1..=half)
        .map(CuspClass::Vertical)
        .chain((1..=half).map(CuspClass::Horizontal))
        .map(|class| {
            let cusp = class.representative(q);
            Ok(CuspData {
                cusp,
                width: cusp_width(q, &cusp)?,
                kappa: cusp_parameter(q, &cusp)?,
            })
        })
        .collect()
}

/// Whether `Γ₁(q)` contains elliptic elements. Elements of `Γ₁(q)` have trace
/// `≡ ±2 (mod q)`, elliptic ones have trace in `{−1, 0, 1}`.
pub fn has_elliptic_elements(q: u64) -> bool {
    let q = q as i64;
    [-1i64, 0, 1]
        .iter()
        .any(|&t| (t - 2).rem_euclid(q) == 0 || (t + 2).rem_euclid(q) == 0)
}

/// `g(X₁(q)) = (q − 5)(q − 7)/24`.
pub fn genus_x1(q: u64) -> Result<u64, ModCurveError> {
    check_prime_level(q)?;
    let num = (q - 5) * (q - 7);
    if num % 24 != 0 {
        return Err(ModCurveError::UnsupportedPrime(q));
    }
    Ok(num / 24)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorSummary {
    pub q: u64,
    pub mu: u64,
    pub g: u64,
    #[serde(serialize_with = "crate::export::ser_rational")]
    pub kappa_sum: BigRational,
    pub m: i64,
    pub z: i64,
}

impl DivisorSummary {
    /// `m − 2g + 2`, which equals `q − 1 − Σκ` and must be positive.
    pub fn degree_margin(&self) -> i64 {
        self.m - 2 * self.g as i64 + 2
    }
}

/// Degree `m = μ/6 − Σκ` of the divisor cut out by a nonzero element of the
/// eigenspace, and `z = m − g + 1` by Riemann–Roch.
pub fn divisor_summary(q: u64) -> Result<DivisorSummary, ModCurveError> {
    if !is_supported_prime(q) {
        return Err(ModCurveError::UnsupportedPrime(q));
    }
    if has_elliptic_elements(q) {
        return Err(ModCurveError::InternalInconsistency(format!(
            "Γ₁({q}) has elliptic elements"
        )));
    }
    let mu = gamma1_index(q);
    let g = genus_x1(q)?;
    let cusps = cusp_representatives(q)?;
    let kappa_sum = cusps
        .iter()
        .fold(BigRational::zero(), |acc, c| acc + &c.kappa);
    let m = BigRational::new(BigInt::from(mu), BigInt::from(6)) - &kappa_sum;
    if !m.is_integer() || m.is_negative() {
        return Err(ModCurveError::InternalInconsistency(format!(
            "divisor degree {m} is not a nonnegative integer"
        )));
    }
    let m = m.to_integer().to_i64().expect("degree fits in i64");
    let margin = BigRational::from_integer(BigInt::from(q as i64 - 1)) - &kappa_sum;
    let bound = m - 2 * g as i64 + 2;
    if margin != BigRational::from_integer(BigInt::from(bound)) || bound <= 0 {
        return Err(ModCurveError::InternalInconsistency(format!(
            "m - 2g + 2 = {bound} but q - 1 - Σκ = {margin}"
        )));
    }
    let z = m - g as i64 + 1;
    Ok(DivisorSummary {
        q,
        mu,
        g,
        kappa_sum,
        m,
        z,
    })
}
