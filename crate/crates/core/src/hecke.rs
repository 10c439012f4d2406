//! Both counts of `z`, the class number two ways, and the resulting identity
//! `m₊ − m₋ = h(−q)`.
//!
//! The representation side gives
//! `z = (y₊ − y₋)/2 + (q − 1)/4 + (q² − 1)/24`, the Riemann–Roch side gives
//! `z = m − g + 1`. Solving the first for `y₊ − y₋` with the second's `z`
//! yields the multiplicity difference, which must equal the number of
//! reduced binary quadratic forms of discriminant `−q`.
//!
//! Sign convention: `h(−q) = −(1/q) Σ n·(n/q)`, so the Riemann–Roch value
//! reads `z = (q² + 6q − 7)/24 − (1/2q) Σ n·(n/q) = (q² + 6q − 7)/24 + h/2`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::character_table::{
    zeta_eigenspace_dim, DecompVector, RestrictionCoefficients, TableError,
};
use crate::field::{is_supported_prime, legendre_symbol};
use crate::modcurve::{divisor_summary, ModCurveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("q = {0} is not supported: need a prime q ≡ 3 (mod 4) with q > 3")]
    UnsupportedPrime(u64),
    #[error("q = {q}: Dirichlet class number {dirichlet} disagrees with {forms} reduced forms")]
    SignConventionViolation { q: u64, dirichlet: i64, forms: u64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    ModCurve(#[from] ModCurveError),
    #[error(transparent)]
    Table(#[from] TableError),
}

fn check_q(q: u64) -> Result<(), HeckeError> {
    if is_supported_prime(q) {
        Ok(())
    } else {
        Err(HeckeError::UnsupportedPrime(q))
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Σ_{n=1}^{q−1} n · (n/q)`.
pub fn sum_n_chi(q: u64) -> i64 {
    (1..q as i64)
        .map(|n| n * legendre_symbol(n, q) as i64)
        .sum()
}

/// Positive definite form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(self.a, self.b, self.c) == 1
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    use num_integer::Integer;
    a.gcd(&b).gcd(&c)
}

/// Reduced primitive forms of discriminant `−q`, enumerated directly:
/// `a ≤ √(q/3)`, `|b| ≤ a` odd, `c = (b² + q)/4a`.
pub fn class_number_forms(q: u64) -> Result<(u64, Vec<QuadForm>), HeckeError> {
    check_q(q)?;
    let q = q as i64;
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= q {
        for b in (-a..=a).filter(|b| b.rem_euclid(2) == 1) {
            let num = b * b + q;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm {
                a,
                b,
                c: num / (4 * a),
            };
            if f.is_reduced() {
                if !f.is_primitive() {
                    return Err(HeckeError::InternalInconsistency(format!(
                        "imprimitive form {f:?} of prime discriminant"
                    )));
                }
                forms.push(f);
            }
        }
        a += 1;
    }
    Ok((forms.len() as u64, forms))
}

/// `−(1/q) Σ n·(n/q)`, before any comparison with the forms count.
fn dirichlet_value(q: u64) -> Result<i64, HeckeError> {
    let s = sum_n_chi(q);
    if s % q as i64 != 0 {
        return Err(HeckeError::InternalInconsistency(format!(
            "Σ n·(n/{q}) = {s} is not divisible by {q}"
        )));
    }
    Ok(-s / q as i64)
}

/// Class number from the finite Dirichlet character sum, checked against
/// the reduced-forms count.
pub fn class_number_dirichlet(q: u64) -> Result<u64, HeckeError> {
    check_q(q)?;
    let h = dirichlet_value(q)?;
    let (forms, _) = class_number_forms(q)?;
    if h <= 0 || h as u64 != forms {
        return Err(HeckeError::SignConventionViolation {
            q,
            dirichlet: h,
            forms,
        });
    }
    Ok(h as u64)
}

/// `y₊ − y₋ = 2z − (q − 1)/2 − (q² − 1)/12`.
///
/// Also re-derives the constant term: the Eisenstein and per-family
/// contributions `(q − 1)/2 + ¼((q² − 1)/6 − (q − 1))` must collapse to
/// `(q − 1)/4 + (q² − 1)/24`.
pub fn y_diff_from_z(q: u64, z: i64) -> Result<i64, HeckeError> {
    check_q(q)?;
    let qi = q as i64;
    let torus_sum = rat(qi * qi - 1, 6) - rat(qi - 1, 1);
    let constant = rat(qi - 1, 2) + torus_sum / rat(4, 1);
    let simplified = rat(qi - 1, 4) + rat(qi * qi - 1, 24);
    if constant != simplified {
        return Err(HeckeError::InternalInconsistency(format!(
            "constant term {constant} != {simplified}"
        )));
    }
    let diff = (rat(z, 1) - simplified) * rat(2, 1);
    if !diff.is_integer() {
        return Err(HeckeError::InternalInconsistency(format!(
            "y+ - y- = {diff} is not an integer"
        )));
    }
    Ok(diff.to_integer().try_into().expect("fits in i64"))
}

/// Values of the two torus invariants and the derived `x`, `S` for a formal
/// cusp-form decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalInvariants {
    /// `Z((q+1)/2)`, fixed space of the non-split torus `H₁`.
    pub z_h1: u64,
    /// `Z((q−1)/2)`, fixed space of the split torus `H₂`.
    pub z_h2: u64,
    pub x: BigRational,
    pub s: BigRational,
}

/// Checks, for one formal decomposition, that
/// `x = ½Z(H₂) − ½Z(H₁)`, `S = 3/2·Z(H₁) − ½Z(H₂)`,
/// `S/2 + x = ¼(Z(H₁) + Z(H₂))`, and that the closed form
/// `z = (y₊ − y₋)/2 + (q − 1)/2 + Y/2 + U + V + x` agrees with the
/// eigenspace dimension counted from eigenvalue multiplicities.
pub fn check_formal_identities(
    q: u64,
    decomp: &DecompVector,
    h1: &RestrictionCoefficients,
    h2: &RestrictionCoefficients,
) -> Result<FormalInvariants, HeckeError> {
    check_q(q)?;
    let z_h1 = decomp.subgroup_invariant(h1);
    let z_h2 = decomp.subgroup_invariant(h2);
    let (z1, z2) = (rat(z_h1 as i64, 1), rat(z_h2 as i64, 1));
    let x = (&z2 - &z1) / rat(2, 1);
    let s = (&z1 * rat(3, 1) - &z2) / rat(2, 1);
    let fail = |what: &str| {
        Err(HeckeError::InternalInconsistency(format!(
            "{what} for {decomp:?}"
        )))
    };
    if x != rat(decomp.x as i64, 1) {
        return fail("x = (Z(H2) - Z(H1))/2 fails");
    }
    if s != rat(decomp.s() as i64, 1) {
        return fail("S = (3 Z(H1) - Z(H2))/2 fails");
    }
    if &s / rat(2, 1) + &x != (&z1 + &z2) / rat(4, 1) {
        return fail("S/2 + x = (Z(H1) + Z(H2))/4 fails");
    }
    let closed = rat(decomp.y_plus as i64 - decomp.y_minus as i64, 2)
        + rat(q as i64 - 1, 2)
        + rat(decomp.total_y() as i64, 2)
        + rat((decomp.total_u() + decomp.total_v() + decomp.x) as i64, 1);
    let counted = zeta_eigenspace_dim(q, decomp)?;
    if closed != rat(counted as i64, 1) {
        return fail("closed-form z disagrees with the eigenvalue count");
    }
    Ok(FormalInvariants { z_h1, z_h2, x, s })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub q: u64,
    pub mu: u64,
    pub g: u64,
    #[serde(serialize_with = "crate::export::ser_rational")]
    pub kappa_sum: BigRational,
    pub m: i64,
    pub z_rr: i64,
    pub sum_nchi: i64,
    pub h_forms: u64,
    pub h_dirichlet: i64,
    /// `m₊ − m₋`, the multiplicity of `π₊` minus that of `π₋` in the cusp forms.
    pub y_diff: i64,
    pub verdict: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Wall-clock timer; reads zero on `wasm32-unknown-unknown`, which has no clock.
struct Stopwatch(
    #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))] std::time::Instant,
);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return self.0.elapsed();
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        Duration::ZERO
    }
}

/// Runs both dimension counts for `q` and compares the resulting
/// multiplicity difference with the class number.
pub fn verify_hecke_identity(q: u64) -> Result<HeckeReport, HeckeError> {
    let start = Stopwatch::start();
    check_q(q)?;
    let qi = q as i64;
    let summary = divisor_summary(q)?;
    let sum_nchi = sum_n_chi(q);
    let (h_forms, _) = class_number_forms(q)?;
    let h_dirichlet = dirichlet_value(q)?;

    // Σκ = (q − 1)/4 + (1/2q) Σ n·(n/q)
    let kappa_closed = rat(qi - 1, 4) + rat(sum_nchi, 2 * qi);
    if summary.kappa_sum != kappa_closed {
        return Err(HeckeError::InternalInconsistency(format!(
            "Σκ = {} but the character-sum form gives {kappa_closed}",
            summary.kappa_sum
        )));
    }
    // z = (q² + 6q − 7)/24 − (1/2q) Σ n·(n/q)
    let z_closed = rat(qi * qi + 6 * qi - 7, 24) - rat(sum_nchi, 2 * qi);
    if z_closed != rat(summary.z, 1) {
        return Err(HeckeError::InternalInconsistency(format!(
            "Riemann–Roch z = {} but the closed form gives {z_closed}",
            summary.z
        )));
    }

    let y_diff = y_diff_from_z(q, summary.z)?;
    let verdict = y_diff == h_forms as i64 && h_dirichlet == h_forms as i64;
    Ok(HeckeReport {
        q,
        mu: summary.mu,
        g: summary.g,
        kappa_sum: summary.kappa_sum,
        m: summary.m,
        z_rr: summary.z,
        sum_nchi,
        h_forms,
        h_dirichlet,
        y_diff,
        verdict,
        elapsed: start.elapsed(),
    })
}

/// Outcome for one prime of a sweep; failures stay attached to their `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepEntry {
    pub q: u64,
    pub outcome: Result<HeckeReport, HeckeError>,
}

impl SweepEntry {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.verdict)
    }
}

/// Primes `q ≡ 3 (mod 4)`, `q > 3`, in `[q_min, q_max]`.
pub fn sweep_primes(q_min: u64, q_max: u64) -> Vec<u64> {
    (q_min..=q_max).filter(|&q| is_supported_prime(q)).collect()
}

/// Verifies every supported prime in `[q_min, q_max]` on `workers` threads.
/// Results come back ordered by `q` whatever the worker count.
pub fn sweep_verify(q_min: u64, q_max: u64, workers: usize) -> Vec<SweepEntry> {
    let primes = sweep_primes(q_min, q_max);
    let workers = workers.max(1).min(primes.len().max(1));
    let run = |q: u64| SweepEntry {
        q,
        outcome: verify_hecke_identity(q),
    };
    if workers == 1 {
        return primes.into_iter().map(run).collect();
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(primes.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&q) = primes.get(i) else { break };
                let entry = run(q);
                results.lock().unwrap().push(entry);
            });
        }
    });
    let mut out = results.into_inner().unwrap();
    out.sort_by_key(|e| e.q);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Class number by brute force over all forms with `a ≤ c`, reduced by
    /// the classical algorithm, then deduplicated.
    fn class_number_by_reduction(q: i64) -> usize {
        fn reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
            loop {
                if c < a {
                    std::mem::swap(&mut a, &mut c);
                    b = -b;
                } else if b.abs() > a {
                    let k = (b + a).div_euclid(2 * a);
                    let nb = b - 2 * k * a;
                    c = (nb * nb + q_disc(a, b, c)) / (4 * a);
                    b = nb;
                } else {
                    if (b < 0) && (b == -a || a == c) {
                        b = -b;
                    }
                    return (a, b, c);
                }
            }
        }
        fn q_disc(a: i64, b: i64, c: i64) -> i64 {
            4 * a * c - b * b
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in 1..=q {
            for b in -a..=a {
                let num = b * b + q;
                if num % (4 * a) == 0 {
                    seen.insert(reduce(a, b, num / (4 * a)));
                }
            }
        }
        seen.len()
    }

    #[test]
    fn sum_n_chi_examples() {
        assert_eq!(sum_n_chi(7), -7);
        assert_eq!(sum_n_chi(11), -11);
        assert_eq!(sum_n_chi(23), -69);
    }

    #[test]
    fn forms_examples() {
        let (h, forms) = class_number_forms(7).unwrap();
        assert_eq!((h, forms), (1, vec![QuadForm { a: 1, b: 1, c: 2 }]));
        let (h, mut forms) = class_number_forms(23).unwrap();
        forms.sort();
        assert_eq!(h, 3);
        assert_eq!(
            forms,
            vec![
                QuadForm { a: 1, b: 1, c: 6 },
                QuadForm { a: 2, b: -1, c: 3 },
                QuadForm { a: 2, b: 1, c: 3 },
            ]
        );
        assert_eq!(class_number_forms(47).unwrap().0, 5);
        assert_eq!(
            class_number_forms(13),
            Err(HeckeError::UnsupportedPrime(13))
        );
    }

    #[test]
    fn forms_match_reduction_oracle() {
        for q in (7..400).filter(|&q| is_supported_prime(q)) {
            let (h, forms) = class_number_forms(q).unwrap();
            assert_eq!(h as usize, class_number_by_reduction(q as i64), "q = {q}");
            assert_eq!(h % 2, 1);
            assert!(forms.iter().all(|f| f.discriminant() == -(q as i64)));
        }
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(class_number_dirichlet(7).unwrap(), 1);
        assert_eq!(class_number_dirichlet(23).unwrap(), 3);
        assert_eq!(class_number_dirichlet(31).unwrap(), 3);
    }

    #[test]
    fn y_diff_examples() {
        assert_eq!(y_diff_from_z(7, 4).unwrap(), 1);
        assert_eq!(y_diff_from_z(11, 8).unwrap(), 1);
        assert_eq!(y_diff_from_z(23, 29).unwrap(), 3);
    }

    #[test]
    fn verify_examples() {
        for (q, h) in [(7, 1), (23, 3), (47, 5)] {
            let r = verify_hecke_identity(q).unwrap();
            assert!(r.verdict);
            assert_eq!((r.y_diff, r.h_forms), (h, h as u64));
        }
        assert_eq!(
            verify_hecke_identity(13),
            Err(HeckeError::UnsupportedPrime(13))
        );
    }

    #[test]
    fn sweep_examples() {
        let entries = sweep_verify(7, 100, 4);
        let qs: Vec<u64> = entries.iter().map(|e| e.q).collect();
        assert_eq!(qs, vec![7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83]);
        assert!(entries.iter().all(SweepEntry::passed));
        assert_eq!(sweep_verify(7, 7, 3).len(), 1);
        assert!(sweep_verify(13, 13, 2).is_empty());
        let serial: Vec<u64> = sweep_verify(7, 300, 1).iter().map(|e| e.q).collect();
        let parallel: Vec<u64> = sweep_verify(7, 300, 7).iter().map(|e| e.q).collect();
        assert_eq!(serial, parallel);
    }
}
