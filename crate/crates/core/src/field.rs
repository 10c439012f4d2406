//! Prime-field arithmetic and the small number-theory helpers the rest of
//! the crate leans on (primality, Legendre symbols, square roots, primitive
//! roots).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Deterministic trial-division primality test. The moduli handled here are
/// small (group enumeration and sweeps stay well below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `true` for the primes this crate's main pipeline supports: q prime,
/// q ≡ 3 (mod 4) and q > 3.
pub fn is_supported_prime(q: u64) -> bool {
    q > 3 && q % 4 == 3 && is_prime(q)
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduces a signed integer into `[0, q)`.
pub fn reduce(n: i64, q: u64) -> u64 {
    n.rem_euclid(q as i64) as u64
}

/// Legendre symbol `(n/q)` via Euler's criterion. `q` must be an odd prime;
/// that is checked by callers that construct moduli, not here.
pub fn legendre_symbol(n: i64, q: u64) -> i8 {
    let r = reduce(n, q);
    if r == 0 {
        return 0;
    }
    match pow_mod(r, (q - 1) / 2, q) {
        1 => 1,
        x if x == q - 1 => -1,
        _ => unreachable!("Euler's criterion failed: {q} is not an odd prime"),
    }
}

/// Returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)` and `g ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let quot = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Smallest generator of the multiplicative group `F_q^×`.
pub fn primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let order = q - 1;
    let factors = prime_factors(order);
    (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, order / p, q) != 1))
        .expect("F_q^× is cyclic")
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of the prime field `F_q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    q: u64,
    value: u64,
}

impl Fq {
    pub fn new(value: i64, q: u64) -> Self {
        Fq {
            q,
            value: reduce(value, q),
        }
    }

    pub fn zero(q: u64) -> Self {
        Fq { q, value: 0 }
    }

    pub fn one(q: u64) -> Self {
        Fq { q, value: 1 % q }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        Fq {
            q: self.q,
            value: pow_mod(self.value, exp, self.q),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.q - 2))
        }
    }

    pub fn legendre(self) -> i8 {
        legendre_symbol(self.value as i64, self.q)
    }

    /// A square root when one exists. Uses the `q ≡ 3 (mod 4)` shortcut when
    /// available and falls back to a scan otherwise.
    pub fn sqrt(self) -> Option<Self> {
        if self.value == 0 {
            return Some(self);
        }
        if self.legendre() != 1 {
            return None;
        }
        let root = if self.q % 4 == 3 {
            self.pow((self.q + 1) / 4)
        } else {
            (1..self.q)
                .map(|x| Fq::new(x as i64, self.q))
                .find(|x| *x * *x == self)?
        };
        debug_assert_eq!(root * root, self);
        Some(root)
    }

    /// The representative of `{x, -x}` lying in `[0, (q-1)/2]`.
    pub fn abs(self) -> Self {
        if self.value > self.q / 2 {
            -self
        } else {
            self
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.q)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq {
            q: self.q,
            value: (self.value + rhs.value) % self.q,
        }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq {
            q: self.q,
            value: (self.value + self.q - rhs.value) % self.q,
        }
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq {
            q: self.q,
            value: ((self.value as u128 * rhs.value as u128) % self.q as u128) as u64,
        }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq {
            q: self.q,
            value: (self.q - self.value) % self.q,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(q: u64) -> Vec<u64> {
        let mut s: Vec<u64> = (1..q).map(|x| x * x % q).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 7), 1);
        assert_eq!(legendre_symbol(3, 7), -1);
        assert_eq!(legendre_symbol(0, 7), 0);
        assert_eq!(legendre_symbol(14, 7), 0);
        for q in [7, 11, 19, 23, 31, 43] {
            assert_eq!(legendre_symbol(-1, q), -1);
        }
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let sq = squares(q);
            for n in -40i64..40 {
                let r = reduce(n, q);
                let expected = if r == 0 {
                    0
                } else if sq.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(n, q), expected, "({n}/{q})");
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for q in [7u64, 11, 23] {
            for a in -15i64..15 {
                for b in -15i64..15 {
                    assert_eq!(
                        legendre_symbol(a * b, q),
                        legendre_symbol(a, q) * legendre_symbol(b, q)
                    );
                }
            }
        }
    }

    #[test]
    fn primes_and_roots() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(23), 5);
        assert!(!is_supported_prime(3));
        assert!(!is_supported_prime(13));
        assert!(is_supported_prime(7));
    }

    #[test]
    fn sqrt_and_inverse() {
        for q in [7u64, 11, 13, 23] {
            for v in 1..q {
                let x = Fq::new(v as i64, q);
                assert_eq!(x * x.inv().unwrap(), Fq::one(q));
                match x.sqrt() {
                    Some(r) => assert_eq!(r * r, x),
                    None => assert_eq!(x.legendre(), -1),
                }
            }
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        for (a, b) in [(3, 7), (240, 46), (-5, 12), (0, 9), (9, 0)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }
}
