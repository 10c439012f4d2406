//! `PSL₂(F_q)`: canonical elements, conjugacy classes and the two tori.
//!
//! Elements are 2×2 determinant-one matrices over `F_q` modulo `±I`. Of the
//! pair `{M, -M}` the stored representative is the one whose first nonzero
//! entry, scanning `a, b, c, d`, lies in `[1, (q-1)/2]`.
//!
//! Class labels follow the split / non-split / unipotent trichotomy. For
//! `q ≡ 3 (mod 4)` the element `-1` is a non-residue, so `P = (1 1; 0 1)` and
//! `P⁻¹` fall into distinct classes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::field::{is_prime, is_supported_prime, Fq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix ({a}, {b}; {c}, {d}) has determinant {det} mod {q}, expected 1")]
    InvalidElement {
        q: u64,
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        det: u64,
    },
    #[error("elements over F_{left} and F_{right} cannot be combined")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("q = {0} is not supported: need a prime q ≡ 3 (mod 4) with q > 3")]
    UnsupportedPrime(u64),
}

pub(crate) fn check_supported(q: u64) -> Result<(), GroupError> {
    if is_supported_prime(q) {
        Ok(())
    } else {
        Err(GroupError::UnsupportedPrime(q))
    }
}

/// Order of `PSL₂(F_q)` for odd `q`.
pub fn group_order(q: u64) -> u64 {
    q * (q * q - 1) / 2
}

/// Canonical element of `PSL₂(F_q)`; entries are stored reduced into `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Psl2Element {
    q: u64,
    m: [u64; 4],
}

impl Psl2Element {
    /// Builds the canonical representative of `±(a b; c d)`.
    pub fn new(q: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Self, GroupError> {
        let [fa, fb, fc, fd] = [a, b, c, d].map(|v| Fq::new(v, q));
        let det = fa * fd - fb * fc;
        if det != Fq::one(q) {
            return Err(GroupError::InvalidElement {
                q,
                a,
                b,
                c,
                d,
                det: det.value(),
            });
        }
        Ok(Self::from_fq(q, [fa, fb, fc, fd]))
    }

    fn from_fq(q: u64, m: [Fq; 4]) -> Self {
        let half = (q - 1) / 2;
        let lead = m
            .iter()
            .find(|x| !x.is_zero())
            .expect("det 1 matrix is nonzero");
        let m = if lead.value() > half {
            m.map(|x| -x)
        } else {
            m
        };
        Psl2Element {
            q,
            m: m.map(Fq::value),
        }
    }

    pub fn identity(q: u64) -> Self {
        Psl2Element { q, m: [1, 0, 0, 1] }
    }

    /// `P = (1 1; 0 1)`.
    pub fn unipotent(q: u64) -> Self {
        Psl2Element { q, m: [1, 1, 0, 1] }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Entries `[a, b, c, d]` of the canonical representative.
    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    fn fq(&self) -> [Fq; 4] {
        self.m.map(|v| Fq::new(v as i64, self.q))
    }

    pub fn is_identity(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        if self.q != other.q {
            return Err(GroupError::ModulusMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.fq();
        let [e, f, g, h] = other.fq();
        Self::from_fq(
            self.q,
            [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        )
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.fq();
        Self::from_fq(self.q, [d, -b, -c, a])
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.q);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self, GroupError> {
        Ok(g.mul(self)?.mul_unchecked(&g.inverse()))
    }

    /// Least `k ≥ 1` with `self^k = I`.
    pub fn order(&self) -> u64 {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.mul_unchecked(self);
            k += 1;
        }
        k
    }

    /// Trace of the canonical representative (defined up to sign on PSL₂).
    fn trace(&self) -> Fq {
        let [a, _, _, d] = self.fq();
        a + d
    }
}

impl fmt::Debug for Psl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "±({a} {b}; {c} {d}) mod {}", self.q)
    }
}

impl fmt::Display for Psl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "({a} {b}; {c} {d})")
    }
}

pub fn canonicalize(q: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Psl2Element, GroupError> {
    Psl2Element::new(q, a, b, c, d)
}

pub fn element_order(x: &Psl2Element) -> u64 {
    x.order()
}

/// Which family a conjugacy class belongs to, with its parameter.
///
/// `Split { t }` stores the least member of `{±t, ±1/t}`; `NonSplit { a, b }`
/// stands for `ε = a + b√-1` on the norm-one circle and stores the least
/// representatives of `±a` and `±b`, which identifies `ε` with `ε⁻¹` and `-ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    Identity,
    Split { t: u64 },
    NonSplit { a: u64, b: u64 },
    UnipotentPlus,
    UnipotentMinus,
}

impl ClassKind {
    pub fn size(&self, q: u64) -> u64 {
        match self {
            ClassKind::Identity => 1,
            ClassKind::Split { .. } => q * (q + 1),
            ClassKind::NonSplit { a: 0, .. } => q * (q - 1) / 2,
            ClassKind::NonSplit { .. } => q * (q - 1),
            ClassKind::UnipotentPlus | ClassKind::UnipotentMinus => (q * q - 1) / 2,
        }
    }

    /// A matrix in the class: `diag(t, 1/t)`, `(a -b; b a)`, `P` or `P⁻¹`.
    pub fn representative(&self, q: u64) -> Psl2Element {
        let qi = q as i64;
        match *self {
            ClassKind::Identity => Psl2Element::identity(q),
            ClassKind::Split { t } => {
                let inv = Fq::new(t as i64, q).inv().expect("t is a unit").value();
                Psl2Element::new(q, t as i64, 0, 0, inv as i64).expect("det 1")
            }
            ClassKind::NonSplit { a, b } => {
                Psl2Element::new(q, a as i64, qi - b as i64, b as i64, a as i64).expect("det 1")
            }
            ClassKind::UnipotentPlus => Psl2Element::unipotent(q),
            ClassKind::UnipotentMinus => Psl2Element::new(q, 1, -1, 0, 1).expect("det 1"),
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Identity => write!(f, "I"),
            ClassKind::Split { t } => write!(f, "split(t={t})"),
            ClassKind::NonSplit { a, b } => write!(f, "nonsplit({a}+{b}i)"),
            ClassKind::UnipotentPlus => write!(f, "P"),
            ClassKind::UnipotentMinus => write!(f, "P^-1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConjClassLabel {
    pub kind: ClassKind,
    pub size: u64,
}

impl ConjClassLabel {
    pub fn new(kind: ClassKind, q: u64) -> Self {
        ConjClassLabel {
            kind,
            size: kind.size(q),
        }
    }
}

fn split_param(t: Fq) -> u64 {
    let inv = t.inv().expect("split eigenvalue is a unit");
    [t, -t, inv, -inv].iter().map(|x| x.value()).min().unwrap()
}

fn nonsplit_param(a: Fq, b: Fq) -> ClassKind {
    ClassKind::NonSplit {
        a: a.abs().value(),
        b: b.abs().value(),
    }
}

/// Conjugacy class of `x`, without enumerating the group.
///
/// Unipotent elements are conjugated into upper-triangular form through a
/// fixed vector; the residue class of the resulting upper-right entry picks
/// between `P` and `P⁻¹`.
pub fn classify_class(x: &Psl2Element) -> ConjClassLabel {
    let q = x.q;
    let kind = if x.is_identity() {
        ClassKind::Identity
    } else {
        let two = Fq::new(2, q);
        let four = Fq::new(4, q);
        let tr = x.trace();
        let disc = tr * tr - four;
        if disc.is_zero() {
            classify_unipotent(x)
        } else if disc.legendre() == 1 {
            let root = disc.sqrt().expect("residue");
            let lambda = (tr + root) * two.inv().unwrap();
            ClassKind::Split {
                t: split_param(lambda),
            }
        } else {
            let a = tr * two.inv().unwrap();
            let b = (Fq::one(q) - a * a)
                .sqrt()
                .expect("1 - a² is a residue for an elliptic element when -1 is not");
            nonsplit_param(a, b)
        }
    };
    ConjClassLabel::new(kind, q)
}

fn classify_unipotent(x: &Psl2Element) -> ClassKind {
    let q = x.q;
    let one = Fq::one(q);
    let [mut a, mut b, mut c, mut d] = x.fq();
    if a + d != Fq::new(2, q) {
        [a, b, c, d] = [-a, -b, -c, -d];
    }
    // fixed vector e of M: (M - I) e = 0
    let (e1, e2) = if !(a - one).is_zero() || !b.is_zero() {
        (-b, a - one)
    } else {
        (d - one, -c)
    };
    // g = [e | f] with det g = 1
    let (f1, f2) = if !e1.is_zero() {
        (Fq::zero(q), e1.inv().unwrap())
    } else {
        (-e2.inv().unwrap(), Fq::zero(q))
    };
    // g⁻¹ M g = (1 u; 0 1); u = (g⁻¹ M f)_1 with g⁻¹ = (f2 -f1; -e2 e1)
    let mf1 = a * f1 + b * f2;
    let mf2 = c * f1 + d * f2;
    let u = f2 * mf1 - f1 * mf2;
    debug_assert!(!u.is_zero());
    if u.legendre() == 1 {
        ClassKind::UnipotentPlus
    } else {
        ClassKind::UnipotentMinus
    }
}

/// All `(q+5)/2` conjugacy classes in table order: identity, split, non-split,
/// `P`, `P⁻¹`.
pub fn enumerate_classes(q: u64) -> Result<Vec<ConjClassLabel>, GroupError> {
    check_supported(q)?;
    let mut kinds = vec![ClassKind::Identity];
    let split: BTreeSet<u64> = (2..q - 1)
        .map(|t| split_param(Fq::new(t as i64, q)))
        .collect();
    kinds.extend(split.into_iter().map(|t| ClassKind::Split { t }));
    for a in 0..=(q - 1) / 2 {
        let a = Fq::new(a as i64, q);
        let rhs = Fq::one(q) - a * a;
        if rhs.legendre() == 1 {
            kinds.push(nonsplit_param(a, rhs.sqrt().unwrap()));
        }
    }
    kinds.push(ClassKind::UnipotentPlus);
    kinds.push(ClassKind::UnipotentMinus);
    Ok(kinds
        .into_iter()
        .map(|k| ConjClassLabel::new(k, q))
        .collect())
}

/// Every element of `PSL₂(F_q)`, sorted. Intended for brute-force checks at
/// small `q`.
pub fn all_elements(q: u64) -> Result<Vec<Psl2Element>, GroupError> {
    if q < 3 || !is_prime(q) {
        return Err(GroupError::UnsupportedPrime(q));
    }
    let mut out = BTreeSet::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let (fa, fb, fc) = (
                    Fq::new(a as i64, q),
                    Fq::new(b as i64, q),
                    Fq::new(c as i64, q),
                );
                if let Some(ainv) = fa.inv() {
                    let d = (Fq::one(q) + fb * fc) * ainv;
                    out.insert(Psl2Element::from_fq(q, [fa, fb, fc, d]));
                } else if fb * fc == -Fq::one(q) {
                    for d in 0..q {
                        out.insert(Psl2Element::from_fq(q, [fa, fb, fc, Fq::new(d as i64, q)]));
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Torus {
    /// Non-split torus `{(a -b; b a) : a² + b² = 1}`, order `(q+1)/2`.
    H1,
    /// Split torus `{diag(t, 1/t)}`, order `(q-1)/2`.
    H2,
}

pub fn subgroup_elements(q: u64, which: Torus) -> Result<Vec<Psl2Element>, GroupError> {
    check_supported(q)?;
    let mut out = BTreeSet::new();
    match which {
        Torus::H1 => {
            for a in 0..q as i64 {
                let rhs = Fq::one(q) - Fq::new(a * a, q);
                if let Some(b) = rhs.sqrt() {
                    let b = b.value() as i64;
                    out.insert(Psl2Element::new(q, a, -b, b, a)?);
                    out.insert(Psl2Element::new(q, a, b, -b, a)?);
                }
            }
        }
        Torus::H2 => {
            for t in 1..q {
                let inv = Fq::new(t as i64, q).inv().unwrap().value();
                out.insert(Psl2Element::new(q, t as i64, 0, 0, inv as i64)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// First element (in sorted order) whose order equals the group size.
pub fn cyclic_generator(elements: &[Psl2Element]) -> Option<Psl2Element> {
    let n = elements.len() as u64;
    elements.iter().copied().find(|x| x.order() == n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(q: u64, a: i64, b: i64, c: i64, d: i64) -> Psl2Element {
        Psl2Element::new(q, a, b, c, d).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(el(7, -1, 0, 0, -1), Psl2Element::identity(7));
        assert_eq!(el(7, 6, 0, 0, 6), Psl2Element::identity(7));
        // (1, 6, 0, 1): leading 1 is already in [1, 3]
        assert_eq!(el(7, 1, -1, 0, 1).entries(), [1, 6, 0, 1]);
        // leading entry 6 > 3 flips sign
        assert_eq!(el(7, 6, 1, 0, 6).entries(), [1, 6, 0, 1]);
        assert_eq!(el(7, 0, 6, 1, 0).entries(), [0, 1, 6, 0]);
        let err = Psl2Element::new(7, 1, 1, 1, 1).unwrap_err();
        assert!(matches!(err, GroupError::InvalidElement { det: 0, .. }));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for x in all_elements(7).unwrap() {
            let [a, b, c, d] = x.entries().map(|v| v as i64);
            assert_eq!(el(7, a, b, c, d), x);
            assert_eq!(el(7, -a, -b, -c, -d), x);
        }
    }

    #[test]
    fn multiplication_examples() {
        let p = Psl2Element::unipotent(7);
        assert_eq!(p.mul(&p).unwrap().entries(), [1, 2, 0, 1]);
        let s = el(7, 0, -1, 1, 0);
        assert!(s.mul(&s).unwrap().is_identity());
        assert_eq!(s.mul(&Psl2Element::identity(7)).unwrap(), s);
        assert!(s.mul(&s.inverse()).unwrap().is_identity());
        assert_eq!(
            p.mul(&Psl2Element::unipotent(11)),
            Err(GroupError::ModulusMismatch { left: 7, right: 11 })
        );
    }

    #[test]
    fn order_examples() {
        assert_eq!(element_order(&Psl2Element::identity(7)), 1);
        assert_eq!(element_order(&Psl2Element::unipotent(7)), 7);
        assert_eq!(element_order(&Psl2Element::unipotent(23)), 23);
        assert_eq!(element_order(&el(7, 0, -1, 1, 0)), 2);
    }

    #[test]
    fn classify_examples() {
        let k = |x: Psl2Element| classify_class(&x).kind;
        assert_eq!(k(Psl2Element::unipotent(7)), ClassKind::UnipotentPlus);
        assert_eq!(k(el(7, 1, 0, 1, 1)), ClassKind::UnipotentMinus);
        assert_eq!(k(el(7, 1, -1, 0, 1)), ClassKind::UnipotentMinus);
        // diag(3, 5): eigenvalues {3, 5} ~ {±3, ±5} = {2, 3, 4, 5}
        assert_eq!(k(el(7, 3, 0, 0, 5)), ClassKind::Split { t: 2 });
        assert_eq!(k(el(7, 0, -1, 1, 0)), ClassKind::NonSplit { a: 0, b: 1 });
        assert_eq!(k(Psl2Element::identity(7)), ClassKind::Identity);
    }

    #[test]
    fn class_counts_and_sizes() {
        for q in [7u64, 11, 19, 23, 31, 43, 47] {
            let classes = enumerate_classes(q).unwrap();
            assert_eq!(classes.len() as u64, (q + 5) / 2);
            assert_eq!(classes.iter().map(|c| c.size).sum::<u64>(), group_order(q));
            for c in &classes {
                assert_eq!(classify_class(&c.kind.representative(q)), *c);
            }
        }
        let mut sizes: Vec<u64> = enumerate_classes(7)
            .unwrap()
            .iter()
            .map(|c| c.size)
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 21, 24, 24, 42, 56]);
        assert_eq!(enumerate_classes(13), Err(GroupError::UnsupportedPrime(13)));
        assert_eq!(enumerate_classes(3), Err(GroupError::UnsupportedPrime(3)));
    }

    #[test]
    fn tori() {
        for q in [7u64, 11, 19, 23] {
            let h1 = subgroup_elements(q, Torus::H1).unwrap();
            let h2 = subgroup_elements(q, Torus::H2).unwrap();
            assert_eq!(h1.len() as u64, (q + 1) / 2);
            assert_eq!(h2.len() as u64, (q - 1) / 2);
            for (h, nonsplit) in [(&h1, true), (&h2, false)] {
                for x in h.iter() {
                    for y in h.iter() {
                        assert!(h.contains(&x.mul(y).unwrap()));
                    }
                    let kind = classify_class(x).kind;
                    match kind {
                        ClassKind::Identity => {}
                        ClassKind::NonSplit { .. } => assert!(nonsplit),
                        ClassKind::Split { .. } => assert!(!nonsplit),
                        other => panic!("torus element in class {other}"),
                    }
                }
                assert!(cyclic_generator(h).is_some());
            }
        }
        assert_eq!(subgroup_elements(7, Torus::H1).unwrap().len(), 4);
        assert_eq!(subgroup_elements(7, Torus::H2).unwrap().len(), 3);
    }

    #[test]
    fn group_order_by_enumeration() {
        for q in [5u64, 7, 11, 13] {
            assert_eq!(all_elements(q).unwrap().len() as u64, group_order(q));
        }
    }
}
