//! The character table of `PSL₂(F_q)` for `q ≡ 3 (mod 4)`, eigenvalue
//! multiplicities of the unipotent generator, and the dimension of the
//! `ζ`-eigenspace of a formally decomposed representation.
//!
//! Families of irreducibles:
//!
//! | label        | degree    | split `t`        | non-split `ε`       | `P`   | `P⁻¹` |
//! |--------------|-----------|------------------|---------------------|-------|-------|
//! | `Trivial`    | 1         | 1                | 1                   | 1     | 1     |
//! | `Steinberg`  | q         | 1                | -1                  | 0     | 0     |
//! | `PiChi(j)`   | q+1       | χ(t) + χ(1/t)    | 0                   | 1     | 1     |
//! | `PiRho(k)`   | q-1       | 0                | -ρ(ε) - ρ(1/ε)      | -1    | -1    |
//! | `PiPlus`     | (q-1)/2   | 0                | -ρ₀(ε)              | Ḡ     | G     |
//! | `PiMinus`    | (q-1)/2   | 0                | -ρ₀(ε)              | G     | Ḡ     |
//!
//! where `G` is the sum of `ζ_q^x` over quadratic residues `x`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{lcm, CycloError, CycloNumber, DEFAULT_CONDUCTOR_CEILING};
use crate::field::{
    is_supported_prime, legendre_symbol, pow_mod, prime_factors, primitive_root, Fq,
};
use crate::psl2::{
    classify_class, enumerate_classes, group_order, subgroup_elements, ClassKind, ConjClassLabel,
    GroupError, Torus,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("q = {0} is not supported: need a prime q ≡ 3 (mod 4) with q > 3")]
    UnsupportedPrime(u64),
    #[error("exact table needs conductor {conductor}, above the ceiling {ceiling}")]
    ExactModeUnavailable { conductor: u64, ceiling: u64 },
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(
        "no nonnegative integer eigenvalue multiplicities fit degree {degree} and trace {trace}"
    )]
    NotARepresentationTrace { degree: u64, trace: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

impl From<GroupError> for TableError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::UnsupportedPrime(q) => TableError::UnsupportedPrime(q),
            other => TableError::InternalInconsistency(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IrrepLabel {
    Trivial,
    Steinberg,
    /// Principal series for the character `χ_j` of `F_q^×/{±1}`.
    PiChi(u64),
    /// Discrete series for the character `ρ_k` of `N¹/{±1}`, `ρ_k ≠ 1, ρ₀`.
    PiRho(u64),
    PiPlus,
    PiMinus,
}

impl IrrepLabel {
    pub fn degree(&self, q: u64) -> u64 {
        match self {
            IrrepLabel::Trivial => 1,
            IrrepLabel::Steinberg => q,
            IrrepLabel::PiChi(_) => q + 1,
            IrrepLabel::PiRho(_) => q - 1,
            IrrepLabel::PiPlus | IrrepLabel::PiMinus => (q - 1) / 2,
        }
    }

    fn check(&self, q: u64) -> Result<(), TableError> {
        let max = (q - 3) / 4;
        match *self {
            IrrepLabel::PiChi(j) | IrrepLabel::PiRho(j) if j == 0 || j > max => {
                Err(TableError::UnknownLabel(format!("{self} for q = {q}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Trivial => write!(f, "id"),
            IrrepLabel::Steinberg => write!(f, "St"),
            IrrepLabel::PiChi(j) => write!(f, "pi_chi{j}"),
            IrrepLabel::PiRho(k) => write!(f, "pi_rho{k}"),
            IrrepLabel::PiPlus => write!(f, "pi_plus"),
            IrrepLabel::PiMinus => write!(f, "pi_minus"),
        }
    }
}

/// Irreducible representations in table order.
pub fn irreps(q: u64) -> Vec<IrrepLabel> {
    let count = (q - 3) / 4;
    let mut out = vec![IrrepLabel::Trivial, IrrepLabel::Steinberg];
    out.extend((1..=count).map(IrrepLabel::PiChi));
    out.extend((1..=count).map(IrrepLabel::PiRho));
    out.push(IrrepLabel::PiPlus);
    out.push(IrrepLabel::PiMinus);
    out
}

/// Conductor an exact table for `q` may need: `lcm(q, (q-1)/2, (q+1)/2)`.
pub fn table_conductor(q: u64) -> u64 {
    lcm(lcm(q, (q - 1) / 2), (q + 1) / 2)
}

/// A character value written as `Σ c · ζ_n^e` before committing to exact or
/// floating-point arithmetic.
#[derive(Clone, Debug)]
struct RootSum {
    n: u64,
    terms: Vec<(i64, u64)>,
}

impl RootSum {
    fn int(c: i64) -> Self {
        RootSum {
            n: 1,
            terms: vec![(c, 0)],
        }
    }

    fn exact(&self) -> CycloNumber {
        CycloNumber::from_root_sum(self.n, &self.terms)
    }

    fn numeric(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|&(c, e)| {
                let (s, co) =
                    (std::f64::consts::TAU * (e % self.n) as f64 / self.n as f64).sin_cos();
                Complex64::new(co, s) * c as f64
            })
            .sum()
    }
}

/// Element `a + b√-1` of the norm-one group `N¹ ⊂ F_q(√-1)^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct NormOne {
    a: Fq,
    b: Fq,
}

impl NormOne {
    fn mul(self, o: NormOne) -> NormOne {
        NormOne {
            a: self.a * o.a - self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }

    fn pow(self, mut e: u64) -> NormOne {
        let q = self.a.modulus();
        let mut acc = NormOne {
            a: Fq::one(q),
            b: Fq::zero(q),
        };
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

/// Generators and discrete-log tables fixing the `χ_j`, `ρ_k` indexing.
#[derive(Clone, Debug)]
struct Parametrization {
    q: u64,
    gsplit: u64,
    gnorm1: NormOne,
    /// `t ↦ m` with `t = g^m`, for `t ∈ F_q^×`.
    split_log: HashMap<u64, u64>,
    /// `(a, b) ↦ m` with `a + b√-1 = ω^m`.
    norm1_log: HashMap<(u64, u64), u64>,
}

impl Parametrization {
    fn new(q: u64) -> Self {
        let gsplit = primitive_root(q);
        let mut split_log = HashMap::with_capacity(q as usize);
        let mut t = 1;
        for m in 0..q - 1 {
            split_log.insert(t, m);
            t = t * gsplit % q;
        }
        let gnorm1 = norm_one_generator(q);
        let mut norm1_log = HashMap::with_capacity(q as usize + 1);
        let mut e = NormOne {
            a: Fq::one(q),
            b: Fq::zero(q),
        };
        for m in 0..=q {
            norm1_log.insert((e.a.value(), e.b.value()), m);
            e = e.mul(gnorm1);
        }
        Parametrization {
            q,
            gsplit,
            gnorm1,
            split_log,
            norm1_log,
        }
    }

    /// Exponent of a split parameter in `F_q^×/{±1}` (cyclic of order `(q-1)/2`).
    fn split_exponent(&self, t: u64) -> u64 {
        self.split_log[&t] % ((self.q - 1) / 2)
    }

    /// Exponent of `a + b√-1` in `N¹/{±1}` (cyclic of order `(q+1)/2`).
    fn norm1_exponent(&self, a: u64, b: u64) -> u64 {
        self.norm1_log[&(a, b)] % ((self.q + 1) / 2)
    }

    fn entry(&self, irrep: IrrepLabel, class: ClassKind) -> RootSum {
        let q = self.q;
        let half_minus = (q - 1) / 2;
        let half_plus = (q + 1) / 2;
        let residues = |sign: i8| RootSum {
            n: q,
            terms: (1..q)
                .filter(|&x| legendre_symbol(x as i64, q) == sign)
                .map(|x| (1, x))
                .collect(),
        };
        use ClassKind::*;
        use IrrepLabel::*;
        match (irrep, class) {
            (_, Identity) => RootSum::int(irrep.degree(q) as i64),
            (Trivial, _) => RootSum::int(1),
            (Steinberg, Split { .. }) => RootSum::int(1),
            (Steinberg, NonSplit { .. }) => RootSum::int(-1),
            (Steinberg, _) => RootSum::int(0),
            (PiChi(j), Split { t }) => {
                let m = self.split_exponent(t);
                let e = j * m % half_minus;
                RootSum {
                    n: half_minus,
                    terms: vec![(1, e), (1, (half_minus - e) % half_minus)],
                }
            }
            (PiChi(_), NonSplit { .. }) => RootSum::int(0),
            (PiChi(_), _) => RootSum::int(1),
            (PiRho(_), Split { .. }) => RootSum::int(0),
            (PiRho(k), NonSplit { a, b }) => {
                let m = self.norm1_exponent(a, b);
                let e = k * m % half_plus;
                RootSum {
                    n: half_plus,
                    terms: vec![(-1, e), (-1, (half_plus - e) % half_plus)],
                }
            }
            (PiRho(_), _) => RootSum::int(-1),
            (PiPlus | PiMinus, Split { .. }) => RootSum::int(0),
            (PiPlus | PiMinus, NonSplit { a, b }) => {
                let m = self.norm1_exponent(a, b);
                RootSum::int(if m % 2 == 0 { -1 } else { 1 })
            }
            (PiPlus, UnipotentPlus) | (PiMinus, UnipotentMinus) => residues(-1),
            (PiPlus, UnipotentMinus) | (PiMinus, UnipotentPlus) => residues(1),
        }
    }
}

fn norm_one_generator(q: u64) -> NormOne {
    let order = q + 1;
    let factors = prime_factors(order);
    for a in 0..q {
        let rhs = Fq::one(q) - Fq::new((a * a) as i64, q);
        let Some(b) = rhs.sqrt() else { continue };
        let cand = NormOne {
            a: Fq::new(a as i64, q),
            b,
        };
        let unit = NormOne {
            a: Fq::one(q),
            b: Fq::zero(q),
        };
        if factors.iter().all(|&p| cand.pow(order / p) != unit) {
            return cand;
        }
    }
    unreachable!("N¹ is cyclic of order q + 1")
}

fn check_q(q: u64) -> Result<(), TableError> {
    if is_supported_prime(q) {
        Ok(())
    } else {
        Err(TableError::UnsupportedPrime(q))
    }
}

/// Exact character table.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub q: u64,
    pub classes: Vec<ConjClassLabel>,
    pub irreps: Vec<IrrepLabel>,
    /// `values[i][c]` is the character of `irreps[i]` at `classes[c]`.
    pub values: Vec<Vec<CycloNumber>>,
    /// Generator of `F_q^×` fixing the `χ_j` indexing.
    pub generator_gsplit: u64,
    /// Generator `(a, b)` of `N¹` fixing the `ρ_k` indexing.
    pub generator_gnorm1: (u64, u64),
    class_index: HashMap<ClassKind, usize>,
    irrep_index: HashMap<IrrepLabel, usize>,
}

/// Builds the table exactly, refusing when `table_conductor(q)` exceeds
/// `ceiling`.
pub fn build_character_table(q: u64, ceiling: u64) -> Result<CharacterTable, TableError> {
    check_q(q)?;
    let conductor = table_conductor(q);
    if conductor > ceiling {
        return Err(TableError::ExactModeUnavailable { conductor, ceiling });
    }
    let params = Parametrization::new(q);
    let classes = enumerate_classes(q)?;
    let irreps = irreps(q);
    let values = irreps
        .iter()
        .map(|&i| {
            classes
                .iter()
                .map(|c| params.entry(i, c.kind).exact())
                .collect()
        })
        .collect();
    Ok(CharacterTable {
        q,
        class_index: classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.kind, i))
            .collect(),
        irrep_index: irreps.iter().enumerate().map(|(i, r)| (*r, i)).collect(),
        classes,
        irreps,
        values,
        generator_gsplit: params.gsplit,
        generator_gnorm1: (params.gnorm1.a.value(), params.gnorm1.b.value()),
    })
}

pub fn build_default_character_table(q: u64) -> Result<CharacterTable, TableError> {
    build_character_table(q, DEFAULT_CONDUCTOR_CEILING)
}

impl CharacterTable {
    pub fn class_position(&self, class: ClassKind) -> Result<usize, TableError> {
        self.class_index
            .get(&class)
            .copied()
            .ok_or_else(|| TableError::UnknownLabel(format!("class {class} for q = {}", self.q)))
    }

    pub fn irrep_position(&self, irrep: IrrepLabel) -> Result<usize, TableError> {
        self.irrep_index
            .get(&irrep)
            .copied()
            .ok_or_else(|| TableError::UnknownLabel(format!("{irrep} for q = {}", self.q)))
    }

    pub fn value(&self, irrep: IrrepLabel, class: ClassKind) -> Result<&CycloNumber, TableError> {
        Ok(&self.values[self.irrep_position(irrep)?][self.class_position(class)?])
    }

    /// `(1/|G|) Σ_c |c| · χ_a(c) · conj(χ_b(c))`.
    pub fn inner_product(&self, a: IrrepLabel, b: IrrepLabel) -> Result<BigRational, TableError> {
        let (ra, rb) = (
            &self.values[self.irrep_position(a)?],
            &self.values[self.irrep_position(b)?],
        );
        let mut acc = CycloNumber::zero();
        for (c, class) in self.classes.iter().enumerate() {
            let term = ra[c].try_mul(&rb[c].conj())?;
            let term = term.scale(&BigRational::from_integer(BigInt::from(class.size)));
            acc = acc.try_add(&term)?;
        }
        let total = acc.as_rational().ok_or_else(|| {
            TableError::InternalInconsistency(format!("<{a}, {b}> is not rational: {acc}"))
        })?;
        Ok(total / BigRational::from_integer(BigInt::from(group_order(self.q))))
    }

    /// `Σ_π χ_π(c₁) · conj(χ_π(c₂))`, which is `|G| / |c₁|` when the classes
    /// agree and 0 otherwise.
    pub fn column_product(&self, c1: ClassKind, c2: ClassKind) -> Result<BigRational, TableError> {
        let (i, j) = (self.class_position(c1)?, self.class_position(c2)?);
        let mut acc = CycloNumber::zero();
        for row in &self.values {
            acc = acc.try_add(&row[i].try_mul(&row[j].conj())?)?;
        }
        acc.as_rational().ok_or_else(|| {
            TableError::InternalInconsistency(format!(
                "column product ({c1}, {c2}) is not rational"
            ))
        })
    }

    /// Multiplicity of the trivial character of the torus `which` in the
    /// restriction of `irrep`: `(1/|H|) Σ_{h ∈ H} χ(h)`.
    pub fn trivial_multiplicity_on_subgroup(
        &self,
        irrep: IrrepLabel,
        which: Torus,
    ) -> Result<u64, TableError> {
        let row = &self.values[self.irrep_position(irrep)?];
        let elements = subgroup_elements(self.q, which)?;
        let mut acc = CycloNumber::zero();
        for h in &elements {
            let c = self.class_position(classify_class(h).kind)?;
            acc = acc.try_add(&row[c])?;
        }
        let avg = acc
            .as_rational()
            .map(|r| r / BigRational::from_integer(BigInt::from(elements.len())));
        match avg {
            Some(r) if r.is_integer() && !r.is_negative() => Ok(r.to_integer().to_u64().unwrap()),
            _ => Err(TableError::InternalInconsistency(format!(
                "restriction of {irrep} to {which:?} has non-integral trivial multiplicity"
            ))),
        }
    }

    /// Trivial multiplicities per family on `which`, requiring every member of
    /// a family to agree.
    pub fn restriction_coefficients(
        &self,
        which: Torus,
    ) -> Result<RestrictionCoefficients, TableError> {
        let mut by_family: BTreeMap<&'static str, u64> = BTreeMap::new();
        for &irrep in &self.irreps {
            let family = match irrep {
                IrrepLabel::Trivial => "trivial",
                IrrepLabel::Steinberg => "steinberg",
                IrrepLabel::PiChi(_) => "chi",
                IrrepLabel::PiRho(_) => "rho",
                IrrepLabel::PiPlus => "plus",
                IrrepLabel::PiMinus => "minus",
            };
            let m = self.trivial_multiplicity_on_subgroup(irrep, which)?;
            if let Some(prev) = by_family.insert(family, m) {
                if prev != m {
                    return Err(TableError::InternalInconsistency(format!(
                        "{family} family restricts non-uniformly to {which:?}"
                    )));
                }
            }
        }
        let get = |k| by_family.get(k).copied().unwrap_or(0);
        Ok(RestrictionCoefficients {
            trivial: get("trivial"),
            steinberg: get("steinberg"),
            plus: get("plus"),
            minus: get("minus"),
            chi: get("chi"),
            rho: get("rho"),
        })
    }

    /// Eigenvalue multiplicities of `π(P⁻¹)` read from the `P⁻¹` column.
    pub fn p_table_for_irrep(&self, irrep: IrrepLabel) -> Result<PVector, TableError> {
        let trace = self.value(irrep, ClassKind::UnipotentMinus)?;
        solve_p_vector(self.q, irrep.degree(self.q), trace)
    }
}

/// Trivial-character multiplicities of each irreducible family on a torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionCoefficients {
    pub trivial: u64,
    pub steinberg: u64,
    pub plus: u64,
    pub minus: u64,
    pub chi: u64,
    pub rho: u64,
}

/// Floating-point character table, used when the exact conductor is above
/// the ceiling.
#[derive(Clone, Debug)]
pub struct NumericCharacterTable {
    pub q: u64,
    pub classes: Vec<ConjClassLabel>,
    pub irreps: Vec<IrrepLabel>,
    pub values: Vec<Vec<Complex64>>,
}

pub fn build_numeric_character_table(q: u64) -> Result<NumericCharacterTable, TableError> {
    check_q(q)?;
    let params = Parametrization::new(q);
    let classes = enumerate_classes(q)?;
    let irreps = irreps(q);
    let values = irreps
        .iter()
        .map(|&i| {
            classes
                .iter()
                .map(|c| params.entry(i, c.kind).numeric())
                .collect()
        })
        .collect();
    Ok(NumericCharacterTable {
        q,
        classes,
        irreps,
        values,
    })
}

impl NumericCharacterTable {
    pub fn inner_product(&self, a: usize, b: usize) -> Complex64 {
        let total: Complex64 = self
            .classes
            .iter()
            .enumerate()
            .map(|(c, class)| self.values[a][c] * self.values[b][c].conj() * class.size as f64)
            .sum();
        total / group_order(self.q) as f64
    }

    pub fn column_product(&self, c1: usize, c2: usize) -> Complex64 {
        self.values.iter().map(|row| row[c1] * row[c2].conj()).sum()
    }
}

/// Multiplicities `p(n)` of `ζ^n` as an eigenvalue of `π(P⁻¹)`, `n = 0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PVector(pub Vec<u64>);

impl PVector {
    pub fn get(&self, n: usize) -> u64 {
        self.0[n]
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Recovers eigenvalue multiplicities from the degree and the trace
/// `Σ p(n) ζ^n`.
///
/// In the basis `1, ζ, …, ζ^{q-2}` the trace has coefficients
/// `p(n) - p(q-1)`; the degree equation then pins `p(q-1)`.
pub fn solve_p_vector(q: u64, degree: u64, trace: &CycloNumber) -> Result<PVector, TableError> {
    let fail = || TableError::NotARepresentationTrace {
        degree,
        trace: trace.to_string(),
    };
    if q % trace.conductor() != 0 {
        return Err(fail());
    }
    let coeffs: Vec<BigRational> = if trace.conductor() == q {
        trace.coeffs()
    } else {
        // rational trace: only the constant coefficient is nonzero
        let mut c = vec![BigRational::zero(); q as usize - 1];
        c[0] = trace.as_rational().ok_or_else(fail)?;
        c
    };
    if coeffs.iter().any(|c| !c.is_integer()) {
        return Err(fail());
    }
    let diffs: Vec<BigInt> = coeffs.into_iter().map(|c| c.to_integer()).collect();
    let sum: BigInt = diffs.iter().sum();
    let rest = BigInt::from(degree) - sum;
    let qb = BigInt::from(q);
    if (&rest % &qb) != BigInt::zero() {
        return Err(fail());
    }
    let last = rest / qb;
    let mut p = Vec::with_capacity(q as usize);
    for d in diffs.iter().chain(std::iter::once(&BigInt::zero())) {
        let v = d + &last;
        if v.is_negative() {
            return Err(fail());
        }
        p.push(v.to_u64().ok_or_else(fail)?);
    }
    Ok(PVector(p))
}

/// Eigenvalue multiplicities of `π(P⁻¹)` without building the full table;
/// only the `P⁻¹` column (conductor `q`) is needed.
pub fn p_vector_for(q: u64, irrep: IrrepLabel) -> Result<PVector, TableError> {
    check_q(q)?;
    irrep.check(q)?;
    let trace = match irrep {
        IrrepLabel::Trivial => CycloNumber::one(),
        IrrepLabel::Steinberg => CycloNumber::zero(),
        IrrepLabel::PiChi(_) => CycloNumber::one(),
        IrrepLabel::PiRho(_) => CycloNumber::from_integer(-1),
        IrrepLabel::PiPlus | IrrepLabel::PiMinus => {
            let sign = if irrep == IrrepLabel::PiPlus { 1 } else { -1 };
            let terms: Vec<(i64, u64)> = (1..q)
                .filter(|&x| legendre_symbol(x as i64, q) == sign)
                .map(|x| (1, x))
                .collect();
            CycloNumber::from_root_sum(q, &terms)
        }
    };
    solve_p_vector(q, irrep.degree(q), &trace)
}

/// Multiplicities of a representation in terms of the irreducibles that can
/// occur in weight-2 cusp forms (the trivial representation cannot).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecompVector {
    pub x: u64,
    pub y_plus: u64,
    pub y_minus: u64,
    pub u: BTreeMap<u64, u64>,
    pub v: BTreeMap<u64, u64>,
}

impl DecompVector {
    pub fn total_u(&self) -> u64 {
        self.u.values().sum()
    }

    pub fn total_v(&self) -> u64 {
        self.v.values().sum()
    }

    pub fn total_y(&self) -> u64 {
        self.y_plus + self.y_minus
    }

    /// `S = Y + 2U + 2V`.
    pub fn s(&self) -> u64 {
        self.total_y() + 2 * self.total_u() + 2 * self.total_v()
    }

    /// Dimension of the fixed space of a torus, from per-family restriction
    /// coefficients.
    pub fn subgroup_invariant(&self, coeffs: &RestrictionCoefficients) -> u64 {
        coeffs.steinberg * self.x
            + coeffs.plus * self.y_plus
            + coeffs.minus * self.y_minus
            + coeffs.chi * self.total_u()
            + coeffs.rho * self.total_v()
    }

    fn components(&self) -> impl Iterator<Item = (IrrepLabel, u64)> + '_ {
        [
            (IrrepLabel::Steinberg, self.x),
            (IrrepLabel::PiPlus, self.y_plus),
            (IrrepLabel::PiMinus, self.y_minus),
        ]
        .into_iter()
        .chain(self.u.iter().map(|(&j, &m)| (IrrepLabel::PiChi(j), m)))
        .chain(self.v.iter().map(|(&k, &m)| (IrrepLabel::PiRho(k), m)))
    }
}

/// Dimension of `{w : P⁻¹ w = ζ w}` in `E₂(Γ(q)) ⊕ W`, where `W` is the
/// cusp-form representation described by `cusp_forms` and the Eisenstein part
/// is `St ⊕ 2 Σ_χ π_χ`.
pub fn zeta_eigenspace_dim(q: u64, cusp_forms: &DecompVector) -> Result<u64, TableError> {
    check_q(q)?;
    let mut p_one = HashMap::new();
    let mut eigen = |irrep: IrrepLabel| -> Result<u64, TableError> {
        if let Some(&v) = p_one.get(&irrep) {
            return Ok(v);
        }
        let v = p_vector_for(q, irrep)?.get(1);
        p_one.insert(irrep, v);
        Ok(v)
    };
    let mut dim = 0;
    for (irrep, mult) in cusp_forms.components() {
        if mult > 0 {
            dim += mult * eigen(irrep)?;
        }
    }
    dim += eigen(IrrepLabel::Steinberg)?;
    for j in 1..=(q - 3) / 4 {
        dim += 2 * eigen(IrrepLabel::PiChi(j))?;
    }
    Ok(dim)
}

/// Degree of `E₂(Γ(q)) = St ⊕ 2 Σ_χ π_χ`.
pub fn eisenstein_degree(q: u64) -> u64 {
    q + 2 * ((q - 3) / 4) * (q + 1)
}

/// Order of `g` in `F_q^×`; exposed for checks on the chosen generator.
pub fn multiplicative_order(g: u64, q: u64) -> u64 {
    let n = q - 1;
    let mut order = n;
    for p in prime_factors(n) {
        while order % p == 0 && pow_mod(g, order / p, q) == 1 {
            order /= p;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn degrees_and_counts() {
        let t = build_default_character_table(7).unwrap();
        let degrees: Vec<u64> = t.irreps.iter().map(|i| i.degree(7)).collect();
        assert_eq!(degrees, vec![1, 7, 8, 6, 3, 3]);
        assert_eq!(degrees.iter().map(|d| d * d).sum::<u64>(), 168);
        for q in [11u64, 19, 23] {
            let labels = irreps(q);
            assert_eq!(labels.len() as u64, (q + 5) / 2);
            let sq: u64 = labels.iter().map(|i| i.degree(q).pow(2)).sum();
            assert_eq!(sq, group_order(q));
        }
        assert_eq!(multiplicative_order(t.generator_gsplit, 7), 6);
    }

    #[test]
    fn table_entries_q7() {
        let t = build_default_character_table(7).unwrap();
        let gbar = CycloNumber::from_root_sum(7, &[(1, 3), (1, 5), (1, 6)]);
        assert_eq!(
            t.value(IrrepLabel::PiPlus, ClassKind::UnipotentPlus)
                .unwrap(),
            &gbar
        );
        assert!(t
            .value(IrrepLabel::Steinberg, ClassKind::UnipotentPlus)
            .unwrap()
            .is_zero());
        for c in &t.classes {
            assert_eq!(
                t.value(IrrepLabel::Trivial, c.kind).unwrap(),
                &CycloNumber::one()
            );
        }
        assert!(t
            .value(IrrepLabel::PiRho(1), ClassKind::Split { t: 2 })
            .unwrap()
            .is_zero());
        assert_eq!(
            t.value(IrrepLabel::PiChi(1), ClassKind::UnipotentPlus)
                .unwrap(),
            &CycloNumber::one()
        );
        // the 3-dimensional characters of PSL₂(F₇): -1 on involutions, 1 on order-4 elements
        assert_eq!(
            t.value(IrrepLabel::PiPlus, ClassKind::NonSplit { a: 0, b: 1 })
                .unwrap(),
            &CycloNumber::from_integer(-1)
        );
        let err = t
            .value(IrrepLabel::PiChi(5), ClassKind::Identity)
            .unwrap_err();
        assert!(matches!(err, TableError::UnknownLabel(_)));
    }

    #[test]
    fn orthogonality_small() {
        for q in [7u64, 11] {
            let t = build_default_character_table(q).unwrap();
            for &a in &t.irreps {
                for &b in &t.irreps {
                    let expected = if a == b { rat(1) } else { rat(0) };
                    assert_eq!(t.inner_product(a, b).unwrap(), expected, "<{a},{b}> q={q}");
                }
            }
            for c1 in &t.classes {
                for c2 in &t.classes {
                    let expected = if c1 == c2 {
                        rat((group_order(q) / c1.size) as i64)
                    } else {
                        rat(0)
                    };
                    assert_eq!(t.column_product(c1.kind, c2.kind).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn exact_mode_ceiling() {
        let err = build_character_table(23, 1000).unwrap_err();
        assert_eq!(
            err,
            TableError::ExactModeUnavailable {
                conductor: 3036,
                ceiling: 1000
            }
        );
        assert_eq!(
            build_default_character_table(13).unwrap_err(),
            TableError::UnsupportedPrime(13)
        );
    }

    #[test]
    fn restriction_examples() {
        let t7 = build_default_character_table(7).unwrap();
        assert_eq!(
            t7.trivial_multiplicity_on_subgroup(IrrepLabel::Steinberg, Torus::H2)
                .unwrap(),
            3
        );
        assert_eq!(
            t7.trivial_multiplicity_on_subgroup(IrrepLabel::Steinberg, Torus::H1)
                .unwrap(),
            1
        );
        let t11 = build_default_character_table(11).unwrap();
        assert_eq!(
            t11.trivial_multiplicity_on_subgroup(IrrepLabel::PiPlus, Torus::H1)
                .unwrap(),
            1
        );
    }

    #[test]
    fn p_vector_examples() {
        let q = 7;
        let g = CycloNumber::from_root_sum(7, &[(1, 1), (1, 2), (1, 4)]);
        let plus = solve_p_vector(q, 3, &g).unwrap();
        assert_eq!(plus.0, vec![0, 1, 1, 0, 1, 0, 0]);
        assert_eq!(
            solve_p_vector(q, 1, &CycloNumber::one()).unwrap().0,
            vec![1, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            solve_p_vector(q, 7, &CycloNumber::zero()).unwrap().0,
            vec![1; 7]
        );
        let err = solve_p_vector(q, 2, &g).unwrap_err();
        assert!(matches!(err, TableError::NotARepresentationTrace { .. }));
        let err = solve_p_vector(q, 3, &crate::cyclotomic::zeta_power(5, 1)).unwrap_err();
        assert!(matches!(err, TableError::NotARepresentationTrace { .. }));
    }

    #[test]
    fn p_tables_from_table_match_shortcut() {
        let t = build_default_character_table(11).unwrap();
        for &irrep in &t.irreps {
            let p = t.p_table_for_irrep(irrep).unwrap();
            assert_eq!(p, p_vector_for(11, irrep).unwrap());
            assert_eq!(p.degree(), irrep.degree(11));
        }
    }

    #[test]
    fn eigenspace_examples() {
        let zero = DecompVector::default();
        assert_eq!(zeta_eigenspace_dim(7, &zero).unwrap(), 3);
        let minus = DecompVector {
            y_minus: 5,
            ..Default::default()
        };
        assert_eq!(zeta_eigenspace_dim(7, &minus).unwrap(), 3);
        let st = DecompVector {
            x: 2,
            ..Default::default()
        };
        assert_eq!(zeta_eigenspace_dim(7, &st).unwrap(), 5);
        let bad = DecompVector {
            u: BTreeMap::from([(9, 1)]),
            ..Default::default()
        };
        assert!(zeta_eigenspace_dim(7, &bad).is_err());
    }

    #[test]
    fn eisenstein_degree_bookkeeping() {
        // q + 2·(q-3)/4·(q+1) equals the number of cusps of Γ(q) minus one
        for q in [7u64, 11, 19, 23, 31, 43] {
            assert_eq!(eisenstein_degree(q), (q * q - 1) / 2 - 1);
        }
    }

    #[test]
    fn numeric_table_agrees_with_exact() {
        let exact = build_default_character_table(19).unwrap();
        let numeric = build_numeric_character_table(19).unwrap();
        for (er, nr) in exact.values.iter().zip(&numeric.values) {
            for (e, n) in er.iter().zip(nr) {
                assert!((e.to_complex() - n).norm() < 1e-9);
            }
        }
    }
}
