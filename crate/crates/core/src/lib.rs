//! Exact verification of Hecke's identity `m₊ − m₋ = h(−q)` for primes
//! `q ≡ 3 (mod 4)`, `q > 3`.
//!
//! The identity compares two computations of the dimension `z` of the space
//! of weight-2 modular forms for `Γ(q)` on which `P = (1 1; 0 1)` acts by
//! `ζ = exp(2πi/q)`:
//!
//! * the representation-theoretic side decomposes the space under
//!   `PSL₂(F_q)` and reads eigenvalue multiplicities off the character table
//!   ([`psl2`], [`cyclotomic`], [`character_table`]);
//! * the Riemann–Roch side counts a divisor on `X₁(q)` built from cusp
//!   parameters of a multiplier system ([`modcurve`]).
//!
//! [`hecke`] ties the two together and checks the result against an
//! independent class-number computation by reduced binary quadratic forms.

pub mod character_table;
pub mod cyclotomic;
pub mod export;
pub mod field;
pub mod hecke;
pub mod modcurve;
pub mod psl2;

pub use character_table::{build_character_table, CharacterTable, IrrepLabel};
pub use cyclotomic::{gauss_sum, zeta_power, CycloNumber};
pub use field::{is_supported_prime, legendre_symbol};
pub use hecke::{sweep_verify, verify_hecke_identity, HeckeReport};
pub use modcurve::{cusp_representatives, divisor_summary, DivisorSummary};
pub use psl2::{classify_class, enumerate_classes, ClassKind, ConjClassLabel, Psl2Element};
