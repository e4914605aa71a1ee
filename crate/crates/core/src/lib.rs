//! Exact-arithmetic machinery for gluing a genus-1 and a genus-2 curve along
//! their 2-torsion into a plane quartic, together with independent verifiers.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — the four coefficient domains: ℚ, prime fields F_p (p odd),
//!   extensions F_{p^k}, and quotient algebras ℚ\[t\]/(m).
//! * [`poly`] — dense univariate polynomials with the Euclidean toolkit.
//! * [`factor`] — Cantor–Zassenhaus, Zassenhaus/Hensel, and Trager
//!   factorization, plus checked field constructors.
//!
//! Higher layers build splitting towers with explicit Galois action, enumerate
//! isotropic subgroups of the 2-torsion pairing, construct the glued quartic
//! (both by interpolated closed forms and through the Kummer surface), and
//! verify everything by point counts and L-polynomial trace identities.

pub mod error;
pub mod factor;
pub mod field;
pub mod forms;
pub mod gluer;
pub mod intutil;
pub mod kummer;
pub mod mpoly;
pub mod poly;
pub mod tower;
pub mod twotorsion;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{Elt, Field, FieldKind};
pub use poly::Poly;
