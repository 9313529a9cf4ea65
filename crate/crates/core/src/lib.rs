//! Free groups, their automorphisms, and the complex of unimodular tuples.
//!
//! The crate is organised bottom-up:
//!
//! * [`word`]: reduced words in the free group `F_n`, conjugacy and quotients.
//! * [`automorphism`]: automorphisms as basis-image maps carrying exact inverses,
//!   the standard generator families and abelianization to `GL_n(Z)`.
//! * [`lift`]: constructive lifts of unimodular matrices and basis completion.
//! * [`expr`]: a small text language for products of generators.
//! * [`relations`]: exhaustive checks of the explicit identities among generators.
//! * [`birman`]: stabilizers of conjugacy classes, the Birman kernel and the
//!   homomorphism onto `Hom(Z^n / V, V)`.
//! * [`matrix`], [`snf`], [`lattice`], [`complex`], [`bn`]: exact integer linear
//!   algebra, simplicial complexes with integral homology, and truncations of
//!   the complex `B_n(Z)`.
//! * [`cli`]: the batch front end behind the `freeaut` binary.
//!
//! Integer linear algebra is generic over [`IntRing`]; the aliases below fix the
//! arbitrary-precision instantiation used by the group-theoretic modules.

pub mod automorphism;
pub mod birman;
pub mod bn;
pub mod cli;
pub mod complex;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod lift;
pub mod matrix;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod snf;
pub mod word;

pub use automorphism::{Classification, FreeAutomorphism, GeneratorSpec};
pub use error::{Error, Result};
pub use scalar::IntRing;
pub use word::{ConjugacyClass, Letter, Word};

/// Arbitrary-precision integers.
pub type Int = num_bigint::BigInt;
/// Exact integer matrix (abelianized automorphisms, SNF factors).
pub type IntMatrix = matrix::Matrix<Int>;
/// Smith normal form over arbitrary-precision integers.
pub type IntSnf = snf::SnfResult<Int>;
/// Small-coordinate lattice vector used as a vertex of `B_n(Z)`.
pub type LatticeVector = Vec<i64>;
/// Machine-word matrix, adequate for the bounded coordinates of `B_n(Z)` truncations.
pub type SmallMatrix = matrix::Matrix<i64>;
