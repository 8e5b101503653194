//! Exact computations around `K_2` of `p`-adic group rings of finite abelian
//! `p`-groups: Smith normal forms, `HC_1`, `H̃_2`, Kähler differentials, the
//! integral logarithm `Γ_G` and closed structure formulas.

pub mod error;
pub mod exactlin;
pub mod grpring;
pub mod homology;
pub mod ktmaps;
pub mod padic;
pub mod parse;
pub mod pgroups;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use num_bigint::BigInt;

/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = exactlin::Matrix<BigInt>;
pub type IntSmithForm = exactlin::SmithForm<BigInt>;
/// Machine-word matrices, for callers who know their entries stay small.
pub type I64Matrix = exactlin::Matrix<i64>;

pub use exactlin::{InvariantFactorGroup, PresentedAbGroup};
pub use grpring::{GroupRingElem, GroupTable};
pub use padic::PadicScaled;
pub use pgroups::{GroupElement, PGroupShape};
