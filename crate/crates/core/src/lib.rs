//! Subgroup-lattice analysis and 2-box calculus for finite groups.
//!
//! The crate exposes five layers:
//!
//! * [`perm`] / [`group`] / [`catalogue`] — exact permutation-group
//!   arithmetic: closure, subgroups, cosets, conjugacy classes.
//! * [`lattice`] — full subgroup lattices, interval analysis
//!   (distributivity, Boolean-ness, complements), H-cyclicity,
//!   Boolean chain bounds.
//! * [`rep`] — numeric complex character tables, fixed-point dimensions,
//!   pointwise stabilizers, linear primitivity, fusion coefficients.
//! * [`twobox`] — the two concrete 2-box models `ℂ^G` and `ℂG` with
//!   product, coproduct, Fourier transform, range projections and
//!   biprojection generation.
//! * [`verify`] — theorem-level suites that orchestrate everything and
//!   emit structured, reproducible reports.

pub mod bits;
pub mod catalogue;
pub mod config;
pub mod error;
pub mod group;
pub mod jsonutil;
pub mod lattice;
pub mod perm;
pub mod rep;
pub mod spectral;
pub mod twobox;
pub mod verify;

pub use config::{Config, OutputFormat};
pub use error::{Error, Result};
pub use group::{CosetSide, Group, SubgroupHandle};
pub use lattice::{ChainMode, Interval, LatticeProfile, SubgroupLattice};
pub use perm::Permutation;
pub use rep::{CharacterTable, FusionTensor, StructureConstants};
pub use twobox::{Biprojection, TwoBoxElement, TwoBoxModel};
pub use verify::{Verdict, VerificationReport, VerifyContext};
