//! Exact, finitary model of the compact Hausdorff topologies `𝒯ₙ` on the
//! natural numbers, the spaces of continuous functions they carry, and the
//! l₁ duality between those spaces and finitely supported sequences.
//!
//! Modules, bottom up:
//!
//! - [`settops`]: residue-tail sets, the Boolean algebra holding every open
//!   and closed set used here, with the basic opens `A_{k,l}`.
//! - [`topology`]: openness, closure, Hausdorff separation, finite subcovers,
//!   the metric, the accumulation-point invariant and Appert's topology.
//! - [`sequences`]: convergence of ultimately affine sequences.
//! - [`funcspace`]: continuous functions eventually constant on classes.
//! - [`duality`]: l₁ norms, pairing, norming certificates, characters.

pub mod duality;
pub mod error;
pub mod funcspace;
pub mod scalar;
pub mod sequences;
pub mod settops;
pub mod topology;

pub use duality::{CharacterVerdict, L1Vec, NormingCert};
pub use error::{Error, Result};
pub use funcspace::CFunc;
pub use scalar::{Mode, Rational, Real, Scalar};
pub use sequences::{IndexSelector, LimitVerdict, UaSeq};
pub use settops::{RawRtSet, RtSet};
pub use topology::{CoverSpec, SeparationCert, TopologyId};
