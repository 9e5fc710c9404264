//! Masking of quantum observables.
//!
//! An observable `O` is masked by a channel `E` when the Heisenberg-picture
//! image `E*(O)` is the identity, so nothing about `O` survives locally. This
//! crate decides which observables admit such a channel, builds maskers and
//! their unitary dilations, characterizes sets of observables that a single
//! channel masks together, and replays the reduction from perfect
//! concealment in bit commitment to a masking channel.
//!
//! Modules, bottom-up:
//!
//! - [`algebra`]: dense complex matrices, Hermitian eigensolver, partial
//!   trace, Schmidt decomposition, unitary completion.
//! - [`bloch`]: SU(d) generator bases and Bloch-vector codecs.
//! - [`channels`]: Kraus channels, adjoints, dilations.
//! - [`masking`]: maskability decisions and masker construction.
//! - [`comask`]: comaskable sets as affine sets in coefficient space.
//! - [`bitcommit`]: commitment pairs, cheating unitaries, measure-and-prepare.

pub mod algebra;
pub mod bitcommit;
pub mod bloch;
pub mod channels;
pub mod comask;
mod error;
pub mod masking;
pub mod random;
pub mod report;
pub mod selftest;
pub mod tol;

pub use algebra::{ComplexMatrix, HermitianEig, SchmidtData, Subsystem, C64};
pub use bitcommit::{CheatResult, CommitmentPair, DemoReport};
pub use bloch::{BlochVector, GeneratorBasis, ObservableCoeffs, SymmetricTensor};
pub use channels::{KrausChannel, UnitaryDilation};
pub use comask::{AffineSet, ComaskDescription, ComaskKind};
pub use error::{Error, Result};
pub use masking::{MaskabilityVerdict, OutputDisk, VerdictMethod};
pub use report::RunReport;
