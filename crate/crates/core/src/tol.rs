//! Numerical tolerances shared across the crate. All residuals are max-norm
//! (largest absolute entry) unless a function says otherwise.

/// Max entry-wise deviation `|M - M†|` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Max deviation of `Σ E†E` from the identity accepted for a Kraus family.
pub const CHANNEL: f64 = 1e-9;

/// Lower bound accepted on positivity condition values and eigenvalues.
pub const POSITIVITY: f64 = 1e-9;

/// Adjoint residual below which an observable counts as masked.
pub const MASKING: f64 = 1e-9;

/// Band around the maskability boundary counted as maskable.
pub const BOUNDARY: f64 = 1e-9;

/// Trace and normalization checks.
pub const NORMALIZATION: f64 = 1e-9;

/// Orthonormality and unitarity checks.
pub const UNITARY: f64 = 1e-9;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_RELATIVE: f64 = 1e-9;

/// Distances below this are treated as zero in geometric constructions.
pub const GEOMETRY: f64 = 1e-12;
