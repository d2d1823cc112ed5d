//! Exact computation of minimal multigraded free resolutions of
//! Stanley–Reisner rings through homotopy transfer on the Koszul complex,
//! together with the higher cohomology operations it produces and the
//! equivariant formality tests built on them.

pub mod corpus;
pub mod error;
pub mod exactla;
pub mod field;
pub mod fixtures;
pub mod formats;
pub mod graded;
pub mod koszul;
pub mod mvss;
pub mod oracle;
pub mod pipeline;
pub mod resolution;
pub mod simplicial;
pub mod torus;
pub mod transfer;

pub use error::Error;
pub use field::{Field, FieldSpec, PrimeField, Rational, Rationals};
pub use pipeline::MomentAngle;
pub use simplicial::{SimplicialComplex, VertexSet};

/// Sizes the global rayon pool from `SRRES_THREADS` (if set and positive).
/// Later calls are no-ops.
pub fn init_threads() {
    if let Some(n) = std::env::var("SRRES_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
