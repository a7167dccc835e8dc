//! Exact calculator for the graded homotopy modules of topological Hochschild
//! homology of truncated Brown-Peterson spectra, together with a one-step
//! Brun spectral sequence engine and a verification harness.

pub mod arith;
pub mod brun;
pub mod catalog;
pub mod graded;
pub mod verify;

pub use arith::{cokernel_p, nu_p, AbelianGroup, ArithError, IntMat, Prime};
pub use graded::{
    DegreeRecord, GenLabel, Generator, GradedError, GradedMap, Monomial, Presentation, Relation,
};

/// Cap the global worker pool (first call wins; later calls are ignored).
pub fn init_thread_cap(cap: Option<usize>) {
    if let Some(k) = cap {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global();
    }
}
