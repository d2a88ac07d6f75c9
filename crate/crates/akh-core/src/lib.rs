//! Annular Khovanov homology with its chain-level sl2 action, and the 0-,
//! 1- and 2-dimensional framed moduli data of the flow category refining
//! the mapping cone of E, F or H.
//!
//! The pipeline: parse a Morse word in the cut-open annulus
//! ([`diagram`]), build the cube of resolutions and its annular TQFT
//! differential ([`algebra`], [`complex`]), act by sl2 ([`sl2`]), compute
//! exact integer homology ([`homology`]), and construct and verify the
//! framed moduli data ([`moduli`]).

pub mod algebra;
pub mod complex;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod moduli;
pub mod sl2;

pub use algebra::{Generator, Label, TriDegree};
pub use complex::{build_ckh, build_cone, CubeComplex};
pub use diagram::{parse_morse_word, AnnularDiagram, Resolution};
pub use error::{AkhError, Result};
pub use homology::{homology, induced_map, verify_les, HomologyTable};
pub use moduli::{check_thin_props, verify_closure_3d, verify_squares, LadybugChoice};
pub use sl2::{verify_sl2, Sl2Op};

/// Default crossing-count bound for the exhaustive verification suites
/// (the cone cube has 2^(n+1) vertices).
pub const DEFAULT_MAX_CROSSINGS: usize = 10;

/// Configure the global worker pool from a thread count (0 = default).
/// Later calls are ignored, matching rayon's global pool semantics.
pub fn configure_threads(threads: usize) {
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}
