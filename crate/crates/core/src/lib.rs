//! Girth-based correction guarantees for left-regular LDPC codes under
//! bit-flipping decoding.
//!
//! The crate evaluates Moore-type bounds exactly, measures expansion and
//! trapping-set structure of concrete Tanner graphs by exhaustive
//! enumeration, and builds the cage-based gadgets that show where the
//! guarantees stop.
//!
//! Bound formulas are generic over [`scalar::Scalar`]; [`Rational`] is the
//! exact instantiation used by every report.

pub mod alist;
pub mod analysis;
pub mod bounds;
pub mod cages;
pub mod decoder;
pub mod error;
pub mod generate;
pub mod graph;
pub mod scalar;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{CheckPartition, Girth, Graph, TannerGraph};

/// Exact rational used for bounds, thresholds and expansion ratios.
pub type Rational = num_rational::Ratio<i128>;

/// Floating-point evaluation of the bound formulas.
pub type Approx = f64;
