//! Chain complex reduction over exact coefficient rings using steepness
//! matchings.
//!
//! The pipeline: pick a basis order, collect the steepness matching (unit
//! entries that are first in their row and last in their column), collapse
//! the matched pairs by summing zig-zag paths between critical cells, and
//! repeat until no matching remains. Over a field this ends with zero
//! boundaries and homology can be read off; over Z and its localizations a
//! small residual complex survives and torsion is extracted from it.

pub mod complex;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod matching;
pub mod matrix;
pub mod oracle;
pub mod ordering;
pub mod reduction;
pub mod ring;
pub mod torsion;
mod util;

pub use complex::ChainComplex;
pub use error::Error;
pub use matching::{index_partition, steepness_matching, validate_morse_matching, Matching};
pub use matrix::SparseMatrix;
pub use ordering::{order_columns, order_rows, ReorderSchedule};
pub use reduction::{reduce_fully, reduce_once, reduce_until_no_units, ReduceOptions, ReductionResult};
pub use ring::{Coeff, Ring};
pub use torsion::{homology_over_field, integer_homology, p_local_homology, HomologyResult};
pub use util::is_prime_u64;
