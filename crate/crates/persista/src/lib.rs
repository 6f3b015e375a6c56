//! Simplicial and CW homology over the integers and prime fields, with
//! persistent barcodes for the four standard persistence modules of a
//! filtration (absolute/relative homology/cohomology).
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: exact linear algebra (prime fields, sparse columns, Smith
//!   normal form, anti-transpose).
//! - [`core`]: simplices, complexes, chains, cells, and filtrations.
//! - [`homology`]: Betti numbers, integer homology with torsion, relative
//!   homology, and the exactness / excision / subdivision / universal
//!   coefficient checkers.
//! - [`persistence`]: boundary-matrix reduction, the four barcodes, the
//!   rank-invariant oracle, and spectra.
//! - [`io`]: the `.flt` / `.cwf` filtration formats, point clouds, the
//!   Vietoris-Rips builder, barcode TSV/JSON, and SVG diagrams.
//! - [`verify`]: seeded random instance generators and the property suites.
//! - [`cli`]: the command-line entry point.
//!
//! ```
//! use persista::fixtures;
//! use persista::algebra::PrimeField;
//! use persista::persistence::{barcode_absolute_homology, reduce};
//!
//! let filtration = fixtures::s2_filtration();
//! let field = PrimeField::new(2).unwrap();
//! let reduction = reduce(&filtration, field);
//! let barcode = barcode_absolute_homology(&reduction, &filtration);
//! assert_eq!(barcode.intervals().len(), 4);
//! ```

// Explicit indices read better than iterator chains in the dense matrix
// arithmetic that dominates this crate.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod core;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod persistence;
pub mod verify;

pub use error::{Error, Result};
