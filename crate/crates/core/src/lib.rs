//! Stable commutator length in graph products of groups.
//!
//! Exact rational linear programming for vertex chains and fractional
//! stability numbers, the graph-product word algebra (normal forms, pure
//! factors, centralizers, CM-reduction), spectral-gap certificates, counting
//! quasimorphisms and the random-graph statistics.

pub mod chain;
pub mod cm;
pub mod free;
pub mod graph;
pub mod io;
pub mod lp;
pub mod presentation;
pub mod qm;
pub mod random;
pub mod scalar;
pub mod scl;
pub mod stats;
pub mod word;

pub use num_rational::BigRational;

/// The exact scalar used throughout.
pub type Rational = BigRational;

pub use graph::{Clique, GraphError, SimplicialGraph, VertexSet};
pub use presentation::{Chain, Element, Letter, Presentation, VertexKind, Word, WordError};
pub use scalar::{format_rational, parse_rational, ExactField};
pub use lp::{LinearProgram, LpError, LpSolution, LpStatus};

/// The exact linear program used by the solvers.
pub type RationalLp = LinearProgram<Rational>;
pub use scl::{fsn, GapCertificate, SclError};
