//! Knot invariants (determinant, Alexander, Jones and twisted Alexander
//! polynomials, Mahler measures) and their statistics against hyperbolic
//! volume.

pub mod alexander;
pub mod jones;
pub mod mahler;
pub mod notation;
pub mod polyring;
pub mod stats;
pub mod twisted;

pub use alexander::{alexander_poly, AlexanderError, AlexanderResult};
pub use jones::{jones_poly, JonesError, QuarterLaurentPoly};
pub use mahler::{log_mahler, MahlerMethod, MahlerValue};
pub use notation::{
    braid_to_diagram, parse_braid, parse_census, parse_pd, BraidWord, CensusRecord, KnotDiagram,
    NotationError,
};
pub use polyring::{CxLaurentPoly, IntLaurentPoly, PolyError, PolyMatrix};
pub use stats::{CorrelationReport, Population, StatsError};
pub use twisted::{load_rep, twisted_alexander, Sl2Rep, TwistedError, TwistedResult};
