//! Exact classical simulation of single-qubit measurements on circle graph
//! states, through their encoding as fermionic Gaussian matching states.
//!
//! * [`multigraph`]: double-occurrence words, labelled Eulerian tours, splits.
//! * [`circlegraph`]: circle graphs, local complementation, cut rank, rank width.
//! * [`gaussian`]: covariance matrices, Pfaffians, overlaps and marginals.
//! * [`sector`]: reduced tours on which block Pfaffians give exact marginals.
//! * [`oracle`]: dense state-vector and Fock-space reference implementations.
//! * [`mbqc`]: adaptive measurement plans, exact conditionals and sampling.
//! * [`cli`]: the `circle-mbqc` command-line front end.

pub mod bits;
pub mod circlegraph;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod mbqc;
pub mod multigraph;
pub mod oracle;
pub mod pfaffian;
pub mod sector;

pub use circlegraph::{alternance_graph, SimpleGraph};
pub use error::{Error, Result};
pub use gaussian::{
    bloch_lift, marginal_prob, matching_covariance, overlap_full, product_covariance, BlochVector,
    MatchingCovariance, Measured, Outcome, ProductCovariance, SkewMatrix,
};
pub use mbqc::{LocalFrame, MeasurementPlan, Simulator, Transcript};
pub use multigraph::{tour_from_word, DoubleOccurrenceWord, EulerTour, HalfEdge};
