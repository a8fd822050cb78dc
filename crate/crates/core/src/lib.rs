//! Eulerian orientations of graphs: exact counts, the subgraph polynomial
//! `P_G` and its zeros, normalized entropies, local statistics and the
//! normal-factor-graph gauge argument.

pub mod entropy;
pub mod error;
pub mod generators;
pub mod graph;
pub mod local;
pub mod nfg;
pub mod numeric;
pub mod orient;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod subgraph;

pub use entropy::{EntropyReport, SequenceOptions, SequenceReport};
pub use error::{Error, Result};
pub use generators::FamilySpec;
pub use graph::{DegreeHistogram, EdgeSet, Graph, VertexOrigin};
pub use local::{LocalProfile, RootedBall};
pub use nfg::{GaugeSet, NormalFactorGraph};
pub use orient::{CountMethod, CountResult, Orientation};
pub use poly::RationalPolynomial;
pub use scalar::{ExactScalar, Matrix};
pub use spectral::RootMeasureSummary;
pub use subgraph::WeightVector;
