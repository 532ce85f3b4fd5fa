//! Polynomial measurement maps over hypergraphs: rigidity testing, distinct-value
//! censuses, isometry energy, pinned-distance colourings and witness point sets.

pub mod affine;
pub mod census;
pub mod colour_pin;
pub mod error;
pub mod experiment;
pub mod group;
pub mod hypergraph;
pub mod linalg;
pub mod metric;
pub mod pointset;
pub mod rational;
pub mod rigidity;
pub mod scalar;

pub use affine::AffineMap;
pub use error::{Error, Result};
pub use hypergraph::{EdgeColouring, Hypergraph};
pub use metric::{Metric, MetricKind, Symmetry};
pub use rational::Q;
