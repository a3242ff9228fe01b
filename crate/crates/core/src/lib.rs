//! Exact computation of the boundary of chaos in two-parameter families of
//! piecewise expanding plateau maps.
//!
//! Everything is done in exact rational arithmetic over integer-slope affine covers,
//! so entropy positivity, box corners and kneading sequences are decided without
//! tolerances. Floats only appear as labelled estimates (entropy values, dimensions).

pub mod boundary;
pub mod covers;
pub mod error;
pub mod markov;
pub mod parallel;
pub mod rational;
pub mod renorm;
pub mod symbolic;

pub use boundary::{alpha_of_c, anharmonic_point, classify_point, heteroclinic_segment, trace, BoundaryClass, LineResult};
pub use covers::{canonical_cover, DoubleCover, PlateauConfig, Side};
pub use error::{Error, Result};
pub use markov::{build_markov, entropy, is_chaotic, survivor_dimension, MarkovSystem};
pub use rational::Rational;
pub use renorm::{box_tree, child_boxes, descend, ParamBox, Rect};
pub use symbolic::{ClassLabel, KneadingInvariant, SymbolSequence, Word};
