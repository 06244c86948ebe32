//! Knot Floer homology of two-bridge knots from twisted toroidal grid diagrams.

pub mod complex;
pub mod diagram;
pub mod error;
pub mod f2;
pub mod gradings;
pub mod oracle;
pub mod twobridge;

pub use error::{CheckError, Error, ParamError, Result};
pub use twobridge::{
    are_equivalent, knot_classes, normalize_params, params_from_crossings, CrossingWord,
    TwoBridgeParams,
};

/// Library version, recorded in reports and cache keys.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
