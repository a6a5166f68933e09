//! Exact-arithmetic analysis of expanding Lorenz maps.

pub mod config;
pub mod error;
pub mod interval_dynamics;
pub mod limits;
pub mod lorenz_map;
pub mod numerics;
pub mod periods;
pub mod renorm;

pub use config::AnalysisConfig;
pub use error::{Error, Result};
