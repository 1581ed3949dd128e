pub mod clifford;
pub mod cyclo;
pub mod error;
pub mod glider;
pub mod group;
pub mod hasse;
pub mod linalg;
pub mod nilpotent;
pub mod par;
pub mod random;
pub mod registry;
pub mod rep;
pub mod suites;

pub use cyclo::CycNumber;
pub use error::{Error, Result};
