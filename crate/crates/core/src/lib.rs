//! Mesoscopic Cosserat continuum with torsion and curvature defect
//! measures: kinematics, constitutive closure, Euler–Lagrange balances,
//! configurational (Noether) currents and the worked example families.

pub mod balance;
pub mod configurational;
pub mod constitutive;
pub mod defect;
pub mod error;
pub mod params;
pub mod report;
pub mod scenarios;
pub mod state;
pub mod wave;

pub use balance::{el_residuals, induced_sources, SourceFields, SpecialCase};
pub use error::CoreError;
pub use params::MaterialParameters;
pub use report::{Norms, ResidualReport};
pub use state::{CosseratState, Trajectory};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
