//! Differential forms over 2D/3D Euclidean domains with two interchangeable
//! backings: Taylor jets at a point (exact derivatives) and grid samples
//! (second-order finite differences).

pub mod error;
pub mod field;
pub mod form;
pub mod grid;
pub mod jet;
pub mod valued;

pub use error::FormError;
pub use field::{Field, JetDomain};
pub use form::{Form, VectorField};
pub use grid::{Boundary, Grid, GridField, Samples};
pub use jet::Jet;
pub use valued::{FrameForm, RotForm, ValueKind, ValuedForm};
