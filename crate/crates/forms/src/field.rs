//! Scalar coefficient fields behind every form component.

use crate::jet::{Jet, TIME};
use std::fmt::Debug;

/// Coefficient algebra shared by the analytic (jet) and grid backings.
///
/// `Domain` carries whatever is needed to create constants and to take
/// spatial derivatives: an expansion point for jets, a grid for samples.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Domain: Clone + Debug + Send + Sync + PartialEq;

    fn dim(domain: &Self::Domain) -> usize;
    fn constant(domain: &Self::Domain, c: f64) -> Self;
    /// The material coordinate X_axis.
    fn coordinate(domain: &Self::Domain, axis: usize) -> Self;
    /// Structural zero test; `false` does not imply a nonzero value.
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, k: f64) -> Self;
    fn partial(&self, domain: &Self::Domain, axis: usize) -> Self;
    /// Exact time derivative when the backing carries one.
    fn time_derivative(&self) -> Option<Self>;
    /// Forgets time information (used after time stepping).
    fn freeze_time(&self) -> Self;
    /// Max-abs over the sample set (a single point for jets).
    fn norm_inf(&self) -> f64;
    /// Sum of squares and number of samples.
    fn sum_squares(&self) -> (f64, usize);
}

/// Expansion point shared by all jets of one evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct JetDomain {
    pub dim: usize,
    /// (x, y, z, t)
    pub point: [f64; 4],
    pub order: usize,
    pub time: bool,
}

impl JetDomain {
    pub fn new(dim: usize, point: [f64; 4], order: usize) -> Self {
        JetDomain {
            dim,
            point,
            order,
            time: true,
        }
    }

    /// Seed jets for (x, y, z, t).
    pub fn seeds(&self) -> [Jet; 4] {
        [0, 1, 2, 3].map(|v| {
            if v < self.dim || (v == TIME && self.time) {
                Jet::variable(v, self.point[v], self.order, self.time)
            } else {
                Jet::constant(self.point[v])
            }
        })
    }

    pub fn time(&self) -> f64 {
        self.point[TIME]
    }
}

impl Field for Jet {
    type Domain = JetDomain;

    fn dim(domain: &JetDomain) -> usize {
        domain.dim
    }

    fn constant(_: &JetDomain, c: f64) -> Self {
        Jet::constant(c)
    }

    fn coordinate(domain: &JetDomain, axis: usize) -> Self {
        Jet::variable(axis, domain.point[axis], domain.order, domain.time)
    }

    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }

    fn add(&self, o: &Self) -> Self {
        Jet::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        Jet::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        Jet::mul(self, o)
    }

    fn scale(&self, k: f64) -> Self {
        Jet::scale(self, k)
    }

    fn partial(&self, _: &JetDomain, axis: usize) -> Self {
        Jet::partial(self, axis).expect("jet order exhausted: expand with a higher order")
    }

    fn time_derivative(&self) -> Option<Self> {
        Jet::partial(self, TIME)
    }

    fn freeze_time(&self) -> Self {
        self.without_time()
    }

    fn norm_inf(&self) -> f64 {
        self.value().abs()
    }

    fn sum_squares(&self) -> (f64, usize) {
        (self.value() * self.value(), 1)
    }
}
