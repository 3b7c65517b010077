use crate::error::CoreError;
use serde::{Deserialize, Serialize};

/// Quadratic constitutive and dissipative coefficients.
///
/// `stiffness` and `inertia` optionally replace μ_T and ρ_T by symmetric
/// positive semidefinite matrices acting on the frame index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialParameters {
    pub mu_t: f64,
    pub mu_r: f64,
    pub rho_t: f64,
    pub rho_r: f64,
    pub gamma_t: f64,
    pub gamma_r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stiffness: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<Vec<f64>>>,
}

impl Default for MaterialParameters {
    fn default() -> Self {
        MaterialParameters {
            mu_t: 1.0,
            mu_r: 1.0,
            rho_t: 1.0,
            rho_r: 1.0,
            gamma_t: 1.0,
            gamma_r: 1.0,
            stiffness: None,
            inertia: None,
        }
    }
}

fn principal_minors_nonneg(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let tol = 1e-12 * m.iter().flatten().fold(1.0f64, |a, x| a.max(x.abs()));
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| m[i][j]).collect())
            .collect();
        det(&sub) >= -tol
    })
}

fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        n => panic!("determinant of a {n}x{n} matrix not supported"),
    }
}

fn check_matrix(name: &str, m: &[Vec<f64>], dim: usize) -> Result<(), CoreError> {
    if m.len() != dim || m.iter().any(|r| r.len() != dim) {
        return Err(CoreError::Parameter(format!("{name} must be {dim}x{dim}")));
    }
    for i in 0..dim {
        for j in 0..dim {
            if !m[i][j].is_finite() {
                return Err(CoreError::Parameter(format!("{name} has a non-finite entry")));
            }
            if (m[i][j] - m[j][i]).abs() > 1e-12 * (1.0 + m[i][j].abs()) {
                return Err(CoreError::Parameter(format!("{name} is not symmetric")));
            }
        }
    }
    if !principal_minors_nonneg(m) {
        return Err(CoreError::Parameter(format!(
            "{name} is not positive semidefinite"
        )));
    }
    Ok(())
}

impl MaterialParameters {
    /// Checks signs, finiteness and the optional matrices for a `dim`-D body.
    pub fn validate(&self, dim: usize) -> Result<(), CoreError> {
        for (name, v) in [
            ("mu_t", self.mu_t),
            ("mu_r", self.mu_r),
            ("rho_t", self.rho_t),
            ("rho_r", self.rho_r),
            ("gamma_t", self.gamma_t),
            ("gamma_r", self.gamma_r),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(CoreError::Parameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if let Some(m) = &self.stiffness {
            check_matrix("stiffness", m, dim)?;
        }
        if let Some(m) = &self.inertia {
            check_matrix("inertia", m, dim)?;
        }
        Ok(())
    }

    /// The dissipative extension needs strictly positive viscosities.
    pub fn validate_dissipative(&self) -> Result<(), CoreError> {
        if !(self.gamma_t > 0.0 && self.gamma_r > 0.0) {
            return Err(CoreError::Parameter(format!(
                "dissipative extension needs gamma_t, gamma_r > 0 (got {}, {})",
                self.gamma_t, self.gamma_r
            )));
        }
        Ok(())
    }

    /// Stiffness entry A_ij.
    pub fn stiffness_entry(&self, i: usize, j: usize) -> f64 {
        match &self.stiffness {
            Some(m) => m[i][j],
            None if i == j => self.mu_t,
            None => 0.0,
        }
    }

    /// Inertia entry ρ_ij.
    pub fn inertia_entry(&self, i: usize, j: usize) -> f64 {
        match &self.inertia {
            Some(m) => m[i][j],
            None if i == j => self.rho_t,
            None => 0.0,
        }
    }
}
