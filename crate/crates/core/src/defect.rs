//! Force and moment on a concentrated line defect.
//!
//! The concentrated measures are never discretized; only the algebraic
//! formulas left after integrating over a small disk around the line are
//! evaluated.

use crate::error::CoreError;
use cosserat_forms::{FrameForm, Jet, RotForm};
use serde::Serialize;

pub type Mat3 = [[f64; 3]; 3];
/// Couple-stress components, indexed `m[c][b][a]` for M^{CB}_A.
pub type Couple3 = [[[f64; 3]; 3]; 3];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineDefect {
    pub burgers: [f64; 3],
    /// Frank tensor κ^{AB}, antisymmetric.
    pub frank: Mat3,
    pub position: [f64; 3],
    pub direction: [f64; 3],
}

impl LineDefect {
    pub fn new(
        burgers: [f64; 3],
        frank: Mat3,
        position: [f64; 3],
        direction: [f64; 3],
    ) -> Result<Self, CoreError> {
        for a in 0..3 {
            for b in 0..3 {
                if frank[a][b] != -frank[b][a] {
                    return Err(CoreError::Parameter(format!(
                        "Frank tensor is not antisymmetric at ({a},{b})"
                    )));
                }
            }
        }
        Ok(LineDefect {
            burgers,
            frank,
            position,
            direction,
        })
    }

    /// A pure dislocation with Burgers vector `b`.
    pub fn dislocation(b: [f64; 3]) -> Self {
        LineDefect {
            burgers: b,
            frank: [[0.0; 3]; 3],
            position: [0.0; 3],
            direction: [0.0, 0.0, 1.0],
        }
    }
}

/// f_A = b^B Σ_BA + κ^{BC} M^{CB}_A. `sigma[b][a]` is Σ_BA.
pub fn line_defect_force(d: &LineDefect, sigma: &Mat3, m: &Couple3) -> [f64; 3] {
    let mut f = [0.0; 3];
    for (a, fa) in f.iter_mut().enumerate() {
        for b in 0..3 {
            *fa += d.burgers[b] * sigma[b][a];
        }
        for b in 0..3 {
            for c in 0..3 {
                if d.frank[b][c] != 0.0 {
                    *fa += d.frank[b][c] * m[c][b][a];
                }
            }
        }
    }
    f
}

/// m_CD = b^A (X_C Σ_AD − X_D Σ_AC) + κ^{AB}(X_C M^{BA}_D − X_D M^{BA}_C)
/// and its axial vector m_E = ½ ε_ECD m_CD. `x` is the lever arm.
pub fn line_defect_moment(d: &LineDefect, x: [f64; 3], sigma: &Mat3, m: &Couple3) -> (Mat3, [f64; 3]) {
    let mut mom = [[0.0; 3]; 3];
    for c in 0..3 {
        for dd in 0..3 {
            let mut v = 0.0;
            for a in 0..3 {
                v += d.burgers[a] * (x[c] * sigma[a][dd] - x[dd] * sigma[a][c]);
                for b in 0..3 {
                    v += d.frank[a][b] * (x[c] * m[b][a][dd] - x[dd] * m[b][a][c]);
                }
            }
            mom[c][dd] = v;
        }
    }
    let axial = [
        0.5 * (mom[1][2] - mom[2][1]),
        0.5 * (mom[2][0] - mom[0][2]),
        0.5 * (mom[0][1] - mom[1][0]),
    ];
    (mom, axial)
}

/// Σ_BA read off a 3D force stress at a point: the coefficient of ∗dx^A
/// in Σ_B.
pub fn stress_components(sigma: &FrameForm<Jet>) -> Result<Mat3, CoreError> {
    if sigma.dim() != 3 || sigma.degree() != 2 {
        return Err(CoreError::Dimension {
            expected: 3,
            got: sigma.dim(),
        });
    }
    let mut out = [[0.0; 3]; 3];
    for (b, s) in sigma.c.iter().enumerate() {
        for (a, c) in s.star().components().iter().enumerate() {
            out[b][a] = c.value();
        }
    }
    Ok(out)
}

/// M^{CB}_A read off a 3D couple stress at a point.
pub fn couple_components(m: &RotForm<Jet>) -> Result<Couple3, CoreError> {
    if m.dim() != 3 || m.degree() != 2 {
        return Err(CoreError::Dimension {
            expected: 3,
            got: m.dim(),
        });
    }
    let mut out = [[[0.0; 3]; 3]; 3];
    for c in 0..3 {
        for b in 0..3 {
            for (a, v) in m.entry(c, b).star().components().iter().enumerate() {
                out[c][b][a] = v.value();
            }
        }
    }
    Ok(out)
}
