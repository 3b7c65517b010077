//! Linearized wave propagation ρ ∂ₜ²u + γ ∂ₜu − a ∂ₓ²u = 0 on a periodic
//! unit interval, integrated with second-order leapfrog.

use crate::error::CoreError;
use crate::params::MaterialParameters;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct DispersionOptions {
    pub points: usize,
    pub cfl: f64,
    /// Overrides the CFL-derived step when set.
    pub dt: Option<f64>,
    /// Number of (predicted) periods to track the mode over.
    pub periods: usize,
}

impl Default for DispersionOptions {
    fn default() -> Self {
        DispersionOptions {
            points: 256,
            cfl: 0.5,
            dt: None,
            periods: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Dispersion {
    /// √(a/ρ)
    pub predicted_speed: f64,
    /// Phase speed ω/k measured from the simulation.
    pub measured_speed: f64,
    /// Phase speed of the damped continuum problem, √(ω₀² − α²)/k.
    pub damped_speed: f64,
    /// γ/(2ρ)
    pub predicted_decay: f64,
    pub measured_decay: f64,
    pub dt: f64,
    pub steps: usize,
}

/// Simulates one Fourier mode of wavenumber `k` (a multiple of 2π) with
/// a = μ_T, ρ = ρ_T and γ = γ_T, and measures its phase speed and decay.
pub fn dispersion_check(
    p: &MaterialParameters,
    k: f64,
    opts: DispersionOptions,
) -> Result<Dispersion, CoreError> {
    let (a, rho, gamma) = (p.mu_t, p.rho_t, p.gamma_t);
    if !(rho > 0.0) {
        return Err(CoreError::Parameter(format!("rho_t must be > 0, got {rho}")));
    }
    if !(a > 0.0) || gamma < 0.0 {
        return Err(CoreError::Parameter(format!(
            "need mu_t > 0 and gamma_t >= 0, got {a} and {gamma}"
        )));
    }
    let m = k / (2.0 * PI);
    if !(m >= 1.0) || (m - m.round()).abs() > 1e-9 {
        return Err(CoreError::Parameter(format!(
            "k must be a positive multiple of 2π on the periodic unit interval, got {k}"
        )));
    }
    let n = opts.points;
    if n < 4 {
        return Err(CoreError::Parameter(format!("need at least 4 points, got {n}")));
    }
    let c = (a / rho).sqrt();
    let h = 1.0 / n as f64;
    let dt_max = h / c;
    let dt = opts.dt.unwrap_or(opts.cfl * dt_max);
    if !(dt > 0.0) || dt > dt_max {
        return Err(CoreError::Stability {
            dt,
            suggested: 0.5 * dt_max,
        });
    }
    let alpha = gamma / (2.0 * rho);
    let w0 = c * k;
    if alpha >= w0 {
        return Err(CoreError::Parameter("mode is overdamped".into()));
    }
    let wd = (w0 * w0 - alpha * alpha).sqrt();
    let exact = |x: f64, t: f64| (-alpha * t).exp() * (k * x - wd * t).cos();
    let xs: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let mut prev: Vec<f64> = xs.iter().map(|&x| exact(x, -dt)).collect();
    let mut cur: Vec<f64> = xs.iter().map(|&x| exact(x, 0.0)).collect();
    let (cs, sn): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| ((k * x).cos(), (k * x).sin())).unzip();
    let project = |u: &[f64]| {
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..n {
            re += u[j] * cs[j];
            im -= u[j] * sn[j];
        }
        (2.0 * re / n as f64, 2.0 * im / n as f64)
    };
    let steps = ((opts.periods.max(1) as f64) * 2.0 * PI / (wd * dt)).round() as usize;
    let lam = a * dt * dt / (h * h);
    let damp = 0.5 * gamma * dt;
    let (mut re, mut im) = project(&cur);
    let mut phase = 0.0;
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        for j in 0..n {
            let lap = cur[(j + 1) % n] - 2.0 * cur[j] + cur[(j + n - 1) % n];
            next[j] = (2.0 * rho * cur[j] - (rho - damp) * prev[j] + lam * lap) / (rho + damp);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        let (r2, i2) = project(&cur);
        // mode ~ e^{-iωt}: phase advance is −arg(z₂/z₁)
        let dphi = -(i2 * re - r2 * im).atan2(r2 * re + i2 * im);
        phase += dphi;
        re = r2;
        im = i2;
    }
    let t_end = steps as f64 * dt;
    let amp = (re * re + im * im).sqrt();
    Ok(Dispersion {
        predicted_speed: c,
        measured_speed: phase / t_end / k,
        damped_speed: wd / k,
        predicted_decay: alpha,
        measured_decay: -amp.ln() / t_end,
        dt,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, rho: f64, gamma: f64) -> MaterialParameters {
        MaterialParameters {
            mu_t: a,
            rho_t: rho,
            gamma_t: gamma,
            ..Default::default()
        }
    }

    #[test]
    fn speed_of_stiff_medium() {
        let d = dispersion_check(&params(4.0, 1.0, 0.0), 2.0 * PI, Default::default()).unwrap();
        assert_eq!(d.predicted_speed, 2.0);
        assert!((d.measured_speed / 2.0 - 1.0).abs() < 0.01, "{d:?}");
        assert!(d.measured_decay.abs() < 1e-6);
    }

    #[test]
    fn unit_ratio_speed() {
        let d = dispersion_check(&params(3.0, 3.0, 0.0), 2.0 * PI, Default::default()).unwrap();
        assert_eq!(d.predicted_speed, 1.0);
        assert!((d.measured_speed - 1.0).abs() < 0.01);
    }

    #[test]
    fn damped_decay_rate() {
        let d = dispersion_check(&params(1.0, 1.0, 0.4), 2.0 * PI, Default::default()).unwrap();
        assert!((d.measured_decay / d.predicted_decay - 1.0).abs() < 0.02, "{d:?}");
        assert!((d.measured_speed / d.damped_speed - 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            dispersion_check(&params(1.0, 0.0, 0.0), 2.0 * PI, Default::default()),
            Err(CoreError::Parameter(_))
        ));
        let opts = DispersionOptions {
            dt: Some(0.1),
            ..Default::default()
        };
        match dispersion_check(&params(1.0, 1.0, 0.0), 2.0 * PI, opts) {
            Err(CoreError::Stability { suggested, .. }) => {
                assert!((suggested - 0.5 / 256.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
    }
}
