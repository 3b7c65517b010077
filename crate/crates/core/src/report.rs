//! Residual norms, pass flags and convergence orders.

use cosserat_forms::{Field, Form, FrameForm, GridField, RotForm};
use serde::Serialize;
use std::collections::BTreeMap;

/// Max-abs and root-mean-square of a residual.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Norms {
    pub inf: f64,
    pub l2: f64,
}

impl Norms {
    pub fn max(self, o: Norms) -> Norms {
        Norms {
            inf: self.inf.max(o.inf),
            l2: self.l2.max(o.l2),
        }
    }
}

/// Anything made of scalar coefficient fields.
pub trait Coefficients<F: Field> {
    fn coefficients(&self) -> Vec<&F>;

    fn norms(&self) -> Norms {
        let mut inf: f64 = 0.0;
        let (mut sum, mut count) = (0.0, 0usize);
        for f in self.coefficients() {
            inf = inf.max(f.norm_inf());
            let (s, n) = f.sum_squares();
            sum += s;
            count += n;
        }
        Norms {
            inf,
            l2: if count == 0 { 0.0 } else { (sum / count as f64).sqrt() },
        }
    }
}

impl<F: Field> Coefficients<F> for Form<F> {
    fn coefficients(&self) -> Vec<&F> {
        self.components().iter().collect()
    }
}

impl<F: Field> Coefficients<F> for FrameForm<F> {
    fn coefficients(&self) -> Vec<&F> {
        self.c.iter().flat_map(|f| f.components()).collect()
    }
}

impl<F: Field> Coefficients<F> for RotForm<F> {
    fn coefficients(&self) -> Vec<&F> {
        self.c.iter().flat_map(|f| f.components()).collect()
    }
}

/// Norms over the grid nodes accepted by `keep`.
pub fn grid_norms<C: Coefficients<GridField>>(x: &C, keep: impl Fn(usize) -> bool) -> Norms {
    let mut inf: f64 = 0.0;
    let (mut sum, mut count) = (0.0, 0usize);
    for f in x.coefficients() {
        inf = inf.max(f.norm_inf_where(&keep));
        let len = match &f.v {
            cosserat_forms::Samples::Const(_) => 0,
            cosserat_forms::Samples::Data(d) => d.len(),
        };
        if len == 0 {
            let c = f.at(0);
            sum += c * c;
            count += 1;
            continue;
        }
        for i in (0..len).filter(|i| keep(*i)) {
            sum += f.at(i) * f.at(i);
            count += 1;
        }
    }
    Norms {
        inf,
        l2: if count == 0 { 0.0 } else { (sum / count as f64).sqrt() },
    }
}

/// One named residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub inf: f64,
    pub l2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub residuals: BTreeMap<String, Residual>,
    pub orders: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a residual without a pass criterion.
    pub fn record(&mut self, name: &str, n: Norms) {
        self.residuals.insert(
            name.to_string(),
            Residual {
                inf: n.inf,
                l2: n.l2,
                tolerance: None,
                passed: None,
            },
        );
    }

    /// Records a residual that passes when its max-norm is within `tol`.
    pub fn check(&mut self, name: &str, n: Norms, tol: f64) {
        self.residuals.insert(
            name.to_string(),
            Residual {
                inf: n.inf,
                l2: n.l2,
                tolerance: Some(tol),
                passed: Some(n.inf <= tol),
            },
        );
    }

    pub fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.get(name)
    }

    pub fn inf(&self, name: &str) -> f64 {
        self.residuals
            .get(name)
            .unwrap_or_else(|| panic!("no residual named {name}"))
            .inf
    }

    /// True when every checked residual passed.
    pub fn passed(&self) -> bool {
        self.residuals.values().all(|r| r.passed != Some(false))
    }

    pub fn failures(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(_, r)| r.passed == Some(false))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Worst-case merge, e.g. over sample points.
    pub fn merge_max(&mut self, o: &ResidualReport) {
        for (k, r) in &o.residuals {
            match self.residuals.get_mut(k) {
                None => {
                    self.residuals.insert(k.clone(), r.clone());
                }
                Some(mine) => {
                    mine.inf = mine.inf.max(r.inf);
                    mine.l2 = mine.l2.max(r.l2);
                    if let (Some(t), Some(_)) = (mine.tolerance.or(r.tolerance), r.passed) {
                        mine.tolerance = Some(t);
                        mine.passed = Some(mine.inf <= t);
                    }
                }
            }
        }
        for (k, v) in &o.orders {
            self.orders.insert(k.clone(), *v);
        }
        for n in &o.notes {
            self.note(n.clone());
        }
    }

    /// Prefixes every residual name.
    pub fn prefixed(self, prefix: &str) -> ResidualReport {
        ResidualReport {
            residuals: self
                .residuals
                .into_iter()
                .map(|(k, v)| (format!("{prefix}.{k}"), v))
                .collect(),
            orders: self
                .orders
                .into_iter()
                .map(|(k, v)| (format!("{prefix}.{k}"), v))
                .collect(),
            notes: self.notes,
        }
    }
}

/// Observed order between successive spacings `h`, `None` when the norms
/// do not decrease.
pub fn observed_orders(h: &[f64], norms: &[f64]) -> Vec<Option<f64>> {
    let mut out = vec![None];
    for k in 1..h.len().min(norms.len()) {
        let (a, b) = (norms[k - 1], norms[k]);
        let ratio = h[k - 1] / h[k];
        out.push(if b > 0.0 && a > b {
            Some((a / b).ln() / ratio.ln())
        } else {
            None
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_quadratic_decay() {
        let pts = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
        let norms: Vec<f64> = pts.iter().map(|h| h * h).collect();
        let o = observed_orders(&pts, &norms);
        assert!(o[0].is_none());
        assert!((o[1].unwrap() - 2.0).abs() < 1e-12);
        assert!((o[2].unwrap() - 2.0).abs() < 1e-12);
        assert!(observed_orders(&pts, &[1.0, 2.0, 0.5])[1].is_none());
    }

    #[test]
    fn merge_keeps_worst() {
        let mut a = ResidualReport::new();
        a.check("x", Norms { inf: 1e-9, l2: 1e-10 }, 1e-8);
        let mut b = ResidualReport::new();
        b.check("x", Norms { inf: 1e-7, l2: 1e-8 }, 1e-8);
        a.merge_max(&b);
        assert!(!a.passed());
        assert_eq!(a.failures(), vec!["x"]);
    }
}
