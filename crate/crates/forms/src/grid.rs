//! Structured collocated grids and finite-difference backed fields.

use crate::error::FormError;
use crate::field::Field;
use std::sync::Arc;

/// Boundary treatment along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    OneSided,
    Periodic,
}

/// Tensor-product grid, x index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    n: [usize; 3],
    lo: [f64; 3],
    hi: [f64; 3],
    boundary: [Boundary; 3],
}

impl Grid {
    pub fn new(
        dim: usize,
        points: &[usize],
        extent: &[(f64, f64)],
        boundary: &[Boundary],
    ) -> Result<Self, FormError> {
        if dim != 2 && dim != 3 {
            return Err(FormError::Dimension(dim));
        }
        if points.len() != dim || extent.len() != dim || boundary.len() != dim {
            return Err(FormError::Grid("per-axis settings must match the dimension".into()));
        }
        let mut n = [1; 3];
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        let mut b = [Boundary::Periodic; 3];
        for a in 0..dim {
            let min = match boundary[a] {
                Boundary::OneSided => 3,
                Boundary::Periodic => 3,
            };
            if points[a] < min {
                return Err(FormError::Grid(format!(
                    "axis {a} needs at least {min} points, got {}",
                    points[a]
                )));
            }
            if !(extent[a].1 > extent[a].0) {
                return Err(FormError::Grid(format!("axis {a} has an empty extent")));
            }
            n[a] = points[a];
            lo[a] = extent[a].0;
            hi[a] = extent[a].1;
            b[a] = boundary[a];
        }
        Ok(Grid {
            dim,
            n,
            lo,
            hi,
            boundary: b,
        })
    }

    /// Unit box with the same point count and boundary rule on every axis.
    pub fn unit(dim: usize, points: usize, boundary: Boundary) -> Result<Self, FormError> {
        Grid::new(
            dim,
            &vec![points; dim],
            &vec![(0.0, 1.0); dim],
            &vec![boundary; dim],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn boundary(&self, axis: usize) -> Boundary {
        self.boundary[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let len = self.hi[axis] - self.lo[axis];
        match self.boundary[axis] {
            Boundary::OneSided => len / (self.n[axis] - 1) as f64,
            Boundary::Periodic => len / self.n[axis] as f64,
        }
    }

    pub fn len(&self) -> usize {
        self.n[..self.dim].iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stride(&self, axis: usize) -> usize {
        self.n[..axis].iter().product()
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut m = [0; 3];
        let mut r = idx;
        for a in 0..self.dim {
            m[a] = r % self.n[a];
            r /= self.n[a];
        }
        m
    }

    /// Physical position of a flat index; unused axes are 0.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.lo[a] + m[a] as f64 * self.spacing(a);
        }
        p
    }

    /// Whether `idx` lies at least `width` nodes away from every one-sided
    /// boundary.
    pub fn is_interior(&self, idx: usize, width: usize) -> bool {
        let m = self.multi_index(idx);
        (0..self.dim).all(|a| {
            self.boundary[a] == Boundary::Periodic
                || (m[a] >= width && m[a] + width < self.n[a])
        })
    }

    /// Samples `f` at every node.
    pub fn sample(self: &Arc<Self>, f: impl Fn([f64; 3]) -> f64) -> GridField {
        let v = (0..self.len()).map(|i| f(self.position(i))).collect();
        GridField::from_values(v)
    }

    /// Second-order finite-difference derivative of raw samples.
    pub fn derivative(&self, data: &[f64], axis: usize) -> Vec<f64> {
        assert!(axis < self.dim, "axis {axis} outside a {}-D grid", self.dim);
        let n = self.n[axis];
        let s = self.stride(axis);
        let h = self.spacing(axis);
        let inv2h = 0.5 / h;
        let mut out = vec![0.0; data.len()];
        let outer = data.len() / (n * s);
        let periodic = self.boundary[axis] == Boundary::Periodic;
        for o in 0..outer {
            for inner in 0..s {
                let base = o * n * s + inner;
                let at = |i: usize| data[base + i * s];
                for i in 0..n {
                    let v = if periodic {
                        let ip = (i + 1) % n;
                        let im = (i + n - 1) % n;
                        (at(ip) - at(im)) * inv2h
                    } else if i == 0 {
                        (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h
                    } else if i == n - 1 {
                        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv2h
                    } else {
                        (at(i + 1) - at(i - 1)) * inv2h
                    };
                    out[base + i * s] = v;
                }
            }
        }
        out
    }
}

/// Node values, with a constant fast path.
#[derive(Clone, Debug, PartialEq)]
pub enum Samples {
    Const(f64),
    Data(Arc<Vec<f64>>),
}

impl Samples {
    fn zip(&self, o: &Samples, f: impl Fn(f64, f64) -> f64) -> Samples {
        match (self, o) {
            (Samples::Const(a), Samples::Const(b)) => Samples::Const(f(*a, *b)),
            (Samples::Const(a), Samples::Data(b)) => {
                Samples::Data(Arc::new(b.iter().map(|y| f(*a, *y)).collect()))
            }
            (Samples::Data(a), Samples::Const(b)) => {
                Samples::Data(Arc::new(a.iter().map(|x| f(*x, *b)).collect()))
            }
            (Samples::Data(a), Samples::Data(b)) => Samples::Data(Arc::new(
                a.iter().zip(b.iter()).map(|(x, y)| f(*x, *y)).collect(),
            )),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Samples::Const(c) if *c == 0.0)
    }

    fn add(&self, o: &Samples) -> Samples {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        self.zip(o, |a, b| a + b)
    }

    fn sub(&self, o: &Samples) -> Samples {
        if o.is_zero() {
            return self.clone();
        }
        self.zip(o, |a, b| a - b)
    }

    fn mul(&self, o: &Samples) -> Samples {
        if self.is_zero() || o.is_zero() {
            return Samples::Const(0.0);
        }
        self.zip(o, |a, b| a * b)
    }

    fn scale(&self, k: f64) -> Samples {
        if k == 0.0 {
            return Samples::Const(0.0);
        }
        match self {
            Samples::Const(c) => Samples::Const(c * k),
            Samples::Data(d) => Samples::Data(Arc::new(d.iter().map(|x| x * k).collect())),
        }
    }

    fn partial(&self, grid: &Grid, axis: usize) -> Samples {
        match self {
            Samples::Const(_) => Samples::Const(0.0),
            Samples::Data(d) => Samples::Data(Arc::new(grid.derivative(d, axis))),
        }
    }

    /// Value at node `i`.
    pub fn at(&self, i: usize) -> f64 {
        match self {
            Samples::Const(c) => *c,
            Samples::Data(d) => d[i],
        }
    }
}

/// Grid samples with an optional first time derivative.
///
/// The time derivative is propagated by the product rule; the spatial
/// stencils commute with it exactly, so it stays consistent under every
/// form operator. A second time derivative is not available.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub v: Samples,
    pub dt: Option<Samples>,
}

impl GridField {
    /// Samples with no time information.
    pub fn from_values(v: Vec<f64>) -> Self {
        GridField {
            v: Samples::Data(Arc::new(v)),
            dt: None,
        }
    }

    pub fn with_rate(v: Vec<f64>, dt: Vec<f64>) -> Self {
        GridField {
            v: Samples::Data(Arc::new(v)),
            dt: Some(Samples::Data(Arc::new(dt))),
        }
    }

    pub fn at(&self, i: usize) -> f64 {
        self.v.at(i)
    }

    /// Max-abs over nodes satisfying `keep`.
    pub fn norm_inf_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        match &self.v {
            Samples::Const(c) => c.abs(),
            Samples::Data(d) => d
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .fold(0.0, |m, (_, x)| m.max(x.abs())),
        }
    }
}

impl Field for GridField {
    type Domain = Arc<Grid>;

    fn dim(domain: &Arc<Grid>) -> usize {
        domain.dim
    }

    fn constant(_: &Arc<Grid>, c: f64) -> Self {
        GridField {
            v: Samples::Const(c),
            dt: Some(Samples::Const(0.0)),
        }
    }

    fn coordinate(domain: &Arc<Grid>, axis: usize) -> Self {
        let mut f = domain.sample(|p| p[axis]);
        f.dt = Some(Samples::Const(0.0));
        f
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.dt.as_ref().map_or(true, |d| d.is_zero())
    }

    fn add(&self, o: &Self) -> Self {
        GridField {
            v: self.v.add(&o.v),
            dt: match (&self.dt, &o.dt) {
                (Some(a), Some(b)) => Some(a.add(b)),
                _ => None,
            },
        }
    }

    fn sub(&self, o: &Self) -> Self {
        GridField {
            v: self.v.sub(&o.v),
            dt: match (&self.dt, &o.dt) {
                (Some(a), Some(b)) => Some(a.sub(b)),
                _ => None,
            },
        }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return GridField {
                v: Samples::Const(0.0),
                dt: Some(Samples::Const(0.0)),
            };
        }
        GridField {
            v: self.v.mul(&o.v),
            dt: match (&self.dt, &o.dt) {
                (Some(a), Some(b)) => Some(a.mul(&o.v).add(&self.v.mul(b))),
                _ => None,
            },
        }
    }

    fn scale(&self, k: f64) -> Self {
        GridField {
            v: self.v.scale(k),
            dt: self.dt.as_ref().map(|d| d.scale(k)),
        }
    }

    fn partial(&self, domain: &Arc<Grid>, axis: usize) -> Self {
        GridField {
            v: self.v.partial(domain, axis),
            dt: self.dt.as_ref().map(|d| d.partial(domain, axis)),
        }
    }

    fn time_derivative(&self) -> Option<Self> {
        self.dt.as_ref().map(|d| GridField {
            v: d.clone(),
            dt: if d.is_zero() {
                Some(Samples::Const(0.0))
            } else {
                None
            },
        })
    }

    fn freeze_time(&self) -> Self {
        GridField {
            v: self.v.clone(),
            dt: None,
        }
    }

    fn norm_inf(&self) -> f64 {
        self.norm_inf_where(|_| true)
    }

    fn sum_squares(&self) -> (f64, usize) {
        match &self.v {
            Samples::Const(c) => (c * c, 1),
            Samples::Data(d) => (d.iter().map(|x| x * x).sum(), d.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spacing_rules() {
        let g = Grid::new(
            2,
            &[11, 10],
            &[(0.0, 1.0), (0.0, 1.0)],
            &[Boundary::OneSided, Boundary::Periodic],
        )
        .unwrap();
        assert!((g.spacing(0) - 0.1).abs() < 1e-15);
        assert!((g.spacing(1) - 0.1).abs() < 1e-15);
        assert!(Grid::unit(4, 10, Boundary::OneSided).is_err());
        assert!(Grid::unit(2, 2, Boundary::OneSided).is_err());
    }

    #[test]
    fn derivative_exact_on_quadratics() {
        let g = Arc::new(Grid::unit(2, 9, Boundary::OneSided).unwrap());
        let f = g.sample(|p| p[1] * p[1] + 3.0 * p[0]);
        let Samples::Data(d) = &f.v else { panic!() };
        let dy = g.derivative(d, 1);
        for i in 0..g.len() {
            let p = g.position(i);
            assert!((dy[i] - 2.0 * p[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_derivative_second_order() {
        let err = |n: usize| {
            let g = Arc::new(Grid::unit(2, n, Boundary::Periodic).unwrap());
            let f = g.sample(|p| (2.0 * PI * p[0]).sin());
            let Samples::Data(d) = &f.v else { panic!() };
            let dx = g.derivative(d, 0);
            (0..g.len())
                .map(|i| (dx[i] - 2.0 * PI * (2.0 * PI * g.position(i)[0]).cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(32) / err(64);
        assert!(ratio > 3.9 && ratio < 4.1, "ratio {ratio}");
    }

    #[test]
    fn product_rule_on_rates() {
        let g = Arc::new(Grid::unit(2, 5, Boundary::OneSided).unwrap());
        let a = GridField::with_rate(vec![2.0; 25], vec![1.0; 25]);
        let b = GridField::with_rate(vec![3.0; 25], vec![-1.0; 25]);
        let p = Field::mul(&a, &b);
        assert_eq!(p.time_derivative().unwrap().at(0), 3.0 - 2.0);
        let _ = g;
    }
}
