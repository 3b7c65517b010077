//! Truncated multivariate Taylor jets in (x, y, z, t).
//!
//! A jet carries the Taylor coefficients of a smooth function around one
//! point up to a known order. Differentiating drops one order, products
//! keep the lower order, so every derivative that survives is exact up to
//! rounding.

use std::sync::LazyLock;
use std::ops::{Add, Mul, Neg, Sub};

/// Number of jet variables: three space axes and time.
pub const NVARS: usize = 4;
/// Index of the time variable.
pub const TIME: usize = 3;
/// Highest supported truncation order.
pub const MAX_ORDER: usize = 6;

struct Tables {
    exps: Vec<[u8; NVARS]>,
    degree: Vec<u8>,
    ncoef: [usize; MAX_ORDER + 2],
    // (a, b, c): coef[c] += x[a] * y[b], sorted by c
    mul: Vec<(u16, u16, u16)>,
    mul_end: [usize; MAX_ORDER + 1],
    // per variable: (src, dst, factor), sorted by dst
    der: Vec<Vec<(u16, u16, f64)>>,
    der_end: Vec<[usize; MAX_ORDER + 1]>,
    unit: [usize; NVARS],
}

fn build_tables() -> Tables {
    let mut exps = Vec::new();
    let mut ncoef = [0usize; MAX_ORDER + 2];
    for deg in 0..=MAX_ORDER {
        for a in (0..=deg).rev() {
            for b in (0..=deg - a).rev() {
                for c in (0..=deg - a - b).rev() {
                    let d = deg - a - b - c;
                    exps.push([a as u8, b as u8, c as u8, d as u8]);
                }
            }
        }
        ncoef[deg] = exps.len();
    }
    ncoef[MAX_ORDER + 1] = exps.len();
    let degree: Vec<u8> = exps.iter().map(|e| e.iter().sum()).collect();
    let index = |e: &[u8; NVARS]| exps.iter().position(|x| x == e);

    let mut mul = Vec::new();
    for (i, ei) in exps.iter().enumerate() {
        for (j, ej) in exps.iter().enumerate() {
            if degree[i] + degree[j] > MAX_ORDER as u8 {
                continue;
            }
            let mut s = [0u8; NVARS];
            for v in 0..NVARS {
                s[v] = ei[v] + ej[v];
            }
            let k = index(&s).expect("monomial in table");
            mul.push((i as u16, j as u16, k as u16));
        }
    }
    mul.sort_by_key(|t| (t.2, t.0, t.1));
    let mut mul_end = [0usize; MAX_ORDER + 1];
    for o in 0..=MAX_ORDER {
        mul_end[o] = mul.iter().take_while(|t| (t.2 as usize) < ncoef[o]).count();
    }

    let mut der = Vec::new();
    let mut der_end = Vec::new();
    for v in 0..NVARS {
        let mut list = Vec::new();
        for (i, e) in exps.iter().enumerate() {
            if e[v] == 0 {
                continue;
            }
            let mut lower = *e;
            lower[v] -= 1;
            let k = index(&lower).expect("monomial in table");
            list.push((i as u16, k as u16, e[v] as f64));
        }
        list.sort_by_key(|t| (t.1, t.0));
        let mut end = [0usize; MAX_ORDER + 1];
        for o in 0..=MAX_ORDER {
            end[o] = list.iter().take_while(|t| (t.1 as usize) < ncoef[o]).count();
        }
        der.push(list);
        der_end.push(end);
    }
    let mut unit = [0usize; NVARS];
    for v in 0..NVARS {
        let mut e = [0u8; NVARS];
        e[v] = 1;
        unit[v] = index(&e).expect("unit monomial");
    }
    Tables {
        exps,
        degree,
        ncoef,
        mul,
        mul_end,
        der,
        der_end,
        unit,
    }
}

static TABLES: LazyLock<Tables> = LazyLock::new(build_tables);

/// Number of Taylor coefficients of a jet of the given order.
pub fn coefficient_count(order: usize) -> usize {
    TABLES.ncoef[order]
}

/// Polynomial part of a jet.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    order: u8,
    time: bool,
    c: Vec<f64>,
}

/// A truncated Taylor expansion around a point.
///
/// `Zero` and `Const` are exact to every order. `Poly` is exact up to its
/// order; `time == false` marks a jet whose time coefficients are not
/// meaningful (e.g. after time stepping).
#[derive(Clone, Debug, PartialEq)]
pub enum Jet {
    Zero,
    Const(f64),
    Poly(Poly),
}

impl Default for Jet {
    fn default() -> Self {
        Jet::Zero
    }
}

impl Jet {
    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Jet::Zero
        } else {
            Jet::Const(c)
        }
    }

    /// The coordinate function `v` expanded around `value`.
    pub fn variable(v: usize, value: f64, order: usize, time: bool) -> Self {
        assert!(v < NVARS && order <= MAX_ORDER);
        if order == 0 {
            return Jet::Poly(Poly {
                order: 0,
                time,
                c: vec![value],
            });
        }
        let mut c = vec![0.0; coefficient_count(order)];
        c[0] = value;
        c[TABLES.unit[v]] = 1.0;
        Jet::Poly(Poly {
            order: order as u8,
            time,
            c,
        })
    }

    /// Value at the expansion point.
    pub fn value(&self) -> f64 {
        match self {
            Jet::Zero => 0.0,
            Jet::Const(c) => *c,
            Jet::Poly(p) => p.c[0],
        }
    }

    /// Truncation order; `None` for exact constants.
    pub fn order(&self) -> Option<usize> {
        match self {
            Jet::Poly(p) => Some(p.order as usize),
            _ => None,
        }
    }

    pub fn has_time(&self) -> bool {
        match self {
            Jet::Poly(p) => p.time,
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Jet::Zero)
    }

    /// Taylor coefficient of the monomial with exponents `e`, if tracked.
    pub fn coefficient(&self, e: [u8; NVARS]) -> Option<f64> {
        let deg: u8 = e.iter().sum();
        match self {
            Jet::Zero => Some(0.0),
            Jet::Const(c) => Some(if deg == 0 { *c } else { 0.0 }),
            Jet::Poly(p) => {
                if deg > p.order {
                    return None;
                }
                let i = TABLES.exps.iter().position(|x| *x == e)?;
                Some(p.c[i])
            }
        }
    }

    /// Drops the time coefficients and marks the jet as space-only.
    pub fn without_time(&self) -> Jet {
        match self {
            Jet::Poly(p) => {
                let mut c = p.c.clone();
                for (i, e) in TABLES.exps[..c.len()].iter().enumerate() {
                    if e[TIME] > 0 {
                        c[i] = 0.0;
                    }
                }
                Jet::Poly(Poly {
                    order: p.order,
                    time: false,
                    c,
                })
            }
            other => other.clone(),
        }
    }

    fn poly_add(a: &Poly, b: &Poly, sign: f64) -> Jet {
        let order = a.order.min(b.order);
        let n = coefficient_count(order as usize);
        let c = (0..n).map(|i| a.c[i] + sign * b.c[i]).collect();
        Jet::Poly(Poly {
            order,
            time: a.time && b.time,
            c,
        })
    }

    fn shift(p: &Poly, k: f64) -> Jet {
        let mut q = p.clone();
        q.c[0] += k;
        Jet::Poly(q)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        match (self, o) {
            (Jet::Zero, x) | (x, Jet::Zero) => x.clone(),
            (Jet::Const(a), Jet::Const(b)) => Jet::constant(a + b),
            (Jet::Const(a), Jet::Poly(p)) | (Jet::Poly(p), Jet::Const(a)) => Jet::shift(p, *a),
            (Jet::Poly(a), Jet::Poly(b)) => Jet::poly_add(a, b, 1.0),
        }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        match (self, o) {
            (x, Jet::Zero) => x.clone(),
            (Jet::Zero, x) => x.neg_jet(),
            (Jet::Const(a), Jet::Const(b)) => Jet::constant(a - b),
            (Jet::Const(a), Jet::Poly(p)) => Jet::shift(&p.scaled(-1.0), *a),
            (Jet::Poly(p), Jet::Const(a)) => Jet::shift(p, -*a),
            (Jet::Poly(a), Jet::Poly(b)) => Jet::poly_add(a, b, -1.0),
        }
    }

    pub fn neg_jet(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> Jet {
        match self {
            Jet::Zero => Jet::Zero,
            _ if k == 0.0 => Jet::Zero,
            Jet::Const(c) => Jet::Const(c * k),
            Jet::Poly(p) => Jet::Poly(p.scaled(k)),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        match (self, o) {
            (Jet::Zero, _) | (_, Jet::Zero) => Jet::Zero,
            (Jet::Const(a), x) | (x, Jet::Const(a)) => x.scale(*a),
            (Jet::Poly(a), Jet::Poly(b)) => {
                let order = a.order.min(b.order) as usize;
                let mut c = vec![0.0; coefficient_count(order)];
                let t = &TABLES;
                for &(i, j, k) in &t.mul[..t.mul_end[order]] {
                    c[k as usize] += a.c[i as usize] * b.c[j as usize];
                }
                Jet::Poly(Poly {
                    order: order as u8,
                    time: a.time && b.time,
                    c,
                })
            }
        }
    }

    /// Partial derivative along jet variable `v`.
    ///
    /// A time derivative of a space-only jet, or of an order-0 jet, is not
    /// available and returns `None`.
    pub fn partial(&self, v: usize) -> Option<Jet> {
        match self {
            Jet::Zero | Jet::Const(_) => Some(Jet::Zero),
            Jet::Poly(p) => {
                if (v == TIME && !p.time) || p.order == 0 {
                    return None;
                }
                let order = p.order as usize - 1;
                let mut c = vec![0.0; coefficient_count(order)];
                let t = &TABLES;
                for &(src, dst, f) in &t.der[v][..t.der_end[v][order]] {
                    c[dst as usize] += f * p.c[src as usize];
                }
                Some(Jet::Poly(Poly {
                    order: order as u8,
                    time: p.time,
                    c,
                }))
            }
        }
    }

    /// Applies a scalar function given its derivatives at the expansion
    /// value: `derivs[k]` is f^(k)(value).
    pub fn compose(&self, derivs: impl Fn(usize) -> f64) -> Jet {
        match self {
            Jet::Zero | Jet::Const(_) => Jet::constant(derivs(0)),
            Jet::Poly(p) => {
                let order = p.order as usize;
                let mut h = p.clone();
                h.c[0] = 0.0;
                let h = Jet::Poly(h);
                let mut out = Jet::constant(derivs(0));
                let mut pow = Jet::Const(1.0);
                let mut fact = 1.0;
                for k in 1..=order {
                    pow = pow.mul(&h);
                    fact *= k as f64;
                    out = out.add(&pow.scale(derivs(k) / fact));
                }
                match out {
                    Jet::Poly(_) => out,
                    // keep the truncation order of the argument
                    other => other.add(&Jet::Poly(Poly {
                        order: p.order,
                        time: p.time,
                        c: vec![0.0; coefficient_count(order)],
                    })),
                }
            }
        }
    }

    pub fn exp(&self) -> Jet {
        let v = self.value().exp();
        match self {
            Jet::Zero | Jet::Const(_) => Jet::constant(v),
            _ => self.compose(|_| v),
        }
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        match self {
            Jet::Zero | Jet::Const(_) => Jet::constant(s),
            _ => self.compose(|k| [s, c, -s, -c][k % 4]),
        }
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        match self {
            Jet::Zero | Jet::Const(_) => Jet::constant(c),
            _ => self.compose(|k| [c, -s, -c, s][k % 4]),
        }
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut out = Jet::Const(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Largest degree tracked by this jet, or `None` when exact.
    pub fn degree_limit(&self) -> Option<u8> {
        match self {
            Jet::Poly(p) => Some(p.order),
            _ => None,
        }
    }
}

impl Poly {
    fn scaled(&self, k: f64) -> Poly {
        Poly {
            order: self.order,
            time: self.time,
            c: self.c.iter().map(|x| x * k).collect(),
        }
    }
}

/// Exponent tuple of coefficient `i` in the graded ordering.
pub fn exponents(i: usize) -> [u8; NVARS] {
    TABLES.exps[i]
}

/// Total degree of coefficient `i`.
pub fn degree(i: usize) -> usize {
    TABLES.degree[i] as usize
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet {
                Jet::$f(&self, &o)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                Jet::$f(&self, &o)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet {
                Jet::$f(&self, &o)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                Jet::$f(&self, &o)
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, o: f64) -> Jet {
                Jet::$f(&self, &Jet::constant(o))
            }
        }
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $m(self, o: f64) -> Jet {
                Jet::$f(&self, &Jet::constant(o))
            }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                Jet::$f(&Jet::constant(self), &o)
            }
        }
        impl $tr<&Jet> for f64 {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet {
                Jet::$f(&Jet::constant(self), &o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.neg_jet()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.neg_jet()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(p: [f64; 4], order: usize) -> [Jet; 4] {
        [0, 1, 2, 3].map(|v| Jet::variable(v, p[v], order, true))
    }

    #[test]
    fn table_sizes() {
        assert_eq!(coefficient_count(0), 1);
        assert_eq!(coefficient_count(1), 5);
        assert_eq!(coefficient_count(2), 15);
        assert_eq!(coefficient_count(4), 70);
    }

    #[test]
    fn product_rule_and_derivatives() {
        let [x, y, _, t] = seed([0.3, 0.7, 0.0, 0.2], 4);
        // f = sin(pi y) exp(-t) x^2
        let f = (&y * std::f64::consts::PI).sin() * (-&t).exp() * x.powi(2);
        let fy = f.partial(1).unwrap();
        let exact = std::f64::consts::PI
            * (std::f64::consts::PI * 0.7).cos()
            * (-0.2f64).exp()
            * 0.09;
        assert!((fy.value() - exact).abs() < 1e-14);
        let fxx = f.partial(0).unwrap().partial(0).unwrap();
        let exact = 2.0 * (std::f64::consts::PI * 0.7).sin() * (-0.2f64).exp();
        assert!((fxx.value() - exact).abs() < 1e-14);
        let ftt = f.partial(3).unwrap().partial(3).unwrap();
        let exact = (std::f64::consts::PI * 0.7).sin() * (-0.2f64).exp() * 0.09;
        assert!((ftt.value() - exact).abs() < 1e-14);
        assert_eq!(fxx.order(), Some(2));
    }

    #[test]
    fn mixed_partials_commute() {
        let [x, y, z, t] = seed([0.1, 0.2, 0.3, 0.4], 3);
        let f = (&x * &y + &z).sin() * (&t * 2.0 + &x).cos();
        let a = f.partial(0).unwrap().partial(2).unwrap();
        let b = f.partial(2).unwrap().partial(0).unwrap();
        assert!((a.value() - b.value()).abs() < 1e-14);
    }

    #[test]
    fn space_only_jets_refuse_time_derivative() {
        let [x, _, _, t] = seed([0.1, 0.2, 0.3, 0.4], 2);
        let f = (x * t).without_time();
        assert!(f.partial(TIME).is_none());
        assert!(f.partial(0).is_some());
    }

    #[test]
    fn order_zero_has_no_derivative() {
        let x = Jet::variable(0, 0.5, 0, true);
        assert!(x.partial(0).is_none());
        assert_eq!(Jet::Const(2.0).partial(0), Some(Jet::Zero));
    }
}
