//! Scalar-valued differential forms on 2D/3D Euclidean domains.
//!
//! Basis p-forms are axis bitmasks (bit a = dx^a) ordered lexicographically
//! by their sorted index lists, e.g. in 3D the 2-forms are
//! {dx∧dy, dx∧dz, dy∧dz}.

use crate::error::FormError;
use crate::field::Field;
use std::sync::LazyLock;

/// Binomial coefficient for the small sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct BasisTables {
    // [n][p] -> masks
    masks: Vec<Vec<Vec<u8>>>,
    // [n][mask] -> position within its degree
    pos: Vec<[usize; 8]>,
}

static BASES: LazyLock<BasisTables> = LazyLock::new(|| {
    let mut masks = Vec::new();
    let mut pos = Vec::new();
    for n in 0..=3usize {
        let mut per_degree = Vec::new();
        let mut p_of = [usize::MAX; 8];
        for p in 0..=n {
            let mut out: Vec<u8> = (0u8..(1 << n))
                .filter(|m| m.count_ones() as usize == p)
                .collect();
            out.sort_by_key(|m| axes(*m));
            for (i, m) in out.iter().enumerate() {
                p_of[*m as usize] = i;
            }
            per_degree.push(out);
        }
        masks.push(per_degree);
        pos.push(p_of);
    }
    BasisTables { masks, pos }
});

/// Basis masks of degree `p` in dimension `n`, in canonical order.
pub fn basis(n: usize, p: usize) -> &'static [u8] {
    if p > n {
        return &[];
    }
    &BASES.masks[n][p]
}

/// Sorted axis list of a mask.
pub fn axes(mask: u8) -> Vec<usize> {
    (0..8).filter(|a| mask & (1 << a) != 0).collect()
}

fn position(n: usize, mask: u8) -> usize {
    let p = BASES.pos[n][mask as usize];
    assert!(p != usize::MAX, "mask {mask:#b} outside dimension {n}");
    p
}

/// Sign of the permutation sorting the concatenation of `a` then `b`
/// (zero if they overlap).
pub fn wedge_sign(a: u8, b: u8) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let mut inversions = 0;
    for i in axes(a) {
        for j in axes(b) {
            if i > j {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A p-form with one coefficient field per basis element.
#[derive(Clone, Debug)]
pub struct Form<F: Field> {
    domain: F::Domain,
    degree: usize,
    c: Vec<F>,
}

impl<F: Field> Form<F> {
    /// The zero p-form; degrees above the dimension give an empty zero form.
    pub fn zero(domain: &F::Domain, degree: usize) -> Self {
        let n = F::dim(domain);
        let len = binomial(n, degree);
        Form {
            domain: domain.clone(),
            degree,
            c: (0..len).map(|_| F::constant(domain, 0.0)).collect(),
        }
    }

    pub fn from_components(
        domain: &F::Domain,
        degree: usize,
        c: Vec<F>,
    ) -> Result<Self, FormError> {
        let n = F::dim(domain);
        if c.len() != binomial(n, degree) {
            return Err(FormError::ComponentCount {
                expected: binomial(n, degree),
                got: c.len(),
            });
        }
        Ok(Form {
            domain: domain.clone(),
            degree,
            c,
        })
    }

    /// A 0-form.
    pub fn scalar(domain: &F::Domain, f: F) -> Self {
        Form {
            domain: domain.clone(),
            degree: 0,
            c: vec![f],
        }
    }

    /// `f dx^axis`.
    pub fn one_form(domain: &F::Domain, axis: usize, f: F) -> Self {
        let mut out = Form::zero(domain, 1);
        out.c[axis] = f;
        out
    }

    /// The basis form dx^axis.
    pub fn dx(domain: &F::Domain, axis: usize) -> Self {
        Form::one_form(domain, axis, F::constant(domain, 1.0))
    }

    /// `f` times the volume form.
    pub fn top(domain: &F::Domain, f: F) -> Self {
        let n = F::dim(domain);
        let mut out = Form::zero(domain, n);
        out.c[0] = f;
        out
    }

    pub fn domain(&self) -> &F::Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        F::dim(&self.domain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[F] {
        &self.c
    }

    /// Coefficient of a basis mask.
    pub fn component(&self, mask: u8) -> &F {
        &self.c[position(self.dim(), mask)]
    }

    pub fn component_mut(&mut self, mask: u8) -> &mut F {
        let p = position(self.dim(), mask);
        &mut self.c[p]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|f| f.is_zero())
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Form {
            domain: self.domain.clone(),
            degree: self.degree,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Form {
            domain: self.domain.clone(),
            degree: self.degree,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|f| f.scale(k))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Multiplies by a scalar field.
    pub fn mul_field(&self, f: &F) -> Self {
        self.map(|c| c.mul(f))
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Form {
            domain: self.domain.clone(),
            degree: self.degree,
            c: self.c.iter().map(f).collect(),
        }
    }

    /// α∧β with basis sign bookkeeping.
    pub fn wedge(&self, o: &Self) -> Self {
        let n = self.dim();
        let p = self.degree + o.degree;
        let mut out = Form::zero(&self.domain, p);
        if p > n {
            return out;
        }
        let ba = basis(n, self.degree);
        let bb = basis(n, o.degree);
        for (i, ma) in ba.iter().enumerate() {
            if self.c[i].is_zero() {
                continue;
            }
            for (j, mb) in bb.iter().enumerate() {
                if o.c[j].is_zero() {
                    continue;
                }
                let s = wedge_sign(*ma, *mb);
                if s == 0.0 {
                    continue;
                }
                let k = position(n, ma | mb);
                let term = self.c[i].mul(&o.c[j]).scale(s);
                out.c[k] = out.c[k].add(&term);
            }
        }
        out
    }

    /// Exterior derivative; top-degree input gives the empty zero form.
    pub fn d(&self) -> Self {
        let n = self.dim();
        let p = self.degree + 1;
        let mut out = Form::zero(&self.domain, p);
        if p > n {
            return out;
        }
        let bi = basis(n, self.degree);
        for (i, m) in bi.iter().enumerate() {
            if self.c[i].is_zero() {
                continue;
            }
            for a in 0..n {
                let s = wedge_sign(1 << a, *m);
                if s == 0.0 {
                    continue;
                }
                let k = position(n, m | (1 << a));
                let term = self.c[i].partial(&self.domain, a).scale(s);
                out.c[k] = out.c[k].add(&term);
            }
        }
        out
    }

    /// Euclidean Hodge star with ∗(dx∧dy[∧dz]) = 1.
    pub fn star(&self) -> Self {
        let n = self.dim();
        let full = ((1u16 << n) - 1) as u8;
        let mut out = Form::zero(&self.domain, n - self.degree.min(n));
        if self.degree > n {
            return out;
        }
        for (i, m) in basis(n, self.degree).iter().enumerate() {
            let comp = full & !m;
            let s = wedge_sign(*m, comp);
            let k = position(n, comp);
            out.c[k] = self.c[i].scale(s);
        }
        out
    }

    /// Interior product with the vector field `x`.
    pub fn interior(&self, x: &VectorField<F>) -> Result<Self, FormError> {
        if self.degree == 0 {
            return Err(FormError::Degree("interior product of a 0-form".into()));
        }
        let n = self.dim();
        let mut out: Form<F> = Form::zero(&self.domain, self.degree - 1);
        for (i, m) in basis(n, self.degree).iter().enumerate() {
            if self.c[i].is_zero() {
                continue;
            }
            for (pos, a) in axes(*m).into_iter().enumerate() {
                if x.c[a].is_zero() {
                    continue;
                }
                let rest = m & !(1 << a);
                let k = position(n, rest);
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let term = self.c[i].mul(&x.c[a]).scale(sign);
                out.c[k] = out.c[k].add(&term);
            }
        }
        Ok(out)
    }

    /// Interior product that returns the zero form on 0-forms.
    pub fn contract(&self, x: &VectorField<F>) -> Self {
        if self.degree == 0 {
            return Form::zero(&self.domain, 0);
        }
        self.interior(x).expect("degree checked")
    }

    /// Plain Lie derivative ι_X d + d ι_X.
    pub fn lie(&self, x: &VectorField<F>) -> Self {
        self.d().contract(x).add(&self.contract(x).d())
    }

    pub fn time_derivative(&self) -> Option<Self> {
        let c = self
            .c
            .iter()
            .map(|f| f.time_derivative())
            .collect::<Option<Vec<_>>>()?;
        Some(Form {
            domain: self.domain.clone(),
            degree: self.degree,
            c,
        })
    }

    pub fn freeze_time(&self) -> Self {
        self.map(|f| f.freeze_time())
    }

    pub fn norm_inf(&self) -> f64 {
        self.c.iter().map(|f| f.norm_inf()).fold(0.0, f64::max)
    }

    pub fn sum_squares(&self) -> (f64, usize) {
        self.c.iter().fold((0.0, 0), |(s, n), f| {
            let (a, b) = f.sum_squares();
            (s + a, n.max(b))
        })
    }
}

/// A vector field with one coefficient field per axis.
#[derive(Clone, Debug)]
pub struct VectorField<F: Field> {
    pub c: Vec<F>,
}

impl<F: Field> VectorField<F> {
    /// Constant basis generator E_A.
    pub fn basis(domain: &F::Domain, a: usize) -> Self {
        let n = F::dim(domain);
        VectorField {
            c: (0..n)
                .map(|i| F::constant(domain, if i == a { 1.0 } else { 0.0 }))
                .collect(),
        }
    }

    /// Rotation generator J_AB = X_A E_B − X_B E_A.
    pub fn rotation(domain: &F::Domain, a: usize, b: usize) -> Result<Self, FormError> {
        if a == b {
            return Err(FormError::DegenerateGenerator(a));
        }
        let n = F::dim(domain);
        let mut c: Vec<F> = (0..n).map(|_| F::constant(domain, 0.0)).collect();
        c[b] = F::coordinate(domain, a);
        c[a] = F::coordinate(domain, b).scale(-1.0);
        Ok(VectorField { c })
    }

    pub fn zero(domain: &F::Domain) -> Self {
        let n = F::dim(domain);
        VectorField {
            c: (0..n).map(|_| F::constant(domain, 0.0)).collect(),
        }
    }
}
