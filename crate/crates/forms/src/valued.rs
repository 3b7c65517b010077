//! Frame-vector and so(n)-valued forms, and the connection operators.
//!
//! so(n) storage: in 2D one component s with A_12 = s; in 3D an axial
//! vector w with A = hat(w), A_ij = −ε_ijk w_k. The inner product
//! ½ Σ_ij A_ij B_ij equals the plain sum over storage components.

use crate::error::FormError;
use crate::field::Field;
use crate::form::{Form, VectorField};

/// Number of stored so(n) components.
pub fn so_dim(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Storage slot and sign of the entry A_ij, `None` on the diagonal.
pub fn so_entry(n: usize, i: usize, j: usize) -> Option<(usize, f64)> {
    match (n, i, j) {
        (2, 0, 1) => Some((0, 1.0)),
        (2, 1, 0) => Some((0, -1.0)),
        (3, 2, 1) => Some((0, 1.0)),
        (3, 1, 2) => Some((0, -1.0)),
        (3, 0, 2) => Some((1, 1.0)),
        (3, 2, 0) => Some((1, -1.0)),
        (3, 1, 0) => Some((2, 1.0)),
        (3, 0, 1) => Some((2, -1.0)),
        _ if i == j => None,
        _ => panic!("so({n}) entry ({i},{j}) out of range"),
    }
}

/// The entry (i, j) equal to +storage slot s.
pub fn so_canonical(n: usize, s: usize) -> (usize, usize) {
    match (n, s) {
        (2, 0) => (0, 1),
        (3, 0) => (2, 1),
        (3, 1) => (0, 2),
        (3, 2) => (1, 0),
        _ => panic!("so({n}) slot {s} out of range"),
    }
}

fn sum_forms<F: Field>(domain: &F::Domain, degree: usize, terms: Vec<Form<F>>) -> Form<F> {
    terms
        .into_iter()
        .fold(Form::zero(domain, degree), |acc, t| acc.add(&t))
}

/// Frame-vector valued p-form α^i, i = 1..n.
#[derive(Clone, Debug)]
pub struct FrameForm<F: Field> {
    pub c: Vec<Form<F>>,
}

/// so(n)-valued p-form in axial storage.
#[derive(Clone, Debug)]
pub struct RotForm<F: Field> {
    pub c: Vec<Form<F>>,
}

macro_rules! linear_ops {
    ($t:ident) => {
        impl<F: Field> $t<F> {
            pub fn degree(&self) -> usize {
                self.c[0].degree()
            }

            pub fn domain(&self) -> &F::Domain {
                self.c[0].domain()
            }

            pub fn dim(&self) -> usize {
                self.c[0].dim()
            }

            pub fn add(&self, o: &Self) -> Self {
                $t {
                    c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect(),
                }
            }

            pub fn sub(&self, o: &Self) -> Self {
                $t {
                    c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect(),
                }
            }

            pub fn scale(&self, k: f64) -> Self {
                self.map(|f| f.scale(k))
            }

            pub fn map(&self, f: impl Fn(&Form<F>) -> Form<F>) -> Self {
                $t {
                    c: self.c.iter().map(f).collect(),
                }
            }

            /// Plain exterior derivative, component by component.
            pub fn d(&self) -> Self {
                self.map(|f| f.d())
            }

            pub fn star(&self) -> Self {
                self.map(|f| f.star())
            }

            pub fn interior(&self, x: &VectorField<F>) -> Result<Self, FormError> {
                Ok($t {
                    c: self
                        .c
                        .iter()
                        .map(|f| f.interior(x))
                        .collect::<Result<_, _>>()?,
                })
            }

            /// Interior product returning zero on 0-forms.
            pub fn contract(&self, x: &VectorField<F>) -> Self {
                self.map(|f| f.contract(x))
            }

            /// Plain Lie derivative of each component.
            pub fn lie(&self, x: &VectorField<F>) -> Self {
                self.map(|f| f.lie(x))
            }

            /// Left wedge with a scalar form: f∧α.
            pub fn wedge_scalar_left(&self, f: &Form<F>) -> Self {
                self.map(|a| f.wedge(a))
            }

            /// Right wedge with a scalar form: α∧f.
            pub fn wedge_scalar(&self, f: &Form<F>) -> Self {
                self.map(|a| a.wedge(f))
            }

            pub fn mul_field(&self, f: &F) -> Self {
                self.map(|a| a.mul_field(f))
            }

            pub fn time_derivative(&self) -> Option<Self> {
                Some($t {
                    c: self
                        .c
                        .iter()
                        .map(|f| f.time_derivative())
                        .collect::<Option<_>>()?,
                })
            }

            /// Componentwise pairing Σ a_s∧b_s.
            pub fn pair(&self, o: &Self) -> Form<F> {
                let deg = self.degree() + o.degree();
                sum_forms(
                    self.domain(),
                    deg,
                    self.c.iter().zip(&o.c).map(|(a, b)| a.wedge(b)).collect(),
                )
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

            pub fn is_zero(&self) -> bool {
                self.c.iter().all(|f| f.is_zero())
            }
        }
    };
}

linear_ops!(FrameForm);
linear_ops!(RotForm);

impl<F: Field> FrameForm<F> {
    pub fn zero(domain: &F::Domain, degree: usize) -> Self {
        let n = F::dim(domain);
        FrameForm {
            c: (0..n).map(|_| Form::zero(domain, degree)).collect(),
        }
    }

    pub fn new(c: Vec<Form<F>>) -> Result<Self, FormError> {
        let n = c.first().map(|f| f.dim()).ok_or(FormError::Empty)?;
        if c.len() != n {
            return Err(FormError::ComponentCount {
                expected: n,
                got: c.len(),
            });
        }
        let p = c[0].degree();
        if c.iter().any(|f| f.degree() != p) {
            return Err(FormError::Degree("mixed degrees in a frame form".into()));
        }
        Ok(FrameForm { c })
    }

    /// The identity coframe e^i = dx^i.
    pub fn identity(domain: &F::Domain) -> Self {
        let n = F::dim(domain);
        FrameForm {
            c: (0..n).map(|i| Form::dx(domain, i)).collect(),
        }
    }

    /// Covariant derivative dα + ω∧α.
    pub fn covariant_d(&self, w: &RotForm<F>) -> Self {
        self.d().add(&w.act(self))
    }

    /// Covariant Lie derivative ι_X Dα + D ι_X α.
    pub fn covariant_lie(&self, x: &VectorField<F>, w: &RotForm<F>) -> Self {
        self.covariant_d(w)
            .contract(x)
            .add(&self.contract(x).covariant_d(w))
    }
}

impl<F: Field> RotForm<F> {
    pub fn zero(domain: &F::Domain, degree: usize) -> Self {
        let n = F::dim(domain);
        RotForm {
            c: (0..so_dim(n)).map(|_| Form::zero(domain, degree)).collect(),
        }
    }

    pub fn new(c: Vec<Form<F>>) -> Result<Self, FormError> {
        let n = c.first().map(|f| f.dim()).ok_or(FormError::Empty)?;
        if c.len() != so_dim(n) {
            return Err(FormError::ComponentCount {
                expected: so_dim(n),
                got: c.len(),
            });
        }
        let p = c[0].degree();
        if c.iter().any(|f| f.degree() != p) {
            return Err(FormError::Degree("mixed degrees in a rotation form".into()));
        }
        Ok(RotForm { c })
    }

    /// The matrix entry A_ij as a scalar form.
    pub fn entry(&self, i: usize, j: usize) -> Form<F> {
        match so_entry(self.dim(), i, j) {
            None => Form::zero(self.domain(), self.degree()),
            Some((s, sign)) if sign > 0.0 => self.c[s].clone(),
            Some((s, _)) => self.c[s].neg(),
        }
    }

    /// Builds from an expression known to be antisymmetric, reading only
    /// the canonical entries.
    pub fn from_antisymmetric(
        domain: &F::Domain,
        f: impl Fn(usize, usize) -> Form<F>,
    ) -> Self {
        let n = F::dim(domain);
        RotForm {
            c: (0..so_dim(n))
                .map(|s| {
                    let (i, j) = so_canonical(n, s);
                    f(i, j)
                })
                .collect(),
        }
    }

    /// Antisymmetric projection ½(A − Aᵀ) of a general matrix of forms.
    pub fn project(domain: &F::Domain, f: impl Fn(usize, usize) -> Form<F>) -> Self {
        let n = F::dim(domain);
        RotForm {
            c: (0..so_dim(n))
                .map(|s| {
                    let (i, j) = so_canonical(n, s);
                    f(i, j).sub(&f(j, i)).scale(0.5)
                })
                .collect(),
        }
    }

    /// Contraction of the matrix index with a frame form: (A∧α)^i = A_ik∧α^k.
    pub fn act(&self, a: &FrameForm<F>) -> FrameForm<F> {
        let n = self.dim();
        let deg = self.degree() + a.degree();
        FrameForm {
            c: (0..n)
                .map(|i| {
                    sum_forms(
                        self.domain(),
                        deg,
                        (0..n)
                            .filter(|k| *k != i)
                            .map(|k| self.entry(i, k).wedge(&a.c[k]))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Matrix composition (A∧B)_ij = A_ik∧B_kj, projected onto so(n).
    pub fn compose(&self, b: &RotForm<F>) -> RotForm<F> {
        let n = self.dim();
        let deg = self.degree() + b.degree();
        let prod = |i: usize, j: usize| {
            sum_forms(
                self.domain(),
                deg,
                (0..n)
                    .map(|k| self.entry(i, k).wedge(&b.entry(k, j)))
                    .collect(),
            )
        };
        RotForm::project(self.domain(), prod)
    }

    /// Graded commutator ω∧A − (−1)^{pq} A∧ω, exactly antisymmetric.
    pub fn graded_commutator(&self, a: &RotForm<F>) -> RotForm<F> {
        let n = self.dim();
        let deg = self.degree() + a.degree();
        let sign = if (self.degree() * a.degree()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        RotForm::from_antisymmetric(self.domain(), |i, j| {
            sum_forms(
                self.domain(),
                deg,
                (0..n)
                    .map(|k| {
                        self.entry(i, k)
                            .wedge(&a.entry(k, j))
                            .sub(&a.entry(i, k).wedge(&self.entry(k, j)).scale(sign))
                    })
                    .collect(),
            )
        })
    }

    /// Covariant derivative dA + ω∧A − (−1)^p A∧ω.
    pub fn covariant_d(&self, w: &RotForm<F>) -> Self {
        self.d().add(&w.graded_commutator(self))
    }

    /// Covariant Lie derivative ι_X DA + D ι_X A.
    pub fn covariant_lie(&self, x: &VectorField<F>, w: &RotForm<F>) -> Self {
        self.covariant_d(w)
            .contract(x)
            .add(&self.contract(x).covariant_d(w))
    }

    /// Curvature of this connection, dω + ω∧ω.
    pub fn curvature(&self) -> Self {
        self.d().add(&self.compose(self))
    }

    /// Antisymmetric coupling C_ij = a^j∧b_i − a^i∧b_j.
    pub fn coupling(a: &FrameForm<F>, b: &FrameForm<F>) -> Self {
        RotForm::from_antisymmetric(a.domain(), |i, j| {
            a.c[j].wedge(&b.c[i]).sub(&a.c[i].wedge(&b.c[j]))
        })
    }
}

/// Value kind of a [`ValuedForm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Scalar,
    FrameVector,
    Rotation,
}

/// A form of any value kind, for code paths that pick the kind at run time.
#[derive(Clone, Debug)]
pub enum ValuedForm<F: Field> {
    Scalar(Form<F>),
    Frame(FrameForm<F>),
    Rotation(RotForm<F>),
}

impl<F: Field> ValuedForm<F> {
    pub fn kind(&self) -> ValueKind {
        match self {
            ValuedForm::Scalar(_) => ValueKind::Scalar,
            ValuedForm::Frame(_) => ValueKind::FrameVector,
            ValuedForm::Rotation(_) => ValueKind::Rotation,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ValuedForm::Scalar(f) => f.degree(),
            ValuedForm::Frame(f) => f.degree(),
            ValuedForm::Rotation(f) => f.degree(),
        }
    }

    /// Wedge with kind composition: scalar·any, rotation·frame contracts,
    /// rotation·rotation composes.
    pub fn wedge(&self, o: &Self) -> Result<Self, FormError> {
        use ValuedForm::*;
        Ok(match (self, o) {
            (Scalar(a), Scalar(b)) => Scalar(a.wedge(b)),
            (Scalar(a), Frame(b)) => Frame(b.wedge_scalar_left(a)),
            (Scalar(a), Rotation(b)) => Rotation(b.wedge_scalar_left(a)),
            (Frame(a), Scalar(b)) => Frame(a.wedge_scalar(b)),
            (Rotation(a), Scalar(b)) => Rotation(a.wedge_scalar(b)),
            (Rotation(a), Frame(b)) => Frame(a.act(b)),
            (Rotation(a), Rotation(b)) => Rotation(a.compose(b)),
            (a, b) => {
                return Err(FormError::KindMismatch {
                    left: a.kind(),
                    right: b.kind(),
                })
            }
        })
    }

    pub fn d(&self) -> Self {
        match self {
            ValuedForm::Scalar(f) => ValuedForm::Scalar(f.d()),
            ValuedForm::Frame(f) => ValuedForm::Frame(f.d()),
            ValuedForm::Rotation(f) => ValuedForm::Rotation(f.d()),
        }
    }

    /// Covariant derivative; scalar forms take the plain derivative.
    pub fn covariant_d(&self, w: &RotForm<F>) -> Self {
        match self {
            ValuedForm::Scalar(f) => ValuedForm::Scalar(f.d()),
            ValuedForm::Frame(f) => ValuedForm::Frame(f.covariant_d(w)),
            ValuedForm::Rotation(f) => ValuedForm::Rotation(f.covariant_d(w)),
        }
    }

    pub fn star(&self) -> Self {
        match self {
            ValuedForm::Scalar(f) => ValuedForm::Scalar(f.star()),
            ValuedForm::Frame(f) => ValuedForm::Frame(f.star()),
            ValuedForm::Rotation(f) => ValuedForm::Rotation(f.star()),
        }
    }

    pub fn interior(&self, x: &VectorField<F>) -> Result<Self, FormError> {
        Ok(match self {
            ValuedForm::Scalar(f) => ValuedForm::Scalar(f.interior(x)?),
            ValuedForm::Frame(f) => ValuedForm::Frame(f.interior(x)?),
            ValuedForm::Rotation(f) => ValuedForm::Rotation(f.interior(x)?),
        })
    }

    pub fn norm_inf(&self) -> f64 {
        match self {
            ValuedForm::Scalar(f) => f.norm_inf(),
            ValuedForm::Frame(f) => f.norm_inf(),
            ValuedForm::Rotation(f) => f.norm_inf(),
        }
    }
}
