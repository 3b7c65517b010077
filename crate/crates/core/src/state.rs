//! The Cosserat field tuple and its homogeneous (Bianchi) sector.

use crate::error::CoreError;
use crate::report::{Coefficients, Norms, ResidualReport};
use cosserat_forms::{Field, FrameForm, RotForm};
use std::sync::OnceLock;

/// Coframe e, connection ω and their rates J = ∂ₜe, K = ∂ₜω at one time.
///
/// Torsion and curvature are computed on first access and dropped whenever
/// e or ω is replaced.
#[derive(Clone, Debug)]
pub struct CosseratState<F: Field> {
    t: f64,
    e: FrameForm<F>,
    w: RotForm<F>,
    j: FrameForm<F>,
    k: RotForm<F>,
    torsion: OnceLock<FrameForm<F>>,
    curvature: OnceLock<RotForm<F>>,
}

fn expect_one_form(what: &'static str, deg: usize) -> Result<(), CoreError> {
    if deg != 1 {
        return Err(CoreError::DegreeMismatch {
            what,
            expected: 1,
            got: deg,
        });
    }
    Ok(())
}

impl<F: Field> CosseratState<F> {
    pub fn new(
        t: f64,
        e: FrameForm<F>,
        w: RotForm<F>,
        j: FrameForm<F>,
        k: RotForm<F>,
    ) -> Result<Self, CoreError> {
        expect_one_form("coframe", e.degree())?;
        expect_one_form("connection", w.degree())?;
        expect_one_form("coframe rate", j.degree())?;
        expect_one_form("connection rate", k.degree())?;
        let n = e.dim();
        for d in [w.dim(), j.dim(), k.dim()] {
            if d != n {
                return Err(CoreError::Dimension {
                    expected: n,
                    got: d,
                });
            }
        }
        Ok(CosseratState {
            t,
            e,
            w,
            j,
            k,
            torsion: OnceLock::new(),
            curvature: OnceLock::new(),
        })
    }

    /// Identity coframe, zero connection, no motion.
    pub fn reference(domain: &F::Domain, t: f64) -> Self {
        CosseratState::new(
            t,
            FrameForm::identity(domain),
            RotForm::zero(domain, 1),
            FrameForm::zero(domain, 1),
            RotForm::zero(domain, 1),
        )
        .expect("reference state is well formed")
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    pub fn domain(&self) -> &F::Domain {
        self.e.domain()
    }

    pub fn coframe(&self) -> &FrameForm<F> {
        &self.e
    }

    pub fn connection(&self) -> &RotForm<F> {
        &self.w
    }

    pub fn coframe_rate(&self) -> &FrameForm<F> {
        &self.j
    }

    pub fn connection_rate(&self) -> &RotForm<F> {
        &self.k
    }

    pub fn set_coframe(&mut self, e: FrameForm<F>) -> Result<(), CoreError> {
        expect_one_form("coframe", e.degree())?;
        self.e = e;
        self.torsion = OnceLock::new();
        Ok(())
    }

    pub fn set_connection(&mut self, w: RotForm<F>) -> Result<(), CoreError> {
        expect_one_form("connection", w.degree())?;
        self.w = w;
        self.torsion = OnceLock::new();
        self.curvature = OnceLock::new();
        Ok(())
    }

    pub fn set_rates(&mut self, j: FrameForm<F>, k: RotForm<F>) -> Result<(), CoreError> {
        expect_one_form("coframe rate", j.degree())?;
        expect_one_form("connection rate", k.degree())?;
        self.j = j;
        self.k = k;
        Ok(())
    }

    /// T = De = de + ω∧e.
    pub fn torsion(&self) -> &FrameForm<F> {
        self.torsion.get_or_init(|| self.e.covariant_d(&self.w))
    }

    /// Ω = dω + ω∧ω.
    pub fn curvature(&self) -> &RotForm<F> {
        self.curvature.get_or_init(|| self.w.curvature())
    }

    /// Compatible limit: torsion and curvature vanish within `tol`.
    pub fn is_compatible(&self, tol: f64) -> bool {
        self.torsion().norm_inf() <= tol && self.curvature().norm_inf() <= tol
    }

    /// Drops time information from every field.
    pub fn freeze_time(&self) -> Self {
        CosseratState::new(
            self.t,
            self.e.freeze_time(),
            self.w.freeze_time(),
            self.j.freeze_time(),
            self.k.freeze_time(),
        )
        .expect("freezing keeps degrees")
    }
}

/// Bianchi residuals. The spatial pair (DT − Ω∧e, DΩ) is a pair of 3-forms
/// and only exists in 3D; the dynamic pair needs time derivatives.
#[derive(Clone, Debug)]
pub struct BianchiResiduals<F: Field> {
    pub spatial: Option<(FrameForm<F>, RotForm<F>)>,
    /// (∂ₜT − DJ − K∧e, ∂ₜΩ − DK)
    pub dynamic: Option<(FrameForm<F>, RotForm<F>)>,
}

impl<F: Field> BianchiResiduals<F> {
    pub fn report(&self, tol: f64) -> ResidualReport {
        let mut r = ResidualReport::new();
        if let Some((a, b)) = &self.spatial {
            r.check("first", a.norms(), tol);
            r.check("second", b.norms(), tol);
        }
        if let Some((a, b)) = &self.dynamic {
            r.check("torsion_transport", a.norms(), tol);
            r.check("curvature_transport", b.norms(), tol);
        }
        if self.dynamic.is_none() {
            r.note("no time-derivative data: spatial residuals only");
        }
        r
    }

    pub fn norms(&self) -> Norms {
        let mut n = Norms::default();
        if let Some((a, b)) = &self.spatial {
            n = n.max(a.norms()).max(b.norms());
        }
        if let Some((a, b)) = &self.dynamic {
            n = n.max(a.norms()).max(b.norms());
        }
        n
    }
}

pub fn bianchi_residuals<F: Field>(s: &CosseratState<F>) -> BianchiResiduals<F> {
    let t = s.torsion();
    let om = s.curvature();
    let spatial = (s.dim() == 3).then(|| {
        (
            t.covariant_d(&s.w).sub(&om.act(&s.e)),
            om.covariant_d(&s.w),
        )
    });
    let dynamic = match (t.time_derivative(), om.time_derivative()) {
        (Some(tt), Some(ot)) => {
            let (rt, ro) = transport_rhs(s);
            Some((tt.sub(&rt), ot.sub(&ro)))
        }
        _ => None,
    };
    BianchiResiduals { spatial, dynamic }
}

/// Right-hand sides of the dynamic Bianchi identities:
/// ∂ₜT = DJ + K∧e, ∂ₜΩ = DK.
pub fn transport_rhs<F: Field>(s: &CosseratState<F>) -> (FrameForm<F>, RotForm<F>) {
    let (dj, ke) = transport_split(s);
    (dj.add(&ke), s.k.covariant_d(&s.w))
}

/// The two parts of ∂ₜT: frame evolution DJ and connection evolution K∧e.
pub fn transport_split<F: Field>(s: &CosseratState<F>) -> (FrameForm<F>, FrameForm<F>) {
    (s.j.covariant_d(&s.w), s.k.act(&s.e))
}

#[derive(Clone, Copy, Debug)]
pub struct TransportOptions {
    /// Allowed max-norm gap between transported and recomputed (T, Ω).
    pub tolerance: f64,
    /// Keep every n-th state (the first and last are always kept).
    pub record_every: usize,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            tolerance: 1e-8,
            record_every: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory<F: Field> {
    pub snapshots: Vec<CosseratState<F>>,
    /// Largest gap between the two torsion/curvature paths.
    pub max_divergence: f64,
}

#[derive(Clone)]
struct Stage<F: Field> {
    e: FrameForm<F>,
    w: RotForm<F>,
    t: FrameForm<F>,
    o: RotForm<F>,
}

impl<F: Field> Stage<F> {
    fn axpy(&self, h: f64, d: &Stage<F>) -> Stage<F> {
        Stage {
            e: self.e.add(&d.e.scale(h)),
            w: self.w.add(&d.w.scale(h)),
            t: self.t.add(&d.t.scale(h)),
            o: self.o.add(&d.o.scale(h)),
        }
    }
}

/// Evolves (e, ω) with prescribed rates and, independently, (T, Ω) by the
/// transport equations, with classical RK4. Fails when the transported
/// torsion or curvature drifts from the one recomputed from (e, ω).
pub fn integrate_transport<F: Field>(
    start: &CosseratState<F>,
    rates: impl Fn(f64) -> (FrameForm<F>, RotForm<F>),
    dt: f64,
    steps: usize,
    opts: TransportOptions,
) -> Result<Trajectory<F>, CoreError> {
    if !(dt > 0.0) {
        return Err(CoreError::Parameter(format!("dt must be positive, got {dt}")));
    }
    let every = opts.record_every.max(1);
    let s0 = start.freeze_time();
    let mut y = Stage {
        e: s0.e.clone(),
        w: s0.w.clone(),
        t: s0.torsion().clone(),
        o: s0.curvature().clone(),
    };
    let mut snapshots = vec![s0];
    let mut t = start.t;
    let mut max_divergence: f64 = 0.0;
    let rhs = |time: f64, y: &Stage<F>| {
        let (j, k) = rates(time);
        let (j, k) = (j.freeze_time(), k.freeze_time());
        Stage {
            t: j.covariant_d(&y.w).add(&k.act(&y.e)),
            o: k.covariant_d(&y.w),
            e: j,
            w: k,
        }
    };
    for step in 1..=steps {
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * dt, &y.axpy(0.5 * dt, &k1));
        let k3 = rhs(t + 0.5 * dt, &y.axpy(0.5 * dt, &k2));
        let k4 = rhs(t + dt, &y.axpy(dt, &k3));
        y = y
            .axpy(dt / 6.0, &k1)
            .axpy(dt / 3.0, &k2)
            .axpy(dt / 3.0, &k3)
            .axpy(dt / 6.0, &k4);
        t = start.t + step as f64 * dt;
        let t_re = y.e.covariant_d(&y.w);
        let o_re = y.w.curvature();
        let div = t_re.sub(&y.t).norm_inf().max(o_re.sub(&y.o).norm_inf());
        max_divergence = max_divergence.max(div);
        if !(div <= opts.tolerance) {
            return Err(CoreError::IntegratorConsistency {
                t,
                divergence: div,
                tolerance: opts.tolerance,
            });
        }
        if step % every == 0 || step == steps {
            let (j, k) = rates(t);
            snapshots.push(CosseratState::new(
                t,
                y.e.clone(),
                y.w.clone(),
                j.freeze_time(),
                k.freeze_time(),
            )?);
        }
    }
    Ok(Trajectory {
        snapshots,
        max_divergence,
    })
}
