//! Euler–Lagrange balances DH + ∂ₜP = Σ and DO + ∂ₜQ + Z = M.

use crate::constitutive::{dissipative_currents, excitations, momenta};
use crate::error::CoreError;
use crate::params::MaterialParameters;
use crate::report::{Coefficients, ResidualReport};
use crate::state::CosseratState;
use cosserat_forms::{Field, FrameForm, RotForm};

/// Force stress Σ_i and couple stress M, both (n−1)-forms.
#[derive(Clone, Debug)]
pub struct SourceFields<F: Field> {
    pub sigma: FrameForm<F>,
    pub couple: RotForm<F>,
}

impl<F: Field> SourceFields<F> {
    pub fn zero(domain: &F::Domain) -> Self {
        let n = F::dim(domain);
        SourceFields {
            sigma: FrameForm::zero(domain, n - 1),
            couple: RotForm::zero(domain, n - 1),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        SourceFields {
            sigma: self.sigma.add(&o.sigma),
            couple: self.couple.add(&o.couple),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SourceFields {
            sigma: self.sigma.sub(&o.sigma),
            couple: self.couple.sub(&o.couple),
        }
    }

    fn check_degrees(&self, n: usize) -> Result<(), CoreError> {
        for (what, d) in [
            ("force stress", self.sigma.degree()),
            ("couple stress", self.couple.degree()),
        ] {
            if d != n - 1 {
                return Err(CoreError::DegreeMismatch {
                    what,
                    expected: n - 1,
                    got: d,
                });
            }
        }
        Ok(())
    }
}

/// Frame coupling Z_ij = eʲ∧H_i − eⁱ∧H_j, the antisymmetric part of e∧H.
pub fn frame_coupling<F: Field>(s: &CosseratState<F>, h: &FrameForm<F>) -> RotForm<F> {
    RotForm::coupling(s.coframe(), h)
}

/// Left-hand sides (DH + ∂ₜP, DO + ∂ₜQ + Z), optionally with the
/// dissipative currents added.
fn left_sides<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    dissipative: bool,
) -> Result<SourceFields<F>, CoreError> {
    let (h, o) = excitations(s, p);
    let (pm, q) = momenta(s, p);
    let pt = pm.time_derivative().ok_or(CoreError::MissingRate("P"))?;
    let qt = q.time_derivative().ok_or(CoreError::MissingRate("Q"))?;
    let w = s.connection();
    let mut out = SourceFields {
        sigma: h.covariant_d(w).add(&pt),
        couple: o
            .covariant_d(w)
            .add(&qt)
            .add(&frame_coupling(s, &h)),
    };
    if dissipative {
        out = out.add(&dissipative_currents(s, p));
    }
    Ok(out)
}

/// Sources that put the state on shell by construction.
pub fn induced_sources<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    dissipative: bool,
) -> Result<SourceFields<F>, CoreError> {
    left_sides(s, p, dissipative)
}

/// Residual norms of both balances against the given sources.
pub fn el_residuals<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    src: &SourceFields<F>,
    dissipative: bool,
) -> Result<ResidualReport, CoreError> {
    src.check_degrees(s.dim())?;
    let lhs = left_sides(s, p, dissipative)?;
    let r = lhs.sub(src);
    let mut rep = ResidualReport::new();
    rep.record("force", r.sigma.norms());
    rep.record("couple", r.couple.norms());
    Ok(rep)
}

/// Couple balance in the 2D form dO + γ_R K = M, with the rate K entering
/// without a Hodge star and the inertia and frame-coupling terms dropped.
pub fn reduced_couple_residual<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    m: &RotForm<F>,
) -> Result<RotForm<F>, CoreError> {
    if s.dim() != 2 {
        return Err(CoreError::Dimension {
            expected: 2,
            got: s.dim(),
        });
    }
    let (_, o) = excitations(s, p);
    Ok(o.d()
        .add(&s.connection_rate().scale(p.gamma_r))
        .sub(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialCase {
    /// No inertia: DH = Σ, DO + Z = M.
    Static,
    /// Vanishing observable stresses: DH + ∂ₜP = 0, DO + ∂ₜQ + Z = 0.
    StressFree,
    /// T = Ω = 0: the classical balances ∂ₜP = Σ, ∂ₜQ = M.
    Compatible,
}

impl SpecialCase {
    fn name(self) -> &'static str {
        match self {
            SpecialCase::Static => "static",
            SpecialCase::StressFree => "stress-free",
            SpecialCase::Compatible => "compatible",
        }
    }
}

const PRECONDITION_TOL: f64 = 1e-12;

/// Reduced balances of one special case. `src` is ignored for the
/// stress-free case, which requires zero sources.
pub fn special_case<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    src: &SourceFields<F>,
    case: SpecialCase,
) -> Result<ResidualReport, CoreError> {
    src.check_degrees(s.dim())?;
    let fail = |detail: String| CoreError::CasePrecondition {
        case: case.name(),
        detail,
    };
    let (h, o) = excitations(s, p);
    let (pm, q) = momenta(s, p);
    let w = s.connection();
    let mut rep = ResidualReport::new();
    match case {
        SpecialCase::Static => {
            let pt = pm.time_derivative().ok_or(CoreError::MissingRate("P"))?;
            let qt = q.time_derivative().ok_or(CoreError::MissingRate("Q"))?;
            let moving = pm.norm_inf().max(pt.norm_inf());
            let spinning = q.norm_inf().max(qt.norm_inf());
            if moving > PRECONDITION_TOL || spinning > PRECONDITION_TOL {
                return Err(fail(format!(
                    "momenta do not vanish (|P|,|∂ₜP| = {moving:e}, |Q|,|∂ₜQ| = {spinning:e})"
                )));
            }
            rep.record("force", h.covariant_d(w).sub(&src.sigma).norms());
            rep.record(
                "couple",
                o.covariant_d(w)
                    .add(&frame_coupling(s, &h))
                    .sub(&src.couple)
                    .norms(),
            );
        }
        SpecialCase::StressFree => {
            let given = src.sigma.norm_inf().max(src.couple.norm_inf());
            if given > PRECONDITION_TOL {
                return Err(fail(format!("sources are not zero ({given:e})")));
            }
            let lhs = left_sides(s, p, false)?;
            rep.record("force", lhs.sigma.norms());
            rep.record("couple", lhs.couple.norms());
            rep.record("excitation", h.norms().max(o.norms()));
        }
        SpecialCase::Compatible => {
            let defect = s.torsion().norm_inf().max(s.curvature().norm_inf());
            if defect > PRECONDITION_TOL {
                return Err(fail(format!("torsion or curvature is {defect:e}")));
            }
            let pt = pm.time_derivative().ok_or(CoreError::MissingRate("P"))?;
            let qt = q.time_derivative().ok_or(CoreError::MissingRate("Q"))?;
            rep.record("force", pt.sub(&src.sigma).norms());
            rep.record("couple", qt.sub(&src.couple).norms());
            rep.record("excitation", h.norms().max(o.norms()));
        }
    }
    Ok(rep)
}
