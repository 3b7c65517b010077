//! Excitations, momenta, dissipative currents and energy densities of the
//! quadratic model.

use crate::balance::SourceFields;
use crate::error::CoreError;
use crate::params::MaterialParameters;
use crate::state::CosseratState;
use cosserat_forms::{Field, Form, FrameForm};

fn apply_matrix<F: Field>(a: &FrameForm<F>, entry: impl Fn(usize, usize) -> f64) -> FrameForm<F> {
    let n = a.dim();
    let s = a.star();
    FrameForm {
        c: (0..n)
            .map(|i| {
                (0..n).fold(Form::zero(s.domain(), s.degree()), |acc, j| {
                    let k = entry(i, j);
                    if k == 0.0 {
                        acc
                    } else {
                        acc.add(&s.c[j].scale(k))
                    }
                })
            })
            .collect(),
    }
}

/// H_i = A_ij ∗Tʲ (A = μ_T δ by default) and O = μ_R ∗Ω.
pub fn excitations<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
) -> (FrameForm<F>, cosserat_forms::RotForm<F>) {
    (
        apply_matrix(s.torsion(), |i, j| p.stiffness_entry(i, j)),
        s.curvature().star().scale(p.mu_r),
    )
}

/// P_i = ρ_ij ∗Jʲ and Q = ρ_R ∗K, both (n−1)-forms.
pub fn momenta<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
) -> (FrameForm<F>, cosserat_forms::RotForm<F>) {
    (
        apply_matrix(s.coframe_rate(), |i, j| p.inertia_entry(i, j)),
        s.connection_rate().star().scale(p.rho_r),
    )
}

/// Σ_dis = γ_T ∗J and M_dis = γ_R ∗K, the same degree as ∂ₜP and ∂ₜQ.
pub fn dissipative_currents<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
) -> SourceFields<F> {
    SourceFields {
        sigma: s.coframe_rate().star().scale(p.gamma_t),
        couple: s.connection_rate().star().scale(p.gamma_r),
    }
}

fn sum_squares_field<F: Field, C: crate::report::Coefficients<F>>(x: &C, domain: &F::Domain) -> F {
    x.coefficients()
        .into_iter()
        .fold(F::constant(domain, 0.0), |acc, f| acc.add(&f.mul(f)))
}

/// R = γ_T⟨J,J⟩ + γ_R⟨K,K⟩ as a 0-form.
pub fn dissipation_density<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
) -> Result<Form<F>, CoreError> {
    if p.gamma_t < 0.0 || p.gamma_r < 0.0 {
        return Err(CoreError::Parameter(format!(
            "viscosities must be >= 0, got {} and {}",
            p.gamma_t, p.gamma_r
        )));
    }
    let d = s.domain();
    let jj = sum_squares_field(s.coframe_rate(), d);
    let kk = sum_squares_field(s.connection_rate(), d);
    Ok(Form::scalar(d, jj.scale(p.gamma_t).add(&kk.scale(p.gamma_r))))
}

/// Stored plus kinetic energy density as a 0-form,
/// E = ½∗(J·P + ⟨K∧Q⟩ + T·H + ⟨Ω∧O⟩).
pub fn energy_density<F: Field>(s: &CosseratState<F>, p: &MaterialParameters) -> Form<F> {
    let (h, o) = excitations(s, p);
    let (pm, q) = momenta(s, p);
    s.coframe_rate()
        .pair(&pm)
        .add(&s.connection_rate().pair(&q))
        .add(&s.torsion().pair(&h))
        .add(&s.curvature().pair(&o))
        .star()
        .scale(0.5)
}

/// Lagrangian n-form ½(T·H + ⟨Ω∧O⟩ − J·P − ⟨K∧Q⟩), stored minus kinetic.
pub fn lagrangian<F: Field>(s: &CosseratState<F>, p: &MaterialParameters) -> Form<F> {
    let (h, o) = excitations(s, p);
    let (pm, q) = momenta(s, p);
    s.torsion()
        .pair(&h)
        .add(&s.curvature().pair(&o))
        .sub(&s.coframe_rate().pair(&pm))
        .sub(&s.connection_rate().pair(&q))
        .scale(0.5)
}

/// Power flux (n−1)-form J·H + ⟨K∧O⟩.
pub fn energy_flux<F: Field>(s: &CosseratState<F>, p: &MaterialParameters) -> Form<F> {
    let (h, o) = excitations(s, p);
    s.coframe_rate().pair(&h).add(&s.connection_rate().pair(&o))
}

/// Flux divergence D = −∗d(J·H + ⟨K∧O⟩) as a 0-form.
pub fn flux_divergence<F: Field>(s: &CosseratState<F>, p: &MaterialParameters) -> Form<F> {
    energy_flux(s, p).d().star().neg()
}

/// External power ∗(J·Σ + ⟨K∧M⟩) delivered by the sources.
pub fn external_power<F: Field>(s: &CosseratState<F>, src: &SourceFields<F>) -> Form<F> {
    s.coframe_rate()
        .pair(&src.sigma)
        .add(&s.connection_rate().pair(&src.couple))
        .star()
}

/// ∂ₜE + D − P_ext + R from exact time derivatives (jets, or grids with
/// rates).
pub fn energy_balance_exact<F: Field>(
    s: &CosseratState<F>,
    p: &MaterialParameters,
    p_ext: &Form<F>,
) -> Result<Form<F>, CoreError> {
    let et = energy_density(s, p)
        .time_derivative()
        .ok_or(CoreError::MissingRate("energy density"))?;
    Ok(et
        .add(&flux_divergence(s, p))
        .sub(p_ext)
        .add(&dissipation_density(s, p)?))
}

/// ∂ₜE + D − P_ext + R at the interior snapshots of an equally spaced
/// trajectory, with ∂ₜE by central differences. `p_ext[k]` belongs to
/// `trajectory[k]`.
pub fn energy_balance_residual<F: Field>(
    trajectory: &[CosseratState<F>],
    p: &MaterialParameters,
    p_ext: &[Form<F>],
) -> Result<Vec<Form<F>>, CoreError> {
    let n = trajectory.len();
    if n < 3 {
        return Err(CoreError::InsufficientData { needed: 3, got: n });
    }
    if p_ext.len() != n {
        return Err(CoreError::InsufficientData {
            needed: n,
            got: p_ext.len(),
        });
    }
    let dt = trajectory[1].time() - trajectory[0].time();
    if !(dt > 0.0) {
        return Err(CoreError::Parameter("snapshots must advance in time".into()));
    }
    for w in trajectory.windows(2) {
        let step = w[1].time() - w[0].time();
        if (step - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(CoreError::Parameter("snapshots must be equally spaced".into()));
        }
    }
    let energy: Vec<Form<F>> = trajectory.iter().map(|s| energy_density(s, p)).collect();
    (1..n - 1)
        .map(|k| {
            let s = &trajectory[k];
            let et = energy[k + 1].sub(&energy[k - 1]).scale(0.5 / dt);
            Ok(et
                .add(&flux_divergence(s, p))
                .sub(&p_ext[k])
                .add(&dissipation_density(s, p)?))
        })
        .collect()
}
