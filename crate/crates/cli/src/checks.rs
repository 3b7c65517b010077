//! Per-point identity checks shared by `run` and `verify`.

use crate::error::CliError;
use cosserat_core::balance::{el_residuals, induced_sources, special_case, SourceFields, SpecialCase};
use cosserat_core::configurational::{
    noether_residual_with_sources, phi_cancellation_check, rotational_currents_and_residual,
    SourceConvention,
};
use cosserat_core::constitutive::{energy_balance_exact, external_power};
use cosserat_core::report::{Coefficients, Norms};
use cosserat_core::state::bianchi_residuals;
use cosserat_core::{CosseratState, MaterialParameters, ResidualReport};
use cosserat_forms::{FrameForm, Jet, RotForm, VectorField};

pub const AXES: [&str; 3] = ["x", "y", "z"];

/// Keeps the norms of `rep`, checking only `checked` against `tol`.
pub fn retol(rep: ResidualReport, checked: &[&str], tol: f64) -> ResidualReport {
    let mut out = ResidualReport::new();
    for (k, r) in &rep.residuals {
        let n = Norms { inf: r.inf, l2: r.l2 };
        if checked.contains(&k.as_str()) {
            out.check(k, n, tol);
        } else {
            out.record(k, n);
        }
    }
    for n in rep.notes {
        out.note(n);
    }
    out
}

pub fn bianchi(s: &CosseratState<Jet>, tol: f64) -> ResidualReport {
    bianchi_residuals(s).report(tol)
}

/// Induced sources fed back into the balances, with and without the
/// dissipative currents.
pub fn el(s: &CosseratState<Jet>, p: &MaterialParameters, tol: f64) -> Result<ResidualReport, CliError> {
    let mut out = ResidualReport::new();
    for (name, diss) in [("conservative", false), ("dissipative", true)] {
        let src = induced_sources(s, p, diss)?;
        let r = el_residuals(s, p, &src, diss)?;
        out.merge_max(&retol(r, &["force", "couple"], tol).prefixed(name));
    }
    Ok(out)
}

pub fn energy(s: &CosseratState<Jet>, p: &MaterialParameters, tol: f64) -> Result<ResidualReport, CliError> {
    let src = induced_sources(s, p, true)?;
    let r = energy_balance_exact(s, p, &external_power(s, &src))?;
    let mut out = ResidualReport::new();
    out.check("balance", r.norms(), tol);
    Ok(out)
}

/// Completed translational identity per axis; the split form is kept
/// for information only.
pub fn noether(
    s: &CosseratState<Jet>,
    p: &MaterialParameters,
    tol: f64,
    conv: SourceConvention,
) -> Result<ResidualReport, CliError> {
    let src = induced_sources(s, p, false)?;
    let mut out = ResidualReport::new();
    for a in 0..s.dim() {
        let x = VectorField::basis(s.domain(), a);
        let (_, r) = noether_residual_with_sources(s, p, &src, &x, conv)?;
        out.merge_max(&retol(r, &["extended.completed"], tol).prefixed(AXES[a]));
    }
    Ok(out)
}

pub fn phi(s: &CosseratState<Jet>, p: &MaterialParameters, tol: f64) -> Result<ResidualReport, CliError> {
    let mut out = ResidualReport::new();
    for a in 0..s.dim() {
        let r = phi_cancellation_check(s, p, &VectorField::basis(s.domain(), a))?;
        let steps = ["leibniz", "balance_insertion", "cartan", "bianchi", "final.completed"];
        out.merge_max(&retol(r, &steps, tol).prefixed(AXES[a]));
    }
    Ok(out)
}

pub fn rotational(
    s: &CosseratState<Jet>,
    p: &MaterialParameters,
    tol: f64,
    conv: SourceConvention,
) -> Result<ResidualReport, CliError> {
    let mut out = ResidualReport::new();
    let n = s.dim();
    for a in 0..n {
        for b in a + 1..n {
            let (_, r) = rotational_currents_and_residual(s, p, a, b, conv)?;
            let name = format!("{}{}", AXES[a], AXES[b]);
            out.merge_max(&retol(r, &["extended.completed"], tol).prefixed(&name));
        }
    }
    Ok(out)
}

/// The static reduction agrees with the full balances once the state is
/// brought to rest, for sources that are not on shell.
pub fn special(s: &CosseratState<Jet>, p: &MaterialParameters, tol: f64) -> Result<ResidualReport, CliError> {
    let mut rest = s.freeze_time();
    let dom = rest.domain().clone();
    rest.set_rates(FrameForm::zero(&dom, 1), RotForm::zero(&dom, 1))?;
    let src = induced_sources(&rest, p, false)?;
    let src = SourceFields {
        sigma: src.sigma.scale(0.5),
        couple: src.couple.scale(1.5),
    };
    let full = el_residuals(&rest, p, &src, false)?;
    let stat = special_case(&rest, p, &src, SpecialCase::Static)?;
    let mut out = ResidualReport::new();
    for k in ["force", "couple"] {
        let gap = (full.inf(k) - stat.inf(k)).abs();
        out.check(&format!("static.{k}_gap"), Norms { inf: gap, l2: gap }, tol);
    }
    Ok(out)
}
