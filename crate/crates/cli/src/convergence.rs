//! `convergence`: residual norms over a list of resolutions, with observed
//! orders from successive spacings.

use crate::checks;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{json, num, Artifacts, Table};
use crate::run::{convention, scenario_spec};
use crate::Outcome;
use cosserat_core::balance::{el_residuals, induced_sources};
use cosserat_core::configurational::noether_translation_residual;
use cosserat_core::constitutive::{energy_balance_exact, external_power};
use cosserat_core::report::observed_orders;
use cosserat_core::scenarios::{grid_for, state_at, state_on_grid, AnalyticFamily};
use cosserat_core::state::bianchi_residuals;
use cosserat_core::wave::{dispersion_check, DispersionOptions};
use cosserat_core::MaterialParameters;
use cosserat_forms::VectorField;
use serde::Serialize;
use std::f64::consts::PI;

pub const CHECKS: [&str; 7] = ["bianchi", "energy", "noether", "el", "analytic", "dispersion", "order"];

const EXACT_TOL: f64 = 1e-8;
const MIN_ORDER: f64 = 1.8;
const SAMPLE_TIME: f64 = 0.2;

#[derive(Clone, Copy, PartialEq)]
enum Expect {
    /// Residual is zero up to roundoff at every resolution.
    Exact,
    /// Second-order discretization error.
    Second,
}

#[derive(Serialize)]
struct Row {
    check: String,
    resolution: usize,
    norm: f64,
    order: String,
}

#[derive(Serialize)]
struct Study {
    scenario: String,
    passed: bool,
    min_order: f64,
    rows: Vec<Row>,
}

fn spacing(points: usize, periodic: bool) -> f64 {
    if periodic {
        1.0 / points as f64
    } else {
        1.0 / (points - 1) as f64
    }
}

fn norms_for(
    check: &str,
    fam: &dyn AnalyticFamily,
    p: &MaterialParameters,
    cfg: &RunConfig,
    res: usize,
) -> Result<f64, CliError> {
    let needs_rates = !(check == "bianchi" && fam.dim() == 3);
    let grid_state = || -> Result<_, CliError> {
        let g = grid_for(fam, res)?;
        Ok((state_on_grid(fam, &g, SAMPLE_TIME, needs_rates)?, g))
    };
    Ok(match check {
        "bianchi" => bianchi_residuals(&grid_state()?.0).norms().inf,
        "energy" => {
            let (s, _) = grid_state()?;
            let src = induced_sources(&s, p, true)?;
            energy_balance_exact(&s, p, &external_power(&s, &src))?.norm_inf()
        }
        "noether" => {
            let (s, g) = grid_state()?;
            let r = noether_translation_residual(&s, p, &VectorField::basis(&g, 0), convention(cfg))?;
            r.inf("extended.completed")
        }
        "el" => {
            let (s, _) = grid_state()?;
            let src = induced_sources(&s, p, true)?;
            let r = el_residuals(&s, p, &src, true)?;
            r.inf("force").max(r.inf("couple"))
        }
        "analytic" => {
            let mut worst: f64 = 0.0;
            for k in 0..res {
                let u = (k as f64 + 0.5) / res as f64;
                let s = state_at(fam, [u, 1.0 - u, 0.5 * u], SAMPLE_TIME, 3)?;
                let mut rep = checks::bianchi(&s, EXACT_TOL);
                rep.merge_max(&checks::el(&s, p, EXACT_TOL)?);
                rep.merge_max(&checks::noether(&s, p, EXACT_TOL, convention(cfg))?);
                worst = rep
                    .residuals
                    .values()
                    .filter(|r| r.tolerance.is_some())
                    .fold(worst, |w, r| w.max(r.inf));
            }
            worst
        }
        "dispersion" => {
            let d = dispersion_check(
                p,
                2.0 * PI,
                DispersionOptions {
                    points: res,
                    ..Default::default()
                },
            )?;
            (d.measured_speed - d.damped_speed).abs()
        }
        other => unreachable!("unknown convergence check {other}"),
    })
}

pub fn cmd_convergence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_names(&CHECKS)?;
    let name = cfg.scenario.clone().unwrap_or_else(|| "manufactured-random".into());
    let spec = scenario_spec(cfg, &name)?;
    let p = &cfg.material;
    let fam = spec.family(p)?;
    p.validate(fam.dim())?;
    let min_order = cfg.tolerance("order", MIN_ORDER);
    let plan: Vec<(&str, Expect)> = [
        ("bianchi", if fam.dim() == 3 { Expect::Second } else { Expect::Exact }),
        ("energy", Expect::Second),
        ("noether", Expect::Second),
        ("el", Expect::Exact),
        ("analytic", Expect::Exact),
        ("dispersion", Expect::Second),
    ]
    .into_iter()
    .filter(|(c, _)| cfg.selected(c))
    .collect();

    let mut rows = Vec::new();
    let mut passed = true;
    let mut failing = Vec::new();
    for (check, expect) in plan {
        let norms: Vec<f64> = cfg
            .resolutions
            .iter()
            .map(|&r| norms_for(check, fam.as_ref(), p, cfg, r))
            .collect::<Result<_, _>>()?;
        let tol = cfg.tolerance(check, EXACT_TOL);
        let exact = norms.iter().all(|n| *n < tol);
        let periodic = check == "dispersion" || fam.periodic();
        let h: Vec<f64> = cfg.resolutions.iter().map(|&r| spacing(r, periodic)).collect();
        let observed = observed_orders(&h, &norms);
        let orders: Vec<String> = if exact {
            vec!["exact".to_string(); norms.len()]
        } else {
            let mut out = vec!["-".to_string()];
            out.extend(observed[1..].iter().map(|v| v.map_or("n/a".to_string(), num)));
            out
        };
        let ok = exact
            || (expect == Expect::Second
                && observed[1..].iter().all(|o| o.is_some_and(|v| v >= min_order)));
        if !ok {
            passed = false;
            failing.push(check);
        }
        for ((res, norm), order) in cfg.resolutions.iter().zip(&norms).zip(orders) {
            rows.push(Row {
                check: check.to_string(),
                resolution: *res,
                norm: *norm,
                order,
            });
        }
    }

    let mut table = Table::new(&["check", "resolution", "norm", "order"])?;
    for r in &rows {
        table.row([r.check.clone(), r.resolution.to_string(), num(r.norm), r.order.clone()])?;
    }
    let csv = table.finish()?;
    let study = Study {
        scenario: name,
        passed,
        min_order,
        rows,
    };
    let body = json(&study)?;
    let mut art = Artifacts::new();
    if cfg.wants(Format::Csv) {
        art.add("convergence.csv", csv.clone());
    }
    if cfg.wants(Format::Json) {
        art.add("convergence.json", body.clone());
    }
    let mut stdout = String::from_utf8(csv).expect("csv is utf-8");
    if !failing.is_empty() {
        stdout.push_str(&format!("failing: {}\n", failing.join(" ")));
    }
    Ok(Outcome {
        command: "convergence",
        passed,
        stdout,
        json: Some(body),
        artifacts: art,
    })
}
