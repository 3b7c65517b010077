//! `run`: evaluate one scenario over [0, t_end], dump fields on the grid
//! at the recorded snapshots, and report per-point identity residuals.

use crate::checks;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{json, num, Artifacts, Table};
use crate::Outcome;
use cosserat_core::balance::induced_sources;
use cosserat_core::configurational::{translational_source, SourceConvention};
use cosserat_core::constitutive::{energy_density, excitations, momenta};
use cosserat_core::report::Norms;
use cosserat_core::scenarios::{
    appendix_table, example1_stated_sources, grid_for, rates_at, state_at, Example1, ScenarioSpec,
};
use cosserat_core::state::{integrate_transport, TransportOptions};
use cosserat_core::{CosseratState, MaterialParameters, ResidualReport};
use cosserat_forms::form::basis;
use cosserat_forms::valued::so_canonical;
use cosserat_forms::{Form, FrameForm, Jet, RotForm, VectorField};
use serde::Serialize;
use std::collections::BTreeMap;

pub const CHECKS: [&str; 6] = ["bianchi", "el", "energy", "noether", "transport", "table"];

const DEFAULT_TOL: [(&str, f64); 6] = [
    ("bianchi", 1e-10),
    ("el", 1e-10),
    ("energy", 1e-10),
    ("noether", 1e-8),
    ("transport", 1e-8),
    ("table", 5e-4),
];

fn default_tol(family: &str) -> f64 {
    DEFAULT_TOL.iter().find(|(n, _)| *n == family).map_or(1e-8, |x| x.1)
}

/// The scenario named in the config, with `--seed` feeding the random
/// family unless its seed was given explicitly.
pub fn scenario_spec(cfg: &RunConfig, name: &str) -> Result<ScenarioSpec, CliError> {
    let mut params = cfg.params.clone();
    if name == "manufactured-random" && !params.contains_key("seed") {
        params.insert("seed".into(), cfg.seed as f64);
    }
    Ok(ScenarioSpec::new(name, params)?)
}

fn axes_label(mask: u8) -> String {
    (0..3)
        .filter(|a| mask & (1 << a) != 0)
        .map(|a| checks::AXES[a])
        .collect()
}

fn form_rows(prefix: &str, f: &Form<Jet>, out: &mut Vec<(String, f64)>) {
    for (mask, c) in basis(f.dim(), f.degree()).iter().zip(f.components()) {
        let label = if *mask == 0 {
            prefix.to_string()
        } else if prefix.is_empty() {
            axes_label(*mask)
        } else {
            format!("{prefix}.{}", axes_label(*mask))
        };
        out.push((label, c.value()));
    }
}

fn frame_rows(f: &FrameForm<Jet>) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (i, c) in f.c.iter().enumerate() {
        form_rows(&(i + 1).to_string(), c, &mut out);
    }
    out
}

fn rot_rows(f: &RotForm<Jet>) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for (s, c) in f.c.iter().enumerate() {
        let (i, j) = so_canonical(f.dim(), s);
        form_rows(&format!("{}{}", i + 1, j + 1), c, &mut out);
    }
    out
}

fn scalar_rows(f: &Form<Jet>) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    form_rows("", f, &mut out);
    out
}

/// Field dump for one point: (field, component, value).
fn dump(s: &CosseratState<Jet>, p: &MaterialParameters) -> Result<Vec<(&'static str, String, f64)>, CliError> {
    let (h, o) = excitations(s, p);
    let (pm, q) = momenta(s, p);
    let src = induced_sources(s, p, true)?;
    let groups: Vec<(&'static str, Vec<(String, f64)>)> = vec![
        ("coframe", frame_rows(s.coframe())),
        ("connection", rot_rows(s.connection())),
        ("torsion", frame_rows(s.torsion())),
        ("curvature", rot_rows(s.curvature())),
        ("coframe_rate", frame_rows(s.coframe_rate())),
        ("connection_rate", rot_rows(s.connection_rate())),
        ("H", frame_rows(&h)),
        ("O", rot_rows(&o)),
        ("P", frame_rows(&pm)),
        ("Q", rot_rows(&q)),
        ("sigma", frame_rows(&src.sigma)),
        ("couple", rot_rows(&src.couple)),
        ("energy", scalar_rows(&energy_density(s, p))),
    ];
    Ok(groups
        .into_iter()
        .flat_map(|(name, rows)| rows.into_iter().map(move |(c, v)| (name, c, v)))
        .collect())
}

#[derive(Serialize)]
struct RunReport<'a> {
    scenario: &'a str,
    passed: bool,
    snapshots: Vec<f64>,
    points_per_axis: usize,
    transport_max_divergence: Option<f64>,
    residuals: &'a ResidualReport,
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.check_names(&CHECKS)?;
    let name = cfg
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::Usage("run needs --scenario".into()))?;
    if name == "appendix-table" {
        return appendix(cfg);
    }
    let spec = scenario_spec(cfg, name)?;
    let p = &cfg.material;
    let fam = spec.family(p)?;
    p.validate(fam.dim())?;
    let steps = cfg.steps()?;
    let every = steps.div_ceil(cfg.snapshots - 1).max(1);
    let grid = grid_for(fam.as_ref(), cfg.points)?;
    let n = fam.dim();

    let mut report = ResidualReport::new();
    let probe = [0.5, 0.5, 0.5];
    let start = state_at(fam.as_ref(), probe, 0.0, 2)?;
    let opts = TransportOptions {
        tolerance: f64::INFINITY,
        record_every: every,
    };
    let traj = integrate_transport(&start, |t| rates_at(fam.as_ref(), probe, t, 2), cfg.dt, steps, opts)?;
    let times: Vec<f64> = traj.snapshots.iter().map(|s| s.time()).collect();
    let mut divergence = None;
    if cfg.selected("transport") {
        let d = traj.max_divergence;
        report.check("transport.divergence", Norms { inf: d, l2: d }, cfg.tolerance("transport", default_tol("transport")));
        divergence = Some(d);
    }

    let mut header = vec!["t", "x", "y", "z"];
    header.truncate(n + 1);
    header.extend(["field", "component", "value"]);
    let mut table = Table::new(&header)?;
    let want_csv = cfg.wants(Format::Csv);
    let conv = convention(cfg);
    for &t in &times {
        for idx in 0..grid.len() {
            let pos = grid.position(idx);
            let s = state_at(fam.as_ref(), pos, t, 3)?;
            if want_csv {
                let mut coords = vec![num(t)];
                coords.extend(pos[..n].iter().map(|v| num(*v)));
                for (field, comp, v) in dump(&s, p)? {
                    let mut row = coords.clone();
                    row.extend([field.to_string(), comp, num(v)]);
                    table.row(&row)?;
                }
            }
            let tol = |f: &str| cfg.tolerance(f, default_tol(f));
            if cfg.selected("bianchi") {
                report.merge_max(&checks::bianchi(&s, tol("bianchi")).prefixed("bianchi"));
            }
            if cfg.selected("el") {
                report.merge_max(&checks::el(&s, p, tol("el"))?.prefixed("el"));
            }
            if cfg.selected("energy") {
                report.merge_max(&checks::energy(&s, p, tol("energy"))?.prefixed("energy"));
            }
            if cfg.selected("noether") {
                report.merge_max(&checks::noether(&s, p, tol("noether"), conv)?.prefixed("noether"));
            }
        }
    }
    let passed = report.passed();
    let mut art = Artifacts::new();
    if want_csv {
        art.add("fields.csv", table.finish()?);
    }
    let rr = RunReport {
        scenario: name,
        passed,
        snapshots: times,
        points_per_axis: cfg.points,
        transport_max_divergence: divergence,
        residuals: &report,
    };
    if cfg.wants(Format::Json) {
        art.add("report.json", json(&rr)?);
    }
    Ok(Outcome {
        command: "run",
        passed,
        stdout: summary(&report),
        json: Some(json(&rr)?),
        artifacts: art,
    })
}

pub fn convention(cfg: &RunConfig) -> SourceConvention {
    if cfg.inject_sign_error {
        SourceConvention::Direct
    } else {
        SourceConvention::Transposed
    }
}

/// One line per residual: name, max-norm, tolerance, verdict.
pub fn summary(r: &ResidualReport) -> String {
    let mut s = String::new();
    for (k, v) in &r.residuals {
        let verdict = match v.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "info",
        };
        let tol = v.tolerance.map_or("-".to_string(), num);
        s.push_str(&format!("{verdict} {k} inf={} tol={tol}\n", num(v.inf)));
    }
    for n in &r.notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}

#[derive(Serialize)]
struct TableReport<'a> {
    passed: bool,
    t: f64,
    rows: &'a [cosserat_core::scenarios::TableRow],
}

/// The three-row table at t = 0.5 with a discrepancy column, and the
/// (y, t, F) profile on `points` × snapshot samples.
fn appendix(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.material;
    p.validate(2)?;
    let t = 0.5;
    let rows = appendix_table(t, &[0.25, 0.5, 0.75], p)?;
    let tol = cfg.tolerance("table", default_tol("table"));
    let mut report = ResidualReport::new();
    let mut csv = Table::new(&[
        "y",
        "a",
        "omega",
        "force_closed",
        "force_source",
        "printed_a",
        "printed_omega",
        "printed_force",
        "discrepancy",
    ])?;
    for r in &rows {
        let pr = r.printed.as_ref().expect("table rows are printed rows");
        let y = num(r.y);
        let gap = |a: f64, b: f64| Norms {
            inf: (a - b).abs(),
            l2: (a - b).abs(),
        };
        if cfg.selected("table") {
            report.check(&format!("table.a[y={y}]"), gap(r.a, pr.a), tol);
            report.check(&format!("table.omega[y={y}]"), gap(r.omega, pr.omega), 4.0 * tol);
            report.record(&format!("table.force[y={y}]"), gap(r.force_closed, pr.force));
        }
        if r.discrepancies.iter().any(|d| d == "force") {
            report.note(format!(
                "printed F at y={y} is {}, closed form gives {}",
                num(pr.force),
                num(r.force_closed)
            ));
        }
        csv.row([
            y,
            num(r.a),
            num(r.omega),
            num(r.force_closed),
            num(r.force_source),
            num(pr.a),
            num(pr.omega),
            num(pr.force),
            r.discrepancies.join(";"),
        ])?;
    }
    let mut profile = Table::new(&["y", "t", "force"])?;
    let steps = cfg.steps()?;
    let every = steps.div_ceil(cfg.snapshots - 1).max(1);
    let mut times: Vec<f64> = (0..=steps).step_by(every).map(|k| k as f64 * cfg.dt).collect();
    if steps % every != 0 {
        times.push(cfg.t_end);
    }
    for &tt in &times {
        for i in 0..cfg.points {
            let y = i as f64 / (cfg.points - 1) as f64;
            let s = state_at(&Example1, [0.5, y, 0.0], tt, 2)?;
            let src = example1_stated_sources(s.domain(), p);
            let f = translational_source(&s, &src, &VectorField::basis(s.domain(), 0), SourceConvention::Transposed);
            profile.row([num(y), num(tt), num(f.components()[0].value())])?;
        }
    }
    let passed = report.passed();
    let csv = csv.finish()?;
    let mut art = Artifacts::new();
    if cfg.wants(Format::Csv) {
        art.add("appendix_table.csv", csv.clone());
        art.add("force_profile.csv", profile.finish()?);
    }
    let tr = TableReport { passed, t, rows: &rows };
    let js = json(&BTreeMap::from([("table", serde_json::to_value(&tr)?), ("residuals", serde_json::to_value(&report)?)]))?;
    if cfg.wants(Format::Json) {
        art.add("report.json", js.clone());
    }
    let mut stdout = String::from_utf8(csv).expect("csv is utf-8");
    stdout.push_str(&summary(&report));
    Ok(Outcome {
        command: "run",
        passed,
        stdout,
        json: Some(js),
        artifacts: art,
    })
}
