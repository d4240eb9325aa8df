//! Command dispatch: each command runs one pipeline stage and records its checks.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;

use poisson_avg::algebra::rational_to_f64;
use poisson_avg::coupling::{data_to_dirac, data_to_poisson, poisson_to_data, structure_eq_check};
use poisson_avg::dirac::{coupling_test, graph_of_bivector, involutivity_check};
use poisson_avg::moser::{flow_and_verify, observed_order, z_field, FlowConfig, HomotopyProbe, NumericEvaluator, FD_STEP};
use poisson_avg::pipeline::{adiabatic_check, average_coupling, check_compatibility, gauge_from_momentum, jacobi_check, block_identities_check};
use poisson_avg::{
    rat, CheckOutcome, Error, Form, GeometricData, Model, Point, Report, Result, SampleBox, Tensor, Witness,
};

use crate::spec::ModelSpec;

/// Default sample count for exact pointwise checks.
pub const DEFAULT_SAMPLES: usize = 10;
/// Default trajectory count for the flow.
pub const DEFAULT_FLOW_SAMPLES: usize = 20;
pub const DEFAULT_STEPS: usize = 1000;
/// Flow tolerances.
pub const INTERTWINING_TOL: f64 = 1e-6;
pub const LEAF_Z_TOL: f64 = 1e-12;
pub const HOMOTOPY_TOL: f64 = 1e-6;
pub const ORDER_RANGE: (f64, f64) = (3.5, 4.5);
/// Step count of the coarse run in the order estimate.
const ORDER_STEPS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// `[[Π, Π]] = 0`.
    CheckJacobi,
    /// Structure equations of the geometric data.
    CheckStructure,
    /// Average the coupling data under a closed momentum certificate.
    Average,
    /// Gauge transformation driven by the momentum forms, with block identities.
    Gauge,
    /// Courant involutivity and the coupling test of the Dirac frame.
    DiracVerify,
    /// Whether the averaged action stays Hamiltonian with the same momentum map.
    Adiabatic,
    /// Numeric flow intertwining the tensor with its gauge transform near the leaf.
    MoserVerify,
    /// Every stage that applies to the model.
    FullPipeline,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

/// Run settings shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub box_name: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
}

/// Machine-readable outcome of one command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub model: String,
    pub seed: u64,
    pub passed: bool,
    /// Sorted by check identifier.
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    /// Model produced by the run, in file format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<ModelSpec>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} on {} (seed {}): {}\n",
            self.command,
            self.model,
            self.seed,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for o in &self.checks {
            s.push_str(&format!("  {o}\n"));
        }
        for n in &self.notices {
            s.push_str(&format!("  note: {n}\n"));
        }
        for (k, v) in &self.values {
            s.push_str(&format!("  {k} = {v}\n"));
        }
        s
    }
}

/// A model that cannot run the requested command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

struct Settings<'a> {
    model: &'a Model,
    bx: SampleBox,
    seed: u64,
    samples: Option<usize>,
    steps: usize,
}

impl Settings<'_> {
    fn points(&self) -> Vec<Point> {
        self.bx.points(self.samples.unwrap_or(DEFAULT_SAMPLES), self.seed)
    }
}

#[derive(Default)]
struct Out {
    checks: Vec<CheckOutcome>,
    notices: Vec<String>,
    values: BTreeMap<String, String>,
    output: Option<ModelSpec>,
    prefix: String,
}

impl Out {
    fn id(&self, check: &str) -> String {
        format!("{}{check}", self.prefix)
    }

    fn push(&mut self, mut o: CheckOutcome) {
        o.check = self.id(&o.check);
        self.checks.push(o);
    }

    fn extend(&mut self, r: Report) {
        for o in r.outcomes {
            self.push(o);
        }
        for n in r.notices {
            self.note(n);
        }
    }

    fn note(&mut self, n: impl Into<String>) {
        let n = n.into();
        self.notices.push(if self.prefix.is_empty() { n } else { format!("{}: {n}", self.prefix.trim_end_matches('.')) });
    }

    fn value(&mut self, k: &str, v: impl Into<String>) {
        let k = self.id(k);
        self.values.insert(k, v.into());
    }
}

/// Runs `cmd` on `model`. Module errors become failed checks; a model lacking what the
/// command needs is a usage error.
pub fn run_command(cmd: Command, model: &Model, opts: &Options) -> std::result::Result<RunReport, UsageError> {
    let bx = model.sample_box(opts.box_name.as_deref()).map_err(|e| UsageError(e.to_string()))?.clone();
    if bx.dim() != model.dim() {
        return Err(UsageError(format!("box has {} coordinates, model {}", bx.dim(), model.dim())));
    }
    let seed = opts.seed.unwrap_or(model.seed);
    let s = Settings { model, bx, seed, samples: opts.samples, steps: opts.steps.unwrap_or(DEFAULT_STEPS) };
    let mut out = Out::default();
    let stages: Vec<(&str, Stage)> = match cmd {
        Command::CheckJacobi => vec![("jacobi", check_jacobi)],
        Command::CheckStructure => vec![("structure", check_structure)],
        Command::Average => vec![("average", average)],
        Command::Gauge => vec![("gauge", gauge)],
        Command::DiracVerify => vec![("dirac", dirac_verify)],
        Command::Adiabatic => vec![("adiabatic", adiabatic)],
        Command::MoserVerify => vec![("moser", moser_verify)],
        Command::FullPipeline => full_pipeline_stages(model),
    };
    let prefixed = cmd == Command::FullPipeline;
    for (name, stage) in stages {
        out.prefix = if prefixed { format!("{name}.") } else { String::new() };
        match stage(&s, &mut out) {
            Ok(()) => {}
            Err(Error::Spec(m)) => return Err(UsageError(format!("{}: {m}", cmd.name()))),
            Err(e) => {
                log::warn!("{name}: {e}");
                out.push(CheckOutcome::fail(format!("{name}-error"), Witness::new(e.to_string())));
            }
        }
    }
    if out.checks.is_empty() {
        return Err(UsageError(format!("{}: no stage applies to model '{}'", cmd.name(), model.name)));
    }
    out.checks.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(RunReport {
        command: cmd.name(),
        model: model.name.clone(),
        seed,
        passed: out.checks.iter().all(|o| o.passed),
        checks: out.checks,
        notices: out.notices,
        values: out.values,
        output: out.output,
    })
}

type Stage = fn(&Settings, &mut Out) -> Result<()>;

fn full_pipeline_stages(m: &Model) -> Vec<(&'static str, Stage)> {
    let coupling = m.data.is_some() || (m.pi.is_some() && m.foliation.is_some());
    let mut v: Vec<(&str, Stage)> = vec![("jacobi", check_jacobi)];
    if coupling {
        v.push(("structure", check_structure));
    }
    v.push(("dirac", dirac_verify));
    if coupling && m.action.is_some() {
        if m.mode.closed() {
            v.push(("average", average));
        }
        if !m.mu.is_empty() || m.j.is_some() {
            v.push(("gauge", gauge));
        }
        if m.j.is_some() {
            v.push(("adiabatic", adiabatic));
        }
        if !m.leaf.is_empty() {
            v.push(("moser", moser_verify));
        }
    }
    v
}

fn spec_error(what: &str) -> Error {
    Error::Spec(what.to_string())
}

/// Geometric data, given or recovered from `pi` and the foliation, before verification.
fn coupling_data(s: &Settings) -> Result<GeometricData> {
    let m = s.model;
    if let Some(gd) = &m.data {
        return Ok(gd.clone());
    }
    match (&m.pi, &m.foliation) {
        (Some(pi), Some(fol)) => poisson_to_data(pi, fol, &s.points()),
        _ => Err(spec_error("needs geometric data, or pi with a foliation")),
    }
}

fn verified_data(s: &Settings) -> Result<GeometricData> {
    coupling_data(s)?.verified()
}

/// `μ`, or `dJ` when only `J` is given.
fn momentum_forms(m: &Model) -> Result<Vec<Form>> {
    if !m.mu.is_empty() {
        return Ok(m.mu.clone());
    }
    match &m.j {
        Some(js) => Ok(js.iter().map(Form::differential).collect()),
        None => Err(spec_error("needs mu or j")),
    }
}

fn first_component(t: &Tensor, what: &str) -> std::result::Result<(), Witness> {
    match t.entries().into_iter().next() {
        None => Ok(()),
        Some((k, c)) => Err(Witness::new(format!("{what} has component {k:?} = {c}"))),
    }
}

fn invariant_under(m: &Model, t: &Tensor, what: &str) -> Result<std::result::Result<(), Witness>> {
    for (a, g) in m.action()?.generators().iter().enumerate() {
        if let Err(w) = first_component(&t.lie_derivative(g), &format!("L_a{a} {what}")) {
            return Ok(Err(w));
        }
    }
    Ok(Ok(()))
}

fn check_jacobi(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    if let Some(pi) = &m.pi {
        out.push(jacobi_check(pi));
        return Ok(());
    }
    let (gd, r) = m.data()?.clone().verify();
    match r.first_failure() {
        Some(o) => out.push(CheckOutcome::fail(
            "jacobi",
            Witness::new(format!("geometric data fail {}: {}", o.check, o.witness.as_ref().map_or("", |w| &w.detail))),
        )),
        None => out.push(jacobi_check(&data_to_poisson(&gd)?.pi())),
    }
    Ok(())
}

fn check_structure(s: &Settings, out: &mut Out) -> Result<()> {
    let gd = coupling_data(s)?;
    out.extend(structure_eq_check(&gd));
    Ok(())
}

fn dirac_verify(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    let pts = s.points();
    let (frame, data) = match (&m.pi, &m.data) {
        (_, Some(gd)) => {
            let gd = gd.clone().verified()?;
            (data_to_dirac(&gd)?, Some(gd))
        }
        (Some(pi), None) => (graph_of_bivector(pi)?, None),
        (None, None) => return Err(spec_error("needs pi or geometric data")),
    };
    out.push(involutivity_check(&frame, &pts)?);
    if let Some(fol) = &m.foliation {
        let t = coupling_test(&frame, fol.base(), fol.fiber(), &pts)?;
        out.push(t.outcome);
        if let (Some(gamma), Some(gd)) = (t.gamma, data) {
            let found = gamma.as_slice() == gd.conn.gamma();
            out.push(CheckOutcome::from_result(
                "coupling-connection",
                if found { Ok(()) } else { Err(Witness::new("H from the frame differs from the given connection")) },
            ));
        }
    } else {
        out.note("no foliation; coupling test skipped");
    }
    Ok(())
}

fn average(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    if !m.mode.closed() {
        return Err(spec_error("averaging needs mode locally-hamiltonian or hamiltonian"));
    }
    let gd = verified_data(s)?;
    let cert = check_compatibility(m.action()?, &gd.p, m.mu.clone(), m.mode, m.j.clone())?;
    let ok = cert.verified();
    out.extend(cert.report.clone());
    if !ok {
        return Ok(());
    }
    let res = average_coupling(&gd, &cert, &s.points())?;
    out.extend(res.report.clone());
    out.value("q", res.q.display_with(&m.coords));
    out.value("theta", res.theta.display_with(&m.coords));
    let mut averaged = m.clone();
    averaged.name = format!("{}-averaged", m.name);
    averaged.data = Some(res.data.clone());
    averaged.pi = res.poisson.as_ref().map(|c| c.pi());
    out.output = Some(ModelSpec::from_model(&averaged));
    Ok(())
}

fn gauge(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    let gd = verified_data(s)?;
    let pts = s.points();
    let run = gauge_from_momentum(&gd, m.action()?, &momentum_forms(m)?, &pts)?;
    out.extend(run.cert.report.clone());
    out.extend(run.gauged.report.clone());
    let fol = &gd.conn.foliation().clone();
    out.extend(block_identities_check(&run.pi, &run.gauged.pi_bar, &run.b, fol, &pts)?);
    out.push(CheckOutcome::from_result(
        "gauged-invariant",
        invariant_under(m, &Tensor::Multivector(run.gauged.pi_bar.clone()), "Π̄")?,
    ));
    out.value("theta", run.theta.theta0.display_with(&m.coords));
    out.value("det", run.gauged.det.display_with(&m.coords));
    let mut gauged = m.clone();
    gauged.name = format!("{}-gauged", m.name);
    gauged.data = None;
    gauged.pi = Some(run.gauged.pi_bar.clone());
    // the averaged model, when there is one, already carries Π̄
    out.output.get_or_insert_with(|| ModelSpec::from_model(&gauged));
    Ok(())
}

fn adiabatic(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    let js = m.j.as_ref().ok_or_else(|| spec_error("the adiabatic test needs j"))?;
    let gd = verified_data(s)?;
    let action = m.action()?;
    let base = out.prefix.clone();
    for (a, j) in js.iter().enumerate() {
        if js.len() > 1 {
            out.prefix = format!("{base}generator{a}.");
        }
        let res = adiabatic_check(&gd, action, j)?;
        out.extend(res.report);
        out.value("hamiltonian", res.vanishes.to_string());
        out.value("zeta", res.zeta.display_with(&m.coords));
        if let Some(k) = res.potential {
            out.value("potential", k.display_with(&m.coords));
        }
    }
    out.prefix = base;
    Ok(())
}

fn fmt_f(x: f64) -> String {
    format!("{x:.3e}")
}

fn moser_verify(s: &Settings, out: &mut Out) -> Result<()> {
    let m = s.model;
    if m.leaf.is_empty() {
        return Err(spec_error("the flow needs a leaf"));
    }
    let gd = verified_data(s)?;
    let run = gauge_from_momentum(&gd, m.action()?, &momentum_forms(m)?, &s.bx.points(DEFAULT_SAMPLES, s.seed))?;
    let ev = NumericEvaluator::new(&run.pi, &run.theta.theta0, &run.gauged.pi_bar, s.bx.clone())?;
    // start points in the middle half so trajectories stay in the box
    let half = |v: &[poisson_avg::Rational]| v.iter().map(|r| r * rat(1, 2)).collect();
    let inner = SampleBox::new(half(s.bx.lo()), half(s.bx.hi()))?;
    let starts = inner.points(s.samples.unwrap_or(DEFAULT_FLOW_SAMPLES), s.seed);
    let to_f = |p: &[poisson_avg::Rational]| p.iter().map(rational_to_f64).collect::<Vec<f64>>();
    let pts: Vec<Vec<f64>> = starts.iter().map(|p| to_f(p)).collect();
    let leaf_pts: Vec<Vec<f64>> = starts.iter().map(|p| to_f(&m.project_to_leaf(p))).collect();

    let mut z_leaf: f64 = 0.0;
    let mut z_bad = None;
    for p in &leaf_pts {
        for t in [0.0, 0.5, 1.0] {
            let z = z_field(&ev, t, p)?.amax();
            if z > LEAF_Z_TOL && z_bad.is_none() {
                z_bad = Some(Witness { point: Some(p.iter().map(|x| format!("{x:.6}")).collect()), detail: format!("|Z_{t}| = {z:e}") });
            }
            z_leaf = z_leaf.max(z);
        }
    }
    out.push(CheckOutcome::from_result("z-on-leaf", z_bad.map_or(Ok(()), Err)));
    out.value("z-on-leaf", fmt_f(z_leaf));

    let mut residual: f64 = 0.0;
    for t in [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)] {
        let probe = HomotopyProbe::new(&ev, &t)?;
        for p in &pts {
            residual = residual.max(probe.residual(&ev, p, FD_STEP)?);
        }
    }
    out.push(CheckOutcome::from_result(
        "homotopy",
        if residual <= HOMOTOPY_TOL {
            Ok(())
        } else {
            Err(Witness::new(format!("residual {residual:e} exceeds {HOMOTOPY_TOL:e}")))
        },
    ));
    out.value("homotopy-residual", fmt_f(residual));

    let cfg = FlowConfig::new(s.steps, pts.clone(), leaf_pts, INTERTWINING_TOL)?;
    let summary = flow_and_verify(&ev, &cfg)?;
    out.extend(summary.report);
    out.value("max-deviation", fmt_f(summary.max_deviation));
    out.value("mean-deviation", fmt_f(summary.mean_deviation));
    out.value("aborted", summary.aborted.to_string());

    if let Some(p) = pts.first() {
        match observed_order(&ev, p, ORDER_STEPS)? {
            Some(order) => {
                out.push(CheckOutcome::from_result(
                    "integrator-order",
                    if (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&order) {
                        Ok(())
                    } else {
                        Err(Witness::new(format!("observed order {order:.3}")))
                    },
                ));
                out.value("observed-order", format!("{order:.3}"));
            }
            None => out.note("integration error at rounding level; order not measurable"),
        }
    }
    Ok(())
}
