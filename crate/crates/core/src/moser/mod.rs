//! Floating-point Moser path: `Π_t♯ = Π♯(Id + t dΘ♯Π♯)⁻¹`, `Z_t = −Π_t♯Θ`, its flow, and the
//! check that the time-one map intertwines `Π` and `Π̄`.

mod compiled;

pub use compiled::CompiledFn;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Rational, RationalFn};
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, Report, Witness};
use crate::sampling::SampleBox;
use crate::tensor::{schouten, Form, Multivector};

/// Default finite-difference step for `dΠ_t/dt` and the Jacobian of the flow.
pub const FD_STEP: f64 = 1e-5;
/// Smallest step count accepted by [`flow_and_verify`].
pub const MIN_STEPS: usize = 100;
/// Largest fraction of trajectories allowed to leave the box.
pub const MAX_ABORT_FRACTION: f64 = 0.1;

fn compile_matrix(m: &Matrix<RationalFn>) -> Vec<Vec<CompiledFn>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| CompiledFn::new(m.get(r, c))).collect()).collect()
}

fn eval_matrix(m: &[Vec<CompiledFn>], p: &[f64]) -> DMatrix<f64> {
    let n = m.len();
    DMatrix::from_fn(n, m.first().map_or(0, |r| r.len()), |r, c| m[r][c].eval(p))
}

/// Compiled `Π`, `Θ`, `dΘ` and `Π̄` with a box and a singularity guard.
#[derive(Clone, Debug)]
pub struct NumericEvaluator {
    pi: Multivector,
    theta: Form,
    dtheta: Form,
    pi_sharp: Vec<Vec<CompiledFn>>,
    dtheta_sharp: Vec<Vec<CompiledFn>>,
    theta_c: Vec<CompiledFn>,
    pi_bar_sharp: Vec<Vec<CompiledFn>>,
    bx: SampleBox,
    /// `|det(Id + t dΘ♯Π♯)|` below this trips the guard.
    pub guard: f64,
}

impl NumericEvaluator {
    /// `pi_bar` is the target of the path; it is compared against the time-one tensor symbolically.
    pub fn new(pi: &Multivector, theta: &Form, pi_bar: &Multivector, bx: SampleBox) -> Result<Self> {
        let n = pi.dim();
        if theta.degree() != 1 || theta.dim() != n || pi_bar.dim() != n || bx.dim() != n {
            return Err(Error::Dimension("Π, Θ, Π̄ and the box must live on one chart".into()));
        }
        let dtheta = theta.d();
        Ok(NumericEvaluator {
            pi_sharp: compile_matrix(&pi.sharp_matrix()),
            dtheta_sharp: compile_matrix(&dtheta.sharp_matrix()),
            theta_c: theta.to_vec().iter().map(CompiledFn::new).collect(),
            pi_bar_sharp: compile_matrix(&pi_bar.sharp_matrix()),
            pi: pi.clone(),
            theta: theta.clone(),
            dtheta,
            bx,
            guard: 1e-8,
        })
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }

    pub fn sample_box(&self) -> &SampleBox {
        &self.bx
    }

    /// Largest relative gap between compiled and exact evaluation of every component at `p`.
    pub fn probe(&self, p: &[Rational]) -> f64 {
        let pf: Vec<f64> = p.iter().map(crate::algebra::rational_to_f64).collect();
        let mut worst: f64 = 0.0;
        let mut cmp = |exact: &RationalFn, c: &CompiledFn| {
            if let Some(v) = exact.eval(p) {
                let e = crate::algebra::rational_to_f64(&v);
                let gap = (c.eval(&pf) - e).abs() / e.abs().max(1.0);
                worst = worst.max(gap);
            }
        };
        let maps = [
            (self.pi.sharp_matrix(), &self.pi_sharp),
            (self.dtheta.sharp_matrix(), &self.dtheta_sharp),
        ];
        for (exact, comp) in &maps {
            for r in 0..exact.rows() {
                for c in 0..exact.cols() {
                    cmp(exact.get(r, c), &comp[r][c]);
                }
            }
        }
        for (e, c) in self.theta.to_vec().iter().zip(&self.theta_c) {
            cmp(e, c);
        }
        worst
    }

    fn gauge_matrix(&self, t: f64, p: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let n = self.dim();
        let s = eval_matrix(&self.pi_sharp, p);
        let d = eval_matrix(&self.dtheta_sharp, p);
        let m = DMatrix::identity(n, n) + (&d * &s) * t;
        let det = m.determinant();
        if !det.is_finite() || det.abs() < self.guard {
            return Err(Error::NumericGuard(format!("det(Id + t dΘ♯Π♯) = {det:e} at t = {t}")));
        }
        Ok((s, m))
    }

    /// Matrix of `Π_t♯` at `p`.
    pub fn pi_t(&self, t: f64, p: &[f64]) -> Result<DMatrix<f64>> {
        let (s, m) = self.gauge_matrix(t, p)?;
        let inv = m.lu().try_inverse().ok_or_else(|| Error::NumericGuard("singular gauge matrix".into()))?;
        Ok(s * inv)
    }

    /// Matrix of `Π̄♯` at `p`.
    pub fn pi_bar(&self, p: &[f64]) -> DMatrix<f64> {
        eval_matrix(&self.pi_bar_sharp, p)
    }

    /// Matrix of `Π♯` at `p`.
    pub fn pi(&self, p: &[f64]) -> DMatrix<f64> {
        eval_matrix(&self.pi_sharp, p)
    }

    /// Exact `Π_t` for rational `t`.
    pub fn exact_pi_t(&self, t: &Rational) -> Result<Multivector> {
        let n = self.dim();
        let s = self.pi.sharp_matrix();
        let tt = RationalFn::constant(t.clone(), n);
        let m = Matrix::identity(n, &RationalFn::zero(n)).add(&self.dtheta.sharp_matrix().mul(&s).scale(&tt));
        Ok(Multivector::from_sharp_matrix(&s.mul(&m.inverse()?)))
    }

    /// Exact `Z_t` for rational `t`.
    pub fn exact_z(&self, t: &Rational) -> Result<Multivector> {
        Ok(-&self.exact_pi_t(t)?.sharp(&self.theta))
    }
}

/// `Z_t = −Π♯(Id + t dΘ♯Π♯)⁻¹Θ` at a point.
pub fn z_field(ev: &NumericEvaluator, t: f64, p: &[f64]) -> Result<DVector<f64>> {
    if !ev.bx.contains_f64(p) {
        return Err(Error::Flow(format!("point {p:?} is outside the box")));
    }
    let (s, m) = ev.gauge_matrix(t, p)?;
    let theta = DVector::from_iterator(ev.dim(), ev.theta_c.iter().map(|c| c.eval(p)));
    let v = m.lu().solve(&theta).ok_or_else(|| Error::NumericGuard("singular gauge matrix".into()))?;
    Ok(-(s * v))
}

/// Precomputed exact `[[Z_t, Π_t]]` for one rational time.
#[derive(Clone, Debug)]
pub struct HomotopyProbe {
    t: f64,
    bracket: Vec<Vec<CompiledFn>>,
}

impl HomotopyProbe {
    pub fn new(ev: &NumericEvaluator, t: &Rational) -> Result<Self> {
        let pi_t = ev.exact_pi_t(t)?;
        let z = ev.exact_z(t)?;
        Ok(HomotopyProbe { t: crate::algebra::rational_to_f64(t), bracket: compile_matrix(&schouten(&z, &pi_t).sharp_matrix()) })
    }

    /// Max-norm of `[[Z_t, Π_t]] + dΠ_t/dt` at `p`, with the `t`-derivative by central differences.
    pub fn residual(&self, ev: &NumericEvaluator, p: &[f64], h: f64) -> Result<f64> {
        let lie = eval_matrix(&self.bracket, p);
        let dt = (ev.pi_t(self.t + h, p)? - ev.pi_t(self.t - h, p)?) / (2.0 * h);
        Ok((lie + dt).amax())
    }
}

/// Residual of the homotopy equation `[[Z_t, Π_t]] = −dΠ_t/dt` at `(t, p)`.
pub fn homotopy_residual(ev: &NumericEvaluator, t: f64, p: &[f64]) -> Result<f64> {
    let tr = Rational::from_float(t).ok_or_else(|| Error::Flow(format!("t = {t} is not finite")))?;
    HomotopyProbe::new(ev, &tr)?.residual(ev, p, FD_STEP)
}

/// Integration settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub steps: usize,
    pub points: Vec<Vec<f64>>,
    /// Points of `S` that the flow must fix.
    pub leaf_points: Vec<Vec<f64>>,
    pub tolerance: f64,
    pub fd_step: f64,
}

impl FlowConfig {
    pub fn new(steps: usize, points: Vec<Vec<f64>>, leaf_points: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::Flow(format!("{steps} steps; at least {MIN_STEPS} are required")));
        }
        Ok(FlowConfig { steps, points, leaf_points, tolerance, fd_step: FD_STEP })
    }
}

/// Time-one map of `Z_t` by classical fourth-order Runge–Kutta.
pub fn flow(ev: &NumericEvaluator, p: &[f64], steps: usize) -> Result<Vec<f64>> {
    let h = 1.0 / steps as f64;
    let mut x = DVector::from_column_slice(p);
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = z_field(ev, t, x.as_slice())?;
        let k2 = z_field(ev, t + h / 2.0, (&x + &k1 * (h / 2.0)).as_slice())?;
        let k3 = z_field(ev, t + h / 2.0, (&x + &k2 * (h / 2.0)).as_slice())?;
        let k4 = z_field(ev, t + h, (&x + &k3 * h).as_slice())?;
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(x.as_slice().to_vec())
}

/// Jacobian of the time-one map by central differences.
pub fn flow_jacobian(ev: &NumericEvaluator, p: &[f64], steps: usize, h: f64) -> Result<DMatrix<f64>> {
    let n = p.len();
    let mut jac = DMatrix::zeros(n, n);
    for c in 0..n {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[c] += h;
        b[c] -= h;
        let (fa, fb) = (flow(ev, &a, steps)?, flow(ev, &b, steps)?);
        for r in 0..n {
            jac[(r, c)] = (fa[r] - fb[r]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Largest component of `Dφ Π(p) Dφᵀ − Π̄(φ(p))`, comparing sharp matrices.
pub fn intertwining_deviation(ev: &NumericEvaluator, p: &[f64], steps: usize, h: f64) -> Result<f64> {
    let q = flow(ev, p, steps)?;
    let jac = flow_jacobian(ev, p, steps, h)?;
    // The sharp matrix is the transpose of the component matrix, and both are antisymmetric.
    let pushed = &jac * ev.pi(p) * jac.transpose();
    Ok((pushed - ev.pi_bar(&q)).amax())
}

/// Per-run summary of [`flow_and_verify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSummary {
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub leaf_drift: f64,
    pub aborted: usize,
    pub report: Report,
}

fn fmt_point(p: &[f64]) -> Vec<String> {
    p.iter().map(|x| format!("{x:.6}")).collect()
}

/// Flows every configured point to `t = 1` and checks that leaf points stay fixed and that
/// the time-one map pushes `Π` forward to `Π̄`.
pub fn flow_and_verify(ev: &NumericEvaluator, cfg: &FlowConfig) -> Result<FlowSummary> {
    if cfg.steps < MIN_STEPS {
        return Err(Error::Flow(format!("{} steps; at least {MIN_STEPS} are required", cfg.steps)));
    }
    let mut report = Report::new();
    let mut leaf_drift: f64 = 0.0;
    let mut leaf_bad = None;
    for p in &cfg.leaf_points {
        let q = flow(ev, p, cfg.steps)?;
        let d = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if d > cfg.tolerance && leaf_bad.is_none() {
            leaf_bad = Some(Witness { point: Some(fmt_point(p)), detail: format!("|φ(p) − p| = {d:e}") });
        }
        leaf_drift = leaf_drift.max(d);
    }
    report.push(CheckOutcome::from_result("leaf-fixed", leaf_bad.map_or(Ok(()), Err)));

    let mut deviations = Vec::new();
    let mut aborted = 0;
    let mut worst: Option<(f64, &Vec<f64>)> = None;
    for p in &cfg.points {
        match intertwining_deviation(ev, p, cfg.steps, cfg.fd_step) {
            Ok(d) => {
                if worst.is_none_or(|(w, _)| d > w) {
                    worst = Some((d, p));
                }
                deviations.push(d);
            }
            Err(Error::Flow(msg)) | Err(Error::NumericGuard(msg)) => {
                aborted += 1;
                report.notice(format!("trajectory from {:?} aborted: {msg}", fmt_point(p)));
            }
            Err(e) => return Err(e),
        }
    }
    let total = cfg.points.len().max(1);
    if aborted as f64 > MAX_ABORT_FRACTION * total as f64 {
        report.push(CheckOutcome::fail(
            "trajectories-in-box",
            Witness::new(format!("{aborted} of {total} trajectories left the box")),
        ));
    } else {
        report.push(CheckOutcome::pass("trajectories-in-box"));
    }
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let mean_deviation = if deviations.is_empty() { 0.0 } else { deviations.iter().sum::<f64>() / deviations.len() as f64 };
    let check = match worst {
        Some((d, p)) if d > cfg.tolerance => Err(Witness {
            point: Some(fmt_point(p)),
            detail: format!("|Dφ Π Dφᵀ − Π̄∘φ| = {d:e} exceeds {:e}", cfg.tolerance),
        }),
        _ => Ok(()),
    };
    report.push(CheckOutcome::from_result("intertwining", check));
    Ok(FlowSummary { deviations, max_deviation, mean_deviation, leaf_drift, aborted, report })
}

/// Endpoint errors below this are rounding noise and give no order estimate.
pub const ORDER_NOISE_FLOOR: f64 = 1e-13;

/// Observed order of the integrator at `p`: `log2` of the ratio of endpoint errors for `steps`
/// and `2·steps`, against a reference run with `16·steps`. `None` when the coarse error is
/// already at rounding level, as for a field the integrator follows exactly.
pub fn observed_order(ev: &NumericEvaluator, p: &[f64], steps: usize) -> Result<Option<f64>> {
    let reference = flow(ev, p, 16 * steps)?;
    let err = |s: usize| -> Result<f64> {
        let q = flow(ev, p, s)?;
        Ok(q.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    };
    let (coarse, fine) = (err(steps)?, err(2 * steps)?);
    if coarse < ORDER_NOISE_FLOOR || fine == 0.0 {
        return Ok(None);
    }
    Ok(Some((coarse / fine).log2()))
}
