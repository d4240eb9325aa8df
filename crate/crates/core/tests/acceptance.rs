//! Acceptance criteria, one line per criterion. Runs without the libtest harness so every
//! line is printed even when output capture is on.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poisson_avg::action::{average, delta, l_g};
use poisson_avg::algebra::rational_to_f64;
use poisson_avg::coupling::{data_to_dirac, q_gauge, structure_eq_check};
use poisson_avg::dirac::{gauge_transform, graph_of_bivector, involutivity_check, spans_equal, usable_points};
use poisson_avg::moser::{flow_and_verify, observed_order, z_field, FlowConfig, HomotopyProbe, NumericEvaluator, FD_STEP};
use poisson_avg::pipeline::{
    adiabatic_check, average_coupling, check_compatibility, gauge_from_momentum, jacobi_check, block_identities_check,
};
use poisson_avg::tensor::{schouten, VectorValued1Form};
use poisson_avg::{
    fixtures, rat, Action, CircleAction, Form, Matrix, Model, Multivector, Plane, Poly, Rational, RationalFn, SampleBox,
    Tensor, TrigPoly,
};

/// Criterion 2: closed forms against quadrature.
const QUADRATURE_TOL: f64 = 1e-9;
const QUADRATURE_NODES: usize = 10_000;
/// Criterion 7.
const MOSER_STEPS: usize = 1000;
const MOSER_POINTS: usize = 20;
const INTERTWINING_TOL: f64 = 1e-6;
const LEAF_Z_TOL: f64 = 1e-12;
const HOMOTOPY_TOL: f64 = 1e-6;
const ORDER_RANGE: (f64, f64) = (3.5, 4.5);
/// Criterion 4.
const GAUGE_SAMPLES: usize = 20;
const SPAN_POINTS: usize = 50;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-4..=4);
    let d = rng.gen_range(1..=3);
    rat(n, d)
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        p += &Poly::monomial(small_rational(rng), e);
    }
    p
}

fn random_fn(rng: &mut ChaCha8Rng, n: usize) -> RationalFn {
    let terms = rng.gen_range(1..=3);
    RationalFn::from_poly(random_poly(rng, n, 2, terms))
}

fn random_tensor(rng: &mut ChaCha8Rng, n: usize) -> Tensor {
    let kind = rng.gen_range(0..6);
    let fill = |rng: &mut ChaCha8Rng, degree: usize| -> Vec<(Vec<usize>, RationalFn)> {
        let mut out = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let mut idx: Vec<usize> = Vec::new();
            while idx.len() < degree {
                let c = rng.gen_range(0..n);
                if !idx.contains(&c) {
                    idx.push(c);
                }
            }
            idx.sort_unstable();
            out.push((idx, random_fn(rng, n)));
        }
        out
    };
    match kind {
        0 => Tensor::scalar(random_fn(rng, n)),
        1 | 2 => {
            let d = kind;
            Tensor::Form(Form::from_terms(n, d, fill(rng, d)).unwrap())
        }
        3 | 4 => {
            let d = kind - 2;
            Tensor::Multivector(Multivector::from_terms(n, d, fill(rng, d)).unwrap())
        }
        _ => {
            let mut m = Matrix::zeros(n, n, &RationalFn::zero(n));
            for _ in 0..rng.gen_range(1..=3) {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                m.set(i, j, random_fn(rng, n));
            }
            Tensor::Endo(VectorValued1Form::new(m))
        }
    }
}

fn random_circle(rng: &mut ChaCha8Rng, n: usize) -> CircleAction {
    let mut free: Vec<usize> = (0..n).collect();
    let mut planes = Vec::new();
    for _ in 0..rng.gen_range(1..=n / 2) {
        let i = free.remove(rng.gen_range(0..free.len()));
        let j = free.remove(rng.gen_range(0..free.len()));
        planes.push(Plane { i, j, weight: rng.gen_range(1..=3) });
    }
    CircleAction::new(n, planes).unwrap()
}

fn averaging_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 120;
    for case in 0..cases {
        let n = rng.gen_range(2..=6);
        let act = Action::Circle(random_circle(&mut rng, n));
        let t = random_tensor(&mut rng, n);
        let lhs = average(&act, &t).map_err(|e| format!("case {case}: {e}"))?;
        let rhs = t.add(&delta(&act, &l_g(&act, &t)).map_err(|e| format!("case {case}: {e}"))?);
        ensure(lhs == rhs, || format!("case {case}: ⟨T⟩ ≠ T + δ(l(T)) for {t:?}"))?;
    }
    Ok(format!("{cases} random tensors, exact"))
}

fn trapezoid<F: Fn(f64) -> f64>(f: F, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// Closed trapezoid rule with one Richardson step, for the non-periodic weighted integrand.
fn closed_trapezoid<F: Fn(f64) -> f64>(f: F, nodes: usize) -> f64 {
    let rule = |m: usize| {
        let h = 2.0 * PI / m as f64;
        let inner: f64 = (1..m).map(|i| f(i as f64 * h)).sum();
        (inner + 0.5 * (f(0.0) + f(2.0 * PI))) * h
    };
    (4.0 * rule(nodes) - rule(nodes / 2)) / 3.0
}

fn closed_forms_vs_quadrature() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cases = 60;
    let mut worst: f64 = 0.0;
    for case in 0..cases {
        let nv = 2;
        let mut g = TrigPoly::zero(nv);
        for _ in 0..rng.gen_range(1..=4) {
            let k = rng.gen_range(0..=5);
            let c = random_poly(&mut rng, nv, 2, 2);
            g = &g + &if rng.gen_bool(0.5) { TrigPoly::cos(k, c) } else { TrigPoly::sin(k.max(1), c) };
        }
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let mean = trapezoid(|t| g.eval_f64(t, &p), QUADRATURE_NODES) / (2.0 * PI);
        let weighted = -closed_trapezoid(|t| (t - PI) * g.eval_f64(t, &p), QUADRATURE_NODES) / (2.0 * PI);
        let e1 = (mean - g.mean().eval_f64(&p)).abs();
        let e2 = (weighted - g.weighted_mean().eval_f64(&p)).abs();
        ensure(e1 <= QUADRATURE_TOL && e2 <= QUADRATURE_TOL, || {
            format!("case {case}: mean error {e1:e}, weighted error {e2:e}")
        })?;
        worst = worst.max(e1).max(e2);
    }
    Ok(format!("{cases} trigonometric polynomials, max error {worst:.1e}"))
}

fn verified_data(m: &Model) -> poisson_avg::GeometricData {
    m.data.clone().expect("fixture data").verified().expect("fixture verifies")
}

fn gauge_preserves_jacobi() -> Outcome {
    let mut notes = Vec::new();
    for m in [fixtures::e4(), fixtures::leaf()] {
        let gd = verified_data(&m);
        let pts = m.sample_box(None).unwrap().points(10, m.seed);
        let run = gauge_from_momentum(&gd, m.action().unwrap(), &m.mu, &pts).map_err(|e| format!("{}: {e}", m.name))?;
        let j = jacobi_check(&run.gauged.pi_bar);
        ensure(j.passed, || format!("{}: {j}", m.name))?;
        for (a, g) in m.action().unwrap().generators().iter().enumerate() {
            let l = schouten(g, &run.gauged.pi_bar);
            ensure(l.is_zero(), || format!("{}: L_a{a} Π̄ ≠ 0", m.name))?;
        }
        ensure(run.gauged.report.passed(), || format!("{}: {}", m.name, run.gauged.report))?;
        notes.push(m.name.clone());
    }
    Ok(format!("[[Π̄,Π̄]] = 0 and L_a Π̄ = 0 on {}", notes.join(", ")))
}

fn random_horizontal_q(rng: &mut ChaCha8Rng, m: &Model) -> Form {
    let n = m.dim();
    let base = m.foliation.as_ref().unwrap().base().to_vec();
    let terms = base.iter().map(|&x| (vec![x], RationalFn::from_poly(random_poly(rng, n, 2, 2).scale(&rat(1, 4)))));
    Form::from_terms(n, 1, terms).unwrap()
}

fn q_gauge_preserves_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut min_usable = usize::MAX;
    let fixtures = [fixtures::flat(), fixtures::e4(), fixtures::leaf()];
    for m in &fixtures {
        let gd = verified_data(m);
        let before = data_to_dirac(&gd).map_err(|e| e.to_string())?;
        let pts = m.sample_box(None).unwrap().points(SPAN_POINTS, m.seed);
        for k in 0..GAUGE_SAMPLES {
            let q = random_horizontal_q(&mut rng, m);
            let out = q_gauge(&gd, &q).map_err(|e| format!("{} Q#{k}: {e}", m.name))?;
            let se = structure_eq_check(&out);
            ensure(se.passed(), || format!("{} Q#{k}: {se}", m.name))?;
            let after = data_to_dirac(&out).map_err(|e| e.to_string())?;
            let target = gauge_transform(&before, &-q.d()).map_err(|e| e.to_string())?;
            let usable = usable_points(&[&after, &target], &pts).map_err(|e| format!("{} Q#{k}: {e}", m.name))?;
            min_usable = min_usable.min(usable.len());
            let span = spans_equal(&after, &target, &pts).map_err(|e| e.to_string())?;
            ensure(span.passed, || format!("{} Q#{k}: {span}", m.name))?;
        }
    }
    Ok(format!(
        "{} gauges on {} fixtures, at least {min_usable}/{SPAN_POINTS} usable points",
        GAUGE_SAMPLES * fixtures.len(),
        fixtures.len()
    ))
}

fn averaged_coupling_pipeline() -> Outcome {
    let m = fixtures::e4();
    let gd = verified_data(&m);
    let cert = check_compatibility(m.action().unwrap(), &gd.p, m.mu.clone(), m.mode, m.j.clone()).map_err(|e| e.to_string())?;
    ensure(cert.verified(), || cert.report.to_string())?;
    let pts = m.sample_box(None).unwrap().points(12, m.seed);
    let res = average_coupling(&gd, &cert, &pts).map_err(|e| e.to_string())?;
    for id in [
        "average-connection",
        "average-sigma",
        "average-d10",
        "invariance",
        "poisson-connection",
        "sigma-closed",
        "curvature",
        "gauge-frame",
        "vertical-gauge-form",
        "vertical-part",
    ] {
        let o = res.report.get(id).ok_or_else(|| format!("missing check {id}"))?;
        ensure(o.passed, || o.to_string())?;
    }
    ensure(res.report.passed(), || res.report.to_string())?;
    ensure(!res.q.is_zero(), || "Q vanished on a non-invariant fixture".into())?;
    Ok("γ̄ = ⟨γ⟩, σ̄ by both derivations, invariant, Π̄₀,₂ = Π₀,₂".into())
}

fn block_identities() -> Outcome {
    for m in [fixtures::e4(), fixtures::leaf()] {
        let gd = verified_data(&m);
        let pts = m.sample_box(None).unwrap().points(10, m.seed);
        let run = gauge_from_momentum(&gd, m.action().unwrap(), &m.mu, &pts).map_err(|e| e.to_string())?;
        let r = block_identities_check(&run.pi, &run.gauged.pi_bar, &run.b, m.foliation.as_ref().unwrap(), &pts)
            .map_err(|e| format!("{}: {e}", m.name))?;
        ensure(r.passed(), || format!("{}: {r}", m.name))?;
    }
    Ok("vertical, horizontal and full blocks agree on e4, leaf".into())
}

fn moser_verification() -> Outcome {
    let m = fixtures::leaf();
    let gd = verified_data(&m);
    let bx = m.sample_box(None).unwrap().clone();
    let run = gauge_from_momentum(&gd, m.action().unwrap(), &m.mu, &bx.points(10, m.seed)).map_err(|e| e.to_string())?;
    let ev = NumericEvaluator::new(&run.pi, &run.theta.theta0, &run.gauged.pi_bar, bx.clone()).map_err(|e| e.to_string())?;
    let inner = SampleBox::new(
        bx.lo().iter().map(|r| r * rat(1, 2)).collect(),
        bx.hi().iter().map(|r| r * rat(1, 2)).collect(),
    )
    .unwrap();
    let to_f = |p: &Vec<Rational>| p.iter().map(rational_to_f64).collect::<Vec<f64>>();
    let pts: Vec<Vec<f64>> = inner.points(MOSER_POINTS, m.seed).iter().map(to_f).collect();
    let leaf_pts: Vec<Vec<f64>> = inner.points(MOSER_POINTS, m.seed).iter().map(|p| to_f(&m.project_to_leaf(p))).collect();

    let mut z_leaf: f64 = 0.0;
    for p in &leaf_pts {
        for t in [0.0, 0.5, 1.0] {
            z_leaf = z_leaf.max(z_field(&ev, t, p).map_err(|e| e.to_string())?.amax());
        }
    }
    ensure(z_leaf <= LEAF_Z_TOL, || format!("|Z_t| on S = {z_leaf:e}"))?;

    let mut residual: f64 = 0.0;
    for t in [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)] {
        let probe = HomotopyProbe::new(&ev, &t).map_err(|e| e.to_string())?;
        for p in &pts {
            residual = residual.max(probe.residual(&ev, p, FD_STEP).map_err(|e| e.to_string())?);
        }
    }
    ensure(residual <= HOMOTOPY_TOL, || format!("homotopy residual {residual:e}"))?;

    let cfg = FlowConfig::new(MOSER_STEPS, pts.clone(), leaf_pts, INTERTWINING_TOL).map_err(|e| e.to_string())?;
    let out = flow_and_verify(&ev, &cfg).map_err(|e| e.to_string())?;
    ensure(out.report.passed(), || out.report.to_string())?;
    ensure(out.deviations.len() == MOSER_POINTS, || format!("{} trajectories aborted", out.aborted))?;

    let order = observed_order(&ev, &pts[0], 10).map_err(|e| e.to_string())?.ok_or("endpoint error at rounding level")?;
    ensure(order >= ORDER_RANGE.0 && order <= ORDER_RANGE.1, || format!("observed order {order:.3}"))?;
    Ok(format!(
        "max deviation {:.1e}, |Z|S| {z_leaf:.1e}, residual {residual:.1e}, order {order:.2}",
        out.max_deviation
    ))
}

fn adiabatic_criterion() -> Outcome {
    let run = |m: &Model| {
        let gd = verified_data(m);
        adiabatic_check(&gd, m.action().unwrap(), &m.j.as_ref().unwrap()[0]).map_err(|e| e.to_string())
    };
    let adiabatic = fixtures::e4_adiabatic();
    let broken = run(&adiabatic)?;
    ensure(!broken.vanishes, || "ζ vanished on the adiabatic fixture".into())?;
    let closed = broken.report.get("zeta-closed").ok_or("missing ∂ζ check")?;
    ensure(closed.passed, || closed.to_string())?;
    ensure(broken.report.passed(), || broken.report.to_string())?;
    let shifted = run(&fixtures::e4_casimir_shifted())?;
    ensure(shifted.vanishes && shifted.report.passed(), || shifted.report.to_string())?;
    let k = broken.potential.clone().ok_or("no Casimir potential")?;
    let mut derived = adiabatic.clone();
    derived.j = Some(vec![&adiabatic.j.as_ref().unwrap()[0] - &k]);
    ensure(run(&derived)?.vanishes, || "J − K still fails".into())?;
    Ok(format!("ζ ≠ 0 with ∂ζ = 0; shifted by K = {} is hamiltonian", k.display_with(&adiabatic.coords)))
}

fn negative_controls() -> Outcome {
    let m = fixtures::nonintegrable();
    let pi = m.pi.clone().unwrap();
    let j = jacobi_check(&pi);
    ensure(!j.passed && j.witness.is_some(), || "Π′ passed the Jacobi check".into())?;
    let pts = m.sample_box(None).unwrap().points(10, m.seed);
    let frame = graph_of_bivector(&pi).map_err(|e| e.to_string())?;
    let inv = involutivity_check(&frame, &pts).map_err(|e| e.to_string())?;
    ensure(!inv.passed && inv.witness.is_some(), || "Graph Π′ passed involutivity".into())?;
    let s = fixtures::sigma_perturbed();
    let se = structure_eq_check(s.data.as_ref().unwrap());
    let closed = se.get("sigma-closed").ok_or("missing σ check")?;
    ensure(!closed.passed && closed.witness.is_some(), || "perturbed σ passed".into())?;
    Ok(format!(
        "jacobi: {}; involutivity: {}; sigma-closed: {}",
        j.witness.unwrap().detail,
        inv.witness.unwrap().detail,
        closed.witness.clone().unwrap().detail
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "averaging identity", budget: Duration::from_secs(60), run: averaging_identity },
        Criterion { id: 2, name: "closed forms vs quadrature", budget: Duration::from_secs(10), run: closed_forms_vs_quadrature },
        Criterion { id: 3, name: "gauge preserves jacobi", budget: Duration::from_secs(120), run: gauge_preserves_jacobi },
        Criterion { id: 4, name: "q-gauge structure", budget: Duration::from_secs(600), run: q_gauge_preserves_structure },
        Criterion { id: 5, name: "averaged coupling data", budget: Duration::from_secs(600), run: averaged_coupling_pipeline },
        Criterion { id: 6, name: "block identities", budget: Duration::from_secs(600), run: block_identities },
        Criterion { id: 7, name: "moser flow", budget: Duration::from_secs(60), run: moser_verification },
        Criterion { id: 8, name: "adiabatic criterion", budget: Duration::from_secs(600), run: adiabatic_criterion },
        Criterion { id: 9, name: "negative controls", budget: Duration::from_secs(600), run: negative_controls },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs())),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {:<28} {tag} ({:.2}s) {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
