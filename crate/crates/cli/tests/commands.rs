use poisson_avg::fixtures;
use poisson_avg_cli::{run_command, Command, Options, RunReport};

fn run(cmd: Command, m: &poisson_avg::Model) -> RunReport {
    run_command(cmd, m, &Options::default()).unwrap()
}

fn check<'a>(r: &'a RunReport, id: &str) -> &'a poisson_avg::CheckOutcome {
    r.checks.iter().find(|o| o.check == id).unwrap_or_else(|| panic!("no check {id} in {}", r.to_text()))
}

#[test]
fn jacobi_on_flat_and_nonintegrable() {
    assert!(run(Command::CheckJacobi, &fixtures::flat()).passed);
    let r = run(Command::CheckJacobi, &fixtures::nonintegrable());
    assert!(!r.passed);
    assert!(check(&r, "jacobi").witness.is_some());
}

#[test]
fn perturbed_sigma_fails_only_closedness() {
    let r = run(Command::CheckStructure, &fixtures::sigma_perturbed());
    let failed: Vec<&str> = r.checks.iter().filter(|o| !o.passed).map(|o| o.check.as_str()).collect();
    assert_eq!(failed, ["sigma-closed"]);
}

#[test]
fn dirac_verify_separates_good_and_bad() {
    let good = run(Command::DiracVerify, &fixtures::e4());
    assert!(good.passed, "{}", good.to_text());
    assert!(check(&good, "coupling-connection").passed);
    let bad = run(Command::DiracVerify, &fixtures::nonintegrable());
    assert!(!check(&bad, "courant-involutivity").passed);
}

#[test]
fn adiabatic_values() {
    let r = run(Command::Adiabatic, &fixtures::e4_adiabatic());
    assert!(r.passed, "{}", r.to_text());
    assert_eq!(r.values["hamiltonian"], "false");
    let r = run(Command::Adiabatic, &fixtures::e4_casimir_shifted());
    assert!(r.passed);
    assert_eq!(r.values["hamiltonian"], "true");
}

#[test]
fn gauge_on_leaf_produces_invariant_tensor() {
    let r = run(Command::Gauge, &fixtures::leaf());
    assert!(r.passed, "{}", r.to_text());
    assert!(check(&r, "gauged-invariant").passed);
    assert!(r.output.as_ref().unwrap().pi.is_some());
}

#[test]
fn average_rejects_compatible_mode() {
    let e = run_command(Command::Average, &fixtures::leaf(), &Options::default()).unwrap_err();
    assert!(e.0.contains("locally-hamiltonian"));
}

#[test]
fn unknown_box_is_a_usage_error() {
    let opts = Options { box_name: Some("nowhere".into()), ..Options::default() };
    assert!(run_command(Command::CheckJacobi, &fixtures::flat(), &opts).is_err());
}

#[test]
fn full_pipeline_stage_prefixes() {
    let r = run(Command::FullPipeline, &fixtures::e4());
    assert!(r.passed, "{}", r.to_text());
    for id in ["structure.sigma-closed", "average.average-sigma", "gauge.horizontal-block", "dirac.coupling"] {
        assert!(check(&r, id).passed);
    }
    let ids: Vec<&String> = r.checks.iter().map(|o| &o.check).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}
