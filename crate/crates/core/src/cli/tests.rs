use super::*;

fn args(line: &str) -> Vec<String> {
    std::iter::once("bpvp".to_string()).chain(line.split_whitespace().map(String::from)).collect()
}

fn run_args(line: &str) -> RunArgs {
    match Cli::try_parse_from(args(&format!("verify {line} --trace t.csv"))).unwrap().command {
        Command::Verify(v) => v.run,
        other => panic!("{other:?}"),
    }
}

#[test]
fn eps_rule_and_horizon_parse() {
    assert_eq!("default".parse::<EpsRuleArg>().unwrap(), EpsRuleArg::Default);
    assert_eq!(
        "geometric:0.25:0.5".parse::<EpsRuleArg>().unwrap(),
        EpsRuleArg::Geometric { first: 0.25, ratio: 0.5 }
    );
    assert!("geometric:0.25".parse::<EpsRuleArg>().is_err());
    assert_eq!(parse_horizon("inf").unwrap(), Horizon::Infinite);
    assert_eq!(parse_horizon("3").unwrap(), Horizon::Finite(3));
    assert!(parse_horizon("0").is_err());
}

#[test]
fn corpus_defaults_are_kept() {
    let s = Setup::from_args(&run_args("corpus:INF-AT-GAP")).unwrap();
    let fx = fixture_by_name("INF-AT-GAP").unwrap();
    assert_eq!(s.schedule.horizon(), fx.schedule.horizon());
    assert_eq!(s.schedule.delta0(), fx.schedule.delta0());
    assert_eq!(s.gauge.description(), "d");
}

#[test]
fn overrides_rebuild_the_schedule() {
    let s = Setup::from_args(&run_args("corpus:P3 --N 3 --delta0 0.5 --eps 2 --delta-rule harmonic")).unwrap();
    assert_eq!(s.schedule.horizon(), Horizon::Finite(3));
    assert_eq!(s.schedule.delta(1), 0.25);
    assert_eq!(s.schedule.delta(3), 0.0);
    // ε_1 = ε / (2 δ_0)
    assert_eq!(s.schedule.eps(1), 2.0);
    let s = Setup::from_args(&run_args("corpus:LINE-ABS --p 2")).unwrap();
    assert_eq!(s.gauge.description(), "d^2");
}

#[test]
fn lambda_sets_the_normalization() {
    let s = Setup::from_args(&run_args("corpus:P3 --lambda 4")).unwrap();
    assert_eq!(s.schedule.delta0(), 0.5);
    let e = Setup::from_args(&run_args("corpus:P3 --mode ekeland --lambda 4")).unwrap();
    assert_eq!(e.schedule.horizon(), Horizon::Finite(1));
    assert_eq!(e.schedule.delta0(), 0.5);
    assert_eq!(e.schedule.eps(3), 0.25);
    assert!(e.request.ekeland);
}

#[test]
fn invalid_mode_combinations() {
    for line in [
        "corpus:P3 --mode ekeland",
        "corpus:P3 --mode ekeland --lambda 4 --N 2",
        "corpus:P3 --mode ekeland --lambda 4 --p 2",
        "corpus:LINE-ABS --mode t4 --lambda 1 --p 2 --N 3",
        "corpus:P3 --gauge power",
        "corpus:P3 --lambda 0",
    ] {
        assert!(Setup::from_args(&run_args(line)).is_err(), "{line}");
    }
}

#[test]
fn t4_mode_substitutes() {
    let s = Setup::from_args(&run_args("corpus:LINE-ABS --mode t4 --lambda 2 --p 2 --delta0 0.5")).unwrap();
    // ε' = ε δ_0 = 1, δ'_0 = (ε/λ^p) δ_0 = 0.25
    assert_eq!(s.problem.epsilon, 1.0);
    assert_eq!(s.schedule.delta0(), 0.25);
    assert!(s.require_ies2);
}

#[test]
fn help_goes_to_stdout_with_success() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(main_with(args("--help"), &mut out, &mut err), EXIT_OK);
    assert!(String::from_utf8(out).unwrap().contains("verify"));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(main_with(args("solve"), &mut out, &mut err), EXIT_FAIL);
    assert!(!err.is_empty());
}

#[test]
fn bench_is_deterministic() {
    let a = BenchArgs { seeds: 2, seed: 5, oracle: OracleArg::Slack, slack_fraction: 0.9, out_csv: None };
    let first = bench_csv(&bench_rows(&a).unwrap()).unwrap();
    let second = bench_csv(&bench_rows(&a).unwrap()).unwrap();
    assert_eq!(first, second);
    assert!(first.lines().count() >= 1 + 2 * 3);
}
