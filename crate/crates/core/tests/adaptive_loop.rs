use std::time::Duration;

use mivor_core::problems::ExternalCommand;
use mivor_core::{run, run_with, Benchmark, Class, ClassRule, MivorConfig, Problem, StepKind, SwarmConfig};

fn light(budget: usize, initial: usize, seed: u64) -> MivorConfig {
    MivorConfig {
        budget,
        initial,
        seed,
        swarm: SwarmConfig { particles: 12, iterations: 20, ..SwarmConfig::default() },
        ..MivorConfig::default()
    }
}

#[test]
fn higdon_initial_design_has_no_minor_sample() {
    let mut p = Problem::benchmark(Benchmark::Higdon);
    let state = run(&mut p, ClassRule::new(0.0), &light(5, 5, 0)).unwrap();
    assert_eq!(state.dataset().count(Class::Minor), 0);
}

#[test]
fn rate_follows_random_exploration_count() {
    let cfg = light(40, 5, 9);
    let mut p = Problem::benchmark(Benchmark::ModifiedHigdon);
    let mut rates = Vec::new();
    let state = run_with(&mut p, ClassRule::new(0.0), &cfg, |s| rates.push(s.rate())).unwrap();
    assert_eq!(rates.len(), 36);
    assert!(rates.windows(2).all(|w| w[1] <= w[0]));
    let k = state.schedule().random_steps();
    assert_eq!(k, state.log().iter().filter(|r| r.kind == StepKind::MiptRandom).count());
    assert_eq!(state.rate(), 0.4 / 1.1f64.powi(k as i32));
}

#[test]
fn external_double_reproduces_builtin_run() {
    let script = r#"BEGIN { pi = atan2(0, -1) } { printf "%.17g\n", sin(2*pi*$1/10) + 0.2*sin(2*pi*$1/2.5) - 0.5 }"#;
    let body = format!("while IFS= read -r line; do printf '%s\\n' \"$line\" | awk '{script}' || exit 1; done");
    let cmd = ExternalCommand::new("sh", vec!["-c".into(), body]).with_timeout(Duration::from_secs(20));
    let cfg = light(15, 5, 2);
    let mut ext = Problem::external("higdon-awk", Benchmark::Higdon.domain(), &cmd).unwrap();
    let a = run(&mut ext, ClassRule::new(0.0), &cfg).unwrap();
    let b = run(&mut Problem::benchmark(Benchmark::Higdon), ClassRule::new(0.0), &cfg).unwrap();
    let kinds = |s: &mivor_core::MivorState| s.log().iter().map(|r| r.kind).collect::<Vec<_>>();
    assert_eq!(kinds(&a), kinds(&b));
    for (x, y) in a.log().iter().zip(b.log()) {
        assert_eq!(x.point, y.point);
        assert!((x.value - y.value).abs() < 1e-9);
    }
}

#[test]
fn different_seeds_diverge() {
    let a = run(&mut Problem::benchmark(Benchmark::Higdon), ClassRule::new(0.0), &light(20, 5, 1)).unwrap();
    let b = run(&mut Problem::benchmark(Benchmark::Higdon), ClassRule::new(0.0), &light(20, 5, 2)).unwrap();
    assert_ne!(a.log(), b.log());
    assert_eq!(a.log()[..5], b.log()[..5]);
}

#[test]
fn invalid_config_is_rejected_before_evaluation() {
    let mut calls = 0usize;
    let counter = move |_: &[f64]| {
        calls += 1;
        assert!(calls < 2, "evaluated despite invalid config");
        0.0
    };
    let mut p = Problem::new("count", mivor_core::ParameterDomain::unit(1), counter);
    let cfg = MivorConfig { r0: 1.5, ..light(10, 5, 0) };
    assert!(run(&mut p, ClassRule::new(0.0), &cfg).is_err());
}
