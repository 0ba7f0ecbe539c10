mod common;

use derange::chain::{DerangementSample, OrderedCycleLengths};
use derange::exact::{lambda_table, single_cycle_prob};
use derange::harness::{
    benchmark_methods, chi_square_test, distinct_lengths_statistic, estimate, estimate_many,
    estimate_with_workers, ks_statistic, reproduce_table, simulate_lengths_with_budget,
    total_variation, Method, Statistic, Table, TableOptions, TableSpec,
};
use derange::{Error, ModelParams};

fn p(n: usize, theta: f64) -> ModelParams {
    ModelParams::new(n, theta).unwrap()
}

/// Band around a printed value that was itself estimated from `published_reps`.
fn near_printed(est: f64, se: f64, printed: f64, published_reps: f64) -> bool {
    let printed_se = (printed * (1.0 - printed) / published_reps).sqrt();
    (est - printed).abs() <= 4.0 * (se * se + printed_se * printed_se).sqrt()
}

#[test]
fn printed_estimates() {
    let e = estimate(
        Statistic::DistinctLengths,
        p(50, 1.0),
        Method::Chain,
        100_000,
        1,
    )
    .unwrap();
    assert!(near_printed(e.point, e.std_error, 0.776, 1e5), "{e:?}");
    let e = estimate(
        Statistic::FirstIsLongest,
        p(10, 0.5),
        Method::Chain,
        100_000,
        2,
    )
    .unwrap();
    assert!(near_printed(e.point, e.std_error, 0.847, 1e5), "{e:?}");
    let e = estimate(
        Statistic::DistinctLengths,
        p(10, 5.0),
        Method::Chain,
        100_000,
        3,
    )
    .unwrap();
    assert!(near_printed(e.point, e.std_error, 0.357, 1e5), "{e:?}");
    let e = estimate(
        Statistic::SingleCycle,
        p(10, 1.0),
        Method::Chain,
        100_000,
        4,
    )
    .unwrap();
    assert!(
        (e.point - single_cycle_prob(p(10, 1.0))).abs() < 3.0 * e.std_error,
        "{e:?}"
    );
}

#[test]
fn distinct_statistic() {
    let s = |v: Vec<usize>| DerangementSample::from_lengths(OrderedCycleLengths::new(v).unwrap());
    assert_eq!(distinct_lengths_statistic(&s(vec![2, 3])), 1);
    assert_eq!(distinct_lengths_statistic(&s(vec![2, 2])), 0);
}

/// Every statistic, every method, against the exact ordered law at n = 9.
#[test]
fn all_statistics_match_exact_law() {
    let (n, theta) = (9, 2.0);
    let law = common::ordered_law(n, theta);
    for method in Method::ALL {
        let ests = estimate_many(&Statistic::ALL, p(n, theta), method, 100_000, 17, 4).unwrap();
        for e in ests {
            let exact: f64 = law.iter().map(|(k, w)| w * e.statistic.evaluate(k)).sum();
            assert!(
                (e.point - exact).abs() < 4.0 * e.std_error + 1e-12,
                "{method} {}: {} vs {exact}",
                e.statistic,
                e.point
            );
        }
    }
}

#[test]
fn estimates_are_deterministic() {
    let run = |w| {
        estimate_with_workers(
            Statistic::MeanLongestCycle,
            p(60, 0.7),
            Method::Poisson,
            5_000,
            9,
            w,
        )
        .unwrap()
    };
    let (a, b) = (run(3), run(3));
    assert_eq!(
        (a.point, a.std_error, a.attempts),
        (b.point, b.std_error, b.attempts)
    );
    assert_eq!(a.reps, 5_000);
    assert!(estimate(Statistic::SingleCycle, p(10, 1.0), Method::Chain, 0, 1).is_err());
}

#[test]
fn batch_budget() {
    let r = simulate_lengths_with_budget(
        p(200, 50.0),
        Method::Feller,
        10,
        1,
        2,
        100_000,
        || (),
        |_, _| {},
    );
    assert!(matches!(r, Err(Error::AttemptsExhausted { .. })));
    let (accs, stats) = simulate_lengths_with_budget(
        p(20, 1.0),
        Method::Chain,
        1_000,
        1,
        3,
        u64::MAX,
        || 0usize,
        |a, l| *a += l.len(),
    )
    .unwrap();
    assert_eq!(accs.len(), 3);
    assert_eq!(stats.attempts, 1_000);
}

fn quick(id: u8, ns: Vec<usize>, reps: usize) -> Table {
    let mut spec = TableSpec::published(id).unwrap();
    spec.ns = ns;
    reproduce_table(
        &spec,
        &TableOptions {
            reps,
            seed: 5,
            workers: 4,
            timings: false,
        },
    )
    .unwrap()
}

#[test]
fn table_exact_columns() {
    let t1 = quick(1, vec![50], 2_000);
    assert!((t1.cell("50", "θ = 1.0 theory").unwrap() - 0.368).abs() < 5e-4);
    let lambda = lambda_table(1.0, 50).unwrap()[50];
    let rate = t1.cell("50", "θ = 1.0 accept rate").unwrap();
    assert!((rate - lambda).abs() < 4.0 * rate * ((1.0 - rate) / 2_000.0).sqrt());
    let t2 = quick(2, vec![50], 2_000);
    assert!((t2.cell("50", "θ = 0.5 theory").unwrap() - 0.012).abs() < 5e-4);
    let t6 = quick(6, vec![11], 100_000);
    assert_eq!(t6.cell("11", "θ = 0.5 β_n"), None);
    let alpha = t6.cell("11", "θ = 0.5 α_n").unwrap();
    assert!(
        near_printed(alpha, (alpha * (1.0 - alpha) / 1e5).sqrt(), 0.469, 1e5),
        "{alpha}"
    );
    assert!(TableSpec::published(7).is_err());
}

#[test]
fn table_exact_cells_bracket_simulation() {
    let t4 = quick(4, vec![10, 50], 100_000);
    for theta in ["0.5", "1.0", "5.0"] {
        for n in ["10", "50"] {
            let sim = t4.cell(n, &format!("θ = {theta} sim")).unwrap();
            let exact = t4.cell(n, &format!("θ = {theta} exact")).unwrap();
            let se = (exact * (1.0 - exact) / 1e5).sqrt();
            assert!(
                (sim - exact).abs() <= 4.0 * se + 1e-12,
                "n={n} θ={theta}: {sim} vs {exact}"
            );
        }
    }
}

#[test]
fn tables_are_byte_identical_and_round_trip() {
    for id in [1, 5, 8] {
        let a = quick(id, vec![10, 50], 3_000);
        let b = quick(id, vec![10, 50], 3_000);
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(Table::from_csv(id, &a.to_csv().unwrap()).unwrap(), a);
        assert_eq!(Table::from_json(&a.to_json().unwrap()).unwrap(), a);
    }
    let mut spec = TableSpec::published(3).unwrap();
    spec.ns = vec![10];
    let timed = reproduce_table(&spec, &TableOptions::new(500, 1)).unwrap();
    assert!(timed.rows[0]
        .cells
        .iter()
        .all(|c| c.is_some_and(|s| s >= 0.0)));
    assert_eq!(Table::from_json(&timed.to_json().unwrap()).unwrap(), timed);
}

#[test]
fn goodness_of_fit_helpers() {
    assert_eq!(total_variation(&[5, 5], &[0.5, 0.5]), 0.0);
    assert!((total_variation(&[10, 0], &[0.5, 0.5]) - 0.5).abs() < 1e-15);
    let perfect = chi_square_test(&[250, 250, 500], &[0.25, 0.25, 0.5]);
    assert_eq!(perfect.statistic, 0.0);
    assert!((perfect.p_value - 1.0).abs() < 1e-12);
    assert!(chi_square_test(&[400, 100, 500], &[0.25, 0.25, 0.5]).p_value < 1e-10);
    let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
    assert!(ks_statistic(&grid, |x| x) <= 5e-4 + 1e-12);
    assert!((ks_statistic(&[0.0; 10], |x| x.clamp(0.0, 1.0)) - 1.0).abs() < 1e-12);
}

#[test]
fn feller_cost_scales_with_lambda() {
    let report = benchmark_methods(&[(50, 1.0), (50, 5.0)], &[Method::Feller], 2_000, 3).unwrap();
    let a1 = report
        .row(Method::Feller, 50, 1.0)
        .unwrap()
        .attempts_per_sample;
    let a5 = report
        .row(Method::Feller, 50, 5.0)
        .unwrap()
        .attempts_per_sample;
    let want = lambda_table(1.0, 50).unwrap()[50] / lambda_table(5.0, 50).unwrap()[50];
    assert!((a5 / a1 / want - 1.0).abs() < 0.15, "{} vs {want}", a5 / a1);
    assert!(report.theta_spread(Method::Feller, 50).unwrap() > 5.0);
    assert!(report.theta_spread(Method::Chain, 50).is_none());
}
