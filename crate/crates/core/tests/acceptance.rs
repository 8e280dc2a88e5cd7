//! Acceptance gate: the eleven headline checks for the equilibrium suite,
//! one test per criterion. Each prints a single pass line; a failed
//! assertion marks the criterion red with the offending numbers.

// Monotonicity is counted with `!(a < b)` rather than `a >= b` so that a
// NaN, which is incomparable, registers as a violation instead of passing.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use olg_core::closedform::{construct, construct_theta, find_theta, verify_roundtrip};
use olg_core::exact::{exponents_exact, ratio, to_real, ExactScenario};
use olg_core::{
    bubble_test, bubbleless_steady_states, equilibrium_set, exponents, regime_report, simulate,
    BubbleVerdict, ConditionStatus, DividendStream, Economy, ProductionTechnology, SavingsRule,
    Trajectory,
};
use std::time::Instant;

/// Saddle benchmark economy (A = 9/4, α = 1/3, β = 2/3, G = 1), no asset
/// dividends.
fn saddle_economy() -> Economy<f64> {
    Economy::new(
        1.0,
        ProductionTechnology::cobb_douglas(2.25, 1.0 / 3.0, 1.0).unwrap(),
        SavingsRule::log(2.0 / 3.0).unwrap(),
        DividendStream::zero(),
        1.0,
    )
    .unwrap()
}

/// Collapsing benchmark economy (A = 6, α = 2/3, β = 1/2, G = 1), no asset
/// dividends.
fn collapsing_economy() -> Economy<f64> {
    Economy::new(
        1.0,
        ProductionTechnology::cobb_douglas(6.0, 2.0 / 3.0, 1.0).unwrap(),
        SavingsRule::log(0.5).unwrap(),
        DividendStream::zero(),
        1.0,
    )
    .unwrap()
}

/// Bubbly steady state of the saddle benchmark: `k_b = 0.75^1.5` and
/// `p_b = k_b^(1/3) − k_b` (the wage share constant `βA(1−α)` equals 1).
fn bubbly_point() -> (f64, f64) {
    let kb = 0.75f64.powf(1.5);
    (kb, kb.powf(1.0 / 3.0) - kb)
}

/// Max relative deviation of the date-0 valuation identity
/// `p_0 = Σ_{s≤t} (Π_{j≤s} G/R_j)·d_s + (Π_{j≤t} G/R_j)·p_t`
/// over every date of a completed trajectory.
fn date_zero_identity_deviation(traj: &Trajectory<f64>, growth: f64) -> f64 {
    assert!(traj.completed());
    let records = traj.records();
    let p0 = records[0].price;
    let scale = p0.abs().max(1e-30);
    let mut factor = 1.0f64;
    let mut dividend_sum = 0.0f64;
    let mut worst = 0.0f64;
    for r in records.iter().skip(1) {
        factor *= growth / r.rate;
        dividend_sum += factor * r.dividend;
        worst = worst.max((dividend_sum + factor * r.price - p0).abs() / scale);
    }
    worst
}

#[test]
fn criterion_01_closed_form_paths_verify_against_the_simulator() {
    // The three reference families plus the curvature variant must satisfy
    // the equilibrium equations to 1e-10 over 200 periods, each inside a
    // second. Forward tracking is additionally exact for the stable family;
    // the two saddle-riding families are verified through the equation
    // residuals, which is the only test that survives finite precision.
    for scenario in [
        ExactScenario::collapsing(),
        ExactScenario::bubbly(),
        ExactScenario::bubbleless(),
    ] {
        let spec = scenario.spec::<f64>();
        let start = Instant::now();
        let path = construct(&spec, 1.0, 200).unwrap();
        let report = verify_roundtrip(&path).unwrap();
        let elapsed = start.elapsed();
        assert!(
            report.clearing_residual <= 1e-10 && report.pricing_residual <= 1e-10,
            "{}: residuals {:e}, {:e}",
            spec.family_name(),
            report.clearing_residual,
            report.pricing_residual
        );
        assert!(
            elapsed.as_secs_f64() < 1.0,
            "{}: construct+verify took {elapsed:?}",
            spec.family_name()
        );
    }
    // Stable family also tracks forward to machine precision.
    let stable = construct(&ExactScenario::bubbleless().spec::<f64>(), 1.0, 200).unwrap();
    let report = verify_roundtrip(&stable).unwrap();
    assert!(
        report.capital_deviation <= 1e-10 && report.price_deviation <= 1e-10,
        "stable family tracking: dev k {:e}, dev p {:e}",
        report.capital_deviation,
        report.price_deviation
    );

    let start = Instant::now();
    let base = construct(&ExactScenario::collapsing().spec::<f64>(), 1.0, 200).unwrap();
    let theta_path = construct_theta(&base, 256.0, 3).unwrap();
    let theta_report = theta_path.verify_roundtrip().unwrap();
    let elapsed = start.elapsed();
    assert!(
        theta_report.clearing_residual <= 1e-10 && theta_report.pricing_residual <= 1e-10,
        "curvature variant residuals {:e}, {:e}",
        theta_report.clearing_residual,
        theta_report.pricing_residual
    );
    assert!(elapsed.as_secs_f64() < 1.0);
    println!("criterion 01 (closed-form paths verify) ... pass");
}

#[test]
fn criterion_02_collapsing_benchmark_hits_its_exact_values() {
    let scenario = ExactScenario::collapsing();
    // First step from unit capital is exactly (4/5, 1/5).
    let (k1, p0) = scenario.first_step_from_unit_capital();
    assert_eq!(k1, ratio(4, 5), "k_1 must be exactly 4/5");
    assert_eq!(p0, ratio(1, 5), "p_0 must be exactly 1/5");

    let path = construct(&scenario.spec::<f64>(), 1.0, 400).unwrap();
    assert!((path.capital[1] - 0.8).abs() <= 1e-15);
    assert!((path.price[0] - 0.2).abs() <= 1e-15);
    assert!(
        path.capital[200] <= 1e-3,
        "capital must have collapsed by t = 200, got {:e}",
        path.capital[200]
    );
    assert!(
        path.price[200] <= 1e-3,
        "the price must have collapsed by t = 200, got {:e}",
        path.price[200]
    );
    // Detrended dividends shrink at asymptotic rate 1/σ = 1/1.1.
    let growth_400 = path.dividend[400].powf(1.0 / 400.0);
    assert!(
        (growth_400 - 1.0 / 1.1).abs() <= 1e-2,
        "d_t^(1/t) at t = 400: {growth_400} vs {}",
        1.0 / 1.1
    );
    println!("criterion 02 (collapsing benchmark) ... pass");
}

#[test]
fn criterion_03_saddle_benchmark_converges_to_the_bubbly_state() {
    let path = construct(&ExactScenario::bubbly().spec::<f64>(), 1.0, 200).unwrap();
    assert!(
        (path.capital[200] - 0.649519).abs() <= 1e-6,
        "k_200 = {}",
        path.capital[200]
    );
    assert!(
        (path.price[200] - 0.216506).abs() <= 1e-4,
        "p_200 = {}",
        path.price[200]
    );
    println!("criterion 03 (saddle benchmark) ... pass");
}

#[test]
fn criterion_04_bubbleless_benchmark_converges_with_a_convergent_value_sum() {
    let path = construct(&ExactScenario::bubbleless().spec::<f64>(), 1.0, 200).unwrap();
    assert!(
        (path.capital[200] - 1.0).abs() <= 1e-6,
        "k_200 = {}",
        path.capital[200]
    );
    assert!(path.price[200] <= 1e-5, "p_200 = {:e}", path.price[200]);
    let traj = path.trajectory();
    let sum = traj.dividend_price_sum();
    assert!(
        (sum - 4.0).abs() <= 1e-6,
        "Σ d_t/p_t through t = 200 must be 4: got {sum}"
    );
    // A convergent dividend/price sum certifies the bubble component.
    let test = bubble_test(&traj);
    assert_eq!(
        test.verdict,
        BubbleVerdict::Bubbly,
        "bubble test on the bubbleless-limit path: {}",
        test.reason
    );
    println!("criterion 04 (bubbleless benchmark) ... pass");
}

#[test]
fn criterion_05_paths_are_monotone_in_the_initial_price() {
    let econ = saddle_economy();
    let horizon = 100;
    let runs: Vec<Trajectory<f64>> = (1..=20)
        .map(|i| {
            let p0 = 0.24 * i as f64 / 20.0;
            let traj = simulate(&econ, p0, horizon).unwrap();
            assert!(traj.completed(), "p0 = {p0} must survive {horizon} periods");
            traj
        })
        .collect();
    let mut violations = 0usize;
    for pair in runs.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        for t in 1..=horizon {
            let (a, b) = (&lo.records()[t], &hi.records()[t]);
            if !(b.capital < a.capital) {
                violations += 1;
            }
            if !(b.price > a.price) {
                violations += 1;
            }
        }
    }
    assert_eq!(
        violations, 0,
        "every capital entry must fall and every price entry rise with p_0"
    );
    println!("criterion 05 (monotonicity in the initial price) ... pass");
}

#[test]
fn criterion_06_equilibrium_set_endpoints_match_the_shooting_oracle() {
    let start = Instant::now();
    let econ = saddle_economy();
    let horizon = 400;
    let tol = 1e-8;
    let set = equilibrium_set(&econ, horizon, tol).unwrap();

    let lower = set.lower();
    assert_eq!(lower.price, 0.0, "a pure bubble admits the zero price");
    let upper = set.upper();

    // The saddle path through k_0 = 1 starts at exactly (1−ρ)·β·w(1) = 1/4.
    assert!(
        (upper.price - 0.25).abs() <= 2.0 * tol,
        "upper endpoint {} vs the saddle-path value 0.25",
        upper.price
    );

    // The upper trajectory passes through the bubbly steady state on its
    // way along the saddle; measure the closest approach.
    let (kb, pb) = bubbly_point();
    let closest = upper
        .trajectory
        .records()
        .iter()
        .map(|r| (r.capital - kb).abs().max((r.price - pb).abs()))
        .fold(f64::INFINITY, f64::min);
    assert!(
        closest <= 1e-3,
        "the upper trajectory should approach ({kb}, {pb}); closest {closest:e}"
    );

    // Independent oracle: shoot from a uniform 10^4-point price grid over
    // [0, savings cap] and bracket the survival boundary.
    let cap = econ.savings_cap(1.0).unwrap();
    let n = 10_000;
    let mut last_survivor = f64::NEG_INFINITY;
    let mut first_failer = f64::INFINITY;
    for i in 0..=n {
        let p0 = cap * i as f64 / n as f64;
        if simulate(&econ, p0, horizon).unwrap().completed() {
            last_survivor = last_survivor.max(p0);
        } else {
            first_failer = first_failer.min(p0);
        }
    }
    assert!(
        last_survivor < first_failer,
        "grid survivors must form an interval"
    );
    assert!(
        upper.price >= last_survivor - 2.0 * tol && upper.price <= first_failer + 2.0 * tol,
        "bisection endpoint {} escapes the oracle bracket [{last_survivor}, {first_failer}]",
        upper.price
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion must finish in 10 s, took {elapsed:?}"
    );
    println!("criterion 06 (equilibrium-set endpoints vs oracle) ... pass");
}

#[test]
fn criterion_07_steady_states_and_rate_ratios_are_exact() {
    // Both benchmarks have the unique bubbleless steady state k = 1.
    for econ in [collapsing_economy(), saddle_economy()] {
        let report = bubbleless_steady_states(&econ, None, None).unwrap();
        assert_eq!(report.bubbleless.len(), 1);
        assert!(
            (report.bubbleless[0] - 1.0).abs() <= 1e-10,
            "steady state {:?}",
            report.bubbleless
        );
    }
    // The return/growth ratios are exactly 4 and 3/4 as rationals.
    assert_eq!(ExactScenario::collapsing().rho(), ratio(4, 1));
    assert_eq!(ExactScenario::bubbly().rho(), ratio(3, 4));
    let collapsing_report =
        bubbleless_steady_states(&collapsing_economy(), None, None).unwrap();
    let saddle_report = bubbleless_steady_states(&saddle_economy(), None, None).unwrap();
    assert!(
        (collapsing_report.rate_ratio.unwrap() - 4.0).abs() <= 1e-12,
        "collapsing rate ratio"
    );
    assert!(
        (saddle_report.rate_ratio.unwrap() - 0.75).abs() <= 1e-12,
        "saddle rate ratio"
    );
    // A bubbly steady state exists exactly where returns fall short of
    // growth.
    assert!(
        collapsing_report.bubbly.is_none(),
        "returns above growth cannot support a stationary bubble"
    );
    let bubbly = saddle_report.bubbly.expect("the saddle benchmark is bubbly");
    let (kb, pb) = bubbly_point();
    assert!((bubbly.capital - kb).abs() <= 1e-10);
    assert!((bubbly.price - pb).abs() <= 1e-10);
    println!("criterion 07 (steady states) ... pass");
}

#[test]
fn criterion_08_transition_root_matches_the_closed_form_on_a_grid() {
    // Write the log preferences as a separable pair so the transition goes
    // through the root finder, then compare against the closed form
    // g(k, p) = (β·w(k) − p)/G on a 100×100 grid.
    let beta: f64 = 2.0 / 3.0;
    let b = beta / (1.0 - beta);
    let econ = Economy::new(
        1.0,
        ProductionTechnology::cobb_douglas(2.25, 1.0 / 3.0, 1.0).unwrap(),
        SavingsRule::separable(
            std::sync::Arc::new(|c: f64| 1.0 / c),
            std::sync::Arc::new(move |c: f64| b / c),
        ),
        DividendStream::zero(),
        1.0,
    )
    .unwrap();
    let g = econ.growth();
    let n = 100;
    for i in 0..n {
        // Geometric capital grid spanning [1e-2, 1e2].
        let k = 1e-2 * (1e4f64).powf(i as f64 / (n - 1) as f64);
        let wage = econ.wage(k).unwrap();
        let cap = beta * wage;
        for j in 0..n {
            let p = cap * j as f64 / n as f64;
            let expected = (cap - p) / g;
            let got = econ
                .transition(k, p)
                .unwrap()
                .unwrap_or_else(|| panic!("transition undefined inside the domain at ({k}, {p})"));
            assert!(
                (got - expected).abs() <= 1e-12 * expected.abs().max(1e-300),
                "root vs closed form at k = {k:e}, p = {p:e}: {got:e} vs {expected:e}"
            );
        }
        // On and above the boundary p = β·A(1−α)·k^α the map is undefined.
        for p in [cap, cap * 1.0 + cap * 1e-6, cap * 1.5] {
            assert!(
                econ.transition(k, p).unwrap().is_none(),
                "transition must be undefined at k = {k:e}, p = {p:e}"
            );
        }
    }
    println!("criterion 08 (transition root vs closed form) ... pass");
}

#[test]
fn criterion_09_exponent_identities_match_their_defining_sums() {
    for alpha in [0.2f64, 0.5, 2.0 / 3.0, 0.9] {
        let mut sum_pow = 0.0f64; // Σ_{s=1..t} α^s
        let mut sum_s_pow = 0.0f64; // Σ_{s=1..t} s·α^s
        let mut power = 1.0f64;
        for t in 1..=50usize {
            power *= alpha;
            sum_pow += power;
            sum_s_pow += t as f64 * power;
            let mu_sum = 1.0 - sum_pow;
            let nu_sum = (t as f64 - 1.0) - (t as f64 * sum_pow - sum_s_pow);
            let (mu, nu) = exponents(alpha, t);
            assert!(
                (mu - mu_sum).abs() <= 1e-12 * mu_sum.abs().max(1.0),
                "μ identity failed at α = {alpha}, t = {t}: {mu} vs {mu_sum}"
            );
            assert!(
                (nu - nu_sum).abs() <= 1e-12 * nu_sum.abs().max(1.0),
                "ν identity failed at α = {alpha}, t = {t}: {nu} vs {nu_sum}"
            );
        }
    }
    // At α = 1/2 (exactly representable) the rational defining sums agree
    // with the floating-point closed form to rounding.
    let half = ratio(1, 2);
    for t in [1usize, 7, 25, 50] {
        let (mu_q, nu_q) = exponents_exact(&half, t);
        let (mu, nu) = exponents(0.5f64, t);
        assert!((mu - to_real::<f64>(&mu_q)).abs() <= 1e-14);
        assert!((nu - to_real::<f64>(&nu_q)).abs() <= 1e-12);
    }
    println!("criterion 09 (exponent identities) ... pass");
}

#[test]
fn criterion_10_curvature_variant_reverses_the_rate_ranking() {
    let base = construct(&ExactScenario::collapsing().spec::<f64>(), 1.0, 420).unwrap();
    let growth = 1.0;
    // The full ordering R < G_d < G needs the steady return below the
    // dividend growth factor G_d = 1/1.1, which is the binding leg.
    let dividend_growth = 1.0 / 1.1;
    let (theta, path) = find_theta(&base, dividend_growth, 3).unwrap();
    assert!(
        path.steady_rate < growth,
        "θ = {theta} must push the steady return below growth, got {}",
        path.steady_rate
    );
    // Dividends are positive beyond the verified start.
    for (t, &d) in path.dividend.iter().enumerate() {
        if t > path.verified_start {
            assert!(d > 0.0, "dividend must be positive at t = {t}");
        }
    }
    // Asymptotic detrended dividend growth is unchanged by the curvature
    // term: still σ^((1−2α)/(1−α)) = 1/1.1.
    let growth_400 = path.dividend[400].powf(1.0 / 400.0);
    assert!(
        (growth_400 - 1.0 / 1.1).abs() <= 1e-2,
        "(d^θ_t)^(1/t) at t = 400: {growth_400}"
    );
    // The shifted-start economy satisfies R < G_d < G.
    let econ = path.shifted_economy().unwrap();
    let ss = bubbleless_steady_states(&econ, None, None).unwrap();
    let report = regime_report(&econ, &ss, 400).unwrap();
    let ordering = report
        .condition("dividend_growth_ordering")
        .expect("the ordering condition is always evaluated");
    assert_eq!(
        ordering.status,
        ConditionStatus::Holds,
        "R < G_d < G must hold: {:?}",
        ordering.values
    );
    let value = |name: &str| {
        ordering
            .values
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap()
    };
    let (r, gd) = (value("rate_sup"), value("dividend_growth"));
    assert!(r < gd && gd < growth, "ordering numbers: R = {r}, G_d = {gd}");
    println!("criterion 10 (curvature variant regime) ... pass");
}

#[test]
fn criterion_11_date_zero_valuation_holds_on_every_completed_run() {
    let mut suite: Vec<(String, Economy<f64>, Trajectory<f64>)> = Vec::new();

    // Closed-form trajectories for the three families.
    for scenario in [
        ExactScenario::collapsing(),
        ExactScenario::bubbly(),
        ExactScenario::bubbleless(),
    ] {
        let spec = scenario.spec::<f64>();
        let path = construct(&spec, 1.0, 200).unwrap();
        let econ = path.economy();
        suite.push((spec.family_name().to_string(), econ, path.trajectory()));
    }

    // Forward runs of the pure bubble at several surviving prices.
    let bubble = saddle_economy();
    for p0 in [0.0, 0.05, 0.15, 0.24] {
        let traj = simulate(&bubble, p0, 200).unwrap();
        suite.push((format!("pure bubble p0 = {p0}"), bubble.clone(), traj));
    }

    // Both endpoints of the degenerate dividend-carrying interval.
    let degenerate = construct(&ExactScenario::collapsing().spec::<f64>(), 1.0, 10)
        .unwrap()
        .economy();
    let set = equilibrium_set(&degenerate, 4, 1e-9).unwrap();
    suite.push((
        "degenerate lower endpoint".into(),
        degenerate.clone(),
        set.lower().trajectory.clone(),
    ));
    suite.push((
        "degenerate upper endpoint".into(),
        degenerate.clone(),
        set.upper().trajectory.clone(),
    ));

    // The curvature variant on its shifted window (as a constructed
    // trajectory: forward iteration cannot hold this saddle).
    let base = construct(&ExactScenario::collapsing().spec::<f64>(), 1.0, 60).unwrap();
    let theta_path = construct_theta(&base, 256.0, 3).unwrap();
    let theta_econ = theta_path.shifted_economy().unwrap();
    let theta_run = theta_path.trajectory().unwrap();
    suite.push(("curvature shifted window".into(), theta_econ, theta_run));

    for (name, econ, traj) in &suite {
        assert!(traj.completed(), "{name} must be a completed run");
        let deviation = date_zero_identity_deviation(traj, econ.growth());
        assert!(
            deviation <= 1e-10,
            "date-0 identity deviation {deviation:e} on {name}"
        );
    }
    println!(
        "criterion 11 (date-0 valuation on {} completed runs) ... pass",
        suite.len()
    );
}
