//! Frozen end-to-end values for the built-in scenarios: step-level hand
//! oracles, report structure and the stable grey-contraction norms.

use greymap::{
    builtin, fcm_step, fgcm_step, frobenius, full_report, m_tilde, run, BehaviorKind, Engine,
    ScenarioId, VerdictKind,
};

#[test]
fn web_interval_first_step_matches_hand_computation() {
    // Row 7 of the greyed web matrix against the interval input: the interval
    // dot product is [2.7004, 2.8318]; the λ=1 sigmoid of those endpoints was
    // fixed by an independent high-precision evaluation.
    let model = builtin(ScenarioId::Web);
    let act = model.activation_at(1.0).unwrap();
    let out = fgcm_step(
        model.ign_weights().unwrap(),
        model.ign_initial().unwrap(),
        act,
    )
    .unwrap();
    assert!((out[6].lower() - 0.9370502429023329).abs() < 1e-12);
    assert!((out[6].upper() - 0.9443702409044054).abs() < 1e-12);
}

#[test]
fn interval_step_contains_sampled_crisp_selections() {
    let model = builtin(ScenarioId::Web);
    let act = model.activation_at(1.0).unwrap();
    let weights = model.ign_weights().unwrap();
    let state = model.ign_initial().unwrap();
    let out = fgcm_step(weights, state, act).unwrap();

    // Deterministic within-interval selections: lower, upper, midpoint mixes.
    let n = weights.side();
    for pick in 0..27 {
        let select = |iv: &greymap::Ign, salt: usize| {
            match (pick + salt) % 3 {
                0 => iv.lower(),
                1 => iv.upper(),
                _ => iv.midpoint(),
            }
        };
        let w_sel = greymap::Matrix::from_fn(n, |i, j| select(weights.get(i, j), 7 * i + j));
        let a_sel: Vec<f64> = state.iter().enumerate().map(|(j, iv)| select(iv, j)).collect();
        let crisp = fcm_step(&w_sel, &a_sel, act).unwrap();
        for (c, iv) in crisp.iter().zip(&out) {
            assert!(
                iv.lower() - 1e-12 <= *c && *c <= iv.upper() + 1e-12,
                "crisp image {c} escapes [{}, {}]",
                iv.lower(),
                iv.upper()
            );
        }
    }
}

#[test]
fn web_grey_contraction_norms_are_stable() {
    // Regression pins for this implementation (the published table differs;
    // see the acceptance suite output for the comparison).
    let expect = [(0.5, 0.1087), (1.0, 0.3491), (2.0, 0.5426), (4.0, 0.6519)];
    let model = builtin(ScenarioId::Web);
    for (lambda, want) in expect {
        let traj = run(&model, lambda, Engine::Fggcm).unwrap();
        let act = model.activation_at(lambda).unwrap();
        let (mt, degenerate) = m_tilde(model.ggn_weights(), traj.last_state(), act).unwrap();
        assert!(degenerate.is_empty());
        let got = frobenius(&mt);
        assert!(
            (got - want).abs() < 1e-3,
            "lambda={lambda}: got {got:.4}, pinned {want:.4}"
        );
    }
}

#[test]
fn web_report_shapes() {
    let model = builtin(ScenarioId::Web);

    let settled = full_report(&model, 0.5, Engine::Fggcm).unwrap();
    assert_eq!(settled.kernel_verdict.kind, VerdictKind::UniqueFixedPoint);
    assert!((settled.kernel_verdict.lhs * 0.5 - 3.0586).abs() < 1e-3);
    assert_eq!(settled.greyness_verdict.kind, VerdictKind::UniqueFixedPoint);
    assert_eq!(settled.behavior.kind, BehaviorKind::FixedPoint);
    assert!((settled.w_star_frobenius.unwrap() - 6.1657).abs() < 1e-3);

    let cycling = full_report(&model, 2.0, Engine::Fggcm).unwrap();
    assert_eq!(cycling.kernel_verdict.kind, VerdictKind::Inconclusive);
    assert_eq!(cycling.behavior.kind, BehaviorKind::LimitCycle);
    assert!(cycling.notes.iter().any(|n| n.contains("did not settle")));

    let kv = cycling.to_key_values();
    assert!(kv.contains("behavior=LimitCycle"));
    assert!(kv.contains("engine=fggcm"));
}

#[test]
fn case1_report_loses_comparison_matrix() {
    let model = builtin(ScenarioId::WebCase1);
    let report = full_report(&model, 0.5, Engine::Fgcm).unwrap();
    assert!(report.w_star_frobenius.is_none());
    assert!(report.notes.iter().any(|n| n.contains("spans zero")));
    // the fallback verdict still reflects the kernel matrix norm
    assert!((report.kernel_verdict.lhs - 6.1172).abs() < 1e-3);
}

#[test]
fn civil_report_certifies_zero_kernels_and_grey_fixed_point() {
    let model = builtin(ScenarioId::Civil);
    let report = full_report(&model, 0.2, Engine::Fggcm).unwrap();
    assert_eq!(report.kernel_verdict.kind, VerdictKind::UniqueFixedPoint);
    assert!((report.kernel_verdict.lhs * 0.2 - 0.4750).abs() < 1e-3);
    assert_eq!(report.behavior.kind, BehaviorKind::FixedPoint);
    for g in &report.behavior.final_state {
        assert!(g.kernel().abs() < 1e-4);
        assert!((g.greyness() - 0.01).abs() < 1e-3);
    }
    // greyness norm exceeds 1 here, so the report must carry the
    // at-least-one-fixed-point structural note
    assert_eq!(report.greyness_verdict.kind, VerdictKind::Inconclusive);
    assert!(report.notes.iter().any(|n| n.contains("row-stochastic")));
}

#[test]
fn fcm_report_on_grey_model_gates_greyness_to_zero() {
    // Crisp runs have zero state greyness, every gate θ(0 − w°) with w° > 0
    // closes, and the greyness condition is trivially satisfied.
    let model = builtin(ScenarioId::Web);
    let report = full_report(&model, 0.5, Engine::Fcm).unwrap();
    assert!((report.frobenius_kernel - 6.1359).abs() < 1e-3);
    assert_eq!(report.greyness_verdict.kind, VerdictKind::UniqueFixedPoint);
    assert_eq!(report.greyness_verdict.lhs, 0.0);
    assert_eq!(report.behavior.kind, BehaviorKind::FixedPoint);
}

#[test]
fn builtin_models_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("greymap-builtin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for id in greymap::ScenarioId::ALL {
        let model = builtin(id);
        let path = dir.join(format!("{}.json", id.name()));
        greymap::save_model(&model, &path).unwrap();
        let loaded = greymap::load_model(&path).unwrap();
        assert_eq!(model, loaded, "{} round trip", id.name());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn trajectory_shapes() {
    let model = builtin(ScenarioId::Civil);
    let traj = run(&model, 0.2, Engine::Fggcm).unwrap();
    // every state recorded, initial included, early stop well under the cap
    assert!(traj.states.len() < model.max_steps);
    assert_eq!(traj.states[0].len(), 7);
    assert!((traj.states[0][0].kernel() - 0.8).abs() < 1e-15);
    let cycling = run(&model, 2.5, Engine::Fggcm).unwrap();
    assert_eq!(cycling.states.len(), model.max_steps);
    assert_eq!(cycling.steps(), model.max_steps - 1);
}
