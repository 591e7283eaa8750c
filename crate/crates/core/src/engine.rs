//! Iterative inference engines and trajectory behavior classification.
//!
//! Three engines share the update rule `A' = f(W·A)`:
//!
//! * plain (crisp reals),
//! * interval (interval sums of boundary products),
//! * grey (kernels through the activation, greyness through a weighted
//!   max-ratio).
//!
//! All trajectories are recorded as grey vectors so one classifier and one
//! trace schema cover the three engines.

use crate::activation::{Activation, ActivationKind};
use crate::error::{Error, Result};
use crate::grey::{metric_d, Ggn, GreyDomain, Ign};
use crate::matrix::Matrix;
use crate::model::Model;

/// Consecutive sub-tolerance steps required to confirm a fixed point.
pub const FP_CONFIRM_STEPS: usize = 5;
/// Below this row mass the greyness ratio is held at its previous value.
pub const GREY_DENOM_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Fcm,
    Fgcm,
    Fggcm,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Fcm, Engine::Fgcm, Engine::Fggcm];
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Fcm => write!(f, "fcm"),
            Engine::Fgcm => write!(f, "fgcm"),
            Engine::Fggcm => write!(f, "fggcm"),
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fcm" => Ok(Engine::Fcm),
            "fgcm" => Ok(Engine::Fgcm),
            "fggcm" => Ok(Engine::Fggcm),
            other => Err(Error::InvalidModel(format!("unknown engine `{other}`"))),
        }
    }
}

/// One crisp update: `A' = f(W·A)` componentwise.
pub fn fcm_step(weights: &Matrix<f64>, state: &[f64], act: Activation) -> Result<Vec<f64>> {
    let sums = weights.mul_vec(state)?;
    Ok(sums.into_iter().map(|z| act.real(z)).collect())
}

/// One interval update: interval dot product per row, activation on the
/// endpoints.
pub fn fgcm_step(weights: &Matrix<Ign>, state: &[Ign], act: Activation) -> Result<Vec<Ign>> {
    let n = weights.side();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            side: n,
            len: state.len(),
        });
    }
    Ok(weights
        .rows()
        .map(|row| {
            let sum = row
                .iter()
                .zip(state)
                .map(|(w, a)| *w * *a)
                .fold(Ign::point(0.0).expect("zero interval"), |acc, p| acc + p);
            act.interval(sum)
        })
        .collect())
}

/// One grey update. Kernels follow the crisp rule on the weight kernels.
/// Greyness per node is the ratio
/// `Σ_j max(w°_ij, A°_j)·|ŵ_ij·Â_j| / Σ_j |ŵ_ij·Â_j|`,
/// scaled by the new kernel for sigmoid and taken as-is for tanh. When the
/// denominator falls below [`GREY_DENOM_GUARD`] (kernels collapsing to zero)
/// the node keeps its previous greyness: the ratio is scale-invariant, so the
/// last resolvable value is its limit.
pub fn fggcm_step(weights: &Matrix<Ggn>, state: &[Ggn], act: Activation) -> Result<Vec<Ggn>> {
    let n = weights.side();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            side: n,
            len: state.len(),
        });
    }
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let row = weights.row(i);
        let mut weighted_sum = 0.0;
        let mut mass = 0.0;
        let mut grey_mass = 0.0;
        for (w, a) in row.iter().zip(state) {
            let term = w.kernel() * a.kernel();
            weighted_sum += term;
            mass += term.abs();
            grey_mass += w.greyness().max(a.greyness()) * term.abs();
        }
        let kernel = act.real(weighted_sum);
        let greyness = if mass < GREY_DENOM_GUARD {
            state[i].greyness()
        } else {
            let ratio = grey_mass / mass;
            match act.kind {
                ActivationKind::Sigmoid => kernel * ratio,
                ActivationKind::Tanh => ratio,
            }
        };
        next.push(Ggn::new(kernel, greyness).expect("finite step output"));
    }
    Ok(next)
}

/// A recorded run: every state from the initial one onward.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub model_name: String,
    pub lambda: f64,
    pub engine: Engine,
    pub states: Vec<Vec<Ggn>>,
}

impl Trajectory {
    /// Number of transitions taken (states − 1).
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last_state(&self) -> &[Ggn] {
        self.states.last().expect("trajectory is never empty")
    }

    /// Kernel vector of the state at `t`.
    pub fn kernels_at(&self, t: usize) -> Vec<f64> {
        self.states[t].iter().map(Ggn::kernel).collect()
    }
}

fn crisp_to_ggn(v: &[f64]) -> Vec<Ggn> {
    v.iter()
        .map(|&x| Ggn::crisp(x).expect("finite state"))
        .collect()
}

fn interval_to_ggn(v: &[Ign], domain: GreyDomain) -> Vec<Ggn> {
    // Single-interval summary: midpoint kernel, width/μ(Ω) greyness. The
    // activation keeps states inside the domain, so this cannot fail.
    v.iter()
        .map(|iv| {
            let grey = iv.width() / domain.measure();
            Ggn::new(iv.midpoint(), grey).expect("finite interval state")
        })
        .collect()
}

/// Run `engine` on `model` at slope `lambda`.
///
/// Stops early once a fixed point is certain: either two bit-identical
/// consecutive states (the map is deterministic) or [`FP_CONFIRM_STEPS`]
/// consecutive steps below `fp_tolerance`. Otherwise runs until the
/// trajectory holds `max_steps` states including the initial one.
pub fn run(model: &Model, lambda: f64, engine: Engine) -> Result<Trajectory> {
    let act = model.activation_at(lambda)?;
    let max_states = model.max_steps;
    let fp_tol = model.fp_tolerance;

    let unsupported = |reason: &str| Error::UnsupportedEngine {
        model: model.name.clone(),
        engine: engine.to_string(),
        reason: reason.into(),
    };

    let mut states: Vec<Vec<Ggn>> = Vec::with_capacity(max_states.min(1024));
    match engine {
        Engine::Fcm => {
            let weights = model
                .crisp_weights()
                .ok_or_else(|| unsupported("no crisp weight baseline"))?;
            let mut state = model
                .crisp_initial()
                .ok_or_else(|| unsupported("no crisp initial state"))?
                .to_vec();
            states.push(crisp_to_ggn(&state));
            while states.len() < max_states {
                state = fcm_step(weights, &state, act)?;
                states.push(crisp_to_ggn(&state));
                if fixed_point_reached(&states, fp_tol)? {
                    break;
                }
            }
        }
        Engine::Fgcm => {
            let weights = model
                .ign_weights()
                .ok_or_else(|| unsupported("weights have no interval form"))?;
            let mut state = model
                .ign_initial()
                .ok_or_else(|| unsupported("initial state has no interval form"))?
                .to_vec();
            states.push(interval_to_ggn(&state, model.grey_domain));
            while states.len() < max_states {
                state = fgcm_step(weights, &state, act)?;
                states.push(interval_to_ggn(&state, model.grey_domain));
                if fixed_point_reached(&states, fp_tol)? {
                    break;
                }
            }
        }
        Engine::Fggcm => {
            let weights = model.ggn_weights();
            let mut state = model.ggn_initial().to_vec();
            states.push(state.clone());
            while states.len() < max_states {
                state = fggcm_step(weights, &state, act)?;
                states.push(state.clone());
                if fixed_point_reached(&states, fp_tol)? {
                    break;
                }
            }
        }
    }

    Ok(Trajectory {
        model_name: model.name.clone(),
        lambda,
        engine,
        states,
    })
}

fn fixed_point_reached(states: &[Vec<Ggn>], fp_tol: f64) -> Result<bool> {
    let t = states.len() - 1;
    let d = metric_d(&states[t], &states[t - 1])?;
    if d == 0.0 {
        return Ok(true);
    }
    if t < FP_CONFIRM_STEPS {
        return Ok(false);
    }
    for k in 0..FP_CONFIRM_STEPS {
        if metric_d(&states[t - k], &states[t - k - 1])? >= fp_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviorKind {
    FixedPoint,
    LimitCycle,
    Chaos,
}

impl std::fmt::Display for BehaviorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BehaviorKind::FixedPoint => write!(f, "FixedPoint"),
            BehaviorKind::LimitCycle => write!(f, "LimitCycle"),
            BehaviorKind::Chaos => write!(f, "Chaos"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Behavior {
    pub kind: BehaviorKind,
    /// First step from which the trajectory stays settled (fixed points) or
    /// periodic (limit cycles).
    pub settle_step: Option<usize>,
    /// Cycle period; present iff the kind is `LimitCycle`.
    pub period: Option<usize>,
    pub final_state: Vec<Ggn>,
}

/// Classify a trajectory.
///
/// Fixed point: the trailing [`FP_CONFIRM_STEPS`] state-to-state distances
/// all lie below `fp_tol` (an exactly repeated state qualifies on its own,
/// because the map is deterministic). Limit cycle: some period
/// `P ∈ [2, steps/3]` repeats within `cycle_tol` across the final three
/// periods. Anything else is chaos.
pub fn classify(traj: &Trajectory, fp_tol: f64, cycle_tol: f64) -> Result<Behavior> {
    let states = &traj.states;
    if states.len() < 2 {
        return Err(Error::TrajectoryTooShort);
    }
    let t_max = states.len() - 1;
    let diffs: Vec<f64> = (0..t_max)
        .map(|t| metric_d(&states[t + 1], &states[t]))
        .collect::<Result<_>>()?;

    let mut trailing = 0;
    for d in diffs.iter().rev() {
        if *d < fp_tol {
            trailing += 1;
        } else {
            break;
        }
    }
    let exact_repeat = *diffs.last().expect("at least one diff") == 0.0;
    if trailing >= FP_CONFIRM_STEPS || (exact_repeat && trailing >= 1) {
        return Ok(Behavior {
            kind: BehaviorKind::FixedPoint,
            settle_step: Some(t_max - trailing),
            period: None,
            final_state: states[t_max].clone(),
        });
    }

    for period in 2..=t_max / 3 {
        let window_start = t_max - 3 * period;
        let holds = (window_start..=t_max - period)
            .map(|t| Ok(metric_d(&states[t + period], &states[t])? < cycle_tol))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);
        if holds {
            // extend the periodic window backwards to find the onset
            let mut onset = window_start;
            while onset > 0 && metric_d(&states[onset - 1 + period], &states[onset - 1])? < cycle_tol
            {
                onset -= 1;
            }
            return Ok(Behavior {
                kind: BehaviorKind::LimitCycle,
                settle_step: Some(onset),
                period: Some(period),
                final_state: states[t_max].clone(),
            });
        }
    }

    Ok(Behavior {
        kind: BehaviorKind::Chaos,
        settle_step: None,
        period: None,
        final_state: states[t_max].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GreyEntry, ModelSpec};

    fn crisp_entries(rows: &[&[f64]]) -> Matrix<GreyEntry> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GreyEntry::Crisp(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fcm_step_on_zero_matrix() {
        let w = Matrix::zeros(3);
        let sig = Activation::sigmoid(1.3).unwrap();
        assert_eq!(
            fcm_step(&w, &[0.2, -0.4, 0.9], sig).unwrap(),
            vec![0.5, 0.5, 0.5]
        );
        let tanh = Activation::tanh(1.3).unwrap();
        assert_eq!(
            fcm_step(&w, &[0.2, -0.4, 0.9], tanh).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
        assert!(fcm_step(&w, &[0.1], sig).is_err());
    }

    #[test]
    fn fcm_single_node_value() {
        let w = Matrix::from_rows(vec![vec![1.0]]).unwrap();
        let sig = Activation::sigmoid(1.0).unwrap();
        let out = fcm_step(&w, &[1.0], sig).unwrap();
        assert!((out[0] - 0.7310585786300049).abs() < 1e-15);
    }

    #[test]
    fn fgcm_degenerate_intervals_match_fcm() {
        let vals = [[0.3, -0.7], [0.5, 0.2]];
        let w_ign = Matrix::from_fn(2, |i, j| Ign::point(vals[i][j]).unwrap());
        let w_f = Matrix::from_fn(2, |i, j| vals[i][j]);
        let act = Activation::sigmoid(0.9).unwrap();
        let a = [0.4, 0.6];
        let a_ign = [Ign::point(0.4).unwrap(), Ign::point(0.6).unwrap()];
        let crisp = fcm_step(&w_f, &a, act).unwrap();
        let grey = fgcm_step(&w_ign, &a_ign, act).unwrap();
        for (c, g) in crisp.iter().zip(&grey) {
            assert!((g.lower() - c).abs() < 1e-15);
            assert!((g.upper() - c).abs() < 1e-15);
        }
    }

    #[test]
    fn fggcm_crisp_degeneration() {
        let vals = [[0.3, -0.7], [0.5, 0.2]];
        let w_ggn = Matrix::from_fn(2, |i, j| Ggn::crisp(vals[i][j]).unwrap());
        let w_f = Matrix::from_fn(2, |i, j| vals[i][j]);
        let act = Activation::tanh(1.7).unwrap();
        let a = [Ggn::crisp(0.9).unwrap(), Ggn::crisp(-0.2).unwrap()];
        let out = fggcm_step(&w_ggn, &a, act).unwrap();
        let crisp = fcm_step(&w_f, &[0.9, -0.2], act).unwrap();
        for (g, c) in out.iter().zip(&crisp) {
            assert_eq!(g.kernel(), *c);
            assert_eq!(g.greyness(), 0.0);
        }
    }

    #[test]
    fn fggcm_zero_state_is_tanh_fixed_point() {
        let w = Matrix::from_fn(2, |_, _| Ggn::crisp(0.4).unwrap());
        let act = Activation::tanh(1.0).unwrap();
        let zero = [Ggn::ZERO, Ggn::ZERO];
        let out = fggcm_step(&w, &zero, act).unwrap();
        assert_eq!(out, zero.to_vec());
    }

    #[test]
    fn fggcm_one_step_hand_value() {
        // Single-path influence: node 3 receives 0.6·0.8; its new kernel is
        // tanh(0.2·0.48) and its greyness ratio collapses to the shared
        // max(w°, A°) = 0.01.
        let mut rows = vec![vec![Ggn::ZERO; 7]; 7];
        rows[0][1] = Ggn::new(0.10, 0.01).unwrap();
        rows[0][5] = Ggn::new(-0.30, 0.01).unwrap();
        rows[1][2] = Ggn::new(0.70, 0.01).unwrap();
        rows[2][0] = Ggn::new(0.60, 0.01).unwrap();
        rows[3][0] = Ggn::new(0.90, 0.01).unwrap();
        rows[4][2] = Ggn::new(0.90, 0.01).unwrap();
        rows[5][4] = Ggn::new(-0.90, 0.01).unwrap();
        rows[5][6] = Ggn::new(0.80, 0.01).unwrap();
        rows[6][3] = Ggn::new(0.90, 0.01).unwrap();
        rows[6][4] = Ggn::new(-0.90, 0.01).unwrap();
        let w = Matrix::from_rows(rows).unwrap();
        let state = vec![
            Ggn::new(0.8, 0.01).unwrap(),
            Ggn::new(0.5, 0.01).unwrap(),
            Ggn::new(0.3, 0.01).unwrap(),
            Ggn::ZERO,
            Ggn::ZERO,
            Ggn::ZERO,
            Ggn::ZERO,
        ];
        let act = Activation::tanh(0.2).unwrap();
        let out = fggcm_step(&w, &state, act).unwrap();
        assert!((out[2].kernel() - 0.09570617112325497).abs() < 1e-15);
        assert!((out[2].greyness() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn fggcm_denominator_guard_holds_greyness() {
        let w = Matrix::from_fn(2, |_, _| Ggn::new(0.5, 0.02).unwrap());
        let act = Activation::tanh(1.0).unwrap();
        let state = [Ggn::new(0.0, 0.7).unwrap(), Ggn::new(0.0, 0.3).unwrap()];
        let out = fggcm_step(&w, &state, act).unwrap();
        assert_eq!(out[0].greyness(), 0.7);
        assert_eq!(out[1].greyness(), 0.3);
    }

    #[test]
    fn run_stops_fast_on_exact_fixed_point() {
        // zero weights + tanh: first step lands exactly on 0 and stays
        let entries = crisp_entries(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let model = crate::model::Model::new(ModelSpec::new(
            "zeros",
            Activation::tanh(1.0).unwrap(),
            entries,
            vec![GreyEntry::Crisp(0.9), GreyEntry::Crisp(-0.4)],
        ))
        .unwrap();
        let traj = run(&model, 1.0, Engine::Fggcm).unwrap();
        assert!(traj.states.len() <= 3);
        let b = classify(&traj, model.fp_tolerance, model.cycle_tolerance).unwrap();
        assert_eq!(b.kind, BehaviorKind::FixedPoint);
    }

    #[test]
    fn run_rejects_unsupported_engine() {
        let entries = Matrix::from_rows(vec![vec![GreyEntry::Grey(
            Ggn::new(0.5, 0.1).unwrap(),
        )]])
        .unwrap();
        let model = crate::model::Model::new(ModelSpec::new(
            "greyonly",
            Activation::tanh(1.0).unwrap(),
            entries,
            vec![GreyEntry::Crisp(0.5)],
        ))
        .unwrap();
        assert!(matches!(
            run(&model, 1.0, Engine::Fcm),
            Err(Error::UnsupportedEngine { .. })
        ));
        assert!(matches!(
            run(&model, 1.0, Engine::Fgcm),
            Err(Error::UnsupportedEngine { .. })
        ));
        assert!(run(&model, 1.0, Engine::Fggcm).is_ok());
    }

    #[test]
    fn classify_constant_trajectory() {
        let state = vec![Ggn::crisp(0.25).unwrap()];
        let traj = Trajectory {
            model_name: "const".into(),
            lambda: 1.0,
            engine: Engine::Fggcm,
            states: vec![state.clone(), state.clone(), state],
        };
        let b = classify(&traj, 1e-6, 1e-6).unwrap();
        assert_eq!(b.kind, BehaviorKind::FixedPoint);
        assert_eq!(b.settle_step, Some(0));
        assert_eq!(b.period, None);
    }

    #[test]
    fn classify_period_two() {
        let a = vec![Ggn::crisp(0.1).unwrap()];
        let b = vec![Ggn::crisp(0.9).unwrap()];
        let mut states = Vec::new();
        for _ in 0..30 {
            states.push(a.clone());
            states.push(b.clone());
        }
        let traj = Trajectory {
            model_name: "flip".into(),
            lambda: 1.0,
            engine: Engine::Fcm,
            states,
        };
        let beh = classify(&traj, 1e-6, 1e-6).unwrap();
        assert_eq!(beh.kind, BehaviorKind::LimitCycle);
        assert_eq!(beh.period, Some(2));
        assert_eq!(beh.settle_step, Some(0));
    }

    #[test]
    fn classify_needs_two_states() {
        let traj = Trajectory {
            model_name: "short".into(),
            lambda: 1.0,
            engine: Engine::Fcm,
            states: vec![vec![Ggn::ZERO]],
        };
        assert!(matches!(
            classify(&traj, 1e-6, 1e-6),
            Err(Error::TrajectoryTooShort)
        ));
    }

    #[test]
    fn classify_is_deterministic() {
        let a = vec![Ggn::crisp(0.3).unwrap()];
        let b = vec![Ggn::crisp(0.7).unwrap()];
        let states: Vec<_> = (0..40)
            .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
            .collect();
        let traj = Trajectory {
            model_name: "flip".into(),
            lambda: 1.0,
            engine: Engine::Fcm,
            states,
        };
        let b1 = classify(&traj, 1e-6, 1e-6).unwrap();
        let b2 = classify(&traj, 1e-6, 1e-6).unwrap();
        assert_eq!(b1.kind, b2.kind);
        assert_eq!(b1.period, b2.period);
        assert_eq!(b1.settle_step, b2.settle_step);
    }
}
