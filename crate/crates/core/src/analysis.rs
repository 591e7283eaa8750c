//! Convergence conditions, diagnostic matrices and full per-run reports.

use crate::activation::{Activation, ActivationKind};
use crate::engine::{classify, run, Behavior, BehaviorKind, Engine, GREY_DENOM_GUARD};
use crate::error::{Error, Result};
use crate::grey::{Ggn, Ign};
use crate::matrix::Matrix;
use crate::model::Model;

/// Tolerance for the equality branches of the condition trichotomy.
pub const CONDITION_EQ_TOL: f64 = 1e-9;

/// Heaviside step with θ(0) = 1.
pub fn heaviside(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    UniqueFixedPoint,
    AtLeastOneFixedPoint,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictKind::UniqueFixedPoint => write!(f, "unique-fixed-point"),
            VerdictKind::AtLeastOneFixedPoint => write!(f, "at-least-one-fixed-point"),
            VerdictKind::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Outcome of comparing a norm against its sufficient-condition threshold.
#[derive(Debug, Clone, Copy)]
pub struct ConditionVerdict {
    pub kind: VerdictKind,
    pub lhs: f64,
    pub threshold: f64,
    pub margin: f64,
}

impl ConditionVerdict {
    fn decide(lhs: f64, threshold: f64) -> Self {
        let kind = if (lhs - threshold).abs() <= CONDITION_EQ_TOL {
            VerdictKind::AtLeastOneFixedPoint
        } else if lhs < threshold {
            VerdictKind::UniqueFixedPoint
        } else {
            VerdictKind::Inconclusive
        };
        ConditionVerdict {
            kind,
            lhs,
            threshold,
            margin: threshold - lhs,
        }
    }
}

pub fn frobenius(m: &Matrix<f64>) -> f64 {
    m.frobenius()
}

/// Kernel sufficient condition: ‖Ŵ‖_F against 4/λ (sigmoid) or 1/λ (tanh).
pub fn kernel_condition(kernel_weights: &Matrix<f64>, act: Activation) -> ConditionVerdict {
    ConditionVerdict::decide(kernel_weights.frobenius(), act.kernel_threshold())
}

/// Comparison matrix of a sign-definite interval matrix: |lower| for
/// non-positive entries, upper for non-negative ones.
pub fn w_star(weights: &Matrix<Ign>) -> Result<Matrix<f64>> {
    let n = weights.side();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let iv = weights.get(i, j);
            if iv.spans_zero() {
                return Err(Error::SpansZero { row: i, col: j });
            }
            *out.get_mut(i, j) = if iv.upper() <= 0.0 {
                iv.lower().abs()
            } else {
                iv.upper()
            };
        }
    }
    Ok(out)
}

/// Greyness contraction matrix at a state: row-normalised |ŵ_ij·Â_j| gated by
/// θ(A°_j − w°_ij), scaled by the image kernel for sigmoid. Rows whose mass
/// falls below the engine guard are returned as zeros and reported in the
/// second component.
pub fn m_tilde(
    weights: &Matrix<Ggn>,
    state: &[Ggn],
    act: Activation,
) -> Result<(Matrix<f64>, Vec<usize>)> {
    let n = weights.side();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            side: n,
            len: state.len(),
        });
    }
    let mut out = Matrix::zeros(n);
    let mut degenerate = Vec::new();
    for i in 0..n {
        let row = weights.row(i);
        let mut weighted_sum = 0.0;
        let mut mass = 0.0;
        for (w, a) in row.iter().zip(state) {
            weighted_sum += w.kernel() * a.kernel();
            mass += (w.kernel() * a.kernel()).abs();
        }
        if mass < GREY_DENOM_GUARD {
            degenerate.push(i);
            continue;
        }
        let scale = match act.kind {
            ActivationKind::Sigmoid => act.real(weighted_sum),
            ActivationKind::Tanh => 1.0,
        };
        for (j, (w, a)) in row.iter().zip(state).enumerate() {
            let gate = heaviside(a.greyness() - w.greyness());
            *out.get_mut(i, j) = scale * (w.kernel() * a.kernel()).abs() * gate / mass;
        }
    }
    Ok((out, degenerate))
}

/// Greyness sufficient condition: ‖M̃‖_F against 1.
pub fn greyness_condition(m_tilde: &Matrix<f64>) -> ConditionVerdict {
    ConditionVerdict::decide(m_tilde.frobenius(), 1.0)
}

/// Greyness iteration matrix at a state: row-normalised |ŵ_ij·Â_j|, scaled
/// per row by the next-state kernel for sigmoid (rows then sum to Â'_i; for
/// tanh they sum to 1).
pub fn m_matrix(
    weights: &Matrix<Ggn>,
    state: &[Ggn],
    next_kernels: &[f64],
    act: Activation,
) -> Result<Matrix<f64>> {
    let n = weights.side();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            side: n,
            len: state.len(),
        });
    }
    if next_kernels.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: next_kernels.len(),
        });
    }
    let mut out = Matrix::zeros(n);
    for (i, &next_kernel) in next_kernels.iter().enumerate() {
        let row = weights.row(i);
        let mass: f64 = row
            .iter()
            .zip(state)
            .map(|(w, a)| (w.kernel() * a.kernel()).abs())
            .sum();
        if mass < GREY_DENOM_GUARD {
            return Err(Error::InvalidModel(format!(
                "row {i} of the greyness iteration matrix has zero mass"
            )));
        }
        let scale = match act.kind {
            ActivationKind::Sigmoid => next_kernel,
            ActivationKind::Tanh => 1.0,
        };
        for (j, (w, a)) in row.iter().zip(state).enumerate() {
            *out.get_mut(i, j) = scale * (w.kernel() * a.kernel()).abs() / mass;
        }
    }
    Ok(out)
}

/// Euclidean norm of `M·g − g`: near zero certifies `g` as an
/// eigenvalue-1 eigenvector of `M` (or the zero vector).
pub fn tanh_grey_fixed_point_residual(m: &Matrix<f64>, grey: &[f64]) -> Result<f64> {
    let image = m.mul_vec(grey)?;
    Ok(image
        .iter()
        .zip(grey)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Checks that 1 is an eigenvalue of `m` via |det(M − I)| after
/// row-equilibration.
pub fn has_unit_eigenvalue(m: &Matrix<f64>, tol: f64) -> bool {
    let n = m.side();
    let shifted = Matrix::from_fn(n, |i, j| m.get(i, j) - if i == j { 1.0 } else { 0.0 });
    let mut equilibrated = shifted.clone();
    for i in 0..n {
        let norm = shifted.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for j in 0..n {
                *equilibrated.get_mut(i, j) /= norm;
            }
        }
    }
    equilibrated.det().abs() < tol
}

/// Full diagnostic record for one (model, λ, engine) run.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub model_name: String,
    pub lambda: f64,
    pub engine: Engine,
    /// Frobenius norm of the kernel matrix the engine iterates.
    pub frobenius_kernel: f64,
    /// Frobenius norm of the comparison matrix, when the interval form is
    /// sign-definite.
    pub w_star_frobenius: Option<f64>,
    pub kernel_verdict: ConditionVerdict,
    pub m_tilde_frobenius: Option<f64>,
    pub greyness_verdict: ConditionVerdict,
    pub behavior: Behavior,
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    /// Flat `key=value` lines, one per field.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("model={}\n", self.model_name));
        s.push_str(&format!("lambda={}\n", self.lambda));
        s.push_str(&format!("engine={}\n", self.engine));
        s.push_str(&format!("norm_kernel={:.6}\n", self.frobenius_kernel));
        s.push_str(&format!(
            "norm_wstar={}\n",
            self.w_star_frobenius
                .map_or("-".to_string(), |v| format!("{v:.6}"))
        ));
        s.push_str(&format!("kernel_verdict={}\n", self.kernel_verdict.kind));
        s.push_str(&format!(
            "mtilde_norm={}\n",
            self.m_tilde_frobenius
                .map_or("-".to_string(), |v| format!("{v:.6}"))
        ));
        s.push_str(&format!("greyness_verdict={}\n", self.greyness_verdict.kind));
        s.push_str(&format!("behavior={}\n", self.behavior.kind));
        for n in &self.notes {
            s.push_str(&format!("note={n}\n"));
        }
        s
    }
}

/// Simulate, classify and evaluate every applicable condition for one λ.
pub fn full_report(model: &Model, lambda: f64, engine: Engine) -> Result<ConvergenceReport> {
    let act = model.activation_at(lambda)?;
    let traj = run(model, lambda, engine)?;
    let behavior = classify(&traj, model.fp_tolerance, model.cycle_tolerance)?;
    let mut notes = Vec::new();

    let kernel_matrix = match engine {
        Engine::Fcm => model
            .crisp_weights()
            .cloned()
            .expect("run() already required the crisp baseline"),
        Engine::Fgcm | Engine::Fggcm => model.kernel_weights(),
    };
    let frobenius_kernel = kernel_matrix.frobenius();

    let w_star_frobenius = match model.ign_weights().map(w_star) {
        Some(Ok(m)) => Some(m.frobenius()),
        Some(Err(Error::SpansZero { row, col })) => {
            notes.push(format!(
                "interval weight ({row},{col}) spans zero: comparison matrix unavailable"
            ));
            None
        }
        Some(Err(e)) => return Err(e),
        None => None,
    };

    // Engine-appropriate kernel condition: the comparison matrix for the
    // interval engine when it exists, the iterated kernel matrix otherwise.
    let kernel_verdict = match engine {
        Engine::Fgcm => match w_star_frobenius {
            Some(norm) => ConditionVerdict::decide(norm, act.kernel_threshold()),
            None => {
                notes.push(
                    "kernel verdict falls back to the kernel matrix norm".to_string(),
                );
                kernel_condition(&kernel_matrix, act)
            }
        },
        _ => kernel_condition(&kernel_matrix, act),
    };

    let (mt, degenerate_rows) = m_tilde(model.ggn_weights(), &behavior.final_state, act)?;
    if !degenerate_rows.is_empty() {
        notes.push(format!(
            "greyness rows {degenerate_rows:?} have zero mass at the final state; treated as zero"
        ));
    }
    let m_tilde_frobenius = if degenerate_rows.len() == model.node_count() {
        None
    } else {
        Some(mt.frobenius())
    };
    let greyness_verdict = greyness_condition(&mt);

    if behavior.kind != BehaviorKind::FixedPoint {
        notes.push(
            "kernel trajectory did not settle: greyness diagnostics use the last recorded state"
                .to_string(),
        );
    }

    if engine == Engine::Fggcm && act.kind == ActivationKind::Tanh {
        // When no weight greyness exceeds its node greyness, the greyness
        // update is a row-stochastic map and always admits a fixed point.
        let row_stochastic = (0..model.node_count()).all(|i| {
            model.ggn_weights().row(i).iter().zip(&behavior.final_state).all(|(w, a)| {
                w.kernel() == 0.0 || a.greyness() >= w.greyness() - 1e-12
            })
        });
        if row_stochastic && greyness_verdict.kind != VerdictKind::UniqueFixedPoint {
            notes.push(
                "greyness iteration matrix is row-stochastic at the final state: \
                 at least one greyness fixed point exists"
                    .to_string(),
            );
        }
    }

    Ok(ConvergenceReport {
        model_name: model.name.clone(),
        lambda,
        engine,
        frobenius_kernel,
        w_star_frobenius,
        kernel_verdict,
        m_tilde_frobenius,
        greyness_verdict,
        behavior,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_convention() {
        assert_eq!(heaviside(0.0), 1.0);
        assert_eq!(heaviside(-1e-300), 0.0);
        assert_eq!(heaviside(1e-300), 1.0);
    }

    #[test]
    fn verdict_trichotomy() {
        let act = Activation::sigmoid(1.0).unwrap();
        let below = Matrix::from_rows(vec![vec![3.9]]).unwrap();
        assert_eq!(
            kernel_condition(&below, act).kind,
            VerdictKind::UniqueFixedPoint
        );
        let at = Matrix::from_rows(vec![vec![4.0]]).unwrap();
        assert_eq!(
            kernel_condition(&at, act).kind,
            VerdictKind::AtLeastOneFixedPoint
        );
        let above = Matrix::from_rows(vec![vec![4.1]]).unwrap();
        let v = kernel_condition(&above, act);
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!((v.margin - (4.0 - 4.1)).abs() < 1e-12);

        let tanh = Activation::tanh(2.0).unwrap();
        assert_eq!(tanh.kernel_threshold(), 0.5);
    }

    #[test]
    fn kernel_condition_transpose_invariant() {
        let act = Activation::tanh(0.8).unwrap();
        let m = Matrix::from_rows(vec![vec![0.3, -0.9], vec![0.0, 0.4]]).unwrap();
        let a = kernel_condition(&m, act);
        let b = kernel_condition(&m.transpose(), act);
        assert_eq!(a.kind, b.kind);
        assert!((a.lhs - b.lhs).abs() <= 1e-12);
    }

    #[test]
    fn w_star_entries_and_span_error() {
        let w = Matrix::from_rows(vec![
            vec![Ign::new(0.99, 1.00).unwrap(), Ign::new(-0.91, -0.89).unwrap()],
            vec![Ign::new(0.0, 0.0).unwrap(), Ign::new(0.5, 0.7).unwrap()],
        ])
        .unwrap();
        let ws = w_star(&w).unwrap();
        assert_eq!(*ws.get(0, 0), 1.00);
        assert_eq!(*ws.get(0, 1), 0.91);
        assert_eq!(*ws.get(1, 0), 0.0);
        assert_eq!(*ws.get(1, 1), 0.7);
        for v in ws.rows().flatten() {
            assert!(*v >= 0.0);
        }

        let spanning = Matrix::from_rows(vec![vec![Ign::new(-0.1, 0.1).unwrap()]]).unwrap();
        assert!(matches!(
            w_star(&spanning),
            Err(Error::SpansZero { row: 0, col: 0 })
        ));

        let zeros = Matrix::from_fn(2, |_, _| Ign::point(0.0).unwrap());
        let z = w_star(&zeros).unwrap();
        assert!(z.rows().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn m_tilde_single_node_collapses_to_one() {
        let w = Matrix::from_rows(vec![vec![Ggn::new(0.5, 0.0).unwrap()]]).unwrap();
        let state = [Ggn::new(0.5, 0.1).unwrap()];
        let act = Activation::tanh(1.0).unwrap();
        let (mt, degenerate) = m_tilde(&w, &state, act).unwrap();
        assert!(degenerate.is_empty());
        assert_eq!(*mt.get(0, 0), 1.0);
    }

    #[test]
    fn m_tilde_gates_zero_when_weights_greyer_than_state() {
        let w = Matrix::from_fn(2, |_, _| Ggn::new(0.4, 0.2).unwrap());
        let state = [Ggn::new(0.5, 0.1).unwrap(), Ggn::new(0.5, 0.1).unwrap()];
        let act = Activation::tanh(1.0).unwrap();
        let (mt, _) = m_tilde(&w, &state, act).unwrap();
        assert_eq!(mt.frobenius(), 0.0);
        assert_eq!(
            greyness_condition(&mt).kind,
            VerdictKind::UniqueFixedPoint
        );
        assert_eq!(greyness_condition(&mt).margin, 1.0);
    }

    #[test]
    fn m_tilde_degenerate_rows_are_reported() {
        let w = Matrix::from_rows(vec![
            vec![Ggn::crisp(0.0).unwrap(), Ggn::crisp(0.0).unwrap()],
            vec![Ggn::crisp(0.5).unwrap(), Ggn::crisp(0.0).unwrap()],
        ])
        .unwrap();
        let state = [Ggn::new(0.5, 0.1).unwrap(), Ggn::new(0.5, 0.1).unwrap()];
        let (mt, degenerate) = m_tilde(&w, &state, Activation::tanh(1.0).unwrap()).unwrap();
        assert_eq!(degenerate, vec![0]);
        assert_eq!(mt.row(0), &[0.0, 0.0]);
    }

    #[test]
    fn m_matrix_row_sums() {
        let w = Matrix::from_fn(3, |i, j| Ggn::crisp(0.2 + 0.1 * (i + j) as f64).unwrap());
        let state = [
            Ggn::new(0.4, 0.02).unwrap(),
            Ggn::new(-0.3, 0.01).unwrap(),
            Ggn::new(0.7, 0.03).unwrap(),
        ];
        let tanh = Activation::tanh(1.0).unwrap();
        let m = m_matrix(&w, &state, &[0.0; 3], tanh).unwrap();
        for row in m.rows() {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert!(has_unit_eigenvalue(&m, 1e-8));

        let sig = Activation::sigmoid(1.0).unwrap();
        let next = [0.3, 0.6, 0.9];
        let ms = m_matrix(&w, &state, &next, sig).unwrap();
        for (row, nk) in ms.rows().zip(&next) {
            let sum: f64 = row.iter().sum();
            assert!((sum - nk).abs() < 1e-12);
        }

        let single = Matrix::from_rows(vec![vec![Ggn::crisp(0.8).unwrap()]]).unwrap();
        let m1 = m_matrix(&single, &[Ggn::crisp(0.5).unwrap()], &[0.0], tanh).unwrap();
        assert_eq!(*m1.get(0, 0), 1.0);
    }

    #[test]
    fn residual_of_constant_vector_is_zero() {
        let w = Matrix::from_fn(3, |i, j| Ggn::crisp(0.2 + 0.1 * (i + j) as f64).unwrap());
        let state = [
            Ggn::new(0.4, 0.02).unwrap(),
            Ggn::new(-0.3, 0.01).unwrap(),
            Ggn::new(0.7, 0.03).unwrap(),
        ];
        let m = m_matrix(&w, &state, &[0.0; 3], Activation::tanh(1.0).unwrap()).unwrap();
        assert!(tanh_grey_fixed_point_residual(&m, &[0.0; 3]).unwrap() < 1e-15);
        let r = tanh_grey_fixed_point_residual(&m, &[0.01; 3]).unwrap();
        assert!(r < 1e-15, "row-stochastic M fixes constant vectors, r={r}");
        assert!(tanh_grey_fixed_point_residual(&m, &[0.0; 2]).is_err());
    }
}
