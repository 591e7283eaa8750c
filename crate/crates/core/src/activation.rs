//! Sigmoid and tanh activations on reals, intervals and grey numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grey::{Ggn, Ign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationKind {
    Sigmoid,
    Tanh,
}

impl std::fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActivationKind::Sigmoid => write!(f, "sigmoid"),
            ActivationKind::Tanh => write!(f, "tanh"),
        }
    }
}

/// An activation function with its slope parameter λ.
///
/// λ is carried per instance rather than globally so that several λ values
/// can be evaluated concurrently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activation {
    pub kind: ActivationKind,
    lambda: f64,
}

impl Activation {
    pub fn new(kind: ActivationKind, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(Self { kind, lambda })
    }

    pub fn sigmoid(lambda: f64) -> Result<Self> {
        Self::new(ActivationKind::Sigmoid, lambda)
    }

    pub fn tanh(lambda: f64) -> Result<Self> {
        Self::new(ActivationKind::Tanh, lambda)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.kind, lambda)
    }

    /// Kernel convergence threshold: ‖Ŵ‖_F below this guarantees a unique
    /// kernel fixed point (4/λ for sigmoid, 1/λ for tanh).
    pub fn kernel_threshold(&self) -> f64 {
        match self.kind {
            ActivationKind::Sigmoid => 4.0 / self.lambda,
            ActivationKind::Tanh => 1.0 / self.lambda,
        }
    }

    /// Apply to a real. Sigmoid uses the sign-split form so large |λx|
    /// saturates instead of overflowing.
    pub fn real(&self, x: f64) -> f64 {
        let z = self.lambda * x;
        match self.kind {
            ActivationKind::Sigmoid => {
                if z >= 0.0 {
                    1.0 / (1.0 + (-z).exp())
                } else {
                    let e = z.exp();
                    e / (1.0 + e)
                }
            }
            ActivationKind::Tanh => z.tanh(),
        }
    }

    /// Apply to a grey number. The kernel maps through the real activation;
    /// sigmoid scales the greyness by the output kernel, tanh preserves it.
    pub fn ggn(&self, g: Ggn) -> Ggn {
        let kernel = self.real(g.kernel());
        let greyness = match self.kind {
            ActivationKind::Sigmoid => kernel * g.greyness(),
            ActivationKind::Tanh => g.greyness(),
        };
        Ggn::new(kernel, greyness).expect("activation output is finite")
    }

    /// Apply to an interval endpoint-wise; exact because both activations
    /// are strictly increasing.
    pub fn interval(&self, iv: Ign) -> Ign {
        Ign::new(self.real(iv.lower()), self.real(iv.upper()))
            .expect("monotone map preserves ordering")
    }
}
