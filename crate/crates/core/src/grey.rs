//! General grey numbers, interval grey numbers and their metrics.
//!
//! A general grey number is summarised by a *kernel* (its most representative
//! crisp value) and a *greyness* (a non-negative degree of uncertainty,
//! normalised against a background domain). Interval grey numbers are plain
//! closed intervals; a single interval is the degenerate case of a general
//! grey number.
//!
//! The set of general grey numbers is not a linear space: `g + (-g)` keeps
//! the greyness of `g`, so additive inverses only exist for crisp values.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used by [`Ggn::approx_eq`].
pub const EQ_TOL: f64 = 1e-9;

/// Background domain Ω against which greyness is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreyDomain {
    lower: f64,
    upper: f64,
}

impl GreyDomain {
    /// The symmetric domain [-1, 1] used for weights and tanh-activated states.
    pub const SYMMETRIC: GreyDomain = GreyDomain {
        lower: -1.0,
        upper: 1.0,
    };

    /// The unit domain [0, 1] used for sigmoid-activated states.
    pub const UNIT: GreyDomain = GreyDomain {
        lower: 0.0,
        upper: 1.0,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || upper - lower <= 0.0 {
            return Err(Error::InvalidDomain { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Lebesgue measure μ(Ω) of the domain.
    pub fn measure(&self) -> f64 {
        self.upper - self.lower
    }

    fn contains(&self, iv: &Ign) -> bool {
        iv.lower >= self.lower && iv.upper <= self.upper
    }
}

/// Interval grey number `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ign {
    lower: f64,
    upper: f64,
}

impl Ign {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower > upper {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn spans_zero(&self) -> bool {
        self.lower < 0.0 && 0.0 < self.upper
    }

    /// Kernel/greyness summary of this single interval over `domain`.
    pub fn to_ggn(&self, domain: GreyDomain) -> Result<Ggn> {
        Ggn::from_intervals(&[*self], None, domain)
    }
}

impl Add for Ign {
    type Output = Ign;

    fn add(self, rhs: Ign) -> Ign {
        Ign {
            lower: self.lower + rhs.lower,
            upper: self.upper + rhs.upper,
        }
    }
}

impl Mul for Ign {
    type Output = Ign;

    /// Extremes over the four boundary products.
    fn mul(self, rhs: Ign) -> Ign {
        let p = [
            self.lower * rhs.lower,
            self.lower * rhs.upper,
            self.upper * rhs.lower,
            self.upper * rhs.upper,
        ];
        let mut lo = p[0];
        let mut hi = p[0];
        for &v in &p[1..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ign {
            lower: lo,
            upper: hi,
        }
    }
}

/// General grey number in simplified kernel/greyness form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ggn {
    kernel: f64,
    greyness: f64,
}

impl Ggn {
    pub const ZERO: Ggn = Ggn {
        kernel: 0.0,
        greyness: 0.0,
    };

    pub fn new(kernel: f64, greyness: f64) -> Result<Self> {
        if !kernel.is_finite() || !greyness.is_finite() || greyness < 0.0 {
            return Err(Error::InvalidGgn { kernel, greyness });
        }
        Ok(Self { kernel, greyness })
    }

    /// Crisp value: zero greyness.
    pub fn crisp(kernel: f64) -> Result<Self> {
        Self::new(kernel, 0.0)
    }

    pub fn kernel(&self) -> f64 {
        self.kernel
    }

    pub fn greyness(&self) -> f64 {
        self.greyness
    }

    pub fn is_crisp(&self) -> bool {
        self.greyness == 0.0
    }

    /// Component-wise equality within [`EQ_TOL`].
    pub fn approx_eq(&self, other: &Ggn) -> bool {
        (self.kernel - other.kernel).abs() <= EQ_TOL
            && (self.greyness - other.greyness).abs() <= EQ_TOL
    }

    /// Summarise a union of intervals as a kernel/greyness pair.
    ///
    /// The kernel is the mean of the interval midpoints, or their
    /// probability-weighted mean when `probs` is given. The greyness is
    /// `(1/|kernel|) Σ |mid_i| width_i / μ(Ω)`; when the kernel is zero that
    /// expression is undefined and the unweighted fallback
    /// `Σ width_i / μ(Ω)` is used instead. Greyness is not clamped and may
    /// exceed 1 for small kernels.
    pub fn from_intervals(
        intervals: &[Ign],
        probs: Option<&[f64]>,
        domain: GreyDomain,
    ) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptyIntervals);
        }
        for iv in intervals {
            if !domain.contains(iv) {
                return Err(Error::IntervalOutsideDomain {
                    lower: iv.lower,
                    upper: iv.upper,
                    dom_lower: domain.lower,
                    dom_upper: domain.upper,
                });
            }
        }
        let kernel = match probs {
            None => intervals.iter().map(Ign::midpoint).sum::<f64>() / intervals.len() as f64,
            Some(p) => {
                if p.len() != intervals.len()
                    || p.iter().any(|&x| x <= 0.0 || !x.is_finite())
                    || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9
                {
                    return Err(Error::BadProbabilities);
                }
                intervals
                    .iter()
                    .zip(p)
                    .map(|(iv, &pi)| pi * iv.midpoint())
                    .sum()
            }
        };
        let mu = domain.measure();
        let greyness = if kernel.abs() == 0.0 {
            intervals.iter().map(Ign::width).sum::<f64>() / mu
        } else {
            intervals
                .iter()
                .map(|iv| iv.midpoint().abs() * iv.width())
                .sum::<f64>()
                / mu
                / kernel.abs()
        };
        Ggn::new(kernel, greyness)
    }

    /// Scalar multiplication: scales the kernel, preserves the greyness.
    pub fn scale(&self, k: f64) -> Ggn {
        Ggn {
            kernel: k * self.kernel,
            greyness: self.greyness,
        }
    }

    pub fn div(&self, rhs: Ggn) -> Result<Ggn> {
        if rhs.kernel == 0.0 {
            return Err(Error::ZeroKernel);
        }
        Ok(Ggn {
            kernel: self.kernel / rhs.kernel,
            greyness: self.greyness.max(rhs.greyness),
        })
    }

    pub fn inv(&self) -> Result<Ggn> {
        if self.kernel == 0.0 {
            return Err(Error::ZeroKernel);
        }
        Ok(Ggn {
            kernel: 1.0 / self.kernel,
            greyness: self.greyness,
        })
    }

    /// Raises the kernel to the power `k`, preserving the greyness.
    pub fn powf(&self, k: f64) -> Result<Ggn> {
        let kernel = self.kernel.powf(k);
        if !kernel.is_finite() {
            return Err(Error::NonFiniteResult);
        }
        Ok(Ggn {
            kernel,
            greyness: self.greyness,
        })
    }

    /// Greyness weights for addition/subtraction: proportional to the kernel
    /// magnitudes, with the symmetric ½/½ limit when both kernels are zero.
    fn add_weights(a: f64, b: f64) -> (f64, f64) {
        let den = a.abs() + b.abs();
        if den == 0.0 {
            (0.5, 0.5)
        } else {
            (a.abs() / den, b.abs() / den)
        }
    }
}

impl Add for Ggn {
    type Output = Ggn;

    fn add(self, rhs: Ggn) -> Ggn {
        let (w1, w2) = Ggn::add_weights(self.kernel, rhs.kernel);
        Ggn {
            kernel: self.kernel + rhs.kernel,
            greyness: w1 * self.greyness + w2 * rhs.greyness,
        }
    }
}

impl Sub for Ggn {
    type Output = Ggn;

    fn sub(self, rhs: Ggn) -> Ggn {
        let (w1, w2) = Ggn::add_weights(self.kernel, rhs.kernel);
        Ggn {
            kernel: self.kernel - rhs.kernel,
            greyness: w1 * self.greyness + w2 * rhs.greyness,
        }
    }
}

impl Mul for Ggn {
    type Output = Ggn;

    fn mul(self, rhs: Ggn) -> Ggn {
        Ggn {
            kernel: self.kernel * rhs.kernel,
            greyness: self.greyness.max(rhs.greyness),
        }
    }
}

impl Neg for Ggn {
    type Output = Ggn;

    fn neg(self) -> Ggn {
        self.scale(-1.0)
    }
}

/// Metric on single grey numbers: Euclidean distance over (kernel, greyness).
pub fn metric_d2(a: &Ggn, b: &Ggn) -> f64 {
    let dk = a.kernel - b.kernel;
    let dg = a.greyness - b.greyness;
    (dk * dk + dg * dg).sqrt()
}

/// Metric on grey vectors: root of summed squared component distances.
pub fn metric_d(x: &[Ggn], y: &[Ggn]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let sum: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let dk = a.kernel - b.kernel;
            let dg = a.greyness - b.greyness;
            dk * dk + dg * dg
        })
        .sum();
    Ok(sum.sqrt())
}
