//! Model definition: grey weight/state entries, derived engine forms and
//! JSON file round-tripping.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::activation::{Activation, ActivationKind};
use crate::error::{Error, Result};
use crate::grey::{Ggn, GreyDomain, Ign};
use crate::matrix::Matrix;

pub const DEFAULT_MAX_STEPS: usize = 300;
pub const DEFAULT_FP_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_CYCLE_TOLERANCE: f64 = 1e-6;

/// One weight or state entry as written in a model file: a crisp number, a
/// single interval, a union of intervals (optionally with probabilities) or
/// an explicit kernel/greyness pair.
#[derive(Debug, Clone, PartialEq)]
pub enum GreyEntry {
    Crisp(f64),
    Interval(Ign),
    Union(Vec<Ign>),
    WeightedUnion(Vec<Ign>, Vec<f64>),
    Grey(Ggn),
}

impl GreyEntry {
    pub fn to_ggn(&self, domain: GreyDomain) -> Result<Ggn> {
        match self {
            GreyEntry::Crisp(x) => Ggn::crisp(*x),
            GreyEntry::Interval(iv) => iv.to_ggn(domain),
            GreyEntry::Union(ivs) => Ggn::from_intervals(ivs, None, domain),
            GreyEntry::WeightedUnion(ivs, ps) => Ggn::from_intervals(ivs, Some(ps), domain),
            GreyEntry::Grey(g) => Ok(*g),
        }
    }

    pub fn to_ign(&self) -> Option<Ign> {
        match self {
            GreyEntry::Crisp(x) => Ign::point(*x).ok(),
            GreyEntry::Interval(iv) => Some(*iv),
            _ => None,
        }
    }

    pub fn to_crisp(&self) -> Option<f64> {
        match self {
            GreyEntry::Crisp(x) => Some(*x),
            _ => None,
        }
    }
}

/// A cognitive-map model: activation, grey weights, initial state and run
/// limits. The canonical representation is the entry grammar; kernel/greyness,
/// interval and crisp forms are derived once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub activation: Activation,
    /// Domain for state-entry conversion (defaults by activation kind).
    pub grey_domain: GreyDomain,
    /// Domain for weight-entry conversion.
    pub weight_domain: GreyDomain,
    pub weight_entries: Matrix<GreyEntry>,
    pub initial_entries: Vec<GreyEntry>,
    /// Crisp baseline for plain-map runs when it differs from the grey
    /// kernels (e.g. a pre-greying weight matrix).
    pub crisp_weights_override: Option<Matrix<f64>>,
    pub crisp_initial_override: Option<Vec<f64>>,
    pub max_steps: usize,
    pub fp_tolerance: f64,
    pub cycle_tolerance: f64,
    /// λ values this model is normally swept over.
    pub lambda_sweep: Vec<f64>,

    ggn_weights: Matrix<Ggn>,
    ggn_initial: Vec<Ggn>,
    ign_weights: Option<Matrix<Ign>>,
    ign_initial: Option<Vec<Ign>>,
    crisp_weights: Option<Matrix<f64>>,
    crisp_initial: Option<Vec<f64>>,
}

/// Everything needed to build a [`Model`]; see [`Model::new`].
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub name: String,
    pub activation: Activation,
    pub grey_domain: Option<GreyDomain>,
    pub weight_domain: Option<GreyDomain>,
    pub weight_entries: Matrix<GreyEntry>,
    pub initial_entries: Vec<GreyEntry>,
    pub crisp_weights: Option<Matrix<f64>>,
    pub crisp_initial: Option<Vec<f64>>,
    pub max_steps: Option<usize>,
    pub fp_tolerance: Option<f64>,
    pub cycle_tolerance: Option<f64>,
    pub lambda_sweep: Vec<f64>,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let n = spec.weight_entries.side();
        if spec.initial_entries.len() != n {
            return Err(Error::InvalidModel(format!(
                "weights are {n}x{n} but the initial state has {} entries",
                spec.initial_entries.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidModel("model has no nodes".into()));
        }
        let grey_domain = spec.grey_domain.unwrap_or(match spec.activation.kind {
            ActivationKind::Sigmoid => GreyDomain::UNIT,
            ActivationKind::Tanh => GreyDomain::SYMMETRIC,
        });
        let weight_domain = spec.weight_domain.unwrap_or(GreyDomain::SYMMETRIC);
        let max_steps = spec.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
        if max_steps < 2 {
            return Err(Error::InvalidModel("max_steps must be at least 2".into()));
        }
        let fp_tolerance = spec.fp_tolerance.unwrap_or(DEFAULT_FP_TOLERANCE);
        let cycle_tolerance = spec.cycle_tolerance.unwrap_or(DEFAULT_CYCLE_TOLERANCE);
        if fp_tolerance <= 0.0 || fp_tolerance.is_nan() || cycle_tolerance <= 0.0 || cycle_tolerance.is_nan() {
            return Err(Error::InvalidModel("tolerances must be positive".into()));
        }
        for &l in &spec.lambda_sweep {
            if l <= 0.0 || !l.is_finite() {
                return Err(Error::InvalidLambda(l));
            }
        }
        if let Some(cw) = &spec.crisp_weights {
            if cw.side() != n {
                return Err(Error::InvalidModel(
                    "crisp weight matrix size differs from the grey weights".into(),
                ));
            }
        }
        if let Some(ci) = &spec.crisp_initial {
            if ci.len() != n {
                return Err(Error::InvalidModel(
                    "crisp initial state length differs from the grey state".into(),
                ));
            }
        }

        let mut ggn_w = Vec::with_capacity(n * n);
        for row in spec.weight_entries.rows() {
            for e in row {
                ggn_w.push(e.to_ggn(weight_domain)?);
            }
        }
        let ggn_weights = Matrix::from_fn(n, |i, j| ggn_w[i * n + j]);
        let ggn_initial = spec
            .initial_entries
            .iter()
            .map(|e| e.to_ggn(grey_domain))
            .collect::<Result<Vec<_>>>()?;

        let ign_w: Option<Vec<Ign>> = spec
            .weight_entries
            .rows()
            .flatten()
            .map(GreyEntry::to_ign)
            .collect();
        let ign_weights = ign_w.map(|v| Matrix::from_fn(n, |i, j| v[i * n + j]));
        let ign_initial: Option<Vec<Ign>> =
            spec.initial_entries.iter().map(GreyEntry::to_ign).collect();

        // Crisp baseline: explicit override, else derivable when every entry
        // is a plain number.
        let crisp_weights = spec.crisp_weights_or_derived();
        let crisp_initial = spec.crisp_initial_or_derived();

        Ok(Model {
            name: spec.name,
            activation: spec.activation,
            grey_domain,
            weight_domain,
            weight_entries: spec.weight_entries,
            initial_entries: spec.initial_entries,
            crisp_weights_override: spec.crisp_weights,
            crisp_initial_override: spec.crisp_initial,
            max_steps,
            fp_tolerance,
            cycle_tolerance,
            lambda_sweep: spec.lambda_sweep,
            ggn_weights,
            ggn_initial,
            ign_weights,
            ign_initial,
            crisp_weights,
            crisp_initial,
        })
    }

    pub fn node_count(&self) -> usize {
        self.weight_entries.side()
    }

    /// Kernel/greyness weight matrix (always available).
    pub fn ggn_weights(&self) -> &Matrix<Ggn> {
        &self.ggn_weights
    }

    pub fn ggn_initial(&self) -> &[Ggn] {
        &self.ggn_initial
    }

    /// Kernels of the grey weight matrix.
    pub fn kernel_weights(&self) -> Matrix<f64> {
        self.ggn_weights.map(|g| g.kernel())
    }

    /// Interval forms; absent when any entry is a multi-interval union or an
    /// explicit kernel/greyness pair.
    pub fn ign_weights(&self) -> Option<&Matrix<Ign>> {
        self.ign_weights.as_ref()
    }

    pub fn ign_initial(&self) -> Option<&[Ign]> {
        self.ign_initial.as_deref()
    }

    /// Crisp baseline; absent unless every entry is a plain number or an
    /// explicit override was provided.
    pub fn crisp_weights(&self) -> Option<&Matrix<f64>> {
        self.crisp_weights.as_ref()
    }

    pub fn crisp_initial(&self) -> Option<&[f64]> {
        self.crisp_initial.as_deref()
    }

    pub fn activation_at(&self, lambda: f64) -> Result<Activation> {
        self.activation.with_lambda(lambda)
    }
}

impl ModelSpec {
    pub fn new(
        name: impl Into<String>,
        activation: Activation,
        weight_entries: Matrix<GreyEntry>,
        initial_entries: Vec<GreyEntry>,
    ) -> Self {
        Self {
            name: name.into(),
            activation,
            grey_domain: None,
            weight_domain: None,
            weight_entries,
            initial_entries,
            crisp_weights: None,
            crisp_initial: None,
            max_steps: None,
            fp_tolerance: None,
            cycle_tolerance: None,
            lambda_sweep: Vec::new(),
        }
    }

    fn crisp_weights_or_derived(&self) -> Option<Matrix<f64>> {
        if self.crisp_weights.is_some() {
            return self.crisp_weights.clone();
        }
        let n = self.weight_entries.side();
        let vals: Option<Vec<f64>> = self
            .weight_entries
            .rows()
            .flatten()
            .map(GreyEntry::to_crisp)
            .collect();
        vals.map(|v| Matrix::from_fn(n, |i, j| v[i * n + j]))
    }

    fn crisp_initial_or_derived(&self) -> Option<Vec<f64>> {
        if self.crisp_initial.is_some() {
            return self.crisp_initial.clone();
        }
        self.initial_entries.iter().map(GreyEntry::to_crisp).collect()
    }
}

// ---------------------------------------------------------------------------
// JSON file form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryDto {
    Number(f64),
    Pair([f64; 2]),
    Multi(Vec<[f64; 2]>),
    KernelGrey { kernel: f64, greyness: f64 },
    Weighted { intervals: Vec<[f64; 2]>, probs: Vec<f64> },
}

impl EntryDto {
    fn from_entry(e: &GreyEntry) -> EntryDto {
        match e {
            GreyEntry::Crisp(x) => EntryDto::Number(*x),
            GreyEntry::Interval(iv) => EntryDto::Pair([iv.lower(), iv.upper()]),
            GreyEntry::Union(ivs) => {
                EntryDto::Multi(ivs.iter().map(|iv| [iv.lower(), iv.upper()]).collect())
            }
            GreyEntry::WeightedUnion(ivs, ps) => EntryDto::Weighted {
                intervals: ivs.iter().map(|iv| [iv.lower(), iv.upper()]).collect(),
                probs: ps.clone(),
            },
            GreyEntry::Grey(g) => EntryDto::KernelGrey {
                kernel: g.kernel(),
                greyness: g.greyness(),
            },
        }
    }

    fn into_entry(self) -> Result<GreyEntry> {
        Ok(match self {
            EntryDto::Number(x) => GreyEntry::Crisp(x),
            EntryDto::Pair([l, u]) => GreyEntry::Interval(Ign::new(l, u)?),
            EntryDto::Multi(ivs) => GreyEntry::Union(
                ivs.into_iter()
                    .map(|[l, u]| Ign::new(l, u))
                    .collect::<Result<_>>()?,
            ),
            EntryDto::KernelGrey { kernel, greyness } => {
                GreyEntry::Grey(Ggn::new(kernel, greyness)?)
            }
            EntryDto::Weighted { intervals, probs } => GreyEntry::WeightedUnion(
                intervals
                    .into_iter()
                    .map(|[l, u]| Ign::new(l, u))
                    .collect::<Result<_>>()?,
                probs,
            ),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct DomainDto {
    lower: f64,
    upper: f64,
}

#[derive(Serialize, Deserialize)]
struct ActivationDto {
    kind: ActivationKind,
    lambda_default: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelDto {
    name: String,
    activation: ActivationDto,
    grey_domain: DomainDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight_domain: Option<DomainDto>,
    weights: Vec<Vec<EntryDto>>,
    initial_state: Vec<EntryDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crisp_weights: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crisp_initial_state: Option<Vec<f64>>,
    max_steps: usize,
    fp_tolerance: f64,
    cycle_tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lambda_sweep: Vec<f64>,
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let dto = ModelDto {
        name: model.name.clone(),
        activation: ActivationDto {
            kind: model.activation.kind,
            lambda_default: model.activation.lambda(),
        },
        grey_domain: DomainDto {
            lower: model.grey_domain.lower(),
            upper: model.grey_domain.upper(),
        },
        weight_domain: Some(DomainDto {
            lower: model.weight_domain.lower(),
            upper: model.weight_domain.upper(),
        }),
        weights: model
            .weight_entries
            .rows()
            .map(|r| r.iter().map(EntryDto::from_entry).collect())
            .collect(),
        initial_state: model.initial_entries.iter().map(EntryDto::from_entry).collect(),
        crisp_weights: model
            .crisp_weights_override
            .as_ref()
            .map(|m| m.rows().map(|r| r.to_vec()).collect()),
        crisp_initial_state: model.crisp_initial_override.clone(),
        max_steps: model.max_steps,
        fp_tolerance: model.fp_tolerance,
        cycle_tolerance: model.cycle_tolerance,
        lambda_sweep: model.lambda_sweep.clone(),
    };
    let text = serde_json::to_string_pretty(&dto)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let text = std::fs::read_to_string(&path)?;
    let dto: ModelDto = serde_json::from_str(&text)
        .map_err(|e| Error::ModelFile(format!("{}: {e}", path.as_ref().display())))?;
    model_from_dto(dto)
}

fn model_from_dto(dto: ModelDto) -> Result<Model> {
    let n = dto.weights.len();
    let mut rows = Vec::with_capacity(n);
    for (i, row) in dto.weights.into_iter().enumerate() {
        if row.len() != n {
            return Err(Error::ModelFile(format!(
                "weight row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        rows.push(
            row.into_iter()
                .map(EntryDto::into_entry)
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let weight_entries = Matrix::from_rows(rows)?;
    let initial_entries = dto
        .initial_state
        .into_iter()
        .map(EntryDto::into_entry)
        .collect::<Result<Vec<_>>>()?;
    let crisp_weights = dto
        .crisp_weights
        .map(Matrix::from_rows)
        .transpose()?;
    let spec = ModelSpec {
        name: dto.name,
        activation: Activation::new(dto.activation.kind, dto.activation.lambda_default)?,
        grey_domain: Some(GreyDomain::new(dto.grey_domain.lower, dto.grey_domain.upper)?),
        weight_domain: dto
            .weight_domain
            .map(|d| GreyDomain::new(d.lower, d.upper))
            .transpose()?,
        weight_entries,
        initial_entries,
        crisp_weights,
        crisp_initial: dto.crisp_initial_state,
        max_steps: Some(dto.max_steps),
        fp_tolerance: Some(dto.fp_tolerance),
        cycle_tolerance: Some(dto.cycle_tolerance),
        lambda_sweep: dto.lambda_sweep,
    };
    Model::new(spec)
}
