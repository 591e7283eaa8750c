//! Built-in scenario models, greyness injection and engine support hints.

use crate::activation::Activation;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::grey::{GreyDomain, Ign};
use crate::matrix::Matrix;
use crate::model::{GreyEntry, Model, ModelSpec};

/// Web-experience map: seven sigmoid-activated concepts, dense weights.
const WEB_WEIGHTS: [[f64; 7]; 7] = [
    [0.0, -0.9, -0.88, 1.0, -0.85, -0.83, 1.0],
    [1.0, 0.0, -0.93, -0.89, -0.9, -0.94, 1.0],
    [-0.98, -0.93, -1.0, -1.0, 1.0, 1.0, 1.0],
    [-0.99, -0.89, -1.0, -0.39, 0.73, 0.58, 0.7],
    [1.0, 1.0, 1.0, 1.0, -0.8, 0.51, 1.0],
    [1.0, 1.0, 0.83, 1.0, 0.51, -0.39, 1.0],
    [1.0, 1.0, 1.0, 1.0, -0.71, -0.49, -0.67],
];

const WEB_INITIAL: [f64; 7] = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0];

/// Public-health map: seven tanh-activated concepts, sparse weights, in the
/// row-times-state orientation the engines use.
const CIVIL_WEIGHTS: [[f64; 7]; 7] = [
    [0.0, 0.0, 0.6, 0.9, 0.0, 0.0, 0.0],
    [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.7, 0.0, 0.0, 0.9, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.9],
    [0.0, 0.0, 0.0, 0.0, 0.0, -0.9, -0.9],
    [-0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.8, 0.0],
];

const CIVIL_INITIAL: [f64; 7] = [0.8, 0.5, 0.3, 0.0, 0.0, 0.0, 0.0];

/// Injection level used by all built-in grey variants.
pub const BUILTIN_GREYNESS: f64 = 0.01;

pub const WEB_LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const CIVIL_LAMBDAS: [f64; 4] = [0.2, 0.4, 1.5, 2.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    Web,
    WebCase1,
    WebCase2,
    Civil,
    CivilCase1,
    CivilCase2,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 6] = [
        ScenarioId::Web,
        ScenarioId::WebCase1,
        ScenarioId::WebCase2,
        ScenarioId::Civil,
        ScenarioId::CivilCase1,
        ScenarioId::CivilCase2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioId::Web => "web",
            ScenarioId::WebCase1 => "web-case1",
            ScenarioId::WebCase2 => "web-case2",
            ScenarioId::Civil => "civil",
            ScenarioId::CivilCase1 => "civil-case1",
            ScenarioId::CivilCase2 => "civil-case2",
        }
    }

    /// Engines this scenario is meant to run: the base maps support all
    /// three, the case-1 variants lose the crisp baseline (a weight becomes
    /// a zero-spanning interval) and the case-2 variants keep only the grey
    /// engine (multi-interval weights have no single-interval form).
    pub fn engines(&self) -> &'static [Engine] {
        match self {
            ScenarioId::Web | ScenarioId::Civil => &Engine::ALL,
            ScenarioId::WebCase1 | ScenarioId::CivilCase1 => &[Engine::Fgcm, Engine::Fggcm],
            ScenarioId::WebCase2 | ScenarioId::CivilCase2 => &[Engine::Fggcm],
        }
    }

    pub fn lambdas(&self) -> &'static [f64] {
        match self {
            ScenarioId::Web | ScenarioId::WebCase1 | ScenarioId::WebCase2 => &WEB_LAMBDAS,
            _ => &CIVIL_LAMBDAS,
        }
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Widen every crisp weight into `[w−g, w+g]`, clamped to the domain bounds.
/// Entries with `|w| < g` are kept as degenerate `[w, w]` so every produced
/// interval stays sign-definite.
pub fn inject_greyness(
    weights: &Matrix<f64>,
    g: f64,
    domain: GreyDomain,
) -> Result<Matrix<Ign>> {
    if g <= 0.0 || !g.is_finite() {
        return Err(Error::InvalidModel(format!(
            "injection greyness must be positive (got {g})"
        )));
    }
    let n = weights.side();
    let mut rows = Vec::with_capacity(n);
    for row in weights.rows() {
        let mut out = Vec::with_capacity(n);
        for &w in row {
            let iv = if w.abs() < g {
                Ign::point(w)?
            } else {
                Ign::new(
                    (w - g).max(domain.lower()),
                    (w + g).min(domain.upper()),
                )?
            };
            out.push(iv);
        }
        rows.push(out);
    }
    Matrix::from_rows(rows)
}

fn interval_entries(m: &Matrix<Ign>) -> Matrix<GreyEntry> {
    m.map(|iv| GreyEntry::Interval(*iv))
}

fn union(ivs: &[(f64, f64)]) -> GreyEntry {
    GreyEntry::Union(
        ivs.iter()
            .map(|&(l, u)| Ign::new(l, u).expect("scenario interval"))
            .collect(),
    )
}

fn interval(l: f64, u: f64) -> GreyEntry {
    GreyEntry::Interval(Ign::new(l, u).expect("scenario interval"))
}

struct Base {
    name: &'static str,
    activation: Activation,
    crisp: Matrix<f64>,
    crisp_initial: Vec<f64>,
    initial_entries: Vec<GreyEntry>,
    lambdas: Vec<f64>,
}

fn web_base() -> Base {
    let mut initial: Vec<GreyEntry> = (0..6).map(|_| interval(0.99, 1.00)).collect();
    initial.push(interval(0.0, 0.0));
    Base {
        name: "web",
        activation: Activation::sigmoid(1.0).expect("positive lambda"),
        crisp: Matrix::from_rows(WEB_WEIGHTS.iter().map(|r| r.to_vec()).collect())
            .expect("square"),
        crisp_initial: WEB_INITIAL.to_vec(),
        initial_entries: initial,
        lambdas: WEB_LAMBDAS.to_vec(),
    }
}

fn civil_base() -> Base {
    let initial = vec![
        interval(0.79, 0.81),
        interval(0.49, 0.51),
        interval(0.29, 0.31),
        interval(0.0, 0.0),
        interval(0.0, 0.0),
        interval(0.0, 0.0),
        interval(0.0, 0.0),
    ];
    Base {
        name: "civil",
        activation: Activation::tanh(1.0).expect("positive lambda"),
        crisp: Matrix::from_rows(CIVIL_WEIGHTS.iter().map(|r| r.to_vec()).collect())
            .expect("square"),
        crisp_initial: CIVIL_INITIAL.to_vec(),
        initial_entries: initial,
        lambdas: CIVIL_LAMBDAS.to_vec(),
    }
}

/// Construct one of the built-in models.
pub fn builtin(id: ScenarioId) -> Model {
    let base = match id {
        ScenarioId::Web | ScenarioId::WebCase1 | ScenarioId::WebCase2 => web_base(),
        _ => civil_base(),
    };
    let injected = inject_greyness(&base.crisp, BUILTIN_GREYNESS, GreyDomain::SYMMETRIC)
        .expect("builtin injection");
    let mut entries = interval_entries(&injected);
    let mut name = base.name.to_string();
    let mut crisp_forms = true;

    match id {
        ScenarioId::Web | ScenarioId::Civil => {}
        ScenarioId::WebCase1 | ScenarioId::CivilCase1 => {
            name.push_str("-case1");
            *entries.get_mut(0, 0) = interval(-0.1, 0.1);
            crisp_forms = false;
        }
        ScenarioId::WebCase2 => {
            name.push_str("-case2");
            *entries.get_mut(0, 0) = union(&[(-0.9, -0.75), (0.4, 0.9)]);
            *entries.get_mut(0, 1) = union(&[(-0.95, -0.89), (-0.83, -0.83), (-0.8, -0.75)]);
            *entries.get_mut(2, 2) = union(&[(-1.0, -0.95), (-0.94, -0.90), (-0.89, 0.88)]);
            *entries.get_mut(0, 4) = union(&[(0.99, 1.0), (0.95, 0.98), (-0.90, 0.93)]);
            crisp_forms = false;
        }
        ScenarioId::CivilCase2 => {
            name.push_str("-case2");
            *entries.get_mut(0, 0) = interval(-0.1, 0.1);
            *entries.get_mut(1, 0) = union(&[(0.07, 0.08), (0.09, 0.11), (0.13, 0.15)]);
            *entries.get_mut(2, 1) =
                union(&[(0.65, 0.68), (0.685, 0.715), (0.72, 0.72), (0.725, 0.73)]);
            *entries.get_mut(4, 5) = union(&[(-0.97, -0.93), (-0.92, -0.88), (-0.85, -0.8)]);
            crisp_forms = false;
        }
    }

    let mut spec = ModelSpec::new(name, base.activation, entries, base.initial_entries);
    spec.weight_domain = Some(GreyDomain::SYMMETRIC);
    spec.lambda_sweep = base.lambdas;
    if crisp_forms {
        spec.crisp_weights = Some(base.crisp);
        spec.crisp_initial = Some(base.crisp_initial);
    }
    Model::new(spec).expect("builtin models are valid")
}

/// Engines a model can actually run, derived from its available forms.
pub fn supported_engines(model: &Model) -> Vec<Engine> {
    let mut v = Vec::new();
    if model.crisp_weights().is_some() && model.crisp_initial().is_some() {
        v.push(Engine::Fcm);
    }
    if model.ign_weights().is_some() && model.ign_initial().is_some() {
        v.push(Engine::Fgcm);
    }
    v.push(Engine::Fggcm);
    v
}
