//! Suite configuration: a TOML file plus command-line overrides.

use serde::{Deserialize, Serialize};
use sigma_forge_core::geom::TrigTerm;
use sigma_forge_core::{Backend, Field, Mode, PolyField, SphereField, TrigField};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Algebra,
    Identities,
    Soliton,
    Variation,
    Spectrum,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Algebra => "algebra",
            SuiteName::Identities => "identities",
            SuiteName::Soliton => "soliton",
            SuiteName::Variation => "variation",
            SuiteName::Spectrum => "spectrum",
            SuiteName::All => "all",
        }
    }

    /// The concrete suites this name runs, in report order.
    pub fn expand(self) -> Vec<SuiteName> {
        match self {
            SuiteName::All => vec![
                SuiteName::Algebra,
                SuiteName::Identities,
                SuiteName::Soliton,
                SuiteName::Variation,
                SuiteName::Spectrum,
            ],
            s => vec![s],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    Euclidean,
    Torus,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Shrinking,
    Steady,
    Expanding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    /// φ = |x|²/4τ on ℝⁿ
    Gaussian,
    /// constant φ on the round Sⁿ with τ = 1/2(n−1)
    Sphere,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigLiteral {
    pub freq: Vec<i32>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// A potential given term by term. Polynomial terms are read in the
/// ambient ℝ^{n+1} coordinates on the sphere.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldLiteral {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poly: Vec<PolyTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trig: Vec<TrigLiteral>,
}

impl FieldLiteral {
    pub fn to_field(&self, backend: BackendName, n: usize) -> Result<Field, CliError> {
        let poly_terms = || self.poly.iter().map(|t| (t.exponents.clone(), t.coeff));
        let field = match backend {
            BackendName::Torus => {
                if !self.poly.is_empty() {
                    return Err(CliError::Config("torus potentials take trig terms only".into()));
                }
                let terms = self
                    .trig
                    .iter()
                    .map(|t| TrigTerm { freq: t.freq.clone(), cos: t.cos, sin: t.sin })
                    .collect();
                Field::Trig(TrigField::new(n, terms)?)
            }
            BackendName::Euclidean => {
                if !self.trig.is_empty() {
                    return Err(CliError::Config("euclidean potentials take poly terms only".into()));
                }
                Field::Poly(PolyField::from_terms(n, poly_terms())?)
            }
            BackendName::Sphere => {
                if !self.trig.is_empty() {
                    return Err(CliError::Config("sphere potentials take poly terms only".into()));
                }
                Field::Sphere(SphereField::new(PolyField::from_terms(n + 1, poly_terms())?))
            }
        };
        Ok(field)
    }
}

/// Everything a run needs. Unset values fall back to per-suite defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// largest k checked
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<FieldLiteral>,
    /// per-check tolerance overrides keyed by check id
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

macro_rules! take_if_set {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Values set in `over` replace those in `self`.
    pub fn overridden_by(mut self, over: &SuiteConfig) -> Self {
        take_if_set!(
            self, over, suite, backend, n, k, tau, mode, lambda, quad_order, grid, seed, samples, tol_scale, out,
            format, jobs, model, phi
        );
        for (k, v) in &over.tolerances {
            self.tolerances.insert(k.clone(), *v);
        }
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if let Some(t) = self.tau {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tau must be positive, got {t}"));
            }
        }
        if let Some(s) = self.tol_scale {
            if !(s > 0.0 && s.is_finite()) {
                return bad(format!("tol-scale must be positive, got {s}"));
            }
        }
        if self.n == Some(0) {
            return bad("n must be at least 1".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if let Some(l) = self.lambda {
            if !l.is_finite() {
                return bad("lambda must be finite".into());
            }
        }
        for (id, t) in &self.tolerances {
            if !(*t > 0.0 && t.is_finite()) {
                return bad(format!("tolerance for {id} must be positive"));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn mode(&self) -> Mode {
        match (self.lambda, self.mode.unwrap_or(ModeName::Shrinking)) {
            (Some(l), _) => Mode::Explicit(l),
            (None, ModeName::Shrinking) => Mode::Shrinking,
            (None, ModeName::Steady) => Mode::Steady,
            (None, ModeName::Expanding) => Mode::Expanding,
        }
    }

    pub fn backend(&self, default: BackendName, n: usize) -> (BackendName, Backend) {
        let name = self.backend.unwrap_or(default);
        let b = match name {
            BackendName::Euclidean => Backend::euclidean(n),
            BackendName::Torus => Backend::torus(n),
            BackendName::Sphere => Backend::sphere(n),
        };
        (name, b)
    }

    /// `base · tol_scale` unless the check id has an explicit override.
    pub fn tol(&self, check_id: &str, base: f64) -> f64 {
        match self.tolerances.get(check_id) {
            Some(t) => *t,
            None => base * self.tol_scale.unwrap_or(1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> SuiteConfig {
        SuiteConfig {
            suite: Some(SuiteName::Identities),
            backend: Some(BackendName::Torus),
            n: Some(2),
            k: Some(4),
            tau: Some(0.75),
            mode: Some(ModeName::Expanding),
            lambda: Some(-0.7),
            quad_order: Some(9),
            grid: Some(14),
            seed: Some(99),
            samples: Some(123),
            tol_scale: Some(2.5),
            out: Some("r.jsonl".into()),
            format: Some(Format::Csv),
            jobs: Some(3),
            model: Some(ModelName::Sphere),
            phi: Some(FieldLiteral {
                poly: vec![PolyTerm { exponents: vec![2, 0], coeff: 0.25 }],
                trig: vec![TrigLiteral { freq: vec![1, -1], cos: 0.3, sin: 0.1 }],
            }),
            tolerances: [("divergence_newton.k2".to_string(), 1e-7)].into_iter().collect(),
        }
    }

    #[test]
    fn toml_round_trip() {
        let c = full();
        assert_eq!(SuiteConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
        let empty = SuiteConfig::default();
        assert_eq!(SuiteConfig::from_toml(&empty.to_toml().unwrap()).unwrap(), empty);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(SuiteConfig::from_toml("sead = 3").is_err());
        assert!(SuiteConfig::from_toml("backend = \"hyperbolic\"").is_err());
    }

    #[test]
    fn flags_win() {
        let base = full();
        let over = SuiteConfig { n: Some(3), tolerances: [("x".to_string(), 1.0)].into(), ..Default::default() };
        let merged = base.clone().overridden_by(&over);
        assert_eq!(merged.n, Some(3));
        assert_eq!(merged.k, base.k);
        assert_eq!(merged.tolerances.len(), 2);
    }

    #[test]
    fn explicit_lambda_overrides_mode() {
        let c = SuiteConfig { mode: Some(ModeName::Steady), lambda: Some(0.3), ..Default::default() };
        assert_eq!(c.mode(), Mode::Explicit(0.3));
        assert_eq!(SuiteConfig::default().mode(), Mode::Shrinking);
    }

    #[test]
    fn tolerance_lookup() {
        let c = full();
        assert_eq!(c.tol("divergence_newton.k2", 1e-8), 1e-7);
        assert_eq!(c.tol("other", 1e-8), 2.5e-8);
    }

    #[test]
    fn field_literals_match_backend() {
        let lit = FieldLiteral { poly: vec![PolyTerm { exponents: vec![2, 0], coeff: 1.0 }], trig: vec![] };
        assert!(lit.to_field(BackendName::Euclidean, 2).is_ok());
        assert!(lit.to_field(BackendName::Torus, 2).is_err());
        let sphere = FieldLiteral { poly: vec![PolyTerm { exponents: vec![0, 0, 1], coeff: 1.0 }], trig: vec![] };
        assert!(matches!(sphere.to_field(BackendName::Sphere, 2).unwrap(), Field::Sphere(_)));
    }
}
