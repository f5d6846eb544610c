//! The 𝒲_k and Ŵ_k functionals on a measure-with-scale (φ, τ), their
//! variations in the (φ, τ) directions and the integral and pointwise
//! identities they satisfy.

mod hat;
mod identities;
mod soliton;
mod spectrum;
mod variation;

pub use hat::{hat_gradient, hat_sigma, hat_w_coeffs, hat_w_eval, HatWCoeffs};
pub use identities::{
    bianchi_residual, d_operator, d_operator_sa, divergence_residuals, dsigma_identity_residual,
    selfadjoint_residual,
};
pub use soliton::{
    critical_point_residual, obata_identity_residual, soliton_residual, soliton_suite, CriticalReport,
    ObataReport, SolitonReport,
};
pub use spectrum::spectral_gap;
pub use variation::{gaussian_second_variation, path_config, second_variation, Functional};

use crate::error::{Error, Result};
use crate::geom::backend::curvature_from_jet;
use crate::geom::{pairwise_sum, quadrature, Backend, Field, Jet, QuadSpec, QuadratureRule};
use crate::tensor::{sigmas_pt, PointCurvature};
use rayon::prelude::*;
use std::f64::consts::PI;

/// How λ is tied to τ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// λ = 1/2τ
    Shrinking,
    /// λ = 0
    Steady,
    /// λ = −1/2τ
    Expanding,
    Explicit(f64),
}

impl Mode {
    pub fn lambda(&self, tau: f64) -> f64 {
        match *self {
            Mode::Shrinking => 0.5 / tau,
            Mode::Steady => 0.0,
            Mode::Expanding => -0.5 / tau,
            Mode::Explicit(l) => l,
        }
    }
}

/// Backend, density potential φ, scale τ, λ-mode and quadrature order.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityConfig {
    pub backend: Backend,
    pub phi: Field,
    pub tau: f64,
    pub mode: Mode,
    pub quad: QuadSpec,
}

impl DensityConfig {
    pub fn new(backend: Backend, phi: Field, tau: f64, mode: Mode, quad: QuadSpec) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidTau(tau));
        }
        backend.check_field(&phi)?;
        Ok(Self { backend, phi, tau, mode, quad })
    }

    pub fn lambda(&self) -> f64 {
        self.mode.lambda(self.tau)
    }

    pub fn n(&self) -> usize {
        self.backend.n
    }

    pub fn with_phi(&self, phi: Field) -> Result<Self> {
        Self::new(self.backend, phi, self.tau, self.mode, self.quad)
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.backend, self.phi.clone(), tau, self.mode, self.quad)
    }

    pub fn with_backend(&self, backend: Backend) -> Result<Self> {
        Self::new(backend, self.phi.clone(), self.tau, self.mode, self.quad)
    }

    pub fn rule(&self) -> Result<QuadratureRule> {
        quadrature(&self.backend, &self.phi, &self.quad)
    }

    /// `(4πτ)^{-n/2}`
    pub fn prefactor(&self) -> f64 {
        (4.0 * PI * self.tau).powf(-(self.n() as f64) / 2.0)
    }
}

/// Direction of a path (φ + tψ, τ + tα).
#[derive(Clone, Debug, PartialEq)]
pub struct VariationPath {
    pub psi: Field,
    pub alpha: f64,
    /// keep every point of the path volume-normalized
    pub renormalize: bool,
}

/// A residual with the size it should be compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.value / self.scale
    }

    pub fn within(&self, tol: f64) -> bool {
        self.value <= tol * self.scale
    }

    pub(crate) fn sup(items: impl IntoIterator<Item = Residual>) -> Residual {
        items.into_iter().fold(Residual { value: 0.0, scale: 1.0 }, |a, b| Residual {
            value: a.value.max(b.value),
            scale: a.scale.max(b.scale),
        })
    }
}

/// Node-wise measure realizing `(4πτ)^{-n/2} e^{-φ} dvol`.
pub(crate) fn measure(cfg: &DensityConfig, rule: &QuadratureRule) -> Vec<f64> {
    let pre = cfg.prefactor();
    rule.weighted_measure(&cfg.phi).into_iter().map(|w| w * pre).collect()
}

pub(crate) fn integrate(mu: &[f64], values: &[f64]) -> f64 {
    let terms: Vec<f64> = mu.iter().zip(values).map(|(a, b)| a * b).collect();
    pairwise_sum(&terms)
}

/// Evaluates `f` at every node with the jet of φ and the curvature data for
/// parameter `lambda`. Runs in parallel; output order follows the rule.
pub(crate) fn map_nodes<T: Send>(
    cfg: &DensityConfig,
    rule: &QuadratureRule,
    lambda: f64,
    f: impl Fn(usize, &[f64], &Jet, &PointCurvature) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let flat = cfg.backend.is_flat();
    (0..rule.len())
        .into_par_iter()
        .map(|i| {
            let p = rule.point(i);
            let jet = cfg.backend.frame_jet(&cfg.phi, p, flat)?;
            let pc = curvature_from_jet(&cfg.backend, &jet, lambda);
            f(i, p, &jet, &pc)
        })
        .collect()
}

/// σ̃_k at every quadrature node.
pub fn sigma_field(k: usize, cfg: &DensityConfig) -> Result<Vec<f64>> {
    let rule = cfg.rule()?;
    map_nodes(cfg, &rule, cfg.lambda(), |_, _, _, pc| Ok(sigmas_pt(k, pc)[k]))
}

/// `∫ (4πτ)^{-n/2} e^{-φ} dvol`
pub fn weighted_volume(cfg: &DensityConfig) -> Result<f64> {
    let rule = cfg.rule()?;
    Ok(pairwise_sum(&measure(cfg, &rule)))
}

/// 𝒲₀ … 𝒲_kmax in one pass (𝒲₀ is the weighted volume).
pub fn w_eval_all(kmax: usize, cfg: &DensityConfig) -> Result<Vec<f64>> {
    let rule = cfg.rule()?;
    let mu = measure(cfg, &rule);
    let sig = map_nodes(cfg, &rule, cfg.lambda(), |_, _, _, pc| Ok(sigmas_pt(kmax, pc)))?;
    Ok((0..=kmax)
        .map(|k| {
            let vals: Vec<f64> = sig.iter().map(|s| s[k]).collect();
            cfg.tau.powi(k as i32) * integrate(&mu, &vals)
        })
        .collect())
}

/// `𝒲_k = ∫ τ^k σ̃_k (4πτ)^{-n/2} e^{-φ} dvol`
pub fn w_eval(k: usize, cfg: &DensityConfig) -> Result<f64> {
    Ok(w_eval_all(k, cfg)?[k])
}

/// Adds the constant to φ that makes the weighted volume one.
pub fn normalize_c1(cfg: &DensityConfig) -> Result<DensityConfig> {
    let v = weighted_volume(cfg)?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::BadVolume(v));
    }
    cfg.with_phi(cfg.phi.add_constant(v.ln()))
}

/// ψ and its frame gradient/Hessian at every node.
pub(crate) fn field_jets(cfg: &DensityConfig, rule: &QuadratureRule, psi: &Field) -> Result<Vec<Jet>> {
    cfg.backend.check_field(psi)?;
    (0..rule.len())
        .into_par_iter()
        .map(|i| cfg.backend.frame_jet(psi, rule.point(i), false))
        .collect()
}

/// `d/dt 𝒲_k(φ + tψ)` at t = 0:
/// `−∫ τ^k (σ̃_k − λ σ̃_{k−1}) ψ (4πτ)^{-n/2} e^{-φ} dvol`.
/// Only offered where σ̃_k is variational: flat backends, or k ≤ 2.
pub fn first_variation_phi(k: usize, cfg: &DensityConfig, psi: &Field) -> Result<f64> {
    if !cfg.backend.is_flat() && k >= 3 {
        return Err(Error::NonVariational { k });
    }
    cfg.backend.check_field(psi)?;
    let rule = cfg.rule()?;
    let mu = measure(cfg, &rule);
    let lambda = cfg.lambda();
    let vals = map_nodes(cfg, &rule, lambda, |_, p, _, pc| {
        let s = sigmas_pt(k, pc);
        let prev = if k == 0 { 0.0 } else { s[k - 1] };
        Ok((s[k] - lambda * prev) * psi.eval(p))
    })?;
    Ok(-cfg.tau.powi(k as i32) * integrate(&mu, &vals))
}

/// Weighted mean and standard deviation of node values.
pub(crate) fn weighted_stats(mu: &[f64], vals: &[f64]) -> (f64, f64) {
    let mass = pairwise_sum(mu);
    let mean = integrate(mu, vals) / mass;
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).powi(2)).collect();
    (mean, (integrate(mu, &dev) / mass).max(0.0).sqrt())
}
