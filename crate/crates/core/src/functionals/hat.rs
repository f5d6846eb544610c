//! σ̂_k = σ_k^∞(Ỹ_φ − λ; R̃ic_φ) and the combination Ŵ_k = Σ_j c_j 𝒲_j whose
//! φ-gradient is −τ^k σ̂_k.

use super::{field_jets, integrate, map_nodes, measure, w_eval_all, DensityConfig, Mode};
use crate::error::{Error, Result};
use crate::geom::Field;
use crate::tensor::sigmas_pt;

/// Coefficients c₀…c_k of Ŵ_k, with c_k = 1 and
/// `c_m − c_{m+1}/2 = (−½)^{k−m}/(k−m)!`.
#[derive(Clone, Debug, PartialEq)]
pub struct HatWCoeffs {
    pub k: usize,
    pub c: Vec<f64>,
}

impl HatWCoeffs {
    pub fn new(k: usize) -> Self {
        let mut c = vec![0.0; k + 2];
        let mut term = 1.0;
        for m in (0..=k).rev() {
            let d = k - m;
            if d > 0 {
                term *= -0.5 / d as f64;
            }
            c[m] = 0.5 * c[m + 1] + term;
        }
        c.truncate(k + 1);
        Self { k, c }
    }

    /// Largest violation of the defining recursion.
    pub fn recursion_residual(&self) -> f64 {
        let k = self.k;
        let mut worst = (self.c[k] - 1.0).abs();
        let mut term = 1.0;
        for m in (0..k).rev() {
            term *= -0.5 / (k - m) as f64;
            worst = worst.max((self.c[m] - 0.5 * self.c[m + 1] - term).abs());
        }
        worst
    }
}

pub fn hat_w_coeffs(k: usize) -> HatWCoeffs {
    HatWCoeffs::new(k)
}

fn require_shrinking(cfg: &DensityConfig) -> Result<()> {
    if cfg.mode == Mode::Shrinking {
        Ok(())
    } else {
        Err(Error::ModeMismatch)
    }
}

/// σ̂_k at every node.
pub fn hat_sigma(k: usize, cfg: &DensityConfig) -> Result<Vec<f64>> {
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    map_nodes(cfg, &rule, lambda, |_, _, _, pc| Ok(sigmas_pt(k, &pc.with_y(pc.y - lambda))[k]))
}

/// `Ŵ_k = Σ_j c_j 𝒲_j` (𝒲₀ is the weighted volume).
pub fn hat_w_eval(k: usize, cfg: &DensityConfig) -> Result<f64> {
    require_shrinking(cfg)?;
    let w = w_eval_all(k, cfg)?;
    let c = HatWCoeffs::new(k);
    Ok(c.c.iter().zip(&w).map(|(a, b)| a * b).sum())
}

/// `−∫ τ^k σ̂_k ψ (4πτ)^{-n/2} e^{-φ} dvol`, the derivative of Ŵ_k along φ + tψ.
pub fn hat_gradient(k: usize, cfg: &DensityConfig, psi: &Field) -> Result<f64> {
    require_shrinking(cfg)?;
    if !cfg.backend.is_flat() && k >= 3 {
        return Err(Error::NonVariational { k });
    }
    let rule = cfg.rule()?;
    let psis = field_jets(cfg, &rule, psi)?;
    let mu = measure(cfg, &rule);
    let lambda = cfg.lambda();
    let vals = map_nodes(cfg, &rule, lambda, |i, _, _, pc| {
        Ok(sigmas_pt(k, &pc.with_y(pc.y - lambda))[k] * psis[i].value)
    })?;
    Ok(-cfg.tau.powi(k as i32) * integrate(&mu, &vals))
}
