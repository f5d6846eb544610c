//! Second variations along volume-normalized paths (φ + tψ, τ + tα).

use super::{field_jets, hat_w_eval, integrate, measure, normalize_c1, soliton_residual, w_eval, weighted_stats};
use super::{DensityConfig, VariationPath};
use crate::error::{Error, Result};
use crate::geom::BackendKind;

/// Which functional a second variation is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    W(usize),
    HatW(usize),
}

impl Functional {
    pub fn eval(&self, cfg: &DensityConfig) -> Result<f64> {
        match *self {
            Functional::W(k) => w_eval(k, cfg),
            Functional::HatW(k) => hat_w_eval(k, cfg),
        }
    }
}

/// Base configurations with sup |R̃ic_φ| above this are not accepted as solitons.
pub const SOLITON_TOL: f64 = 1e-8;

/// The point at parameter t of the path.
pub fn path_config(cfg: &DensityConfig, path: &VariationPath, t: f64) -> Result<DensityConfig> {
    let moved = DensityConfig::new(cfg.backend, cfg.phi.axpy(t, &path.psi)?, cfg.tau + t * path.alpha, cfg.mode, cfg.quad)?;
    if path.renormalize {
        normalize_c1(&moved)
    } else {
        Ok(moved)
    }
}

/// Central second difference of `F(t) = f(path_config(t))` with one
/// Richardson step: `(4 D(h/2) − D(h)) / 3`.
pub fn second_variation(f: Functional, cfg: &DensityConfig, path: &VariationPath, h: f64) -> Result<f64> {
    let res = soliton_residual(cfg)?;
    if res > SOLITON_TOL {
        return Err(Error::NotSoliton(res));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let at = |t: f64| path_config(cfg, path, t).and_then(|c| f.eval(&c));
    let f0 = at(0.0)?;
    let d = |step: f64| -> Result<f64> { Ok((at(step)? - 2.0 * f0 + at(-step)?) / (step * step)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Closed form at a shrinking Gaussian for α = 0:
/// `(−½)^{k−1} τ/(k−1)! ∫ [|∇ψ₀|² − ψ₀²/2τ] (4πτ)^{-n/2} e^{-φ} dvol`,
/// ψ₀ the weighted-mean-free part of ψ.
pub fn gaussian_second_variation(k: usize, cfg: &DensityConfig, psi: &crate::geom::Field) -> Result<f64> {
    if cfg.backend.kind != BackendKind::Euclidean {
        return Err(Error::UnsupportedPairing);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("closed form needs k >= 1".into()));
    }
    let res = soliton_residual(cfg)?;
    if res > SOLITON_TOL {
        return Err(Error::NotSoliton(res));
    }
    let rule = cfg.rule()?;
    let mu = measure(cfg, &rule);
    let jets = field_jets(cfg, &rule, psi)?;
    let vals: Vec<f64> = jets.iter().map(|j| j.value).collect();
    let (mean, _) = weighted_stats(&mu, &vals);
    let tau = cfg.tau;
    let integrand: Vec<f64> = jets
        .iter()
        .map(|j| j.grad.norm_squared() - (j.value - mean).powi(2) / (2.0 * tau))
        .collect();
    let fact: f64 = (1..k).map(|i| i as f64).product();
    Ok((-0.5f64).powi(k as i32 - 1) * tau / fact * integrate(&mu, &integrand) / crate::geom::pairwise_sum(&mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::tests::gaussian;
    use crate::geom::{Field, PolyField};

    fn path(psi: PolyField, alpha: f64) -> VariationPath {
        VariationPath { psi: psi.into(), alpha, renormalize: true }
    }

    #[test]
    fn worked_gaussian_value() {
        let cfg = gaussian(1, 0.5);
        let psi = PolyField::from_terms(1, [(vec![2], 1.0)]).unwrap();
        let closed = gaussian_second_variation(2, &cfg, &psi.clone().into()).unwrap();
        assert!((closed + 0.5).abs() < 1e-12);
        let fd = second_variation(Functional::HatW(2), &cfg, &path(psi, 0.0), 1e-3).unwrap();
        assert!((fd + 0.5).abs() < 1e-6, "fd = {fd}");
    }

    #[test]
    fn linear_directions_are_flat() {
        let cfg = gaussian(2, 0.25);
        let psi = PolyField::from_terms(2, [(vec![1, 0], 0.7), (vec![0, 1], -1.3)]).unwrap();
        for k in 1..4 {
            let v = second_variation(Functional::HatW(k), &cfg, &path(psi.clone(), 0.0), 1e-3).unwrap();
            assert!(v.abs() < 1e-6, "k={k} v={v}");
        }
    }

    #[test]
    fn non_soliton_base_refused() {
        let phi = PolyField::from_terms(1, [(vec![2], 0.5), (vec![4], 0.1)]).unwrap();
        let cfg = DensityConfig::new(
            crate::geom::Backend::euclidean(1),
            phi.into(),
            0.5,
            crate::functionals::Mode::Shrinking,
            crate::geom::QuadSpec::new(8),
        )
        .unwrap();
        let p = VariationPath { psi: Field::Poly(PolyField::coordinate(1, 0)), alpha: 0.0, renormalize: true };
        assert!(matches!(second_variation(Functional::W(1), &cfg, &p, 1e-3), Err(Error::NotSoliton(_))));
    }
}
