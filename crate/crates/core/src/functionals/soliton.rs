//! Checks at gradient Ricci solitons, the contraction identity behind the
//! rigidity arguments, and criticality of 𝒲₁, 𝒲₂.

use super::{integrate, map_nodes, measure, weighted_stats, DensityConfig, Mode};
use crate::error::{Error, Result};
use crate::geom::backend::curvature_from_jet;
use crate::tensor::{e_pt, sigmas_pt};
use crate::wsym::cone_report;

/// Everything the soliton suite measures on a normalized shrinking configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonReport {
    /// sup |R̃ic_φ|
    pub soliton_residual: f64,
    /// sup over nodes and k ≤ 5 of |σ̃_k − σ̃₁^k/k!|
    pub power_residual: f64,
    /// largest σ̃₁ over the nodes
    pub sigma1_max: f64,
    /// weighted mean of σ̃₁
    pub sigma1_mean: f64,
    /// sup |−Δ_φφ₀ − φ₀/τ| with φ₀ = φ − n/2 − 2τ·mean(σ̃₁)
    pub potential_residual: f64,
    pub phi0_sq: f64,
    pub phi0_sq_reference: f64,
    /// ∫ σ₁ (λ = 0 data)
    pub sigma1_total: f64,
    pub sigma1_reference: f64,
    /// ∫ σ₂ (λ = 0 data) against n(n−4)/32τ² + (1/8τ²)∫φ₀²
    pub sigma2_total: f64,
    pub sigma2_reference: f64,
}

fn require_shrinking(cfg: &DensityConfig) -> Result<()> {
    if cfg.mode == Mode::Shrinking {
        Ok(())
    } else {
        Err(Error::ModeMismatch)
    }
}

/// sup over the nodes of |R̃ic_φ|.
pub fn soliton_residual(cfg: &DensityConfig) -> Result<f64> {
    let rule = cfg.rule()?;
    let r = map_nodes(cfg, &rule, cfg.lambda(), |_, _, _, pc| Ok(pc.ric.norm()))?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

struct SolitonNode {
    ric: f64,
    power: f64,
    sigma1: f64,
    lap_phi: f64,
    grad_sq: f64,
    phi: f64,
    plain1: f64,
    plain2: f64,
}

pub fn soliton_suite(cfg: &DensityConfig) -> Result<SolitonReport> {
    require_shrinking(cfg)?;
    let rule = cfg.rule()?;
    let mu = measure(cfg, &rule);
    let backend = cfg.backend;
    let nodes = map_nodes(cfg, &rule, cfg.lambda(), |_, _, jet, pc| {
        let s = sigmas_pt(5, pc);
        let mut fact = 1.0;
        let mut power: f64 = 0.0;
        for k in 1..=5 {
            fact *= k as f64;
            power = power.max((s[k] - s[1].powi(k as i32) / fact).abs());
        }
        let plain = sigmas_pt(2, &curvature_from_jet(&backend, jet, 0.0));
        Ok(SolitonNode {
            ric: pc.ric.norm(),
            power,
            sigma1: s[1],
            lap_phi: jet.hess.trace(),
            grad_sq: jet.grad.norm_squared(),
            phi: jet.value,
            plain1: plain[1],
            plain2: plain[2],
        })
    })?;
    let n = cfg.n() as f64;
    let tau = cfg.tau;
    let col = |f: fn(&SolitonNode) -> f64| -> Vec<f64> { nodes.iter().map(f).collect() };
    let (sigma1_mean, _) = weighted_stats(&mu, &col(|s| s.sigma1));
    let shift = n / 2.0 + 2.0 * tau * sigma1_mean;
    let phi0: Vec<f64> = nodes.iter().map(|s| s.phi - shift).collect();
    let potential_residual = nodes
        .iter()
        .zip(&phi0)
        .map(|(s, p0)| (-(s.lap_phi - s.grad_sq) - p0 / tau).abs())
        .fold(0.0, f64::max);
    let phi0_sq = integrate(&mu, &phi0.iter().map(|p| p * p).collect::<Vec<_>>());
    Ok(SolitonReport {
        soliton_residual: nodes.iter().map(|s| s.ric).fold(0.0, f64::max),
        power_residual: nodes.iter().map(|s| s.power).fold(0.0, f64::max),
        sigma1_max: nodes.iter().map(|s| s.sigma1).fold(f64::NEG_INFINITY, f64::max),
        sigma1_mean,
        potential_residual,
        phi0_sq,
        phi0_sq_reference: n / 2.0,
        sigma1_total: integrate(&mu, &col(|s| s.plain1)),
        sigma1_reference: n / (4.0 * tau),
        sigma2_total: integrate(&mu, &col(|s| s.plain2)),
        sigma2_reference: n * (n - 4.0) / (32.0 * tau * tau) + phi0_sq / (8.0 * tau * tau),
    })
}

/// Pointwise check of `⟨Ê_k, R̃ic⟩ = (k+1)σ̂_{k+1} − σ̂₁σ̂_k` and of the sign of
/// the bracket inside the σ̂-cone.
#[derive(Clone, Debug, PartialEq)]
pub struct ObataReport {
    /// sup |⟨Ê_k, R̃ic⟩ − bracket|
    pub residual: f64,
    /// sup of the σ̂ spectral scale^{k+1}
    pub scale: f64,
    /// nodes where the σ̂ data lie in Γ_k^{∞,−}
    pub cone_nodes: usize,
    /// largest `(−1)^{k+1}·bracket / scale` over cone nodes (should be ≤ 0)
    pub sign_excess: f64,
    /// cone nodes where the bracket vanishes to 1e−10·scale
    pub equality_nodes: usize,
    /// of those, nodes where |R̃ic| ≥ `ric_threshold`
    pub equality_off_kernel: usize,
    pub ric_threshold: f64,
}

/// Threshold on |R̃ic| for the equality case. The bracket is quadratic in
/// R̃ic near 0, so a bracket below 1e−10 corresponds to |R̃ic| near 1e−5.
pub const OBATA_RIC_THRESHOLD: f64 = 1e-5;

pub fn obata_identity_residual(k: usize, cfg: &DensityConfig) -> Result<ObataReport> {
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    let rows = map_nodes(cfg, &rule, lambda, |_, _, _, pc| {
        let hat = pc.with_y(pc.y - lambda);
        let s = sigmas_pt(k + 1, &hat);
        let bracket = (k + 1) as f64 * s[k + 1] - s[1] * s[k];
        let lhs = e_pt(k, &hat).dot(&hat.ric);
        let scale = hat.scale(k + 1);
        let in_cone = k == 0 || cone_report(&hat.spectrum(), k).contains(k);
        Ok(((lhs - bracket).abs(), scale, in_cone, bracket, hat.ric.norm()))
    })?;
    let mut report = ObataReport {
        residual: 0.0,
        scale: 1.0,
        cone_nodes: 0,
        sign_excess: f64::NEG_INFINITY,
        equality_nodes: 0,
        equality_off_kernel: 0,
        ric_threshold: OBATA_RIC_THRESHOLD,
    };
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    for (res, scale, in_cone, bracket, ric) in rows {
        report.residual = report.residual.max(res);
        report.scale = report.scale.max(scale);
        if in_cone {
            report.cone_nodes += 1;
            report.sign_excess = report.sign_excess.max(sign * bracket / scale);
            if bracket.abs() <= 1e-10 * scale {
                report.equality_nodes += 1;
                if ric >= OBATA_RIC_THRESHOLD {
                    report.equality_off_kernel += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Criticality measures for 𝒲₁ (k = 1) and 𝒲₂ (k = 2, flat backends).
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalReport {
    /// weighted standard deviation of σ̃₁ − λ (k = 1) or σ̃₂ − λσ̃₁ (k = 2)
    pub stddev: f64,
    /// ∫ tr R̃ic e^{-φ}dvol (k = 1) or ∫ tr(Ẽ₂ − λẼ₁) e^{-φ}dvol (k = 2)
    pub trace_integral: f64,
}

pub fn critical_point_residual(k: usize, cfg: &DensityConfig) -> Result<CriticalReport> {
    require_shrinking(cfg)?;
    match k {
        1 => {}
        2 if cfg.backend.is_flat() => {}
        2 => return Err(Error::CurvedBackend),
        _ => return Err(Error::InvalidArgument(format!("criticality is checked for k = 1, 2; got {k}"))),
    }
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    let rows = map_nodes(cfg, &rule, lambda, |_, _, _, pc| {
        let s = sigmas_pt(2, pc);
        Ok(if k == 1 {
            (s[1] - lambda, pc.ric.matrix().trace())
        } else {
            let tr = e_pt(2, pc).matrix().trace() - lambda * e_pt(1, pc).matrix().trace();
            (s[2] - lambda * s[1], tr)
        })
    })?;
    let mu = rule.weighted_measure(&cfg.phi);
    let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let b: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok(CriticalReport { stddev: weighted_stats(&mu, &a).1, trace_integral: integrate(&mu, &b) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::tests::gaussian;
    use crate::functionals::{normalize_c1, DensityConfig};
    use crate::geom::{Backend, PolyField, QuadSpec, SphereField, TrigField, TrigTerm};

    fn sphere_soliton(n: usize) -> DensityConfig {
        let tau = 1.0 / (2.0 * (n as f64 - 1.0));
        let cfg = DensityConfig::new(Backend::sphere(n), SphereField::constant(n, 0.0).into(), tau, Mode::Shrinking, QuadSpec::new(3)).unwrap();
        normalize_c1(&cfg).unwrap()
    }

    #[test]
    fn gaussian_suite() {
        let r = soliton_suite(&gaussian(3, 0.25)).unwrap();
        assert!(r.soliton_residual < 1e-14);
        assert!((r.phi0_sq - 1.5).abs() < 1e-12);
        assert!((r.sigma1_total - 3.0).abs() < 1e-12);
        assert!((r.sigma2_total - r.sigma2_reference).abs() < 1e-11);
        assert!(r.potential_residual < 1e-12);
    }

    #[test]
    fn sphere_suite() {
        for n in 2..6 {
            let r = soliton_suite(&sphere_soliton(n)).unwrap();
            let tau = 1.0 / (2.0 * (n as f64 - 1.0));
            let nn = n as f64;
            assert!(r.soliton_residual < 1e-13);
            assert!(r.phi0_sq.abs() < 1e-20 + 1e-12);
            assert!((r.sigma1_total - nn / (4.0 * tau)).abs() < 1e-12 * nn * nn);
            let sigma2 = (nn - 1.0).powi(2) * nn * (nn - 4.0) / 8.0;
            assert!((r.sigma2_total - sigma2).abs() < 1e-11 * (1.0 + sigma2.abs()));
            assert!((r.sigma2_total - r.sigma2_reference).abs() < 1e-11 * (1.0 + sigma2.abs()));
            assert!(r.sigma1_max <= 0.0);
        }
    }

    #[test]
    fn obata_gaussian_and_perturbed() {
        let g = obata_identity_residual(2, &gaussian(2, 0.5)).unwrap();
        assert!(g.residual < 1e-14);
        assert_eq!(g.equality_off_kernel, 0);
        let tau = 0.5;
        let phi = PolyField::squared_norm(2).scaled(1.0 / (4.0 * tau)).add(&PolyField::from_terms(2, [(vec![4, 0], 0.01)]).unwrap()).unwrap();
        let cfg = DensityConfig::new(Backend::euclidean(2), phi.into(), tau, Mode::Shrinking, QuadSpec::new(8)).unwrap();
        let r = obata_identity_residual(2, &cfg).unwrap();
        assert!(r.residual < 1e-9 * r.scale);
        assert!(r.cone_nodes > 0);
        assert!(r.sign_excess <= 1e-10);
    }

    #[test]
    fn criticality() {
        let g = critical_point_residual(1, &gaussian(2, 0.5)).unwrap();
        assert!(g.stddev < 1e-14 && g.trace_integral.abs() < 1e-14);
        let g2 = critical_point_residual(2, &gaussian(2, 0.5)).unwrap();
        assert!(g2.stddev < 1e-14 && g2.trace_integral.abs() < 1e-14);
        let s = critical_point_residual(1, &sphere_soliton(2)).unwrap();
        assert!(s.stddev < 1e-13 && s.trace_integral.abs() < 1e-13);
        assert!(matches!(critical_point_residual(2, &sphere_soliton(2)), Err(Error::CurvedBackend)));
        let phi = TrigField::new(1, vec![TrigTerm { freq: vec![1], cos: 0.4, sin: 0.0 }]).unwrap();
        let t = DensityConfig::new(Backend::torus(1), phi.into(), 1.0, Mode::Shrinking, QuadSpec::new(16)).unwrap();
        assert!(critical_point_residual(1, &t).unwrap().stddev > 1e-3);
    }
}
