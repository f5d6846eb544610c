//! The linearized operator D̃_k, its self-adjointness, and the flat-space
//! conservation laws for the weighted Newton tensors.
//!
//! Derivatives of σ̃_k and T̃_k along frame directions are exact: they are
//! carried as dual numbers through the power-sum form of the recursion,
//! while the undifferentiated values come from the eigenvalue path.

use super::{field_jets, map_nodes, DensityConfig, Residual};
use crate::ad::{Dual, DualMat};
use crate::error::{Error, Result};
use crate::geom::{Field, Jet};
use crate::tensor::{newton_pt, sigmas_pt, PointCurvature};
use crate::wsym::dual_sigmas;
use nalgebra::{DMatrix, DVector};

/// (Ỹ, R̃ic) with their derivative along frame direction `a` (flat backends).
fn directional(jet: &Jet, pc: &PointCurvature, lambda: f64, a: usize) -> (Dual, DualMat) {
    let n = pc.n();
    let dy = -(0..n).map(|b| jet.grad[b] * jet.hess[(a, b)]).sum::<f64>() + lambda * jet.grad[a];
    let dric = DMatrix::from_fn(n, n, |b, c| jet.third(a, b, c));
    (Dual::new(pc.y, dy), DualMat::new(pc.ric.matrix().clone(), dric))
}

/// σ̃₀…σ̃_k and T̃_k as dual numbers.
fn newton_dual(k: usize, y: Dual, p: &DualMat) -> (Vec<Dual>, DualMat) {
    let sig = dual_sigmas(y, p, k);
    let n = p.re.nrows();
    let mut t = DualMat::zeros(n);
    let mut pow = DualMat::identity(n);
    for j in 0..=k {
        if j > 0 {
            pow = pow.mul(p);
        }
        let c = if j % 2 == 0 { sig[k - j] } else { -sig[k - j] };
        t.add_scaled(c, &pow);
    }
    (sig, t)
}

/// Weighted divergence part `(div T̃_k)_b = Σ_a ∂_a T̃_k(e_a, e_b)`.
fn div_newton(k: usize, jet: &Jet, pc: &PointCurvature, lambda: f64) -> DVector<f64> {
    let n = pc.n();
    let mut div = DVector::zeros(n);
    for a in 0..n {
        let (y, p) = directional(jet, pc, lambda, a);
        let (_, t) = newton_dual(k, y, &p);
        for b in 0..n {
            div[b] += t.eps[(a, b)];
        }
    }
    div
}

fn require_flat(cfg: &DensityConfig) -> Result<()> {
    if cfg.backend.is_flat() {
        Ok(())
    } else {
        Err(Error::CurvedBackend)
    }
}

fn require_positive(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("D operator needs k >= 1".into()));
    }
    Ok(())
}

fn d_value(k: usize, lambda: f64, jet: &Jet, pc: &PointCurvature, psi: &Jet) -> f64 {
    let s = sigmas_pt(k - 1, pc);
    let t = newton_pt(k - 1, pc);
    let hess = t.matrix().component_mul(&psi.hess).sum();
    hess - s[k - 1] * jet.grad.dot(&psi.grad) + lambda * s[k - 1] * psi.value
}

/// `D̃_k(ψ) = ⟨T̃_{k−1}, ∇²ψ⟩ − σ̃_{k−1}⟨∇φ, ∇ψ⟩ + λσ̃_{k−1}ψ` at every node.
pub fn d_operator(k: usize, cfg: &DensityConfig, psi: &Field) -> Result<Vec<f64>> {
    require_positive(k)?;
    let rule = cfg.rule()?;
    let psis = field_jets(cfg, &rule, psi)?;
    let lambda = cfg.lambda();
    map_nodes(cfg, &rule, lambda, |i, _, jet, pc| Ok(d_value(k, lambda, jet, pc, &psis[i])))
}

/// Divergence form `δ_φ(T̃_{k−1}∇ψ) + λσ̃_{k−1}ψ` (flat backends only).
pub fn d_operator_sa(k: usize, cfg: &DensityConfig, psi: &Field) -> Result<Vec<f64>> {
    require_positive(k)?;
    require_flat(cfg)?;
    let rule = cfg.rule()?;
    let psis = field_jets(cfg, &rule, psi)?;
    let lambda = cfg.lambda();
    map_nodes(cfg, &rule, lambda, |i, _, jet, pc| {
        let ps = &psis[i];
        let s = sigmas_pt(k - 1, pc);
        let t = newton_pt(k - 1, pc);
        let div = div_newton(k - 1, jet, pc, lambda);
        let tm = t.matrix();
        Ok(div.dot(&ps.grad) + tm.component_mul(&ps.hess).sum() - jet.grad.dot(&(tm * &ps.grad))
            + lambda * s[k - 1] * ps.value)
    })
}

/// `∫ (η D̃_k(ω) − ω D̃_k(η)) e^{-φ} dvol`, compared against
/// `1 + ∫ (|η D̃_k(ω)| + |ω D̃_k(η)|) e^{-φ} dvol`.
pub fn selfadjoint_residual(k: usize, cfg: &DensityConfig, eta: &Field, omega: &Field) -> Result<Residual> {
    require_positive(k)?;
    let rule = cfg.rule()?;
    let ej = field_jets(cfg, &rule, eta)?;
    let oj = field_jets(cfg, &rule, omega)?;
    let lambda = cfg.lambda();
    let pairs = map_nodes(cfg, &rule, lambda, |i, _, jet, pc| {
        let a = ej[i].value * d_value(k, lambda, jet, pc, &oj[i]);
        let b = oj[i].value * d_value(k, lambda, jet, pc, &ej[i]);
        Ok((a - b, a.abs() + b.abs()))
    })?;
    let mu = rule.weighted_measure(&cfg.phi);
    let diff: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let size: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok(Residual { value: super::integrate(&mu, &diff).abs(), scale: 1.0 + super::integrate(&mu, &size) })
}

struct Conservation {
    newton: f64,
    trace_adjusted: f64,
    dsigma: f64,
    scale: f64,
}

fn conservation_at(k: usize, lambda: f64, shift: f64, jet: &Jet, pc: &PointCurvature) -> Conservation {
    let n = pc.n();
    let pcs = pc.with_y(pc.y + shift);
    let sig = sigmas_pt(k, &pcs);
    let t = newton_pt(k, &pcs).into_matrix();
    let ric = pcs.ric.matrix();
    let mut div = DVector::zeros(n);
    let mut grad_ad = DVector::zeros(n);
    let mut grad_rhs = DVector::zeros(n);
    for a in 0..n {
        let (y, p) = directional(jet, &pcs, lambda, a);
        let (sd, td) = newton_dual(k, y, &p);
        for b in 0..n {
            div[b] += td.eps[(a, b)];
        }
        grad_ad[a] = sd[k].eps;
        if k >= 1 {
            // σ̃_{k−1}∇Ỹ + Σ_j (−1)^j/(j+1) σ̃_{k−1−j} ∇tr R̃ic^{j+1}
            let mut acc = sig[k - 1] * y.eps;
            let mut pow = DMatrix::identity(n, n);
            for j in 0..k {
                if j > 0 {
                    pow = &pow * ric;
                }
                let dtr = (&pow * &p.eps).trace();
                let term = sig[k - 1 - j] * dtr;
                acc += if j % 2 == 0 { term } else { -term };
            }
            grad_rhs[a] = acc;
        }
    }
    let t_grad = &t * &jet.grad;
    let newton = &div - &t_grad + &jet.grad * sig[k];
    let trace_adjusted = (&div - &grad_ad) - (&t_grad - &jet.grad * sig[k]) + &grad_rhs;
    let dsigma = &grad_ad - &grad_rhs;
    Conservation {
        newton: newton.amax(),
        trace_adjusted: trace_adjusted.amax(),
        dsigma: dsigma.amax(),
        scale: pcs.scale(k),
    }
}

/// Sup-norms over the nodes of `δ_φT̃_k + σ̃_k∇φ` and `δ_φẼ_k + dσ̃_k`, with
/// `shift` added to Ỹ throughout. The second residual takes dσ̃_k from the
/// closed-form gradient identity and δ_φẼ_k from exact differentiation.
pub fn divergence_residuals(k: usize, cfg: &DensityConfig, shift: f64) -> Result<(Residual, Residual)> {
    require_flat(cfg)?;
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    let c = map_nodes(cfg, &rule, lambda, |_, _, jet, pc| Ok(conservation_at(k, lambda, shift, jet, pc)))?;
    Ok((
        Residual::sup(c.iter().map(|c| Residual { value: c.newton, scale: c.scale })),
        Residual::sup(c.iter().map(|c| Residual { value: c.trace_adjusted, scale: c.scale })),
    ))
}

/// Sup-norm of `∇σ̃_k − [σ̃_{k−1}∇Ỹ + Σ_j (−1)^j/(j+1) σ̃_{k−1−j} ∇tr R̃ic^{j+1}]`.
pub fn dsigma_identity_residual(k: usize, cfg: &DensityConfig, shift: f64) -> Result<Residual> {
    require_flat(cfg)?;
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    let c = map_nodes(cfg, &rule, lambda, |_, _, jet, pc| Ok(conservation_at(k, lambda, shift, jet, pc)))?;
    Ok(Residual::sup(c.iter().map(|c| Residual { value: c.dsigma, scale: c.scale })))
}

/// Sup-norm of `δ_φR̃ic_φ − ½ dR̃_φ` with `R̃_φ = 2σ̃₁`.
pub fn bianchi_residual(cfg: &DensityConfig) -> Result<Residual> {
    require_flat(cfg)?;
    let rule = cfg.rule()?;
    let lambda = cfg.lambda();
    let r = map_nodes(cfg, &rule, lambda, |_, _, jet, pc| {
        let n = pc.n();
        let mut worst: f64 = 0.0;
        for b in 0..n {
            let div_hess: f64 = (0..n).map(|a| jet.third(a, a, b)).sum();
            let lhs = div_hess - (0..n).map(|a| jet.hess[(b, a)] * jet.grad[a]).sum::<f64>() + lambda * jet.grad[b];
            let (y, p) = directional(jet, pc, lambda, b);
            let rhs = dual_sigmas(y, &p, 1)[1].eps;
            worst = worst.max((lhs - rhs).abs());
        }
        Ok(Residual { value: worst, scale: pc.scale(1) })
    })?;
    Ok(Residual::sup(r))
}
