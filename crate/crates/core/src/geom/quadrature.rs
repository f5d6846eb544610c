//! Quadrature rules for `∫ f dvol_g` on each backend.
//!
//! A rule stores, per node, a weight `w_i` and a reference exponent `q_i` so
//! that `∫ f dvol ≈ Σ w_i e^{q_i} f(x_i)`. For Euclidean rules `e^{-q}` is the
//! Gaussian the nodes were adapted to, which lets weighted integrals be
//! formed as `Σ w_i e^{q_i − φ(x_i)} f(x_i)` without overflow.

use super::backend::{Backend, BackendKind};
use super::field::Field;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use std::f64::consts::PI;

/// Per-axis order (Euclidean), points per axis (torus) or product order (sphere).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadSpec {
    pub order: usize,
}

impl QuadSpec {
    pub const MIN_ORDER: usize = 2;

    pub fn new(order: usize) -> Self {
        Self { order }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub backend: Backend,
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    reference: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn reference(&self, i: usize) -> f64 {
        self.reference[i]
    }

    /// `∫ f dvol_g`
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let terms: Vec<f64> =
            (0..self.len()).map(|i| self.weights[i] * self.reference[i].exp() * f(self.point(i))).collect();
        pairwise_sum(&terms)
    }

    /// Node-wise measure `w_i e^{q_i − φ(x_i)}` realizing `e^{-φ} dvol_g`.
    pub fn weighted_measure(&self, phi: &Field) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.weights[i] * (self.reference[i] - phi.eval(self.point(i))).exp())
            .collect()
    }
}

/// Sum with a fixed binary tree, so the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Golub–Welsch for a symmetric Jacobi matrix with zero diagonal.
fn golub_welsch(offdiag: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let q = offdiag.len() + 1;
    let mut j = DMatrix::zeros(q, q);
    for (i, &b) in offdiag.iter().enumerate() {
        j[(i, i + 1)] = b;
        j[(i + 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // symmetric weight functions give symmetric rules; enforce it exactly
    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    for i in 0..q / 2 {
        let k = q - 1 - i;
        let x = 0.5 * (nodes[k] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[k]);
        nodes[i] = -x;
        nodes[k] = x;
        weights[i] = w;
        weights[k] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Hermite rule for the weight `e^{-z²/2}` on ℝ.
pub fn gauss_hermite(q: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..q).map(|j| (j as f64).sqrt()).collect();
    golub_welsch(&off, (2.0 * PI).sqrt())
}

/// Gauss rule for the weight `(1 − t²)^a` on [−1, 1], `2a` a nonnegative integer.
pub fn gauss_gegenbauer(q: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..q)
        .map(|j| {
            let j = j as f64;
            (j * (j + 2.0 * a) / ((2.0 * j + 2.0 * a + 1.0) * (2.0 * j + 2.0 * a - 1.0))).sqrt()
        })
        .collect();
    golub_welsch(&off, gegenbauer_mass(a))
}

/// `∫_{-1}^{1} (1 − t²)^a dt` for half-integer a ≥ 0.
fn gegenbauer_mass(a: f64) -> f64 {
    if a < 0.25 {
        2.0
    } else if a < 0.75 {
        PI / 2.0
    } else {
        gegenbauer_mass(a - 1.0) * 2.0 * a / (2.0 * a + 1.0)
    }
}

fn check_order(spec: &QuadSpec) -> Result<()> {
    if spec.order < QuadSpec::MIN_ORDER {
        return Err(Error::QuadratureOrder { order: spec.order, min: QuadSpec::MIN_ORDER });
    }
    Ok(())
}

/// Tensor Gauss–Hermite rule adapted to the Gaussian `e^{-½(x−m)ᵀA(x−m)}`.
pub fn gaussian_rule(backend: &Backend, a: &DMatrix<f64>, center: &DVector<f64>, spec: &QuadSpec) -> Result<QuadratureRule> {
    check_order(spec)?;
    let n = backend.n;
    if backend.kind != BackendKind::Euclidean {
        return Err(Error::QuadratureMismatch);
    }
    if a.nrows() != n || center.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.nrows() });
    }
    let inv = a.clone().try_inverse().ok_or(Error::NotGaussianDominant)?;
    let l = inv.cholesky().ok_or(Error::NotGaussianDominant)?.l();
    let det_l: f64 = (0..n).map(|i| l[(i, i)]).product();
    let (z1, w1) = gauss_hermite(spec.order);
    let q = spec.order;
    let total = q.pow(n as u32);
    let vol = backend.scale.powf(n as f64 / 2.0) * det_l;
    let mut points = Vec::with_capacity(total * n);
    let mut weights = Vec::with_capacity(total);
    let mut reference = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let z = DVector::from_fn(n, |i, _| z1[idx[i]]);
        let x = center + &l * &z;
        points.extend(x.iter());
        weights.push(vol * idx.iter().map(|&i| w1[i]).product::<f64>());
        reference.push(0.5 * z.norm_squared());
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < q {
                break;
            }
            *slot = 0;
        }
    }
    Ok(QuadratureRule { backend: *backend, dim: n, points, weights, reference })
}

/// Uniform grid on [0, 2π)ⁿ; exact for trigonometric polynomials whose
/// frequencies stay below the grid size.
pub fn torus_rule(backend: &Backend, spec: &QuadSpec) -> Result<QuadratureRule> {
    check_order(spec)?;
    if backend.kind != BackendKind::Torus {
        return Err(Error::QuadratureMismatch);
    }
    let (n, m) = (backend.n, spec.order);
    let h = 2.0 * PI / m as f64;
    let total = m.pow(n as u32);
    let w = h.powi(n as i32) * backend.scale.powf(n as f64 / 2.0);
    let mut points = Vec::with_capacity(total * n);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        points.extend(idx.iter().map(|&i| i as f64 * h));
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    Ok(QuadratureRule { backend: *backend, dim: n, points, weights: vec![w; total], reference: vec![0.0; total] })
}

/// Product rule on Sⁿ from `x = (t, √(1−t²) y)`, `y ∈ S^{n−1}`, with
/// `dvol_{Sⁿ} = (1 − t²)^{(n−2)/2} dt dvol_{S^{n−1}}`. The circle uses 2Q
/// equispaced angles; the rule integrates restrictions of polynomials of
/// degree ≤ 2Q − 1 exactly.
pub fn sphere_rule(backend: &Backend, spec: &QuadSpec) -> Result<QuadratureRule> {
    check_order(spec)?;
    if backend.kind != BackendKind::Sphere || backend.n == 0 {
        return Err(Error::QuadratureMismatch);
    }
    let q = spec.order;
    let (mut pts, mut wts) = circle(q);
    for m in 2..=backend.n {
        let (t, wt) = gauss_gegenbauer(q, (m as f64 - 2.0) / 2.0);
        let mut next_p = Vec::with_capacity(pts.len() * q);
        let mut next_w = Vec::with_capacity(wts.len() * q);
        for (ti, wi) in t.iter().zip(&wt) {
            let r = (1.0 - ti * ti).sqrt();
            for (y, wy) in pts.iter().zip(&wts) {
                let mut x = Vec::with_capacity(m + 1);
                x.push(*ti);
                x.extend(y.iter().map(|v| r * v));
                next_p.push(x);
                next_w.push(wi * wy);
            }
        }
        pts = next_p;
        wts = next_w;
    }
    let s = backend.scale.powf(backend.n as f64 / 2.0);
    let total = wts.len();
    Ok(QuadratureRule {
        backend: *backend,
        dim: backend.n + 1,
        points: pts.into_iter().flatten().collect(),
        weights: wts.into_iter().map(|w| w * s).collect(),
        reference: vec![0.0; total],
    })
}

fn circle(q: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = 2 * q;
    let h = 2.0 * PI / m as f64;
    let pts = (0..m).map(|j| {
        let (s, c) = (j as f64 * h).sin_cos();
        vec![c, s]
    });
    (pts.collect(), vec![h; m])
}

/// The rule for a density `e^{-φ}` on `backend`. Euclidean rules are
/// adapted to the quadratic part of φ, which must be positive definite.
pub fn quadrature(backend: &Backend, phi: &Field, spec: &QuadSpec) -> Result<QuadratureRule> {
    backend.check_field(phi)?;
    match (backend.kind, phi) {
        (BackendKind::Euclidean, Field::Poly(p)) => {
            let (a, b, _) = p.quadratic_part();
            let chol = a.clone().cholesky().ok_or(Error::NotGaussianDominant)?;
            let center = -chol.solve(&b);
            gaussian_rule(backend, &a, &center, spec)
        }
        (BackendKind::Torus, _) => torus_rule(backend, spec),
        (BackendKind::Sphere, _) => sphere_rule(backend, spec),
        _ => Err(Error::UnsupportedPairing),
    }
}

/// Volume of the unit sphere Sⁿ.
pub fn unit_sphere_volume(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * unit_sphere_volume(n - 2) / (n as f64 - 1.0),
    }
}
