//! Model geometries: Euclidean space, the flat torus and the round sphere,
//! each with a constant metric scale `g = c·g₀`.

use super::field::{Field, Jet, SphereField};
use crate::error::{Error, Result};
use crate::tensor::{Cotton3, Curv4, PointCurvature, Sym2};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Euclidean,
    /// [0, 2π)ⁿ with the flat metric
    Torus,
    /// unit Sⁿ ⊂ ℝ^{n+1}
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Backend {
    pub kind: BackendKind,
    pub n: usize,
    pub scale: f64,
}

impl Backend {
    pub fn euclidean(n: usize) -> Self {
        Self { kind: BackendKind::Euclidean, n, scale: 1.0 }
    }

    pub fn torus(n: usize) -> Self {
        Self { kind: BackendKind::Torus, n, scale: 1.0 }
    }

    pub fn sphere(n: usize) -> Self {
        Self { kind: BackendKind::Sphere, n, scale: 1.0 }
    }

    pub fn is_flat(&self) -> bool {
        self.kind != BackendKind::Sphere
    }

    /// Length of coordinate vectors for points of this backend.
    pub fn coord_dim(&self) -> usize {
        match self.kind {
            BackendKind::Sphere => self.n + 1,
            _ => self.n,
        }
    }

    pub fn scalar_curvature(&self) -> f64 {
        match self.kind {
            BackendKind::Sphere => (self.n * (self.n - 1)) as f64 / self.scale,
            _ => 0.0,
        }
    }

    /// Ricci tensor in an orthonormal frame.
    pub fn ricci(&self) -> Sym2 {
        match self.kind {
            BackendKind::Sphere => Sym2::diag(&vec![(self.n as f64 - 1.0) / self.scale; self.n]),
            _ => Sym2::zeros(self.n),
        }
    }

    /// Riemann tensor in an orthonormal frame.
    pub fn riemann(&self) -> Curv4 {
        match self.kind {
            BackendKind::Sphere => Curv4::constant_curvature(self.n, 1.0 / self.scale),
            _ => Curv4::zeros(self.n),
        }
    }

    fn accepts(&self, f: &Field) -> bool {
        match (self.kind, f) {
            (BackendKind::Euclidean, Field::Poly(p)) => p.dim() == self.n,
            (BackendKind::Torus, Field::Trig(t)) => t.dim() == self.n,
            (BackendKind::Sphere, Field::Sphere(s)) => s.n() == self.n,
            _ => false,
        }
    }

    pub fn check_field(&self, f: &Field) -> Result<()> {
        if self.accepts(f) {
            Ok(())
        } else {
            Err(Error::UnsupportedPairing)
        }
    }

    /// Frame components of the value, gradient, Hessian and (flat kinds only)
    /// third covariant derivative of `f` at `p`.
    pub fn frame_jet(&self, f: &Field, p: &[f64], with_third: bool) -> Result<Jet> {
        self.check_field(f)?;
        if p.len() != self.coord_dim() {
            return Err(Error::DimensionMismatch { expected: self.coord_dim(), found: p.len() });
        }
        let mut jet = match f {
            Field::Poly(q) => q.jet(p, with_third),
            Field::Trig(t) => t.jet(p, with_third),
            Field::Sphere(s) => sphere_jet(s, p)?,
        };
        if self.scale != 1.0 {
            let r = self.scale.sqrt();
            jet.grad /= r;
            jet.hess /= self.scale;
            if let Some(t) = jet.third.as_mut() {
                let s3 = self.scale * r;
                t.iter_mut().for_each(|v| *v /= s3);
            }
        }
        Ok(jet)
    }

    /// Same geometry with metric `c·g`.
    pub fn scale_metric(&self, c: f64) -> Result<Backend> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidScale(c));
        }
        Ok(Backend { scale: self.scale * c, ..*self })
    }
}

/// `g ↦ c·g`.
pub fn scale_metric(backend: &Backend, c: f64) -> Result<Backend> {
    backend.scale_metric(c)
}

/// Orthonormal basis of the tangent space at `p` (columns, (n+1)×n), taken
/// from the Householder reflection sending `p` to a multiple of e₀.
pub fn tangent_frame(p: &[f64]) -> DMatrix<f64> {
    let m = p.len();
    let sign = if p[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = DVector::from_row_slice(p);
    v[0] += sign;
    let vv = v.norm_squared();
    let h = DMatrix::identity(m, m) - (&v * v.transpose()) * (2.0 / vv);
    h.columns(1, m - 1).into_owned()
}

fn check_on_sphere(p: &[f64]) -> Result<()> {
    let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::OffSphere { norm });
    }
    Ok(())
}

fn sphere_jet(f: &SphereField, p: &[f64]) -> Result<Jet> {
    check_on_sphere(p)?;
    let amb = f.ambient().jet(p, false);
    let e = tangent_frame(p);
    let radial = amb.grad.dot(&DVector::from_row_slice(p));
    let n = e.ncols();
    let grad = e.transpose() * &amb.grad;
    let hess = e.transpose() * &amb.hess * &e - DMatrix::identity(n, n) * radial;
    Ok(Jet { value: amb.value, grad, hess: crate::wsym::symmetrize(&hess), third: None })
}

/// Riemannian Hessian of a polynomial restriction at a point of the unit
/// sphere: tangential part of the ambient Hessian minus the radial
/// derivative times the metric.
pub fn sphere_hessian(f: &SphereField, p: &[f64]) -> Result<Sym2> {
    Sym2::new(sphere_jet(f, p)?.hess)
}

/// Ambient representation of the tangential gradient.
pub fn sphere_gradient(f: &SphereField, p: &[f64]) -> Result<DVector<f64>> {
    let jet = sphere_jet(f, p)?;
    Ok(tangent_frame(p) * jet.grad)
}

/// `Ỹ_φ`, `R̃ic_φ`, `dR̃ic_φ` and `Rm` at `p` for parameter λ.
pub fn point_curvature(backend: &Backend, phi: &Field, lambda: f64, p: &[f64]) -> Result<PointCurvature> {
    let jet = backend.frame_jet(phi, p, backend.is_flat())?;
    Ok(curvature_from_jet(backend, &jet, lambda))
}

pub(crate) fn curvature_from_jet(backend: &Backend, jet: &Jet, lambda: f64) -> PointCurvature {
    let n = backend.n;
    let r = backend.scalar_curvature();
    let y = -0.5 * (r + jet.grad.norm_squared() - 2.0 * lambda * jet.value);
    let mut ric = jet.hess.clone() - DMatrix::identity(n, n) * lambda;
    if !backend.is_flat() {
        ric += DMatrix::identity(n, n) * ((n as f64 - 1.0) / backend.scale);
    }
    let riem = backend.riemann();
    let cotton = if backend.is_flat() {
        // ∇_a R̃ic(b, c) − ∇_b R̃ic(a, c) from exact third derivatives
        Cotton3::antisymmetrized(n, |a, b, c| 2.0 * jet.third(a, b, c))
    } else {
        // Ric is parallel, so only d(∇²φ) = −Rm(·,·,∇φ,·) survives
        let c = riem.contract_third(&jet.grad).expect("frame dimension");
        Cotton3::zeros(n).sub_scaled(1.0, &c)
    };
    PointCurvature { y, ric: Sym2::new(ric).expect("square"), cotton, riem }
}
