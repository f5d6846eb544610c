//! First nonzero eigenvalue of the weighted Laplacian −Δ_φ in one dimension.

use super::DensityConfig;
use crate::error::{Error, Result};
use crate::geom::{quadrature, BackendKind, Field, QuadSpec};
use nalgebra::{DMatrix, SymmetricEigen};

/// Galerkin estimate of λ₁(−Δ_φ) on weighted-mean-free polynomials of degree
/// ≤ m. The basis is He_j(z)/√j! in the variable standardized by the
/// quadratic part of φ, which is orthonormal when φ is exactly Gaussian.
pub fn spectral_gap(cfg: &DensityConfig, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("basis size must be at least 2, got {m}")));
    }
    if cfg.backend.kind != BackendKind::Euclidean || cfg.n() != 1 {
        return Err(Error::UnsupportedPairing);
    }
    let Field::Poly(phi) = &cfg.phi else {
        return Err(Error::UnsupportedPairing);
    };
    let (a, b, _) = phi.quadratic_part();
    let a = a[(0, 0)];
    if a <= 0.0 {
        return Err(Error::NotGaussianDominant);
    }
    let center = -b[0] / a;
    let s = 1.0 / a.sqrt();
    let order = cfg.quad.order.max(m + 2);
    let rule = quadrature(&cfg.backend, &cfg.phi, &QuadSpec::new(order))?;
    let mu = rule.weighted_measure(&cfg.phi);
    let mass: f64 = crate::geom::pairwise_sum(&mu);
    let dx = 1.0 / cfg.backend.scale.sqrt();

    // values and x-derivatives of the basis at every node
    let q = rule.len();
    let mut val = DMatrix::zeros(q, m);
    let mut der = DMatrix::zeros(q, m);
    for i in 0..q {
        let z = (rule.point(i)[0] - center) / s;
        let mut he = vec![1.0, z];
        for j in 1..m {
            he.push(z * he[j] - j as f64 * he[j - 1]);
        }
        let mut norm = 1.0;
        for j in 1..=m {
            norm *= (j as f64).sqrt();
            val[(i, j - 1)] = he[j] / norm;
            der[(i, j - 1)] = j as f64 * he[j - 1] / norm / s * dx;
        }
    }
    let means: Vec<f64> = (0..m).map(|j| (0..q).map(|i| mu[i] * val[(i, j)]).sum::<f64>() / mass).collect();
    let stiff = DMatrix::from_fn(m, m, |r, c| (0..q).map(|i| mu[i] * der[(i, r)] * der[(i, c)]).sum::<f64>());
    let gram = DMatrix::from_fn(m, m, |r, c| {
        (0..q).map(|i| mu[i] * (val[(i, r)] - means[r]) * (val[(i, c)] - means[c])).sum::<f64>()
    });
    let chol = gram.cholesky().ok_or(Error::InvalidArgument("singular Gram matrix".into()))?;
    let linv = chol.l().try_inverse().ok_or(Error::InvalidArgument("singular Gram factor".into()))?;
    let reduced = &linv * stiff * linv.transpose();
    let reduced = crate::wsym::symmetrize(&reduced);
    let eig = SymmetricEigen::new(reduced);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::tests::gaussian;

    #[test]
    fn gaussian_gap() {
        for tau in [0.25, 0.5, 1.0] {
            let g = spectral_gap(&gaussian(1, tau), 8).unwrap();
            assert!((g - 0.5 / tau).abs() < 1e-12, "tau={tau} g={g}");
        }
        let a = spectral_gap(&gaussian(1, 0.5), 6).unwrap();
        let b = spectral_gap(&gaussian(1, 0.5), 12).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(spectral_gap(&gaussian(1, 0.5), 1).is_err());
        assert!(spectral_gap(&gaussian(2, 0.5), 4).is_err());
    }
}
