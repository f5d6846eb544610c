//! Seeded random inputs for property checks.

use crate::geom::{PolyField, SphereField, TrigField, TrigTerm};
use crate::tensor::{Cotton3, Curv4, PointCurvature, Sym2};
use crate::wsym::{cone_report, WeightedSpectrum};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// μ₀ and n ≤ `max_n` eigenvalues, all uniform in [−r, r].
pub fn spectrum(rng: &mut SeededRng, max_n: usize, r: f64) -> WeightedSpectrum {
    let n = rng.random_range(0..=max_n);
    let mu = (0..n).map(|_| rng.random_range(-r..=r)).collect();
    WeightedSpectrum::new(rng.random_range(-r..=r), mu).expect("finite")
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
pub fn orthogonal(rng: &mut SeededRng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col *= -1.0;
        }
    }
    q
}

/// `Q diag(λ) Qᵀ` with λ uniform in [−r, r]; returns the eigenvalues too.
pub fn symmetric_with_spectrum(rng: &mut SeededRng, n: usize, r: f64) -> (DMatrix<f64>, Vec<f64>) {
    let q = orthogonal(rng, n);
    let lam: Vec<f64> = (0..n).map(|_| rng.random_range(-r..=r)).collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lam.clone()));
    let m = &q * d * q.transpose();
    (crate::wsym::symmetrize(&m), lam)
}

pub fn symmetric(rng: &mut SeededRng, n: usize, r: f64) -> Sym2 {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-r..=r));
    Sym2::new(m).expect("square")
}

/// Sum of Kulkarni–Nomizu products of random symmetric matrices, so the
/// Bianchi identity holds algebraically.
pub fn curvature(rng: &mut SeededRng, n: usize, r: f64) -> Curv4 {
    let mut out = Curv4::zeros(n);
    for _ in 0..2 {
        let h = symmetric(rng, n, r);
        let q = symmetric(rng, n, r);
        out = out.add(&Curv4::kulkarni_nomizu(&h, &q).expect("same size"));
    }
    out
}

pub fn cotton(rng: &mut SeededRng, n: usize, r: f64) -> Cotton3 {
    let raw: Vec<f64> = (0..n * n * n).map(|_| rng.random_range(-r..=r)).collect();
    Cotton3::antisymmetrized(n, |a, b, c| raw[(a * n + b) * n + c])
}

pub fn point_curvature(rng: &mut SeededRng, n: usize, r: f64) -> PointCurvature {
    let y = rng.random_range(-r..=r);
    let ric = symmetric(rng, n, r);
    let cot = cotton(rng, n, r);
    let riem = curvature(rng, n, r);
    PointCurvature::new(y, ric, cot, riem).expect("consistent sizes")
}

/// A point of Γ_k^{∞,−}: mostly-negative data, rejected until inside.
pub fn cone_point(rng: &mut SeededRng, k: usize, n: usize) -> WeightedSpectrum {
    loop {
        let mu0 = rng.random_range(-3.0..=-0.2);
        let mu = (0..n).map(|_| rng.random_range(-1.5..=0.4)).collect();
        let ws = WeightedSpectrum::new(mu0, mu).expect("finite");
        if cone_report(&ws, k).contains(k) {
            return ws;
        }
    }
}

/// Real Fourier series with `terms` modes, frequencies in [−max_freq, max_freq]
/// and amplitudes below `amp`.
pub fn trig_field(rng: &mut SeededRng, n: usize, terms: usize, max_freq: i32, amp: f64) -> TrigField {
    let t = (0..terms)
        .map(|_| {
            let mut freq: Vec<i32> = (0..n).map(|_| rng.random_range(-max_freq..=max_freq)).collect();
            if freq.iter().all(|&f| f == 0) {
                freq[0] = 1;
            }
            TrigTerm { freq, cos: rng.random_range(-amp..=amp), sin: rng.random_range(-amp..=amp) }
        })
        .collect();
    TrigField::new(n, t).expect("consistent dimension")
}

/// Random polynomial of total degree ≤ `degree` with coefficients in [−amp, amp].
pub fn poly_field(rng: &mut SeededRng, dim: usize, degree: u32, amp: f64) -> PolyField {
    let mut terms = Vec::new();
    let mut e = vec![0u32; dim];
    loop {
        if e.iter().sum::<u32>() <= degree {
            terms.push((e.clone(), rng.random_range(-amp..=amp)));
        }
        let mut i = 0;
        loop {
            if i == dim {
                return PolyField::from_terms(dim, terms).expect("consistent dimension");
            }
            e[i] += 1;
            if e[i] <= degree {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// `a·x + xᵀBx` on ℝ^{n+1} with B traceless, restricted to Sⁿ: a sum of
/// spherical harmonics of degrees one and two.
pub fn harmonic_sphere_field(rng: &mut SeededRng, n: usize, amp: f64) -> SphereField {
    let d = n + 1;
    let mut terms = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        terms.push((e, rng.random_range(-amp..=amp)));
    }
    let b = symmetric(rng, d, amp);
    let shift = b.matrix().trace() / d as f64;
    for i in 0..d {
        for j in i..d {
            let mut e = vec![0; d];
            e[i] += 1;
            e[j] += 1;
            let v = if i == j { b.matrix()[(i, i)] - shift } else { 2.0 * b.matrix()[(i, j)] };
            terms.push((e, v));
        }
    }
    SphereField::new(PolyField::from_terms(d, terms).expect("consistent dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = spectrum(&mut rng(7), 8, 5.0);
        let b = spectrum(&mut rng(7), 8, 5.0);
        assert_eq!(a, b);
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let q = orthogonal(&mut rng(1), 5);
        assert!((q.transpose() * &q - DMatrix::identity(5, 5)).norm() < 1e-13);
    }

    #[test]
    fn random_curvature_satisfies_identities() {
        let r = curvature(&mut rng(3), 4, 1.0);
        assert!(r.symmetry_residual() < 1e-14);
    }

    #[test]
    fn cone_points_are_inside() {
        let mut g = rng(11);
        for k in 1..6 {
            let ws = cone_point(&mut g, k, 3);
            assert!(cone_report(&ws, k).contains(k));
        }
    }

    #[test]
    fn poly_field_degree() {
        let p = poly_field(&mut rng(2), 2, 3, 1.0);
        assert!(p.degree() <= 3);
        assert_eq!(p.terms().count(), 10);
    }
}
