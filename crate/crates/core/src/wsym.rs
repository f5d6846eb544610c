//! Weighted elementary symmetric functions σ_k^∞(μ₀; μ), weighted Newton
//! transformations and the negative elliptic cones.
//!
//! σ_k^∞ is built from σ₀ = 1 and
//!
//! ```text
//! k σ_k = σ_{k-1} (μ₀ + N₁) + Σ_{i=1}^{k-1} (-1)^i σ_{k-1-i} N_{i+1},   N_m = Σ_j μ_j^m
//! ```
//!
//! so σ_k^∞(0; μ) is the classical elementary symmetric polynomial and
//! σ_k^∞(μ₀; ∅) = μ₀^k / k!. Unlike the classical case, σ_k^∞ is in general
//! nonzero for k > n.

use crate::ad::{Dual, DualMat, Scalar};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Weight scalar μ₀ together with eigenvalues μ₁…μ_n (n may be 0).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpectrum {
    mu0: f64,
    mu: Vec<f64>,
}

impl WeightedSpectrum {
    pub fn new(mu0: f64, mu: Vec<f64>) -> Result<Self> {
        if !mu0.is_finite() || mu.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("weighted spectrum"));
        }
        Ok(Self { mu0, mu })
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Same eigenvalues, weight moved to μ₀ + s.
    pub fn shifted(&self, s: f64) -> Self {
        Self { mu0: self.mu0 + s, mu: self.mu.clone() }
    }

    /// `(|μ₀| + Σ|μ_j| + 1)^k`, the natural size of a degree-k quantity.
    pub fn scale(&self, k: usize) -> f64 {
        let base = self.mu0.abs() + self.mu.iter().map(|x| x.abs()).sum::<f64>() + 1.0;
        base.powi(k as i32)
    }
}

/// Runs the defining recursion given μ₀ and power sums `p[m] = N_m`
/// (`p[0]` is ignored). Returns σ₀…σ_kmax.
pub(crate) fn sigmas_from_power_sums<T: Scalar>(mu0: T, p: &[T], kmax: usize) -> Vec<T> {
    debug_assert!(p.len() > kmax || kmax == 0);
    let mut s = Vec::with_capacity(kmax + 1);
    s.push(T::constant(1.0));
    for k in 1..=kmax {
        let mut acc = s[k - 1] * (mu0 + p[1]);
        for i in 1..k {
            let term = s[k - 1 - i] * p[i + 1];
            acc = if i % 2 == 1 { acc - term } else { acc + term };
        }
        s.push(acc.scale(1.0 / k as f64));
    }
    s
}

fn power_sums(mu: &[f64], kmax: usize) -> Vec<f64> {
    let mut p = vec![0.0; kmax + 1];
    p[0] = mu.len() as f64;
    for &x in mu {
        let mut pow = 1.0;
        for m in 1..=kmax {
            pow *= x;
            p[m] += pow;
        }
    }
    p
}

/// σ₀^∞ … σ_kmax^∞ of `ws`.
pub fn weighted_sigmas(kmax: usize, ws: &WeightedSpectrum) -> Vec<f64> {
    let p = power_sums(&ws.mu, kmax.max(1));
    sigmas_from_power_sums(ws.mu0, &p, kmax)
}

pub fn weighted_sigma(k: usize, ws: &WeightedSpectrum) -> f64 {
    weighted_sigmas(k, ws)[k]
}

/// `Σ_{j=0}^k s^j/j! · σ_{k-j}^∞(μ₀; μ)`, equal to σ_k^∞(μ₀ + s; μ).
pub fn weighted_sigma_shifted(k: usize, ws: &WeightedSpectrum, s: f64) -> f64 {
    let sig = weighted_sigmas(k, ws);
    let mut coeff = 1.0;
    let mut total = 0.0;
    for j in 0..=k {
        if j > 0 {
            coeff *= s / j as f64;
        }
        total += coeff * sig[k - j];
    }
    total
}

/// Taylor coefficients through t^K of `e^{μ₀t} Π(1 + μ_j t)`.
pub fn generating_coeffs(ws: &WeightedSpectrum, big_k: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for &m in &ws.mu {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * m;
        }
        poly = next;
    }
    let mut exp = vec![1.0; big_k + 1];
    for j in 1..=big_k {
        exp[j] = exp[j - 1] * ws.mu0 / j as f64;
    }
    (0..=big_k)
        .map(|j| (0..=j.min(poly.len() - 1)).map(|i| poly[i] * exp[j - i]).sum())
        .collect()
}

/// `(k/(k+1)) σ_k² − σ_{k−1} σ_{k+1}`; nonnegative for every input.
pub fn newton_gap(k: usize, ws: &WeightedSpectrum) -> f64 {
    assert!(k >= 1, "newton_gap needs k >= 1");
    let s = weighted_sigmas(k + 1, ws);
    (k as f64 / (k + 1) as f64) * s[k] * s[k] - s[k - 1] * s[k + 1]
}

/// Which equality family of the weighted Newton inequality a spectrum falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonEquality {
    /// every eigenvalue vanishes (μ₀ arbitrary)
    ZeroEigenvalues,
    /// μ₀ = 0 and at least n + 1 − k eigenvalues vanish
    UnweightedDegenerate,
}

/// Structural classification of the equality case at order `k`. Entries with
/// `|x| ≤ 1e-10 · (|μ₀| + Σ|μ_j| + 1)` count as zero.
pub fn newton_equality(k: usize, ws: &WeightedSpectrum) -> Option<NewtonEquality> {
    let thr = 1e-10 * ws.scale(1);
    let zeros = ws.mu.iter().filter(|x| x.abs() <= thr).count();
    if zeros == ws.n() {
        Some(NewtonEquality::ZeroEigenvalues)
    } else if ws.mu0.abs() <= thr && zeros + k >= ws.n() + 1 {
        Some(NewtonEquality::UnweightedDegenerate)
    } else {
        None
    }
}

/// Signed margins `(-1)^j σ_j^∞` and the largest k with all of them positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeReport {
    pub max_k: usize,
    /// `margins[j-1] = (-1)^j σ_j^∞` for j = 1…kmax
    pub margins: Vec<f64>,
}

impl ConeReport {
    pub fn contains(&self, k: usize) -> bool {
        self.max_k >= k
    }
}

pub fn cone_report(ws: &WeightedSpectrum, kmax: usize) -> ConeReport {
    let s = weighted_sigmas(kmax, ws);
    let margins: Vec<f64> = (1..=kmax)
        .map(|j| if j % 2 == 0 { s[j] } else { -s[j] })
        .collect();
    let max_k = margins.iter().take_while(|&&m| m > 0.0).count();
    ConeReport { max_k, margins }
}

/// `(-1)^{k+1} [σ₁σ_k − (k+1)σ_{k+1}]`, only defined inside Γ_k^{∞,−}.
pub fn newton_cor_gap(k: usize, ws: &WeightedSpectrum) -> Result<f64> {
    let cone = cone_report(ws, k);
    if !cone.contains(k) {
        return Err(Error::OutsideCone { k, max_k: cone.max_k });
    }
    let s = weighted_sigmas(k + 1, ws);
    let bracket = s[1] * s[k] - (k + 1) as f64 * s[k + 1];
    Ok(if k % 2 == 1 { bracket } else { -bracket })
}

/// `(μ₀; μ̄(i))`: the spectrum with the (0-based) i-th eigenvalue dropped.
pub fn remove_coordinate(ws: &WeightedSpectrum, i: usize) -> Result<WeightedSpectrum> {
    if i >= ws.n() {
        return Err(Error::IndexOutOfRange { index: i, len: ws.n() });
    }
    let mut mu = ws.mu.clone();
    mu.remove(i);
    Ok(WeightedSpectrum { mu0: ws.mu0, mu })
}

/// μ₀ together with a symmetric matrix P written in an orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPair {
    pub mu0: f64,
    p: DMatrix<f64>,
}

impl SymPair {
    /// Symmetrizes `p` so that the stored matrix equals its transpose exactly.
    pub fn new(mu0: f64, p: DMatrix<f64>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::DimensionMismatch { expected: p.nrows(), found: p.ncols() });
        }
        if !mu0.is_finite() || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("sym pair"));
        }
        Ok(Self { mu0, p: symmetrize(&p) })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn spectrum(&self) -> WeightedSpectrum {
        WeightedSpectrum { mu0: self.mu0, mu: sym_eigenvalues(&self.p) }
    }

    /// σ₀…σ_kmax from the eigenvalues of P.
    pub fn sigmas(&self, kmax: usize) -> Vec<f64> {
        weighted_sigmas(kmax, &self.spectrum())
    }

    /// σ₀…σ_kmax from traces of matrix powers, no diagonalization.
    pub fn sigmas_by_trace(&self, kmax: usize) -> Vec<f64> {
        let n = self.n();
        let mut p = vec![0.0; kmax.max(1) + 1];
        p[0] = n as f64;
        let mut pow = DMatrix::identity(n, n);
        for m in 1..p.len() {
            pow = &pow * &self.p;
            p[m] = pow.trace();
        }
        sigmas_from_power_sums(self.mu0, &p, kmax)
    }
}

pub(crate) fn symmetrize(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        0.5 * (p[(a, b)] + p[(b, a)])
    })
}

pub(crate) fn sym_eigenvalues(p: &DMatrix<f64>) -> Vec<f64> {
    if p.nrows() == 0 {
        return Vec::new();
    }
    SymmetricEigen::new(p.clone()).eigenvalues.iter().copied().collect()
}

/// σ₀…σ_kmax along with their derivative in one direction, via traces of
/// powers of a matrix-valued dual number.
pub(crate) fn dual_sigmas(mu0: Dual, p: &DualMat, kmax: usize) -> Vec<Dual> {
    let n = p.re.nrows();
    let mut sums = vec![Dual::constant(n as f64); kmax.max(1) + 1];
    let mut pow = DualMat::identity(n);
    for m in 1..sums.len() {
        pow = pow.mul(p);
        sums[m] = pow.trace();
    }
    sigmas_from_power_sums(mu0, &sums, kmax)
}

/// `Σ_{j=0}^k (-1)^j σ_{k-j}^∞ P^j`, given σ₀…σ_k.
pub(crate) fn newton_from_sigmas(sig: &[f64], p: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = p.nrows();
    let mut out = DMatrix::zeros(n, n);
    let mut pow = DMatrix::identity(n, n);
    for j in 0..=k {
        if j > 0 {
            pow = &pow * p;
        }
        let c = if j % 2 == 0 { sig[k - j] } else { -sig[k - j] };
        out += &pow * c;
    }
    symmetrize(&out)
}

/// The k-th weighted Newton transformation T_k^∞(μ₀; P).
pub fn newton_transform(k: usize, sp: &SymPair) -> DMatrix<f64> {
    newton_from_sigmas(&sp.sigmas(k), &sp.p, k)
}

/// Eigenvalues of `(-1)^k T_k^∞`, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Definiteness {
    pub k: usize,
    pub signed_eigenvalues: Vec<f64>,
}

impl Definiteness {
    pub fn min_eigenvalue(&self) -> f64 {
        self.signed_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }
}

pub fn definiteness(k: usize, sp: &SymPair) -> Definiteness {
    let mut t = newton_transform(k, sp);
    if k % 2 == 1 {
        t = -t;
    }
    let mut ev = sym_eigenvalues(&t);
    ev.sort_by(f64::total_cmp);
    Definiteness { k, signed_eigenvalues: ev }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(mu0: f64, mu: &[f64]) -> WeightedSpectrum {
        WeightedSpectrum::new(mu0, mu.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * (1.0 + b.abs())
    }

    #[test]
    fn sigma_values() {
        assert!(close(weighted_sigma(1, &ws(1.0, &[2.0, 3.0])), 6.0));
        assert!(close(weighted_sigma(2, &ws(0.0, &[1.0, 2.0, 3.0])), 11.0));
        // σ₂ + μ₀σ₁ + μ₀²/2 = 2 + 3 + 0.5
        assert!(close(weighted_sigma(2, &ws(1.0, &[1.0, 2.0])), 5.5));
        assert!(close(weighted_sigma(3, &ws(2.0, &[0.0, 0.0])), 4.0 / 3.0));
        assert_eq!(weighted_sigma(0, &ws(3.0, &[1.0])), 1.0);
    }

    #[test]
    fn empty_spectrum_is_exponential() {
        let w = ws(1.5, &[]);
        let mut fact = 1.0;
        for k in 0..8 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!(close(weighted_sigma(k, &w), 1.5f64.powi(k as i32) / fact));
        }
    }

    #[test]
    fn nonzero_above_dimension() {
        // n = 1, k = 3: μ₀³/6 + μ₀²μ₁/2
        let v = weighted_sigma(3, &ws(1.0, &[2.0]));
        assert!(close(v, 1.0 / 6.0 + 1.0));
    }

    #[test]
    fn shifted_values() {
        assert!(close(weighted_sigma_shifted(2, &ws(0.0, &[1.0, 2.0]), 1.0), 5.5));
        assert!(close(weighted_sigma_shifted(1, &ws(-1.0, &[4.0]), 1.0), 4.0));
        let w = ws(0.3, &[1.0, -2.0, 0.5]);
        for k in 0..6 {
            assert_eq!(weighted_sigma_shifted(k, &w, 0.0), weighted_sigma(k, &w));
        }
    }

    #[test]
    fn generating_values() {
        assert_eq!(generating_coeffs(&ws(0.0, &[1.0]), 2), vec![1.0, 1.0, 0.0]);
        let g = generating_coeffs(&ws(1.0, &[]), 3);
        assert!(close(g[2], 0.5) && close(g[3], 1.0 / 6.0));
        let g = generating_coeffs(&ws(1.0, &[1.0, 2.0]), 2);
        assert!(close(g[0], 1.0) && close(g[1], 4.0) && close(g[2], 5.5));
    }

    #[test]
    fn newton_gap_values() {
        assert_eq!(newton_gap(1, &ws(0.0, &[0.0, 0.0, 0.0])), 0.0);
        assert!(close(newton_gap(1, &ws(0.0, &[1.0, 1.0])), 1.0));
        assert!(newton_gap(2, &ws(0.0, &[5.0, 0.0, 0.0])).abs() < 1e-12);
        assert_eq!(
            newton_equality(2, &ws(0.0, &[5.0, 0.0, 0.0])),
            Some(NewtonEquality::UnweightedDegenerate)
        );
        assert_eq!(newton_equality(1, &ws(0.0, &[5.0, 0.0, 0.0])), None);
        assert_eq!(newton_equality(3, &ws(2.0, &[0.0])), Some(NewtonEquality::ZeroEigenvalues));
    }

    #[test]
    fn cone_margins() {
        let r = cone_report(&ws(-1.0, &[0.0; 4]), 5);
        assert_eq!(r.max_k, 5);
        let mut fact = 1.0;
        for j in 1..=5 {
            fact *= j as f64;
            assert!(close(r.margins[j - 1], 1.0 / fact));
        }
        assert_eq!(cone_report(&ws(0.0, &[1.0, 2.0]), 3).max_k, 0);
        // Gaussian point data under the hat shift, τ = ½: μ₀ = −1
        let tau: f64 = 0.5;
        let r = cone_report(&ws(-1.0 / (2.0 * tau), &[0.0, 0.0]), 4);
        assert_eq!(r.max_k, 4);
    }

    #[test]
    fn cor_gap() {
        assert_eq!(newton_cor_gap(2, &ws(-1.0, &[0.0, 0.0])).unwrap(), 0.0);
        assert!(newton_cor_gap(1, &ws(-1.0, &[-0.1, -0.2])).unwrap() > 0.0);
        // σ = (1, -2.5, 3, -7/3 + ...) by hand: (-1)^4 [σ₁σ₃ − 4σ₄]
        let w = ws(-2.0, &[-0.5]);
        let s = weighted_sigmas(4, &w);
        let expect = s[1] * s[3] - 4.0 * s[4];
        let got = newton_cor_gap(3, &w).unwrap();
        assert!(got > 0.0 && close(got, expect));
        assert!(matches!(
            newton_cor_gap(1, &ws(1.0, &[1.0])),
            Err(Error::OutsideCone { .. })
        ));
    }

    #[test]
    fn remove_one() {
        let w = ws(1.0, &[1.0, 2.0]);
        let r = remove_coordinate(&w, 0).unwrap();
        assert_eq!(r.mu(), &[2.0]);
        assert!(close(weighted_sigma(2, &r), 2.5));
        assert!(close(weighted_sigma(2, &r) + 1.0 * weighted_sigma(1, &r), 5.5));
        let single = remove_coordinate(&ws(0.7, &[3.0]), 0).unwrap();
        assert_eq!(single.n(), 0);
        assert!(remove_coordinate(&w, 2).is_err());
    }

    #[test]
    fn newton_transform_values() {
        let p = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 0.5, 0.0, 0.0, 0.0, -1.0]);
        let sp = SymPair::new(1.0, p).unwrap();
        assert_eq!(newton_transform(0, &sp), DMatrix::identity(3, 3));

        let p = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
        let sp = SymPair::new(1.0, p).unwrap();
        let t1 = newton_transform(1, &sp);
        assert!(close(t1[(0, 0)], 3.0) && close(t1[(1, 1)], 2.0) && t1[(0, 1)] == 0.0);
        let contraction = (&t1 * sp.matrix()).trace();
        let s = sp.sigmas(2);
        assert!(close(contraction, 7.0));
        assert!(close(2.0 * s[2] - 1.0 * s[1], 7.0));
    }

    #[test]
    fn definiteness_values() {
        let sp = SymPair::new(0.4, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 3.0, -2.0])).unwrap();
        assert!(definiteness(0, &sp).is_positive_definite());

        let p = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-0.1, -0.2]));
        let sp = SymPair::new(-1.0, p).unwrap();
        assert!(cone_report(&sp.spectrum(), 2).contains(2));
        assert!(definiteness(1, &sp).is_positive_definite());

        let sp = SymPair::new(-1.0, DMatrix::zeros(3, 3)).unwrap();
        let d = definiteness(2, &sp);
        assert!(d.signed_eigenvalues.iter().all(|&e| close(e, 0.5)));
    }

    #[test]
    fn trace_path_matches_eigen_path() {
        let p = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, -0.2, 0.3, -0.5, 0.1, -0.2, 0.1, 2.0]);
        let sp = SymPair::new(-0.7, p).unwrap();
        let a = sp.sigmas(7);
        let b = sp.sigmas_by_trace(7);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * sp.spectrum().scale(7));
        }
    }

    #[test]
    fn dual_sigmas_differentiate() {
        // d/dt σ_k(μ₀ + t; P + tI) against the difference quotient of the trace path
        let p = DMatrix::from_row_slice(2, 2, &[0.4, 0.1, 0.1, -0.3]);
        let dir = DMatrix::identity(2, 2);
        let d = dual_sigmas(Dual::new(0.2, 1.0), &DualMat::new(p.clone(), dir.clone()), 4);
        let h = 1e-6;
        let up = SymPair::new(0.2 + h, &p + &dir * h).unwrap().sigmas(4);
        let dn = SymPair::new(0.2 - h, &p - &dir * h).unwrap().sigmas(4);
        for k in 0..=4 {
            assert!((d[k].eps - (up[k] - dn[k]) / (2.0 * h)).abs() < 1e-8);
        }
    }
}
