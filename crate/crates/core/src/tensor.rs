//! Pointwise tensor algebra in an orthonormal frame. The frame metric is the
//! identity, so index position never matters.

use crate::error::{Error, Result};
use crate::wsym::{self, WeightedSpectrum};
use nalgebra::{DMatrix, DVector};

/// Symmetric 2-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Sym2(DMatrix<f64>);

impl Sym2 {
    /// Stores the symmetric part of `m`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(Self(wsym::symmetrize(&m)))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diag(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_row_slice(d)))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        wsym::sym_eigenvalues(&self.0)
    }

    /// `⟨A, B⟩ = tr AB`
    pub fn dot(&self, other: &Sym2) -> f64 {
        self.0.component_mul(&other.0).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub(crate) fn from_sym_unchecked(m: DMatrix<f64>) -> Self {
        Self(m)
    }
}

/// 3-tensor antisymmetric in its first two slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Cotton3 {
    n: usize,
    data: Vec<f64>,
}

impl Cotton3 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n] }
    }

    /// `C[a][b][c] = ½ (f(a,b,c) − f(b,a,c))`
    pub fn antisymmetrized(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(n);
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    let v = 0.5 * (f(a, b, c) - f(b, a, c));
                    out.data[(a * n + b) * n + c] = v;
                    out.data[(b * n + a) * n + c] = -v;
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `self − t·other`
    pub fn sub_scaled(&self, t: f64, other: &Cotton3) -> Cotton3 {
        Cotton3 {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - t * b).collect(),
        }
    }
}

/// Algebraic curvature tensor R[i][j][k][l] with the convention that the unit
/// sphere has `R_ijkl = δ_ik δ_jl − δ_il δ_jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct Curv4 {
    n: usize,
    data: Vec<f64>,
}

impl Curv4 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n.pow(4)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Writes every entry from the canonical representatives (i<j, k<l,
    /// (i,j) ≤ (k,l)) so the antisymmetries and pair symmetry hold exactly.
    fn canonical_fill(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    for l in k + 1..n {
                        if (i, j) > (k, l) {
                            continue;
                        }
                        let v = f(i, j, k, l);
                        for (a, b, c, d, s) in [
                            (i, j, k, l, 1.0),
                            (j, i, k, l, -1.0),
                            (i, j, l, k, -1.0),
                            (j, i, l, k, 1.0),
                            (k, l, i, j, 1.0),
                            (l, k, i, j, -1.0),
                            (k, l, j, i, -1.0),
                            (l, k, j, i, 1.0),
                        ] {
                            let id = out.idx(a, b, c, d);
                            out.data[id] = s * v;
                        }
                    }
                }
            }
        }
        out
    }

    /// Projects an arbitrary 4-tensor onto the space of algebraic curvature
    /// tensors: average over the symmetry group, then remove the totally
    /// antisymmetric (first Bianchi) part.
    pub fn project(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let sym = |i, j, k, l| {
            (f(i, j, k, l) - f(j, i, k, l) - f(i, j, l, k) + f(j, i, l, k)
                + f(k, l, i, j)
                - f(l, k, i, j)
                - f(k, l, j, i)
                + f(l, k, j, i))
                / 8.0
        };
        let a = Self::canonical_fill(n, sym);
        Self::canonical_fill(n, |i, j, k, l| {
            let b = (a.get(i, j, k, l) + a.get(j, k, i, l) + a.get(k, i, j, l)) / 3.0;
            a.get(i, j, k, l) - b
        })
    }

    /// Accepts raw components only if they already satisfy all curvature
    /// identities to `1e-12` relative.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n.pow(4) {
            return Err(Error::DimensionMismatch { expected: n.pow(4), found: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("curvature tensor"));
        }
        let raw = Self { n, data };
        let residual = raw.symmetry_residual();
        if residual > 1e-12 * (1.0 + raw.max_abs()) {
            return Err(Error::CurvatureSymmetry { residual });
        }
        Ok(Self::canonical_fill(n, |i, j, k, l| raw.get(i, j, k, l)))
    }

    /// `κ (δ_ik δ_jl − δ_il δ_jk)`
    pub fn constant_curvature(n: usize, kappa: f64) -> Self {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::canonical_fill(n, |i, j, k, l| kappa * (d(i, k) * d(j, l) - d(i, l) * d(j, k)))
    }

    /// Kulkarni–Nomizu product `(h ⊙ q)_ijkl = h_ik q_jl + h_jl q_ik − h_il q_jk − h_jk q_il`.
    pub fn kulkarni_nomizu(h: &Sym2, q: &Sym2) -> Result<Self> {
        if h.n() != q.n() {
            return Err(Error::DimensionMismatch { expected: h.n(), found: q.n() });
        }
        let (h, q) = (h.matrix(), q.matrix());
        Ok(Self::canonical_fill(h.nrows(), |i, j, k, l| {
            h[(i, k)] * q[(j, l)] + h[(j, l)] * q[(i, k)] - h[(i, l)] * q[(j, k)] - h[(j, k)] * q[(i, l)]
        }))
    }

    pub fn add(&self, other: &Curv4) -> Curv4 {
        Curv4 { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, s: f64) -> Curv4 {
        Curv4 { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// Largest violation of the antisymmetries, pair symmetry and first Bianchi identity.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs())
                            .max((r + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn ricci(&self) -> Sym2 {
        rm_dot(self, &Sym2::identity(self.n)).expect("same dimension")
    }

    /// `Rm(·,·,X,·)`: `C[a][b][c] = Σ_m R[a][b][m][c] X_m`
    pub fn contract_third(&self, x: &DVector<f64>) -> Result<Cotton3> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let n = self.n;
        Ok(Cotton3::antisymmetrized(n, |a, b, c| {
            (0..n).map(|m| self.get(a, b, m, c) * x[m]).sum()
        }))
    }
}

/// Curvature snapshot at a point in an orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCurvature {
    /// weight scalar Ỹ_φ
    pub y: f64,
    /// modified Bakry–Émery Ricci tensor
    pub ric: Sym2,
    /// weighted Cotton tensor
    pub cotton: Cotton3,
    pub riem: Curv4,
}

impl PointCurvature {
    pub fn new(y: f64, ric: Sym2, cotton: Cotton3, riem: Curv4) -> Result<Self> {
        let n = ric.n();
        for found in [cotton.n(), riem.n()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        if !y.is_finite() {
            return Err(Error::NonFinite("weight scalar"));
        }
        Ok(Self { y, ric, cotton, riem })
    }

    /// Flat data: zero Cotton and Riemann tensors.
    pub fn flat(y: f64, ric: Sym2) -> Self {
        let n = ric.n();
        Self { y, ric, cotton: Cotton3::zeros(n), riem: Curv4::zeros(n) }
    }

    pub fn n(&self) -> usize {
        self.ric.n()
    }

    pub fn spectrum(&self) -> WeightedSpectrum {
        WeightedSpectrum::new(self.y, self.ric.eigenvalues()).expect("finite curvature data")
    }

    /// `(|Ỹ| + Σ|eig R̃ic| + 1)^k`
    pub fn scale(&self, k: usize) -> f64 {
        self.spectrum().scale(k)
    }

    pub fn with_y(&self, y: f64) -> Self {
        Self { y, ..self.clone() }
    }
}

/// `(Rm·S)[x][y] = Σ_{i,j} R[i][x][j][y] S[i][j]`
pub fn rm_dot(riem: &Curv4, s: &Sym2) -> Result<Sym2> {
    let n = riem.n();
    if s.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.n() });
    }
    let s = s.matrix();
    let m = DMatrix::from_fn(n, n, |x, y| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += riem.get(i, x, j, y) * s[(i, j)];
            }
        }
        acc
    });
    Sym2::new(m)
}

/// `v[c] = Σ_{a,b} A[a][b] dB[a][c][b]`
pub fn a_dot_db(a: &Sym2, db: &Cotton3) -> Result<DVector<f64>> {
    let n = a.n();
    if db.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: db.n() });
    }
    let a = a.matrix();
    Ok(DVector::from_fn(n, |c, _| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += a[(i, j)] * db.get(i, c, j);
            }
        }
        acc
    }))
}

/// σ̃₀…σ̃_kmax at the point.
pub fn sigmas_pt(kmax: usize, pc: &PointCurvature) -> Vec<f64> {
    wsym::weighted_sigmas(kmax, &pc.spectrum())
}

pub fn sigma_pt(k: usize, pc: &PointCurvature) -> f64 {
    sigmas_pt(k, pc)[k]
}

/// `T̃_k = Σ_j (-1)^j σ̃_{k-j} R̃ic^j`
pub fn newton_pt(k: usize, pc: &PointCurvature) -> Sym2 {
    Sym2::from_sym_unchecked(wsym::newton_from_sigmas(&sigmas_pt(k, pc), pc.ric.matrix(), k))
}

/// `Ẽ_k = T̃_k − σ̃_k I`
pub fn e_pt(k: usize, pc: &PointCurvature) -> Sym2 {
    let sig = sigmas_pt(k, pc);
    let t = wsym::newton_from_sigmas(&sig, pc.ric.matrix(), k);
    let n = pc.n();
    Sym2::from_sym_unchecked(t - DMatrix::identity(n, n) * sig[k])
}

/// `S̃_k = Σ_{j=0}^{k-3} (-1)^j T̃_{k-3-j} (R̃ic^{j+1} · dR̃ic)`; zero for k ≤ 2.
pub fn s_tensor(k: usize, pc: &PointCurvature) -> DVector<f64> {
    let n = pc.n();
    let mut out = DVector::zeros(n);
    if k < 3 {
        return out;
    }
    let sig = sigmas_pt(k - 3, pc);
    let ric = pc.ric.matrix();
    let mut pow = DMatrix::identity(n, n);
    for j in 0..=k - 3 {
        pow = &pow * ric;
        let v = a_dot_db(&Sym2::from_sym_unchecked(pow.clone()), &pc.cotton).expect("same dimension");
        let m = k - 3 - j;
        let t = wsym::newton_from_sigmas(&sig[..=m], ric, m);
        let tv = t * v;
        if j % 2 == 0 {
            out += tv;
        } else {
            out -= tv;
        }
    }
    out
}

/// Tracks S̃_k along `Ỹ_t = Ỹ − t⟨∇φ, X⟩ − t²`, `dR̃ic_t = dR̃ic − t Rm(·,·,X,·)`
/// (R̃ic fixed). S̃_k is then a vector polynomial of degree 2k − 5 in t; this
/// fits it from 2k − 4 Chebyshev samples and returns the fitted top
/// coefficient together with the closed form `(-1)^k/(k-3)! · R̃ic·Rm(·,·,X,·)`.
pub fn to_flat_leading_coeff(
    k: usize,
    pc: &PointCurvature,
    x: &DVector<f64>,
    grad_phi: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("to_flat_leading_coeff needs k >= 3, got {k}")));
    }
    let n = pc.n();
    if grad_phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grad_phi.len() });
    }
    let rx = pc.riem.contract_third(x)?;
    let deg = 2 * k - 5;
    let m = deg + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos())
        .collect();
    let gx = grad_phi.dot(x);
    let mut samples = DMatrix::zeros(m, n);
    for (row, &t) in nodes.iter().enumerate() {
        let pt = PointCurvature {
            y: pc.y - t * gx - t * t,
            ric: pc.ric.clone(),
            cotton: pc.cotton.sub_scaled(t, &rx),
            riem: pc.riem.clone(),
        };
        samples.set_row(row, &s_tensor(k, &pt).transpose());
    }
    let vander = DMatrix::from_fn(m, m, |i, j| nodes[i].powi(j as i32));
    let coeffs = vander.lu().solve(&samples).ok_or(Error::FitFailure("singular Vandermonde system"))?;
    let fitted = coeffs.row(deg).transpose();
    let fact: f64 = (1..=k - 3).map(|i| i as f64).product();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let predicted = a_dot_db(&pc.ric, &rx)? * (sign / fact);
    Ok((fitted, predicted))
}
