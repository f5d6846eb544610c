//! Exactly differentiable scalar fields.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

/// Value and coordinate derivatives through order three at a point.
/// `third[(i*n + j)*n + l] = ∂_i∂_j∂_l f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
    pub third: Option<Vec<f64>>,
}

impl Jet {
    pub fn third(&self, i: usize, j: usize, l: usize) -> f64 {
        let n = self.grad.len();
        self.third.as_ref().map_or(0.0, |t| t[(i * n + j) * n + l])
    }
}

fn fill_sym3(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Vec<f64> {
    let mut t = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            for l in j..n {
                let v = f(i, j, l);
                for (a, b, c) in [(i, j, l), (i, l, j), (j, i, l), (j, l, i), (l, i, j), (l, j, i)] {
                    t[(a * n + b) * n + c] = v;
                }
            }
        }
    }
    t
}

/// Multivariate polynomial on ℝ^dim.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyField {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl PolyField {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::zero(dim).add_constant(c)
    }

    /// `x_i`
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_terms(dim, [(e, 1.0)]).expect("valid coordinate")
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.len() });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            out.push(e, c);
        }
        Ok(out)
    }

    fn push(&mut self, e: Vec<u32>, c: f64) {
        let v = self.terms.get(&e).copied().unwrap_or(0.0) + c;
        if v == 0.0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    /// `Σ_i x_i²`
    pub fn squared_norm(dim: usize) -> Self {
        let mut out = Self::zero(dim);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 2;
            out.push(e, 1.0);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyField) -> Result<PolyField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.push(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> PolyField {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.push(e.clone(), c * s);
        }
        out
    }

    pub fn add_constant(&self, c: f64) -> PolyField {
        let mut out = self.clone();
        out.push(vec![0; self.dim], c);
        out
    }

    pub fn mul(&self, other: &PolyField) -> Result<PolyField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.push(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// `∂_i`
    pub fn derivative(&self, i: usize) -> PolyField {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.push(d, c * e[i] as f64);
            }
        }
        out
    }

    /// Splits off the part of degree ≤ 2 as `½ xᵀA x + bᵀx + c`.
    pub fn quadratic_part(&self) -> (DMatrix<f64>, DVector<f64>, f64) {
        let n = self.dim;
        let mut a = DMatrix::zeros(n, n);
        let mut b = DVector::zeros(n);
        let mut c = 0.0;
        for (e, &v) in &self.terms {
            let nz: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            match e.iter().sum::<u32>() {
                0 => c += v,
                1 => b[nz[0]] += v,
                2 if nz.len() == 1 => a[(nz[0], nz[0])] += 2.0 * v,
                2 => {
                    a[(nz[0], nz[1])] += v;
                    a[(nz[1], nz[0])] += v;
                }
                _ => {}
            }
        }
        (a, b, c)
    }

    fn powers(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let maxe = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        x.iter()
            .map(|&xi| {
                let mut p = vec![1.0; maxe + 1];
                for m in 1..=maxe {
                    p[m] = p[m - 1] * xi;
                }
                p
            })
            .collect()
    }

    /// Mixed partial with derivative multiplicities `d`, from cached powers.
    fn partial(&self, d: &[u32], pw: &[Vec<f64>]) -> f64 {
        let mut acc = 0.0;
        'terms: for (e, &c) in &self.terms {
            let mut v = c;
            for i in 0..self.dim {
                if e[i] < d[i] {
                    continue 'terms;
                }
                for m in 0..d[i] {
                    v *= (e[i] - m) as f64;
                }
                v *= pw[i][(e[i] - d[i]) as usize];
            }
            acc += v;
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let pw = self.powers(x);
        self.partial(&vec![0; self.dim], &pw)
    }

    pub fn jet(&self, x: &[f64], with_third: bool) -> Jet {
        let n = self.dim;
        let pw = self.powers(x);
        let mut d = vec![0u32; n];
        let value = self.partial(&d, &pw);
        let grad = DVector::from_fn(n, |i, _| {
            let mut d = vec![0u32; n];
            d[i] = 1;
            self.partial(&d, &pw)
        });
        let mut hess = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                d.iter_mut().for_each(|v| *v = 0);
                d[i] += 1;
                d[j] += 1;
                let v = self.partial(&d, &pw);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        let third = with_third.then(|| {
            fill_sym3(n, |i, j, l| {
                let mut d = vec![0u32; n];
                d[i] += 1;
                d[j] += 1;
                d[l] += 1;
                self.partial(&d, &pw)
            })
        });
        Jet { value, grad, hess, third }
    }
}

/// One mode `a cos(k·x) + b sin(k·x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm {
    pub freq: Vec<i32>,
    pub cos: f64,
    pub sin: f64,
}

/// Finite real Fourier series on the torus [0, 2π)^dim.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigField {
    dim: usize,
    terms: Vec<TrigTerm>,
}

impl TrigField {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::zero(dim).add_constant(c)
    }

    pub fn new(dim: usize, terms: Vec<TrigTerm>) -> Result<Self> {
        for t in &terms {
            if t.freq.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.freq.len() });
            }
            if !t.cos.is_finite() || !t.sin.is_finite() {
                return Err(Error::NonFinite("trig coefficient"));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn max_frequency(&self) -> i32 {
        self.terms.iter().flat_map(|t| t.freq.iter().map(|k| k.abs())).max().unwrap_or(0)
    }

    pub fn add(&self, other: &TrigField) -> Result<TrigField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { dim: self.dim, terms })
    }

    pub fn scaled(&self, s: f64) -> TrigField {
        let terms = self
            .terms
            .iter()
            .map(|t| TrigTerm { freq: t.freq.clone(), cos: t.cos * s, sin: t.sin * s })
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn add_constant(&self, c: f64) -> TrigField {
        let mut terms = self.terms.clone();
        terms.push(TrigTerm { freq: vec![0; self.dim], cos: c, sin: 0.0 });
        Self { dim: self.dim, terms }
    }

    /// `∂_i`
    pub fn derivative(&self, i: usize) -> TrigField {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.freq[i] != 0)
            .map(|t| {
                let k = t.freq[i] as f64;
                TrigTerm { freq: t.freq.clone(), cos: k * t.sin, sin: -k * t.cos }
            })
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let th: f64 = t.freq.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum();
                t.cos * th.cos() + t.sin * th.sin()
            })
            .sum()
    }

    pub fn jet(&self, x: &[f64], with_third: bool) -> Jet {
        let n = self.dim;
        let mut value = 0.0;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        let mut third = with_third.then(|| vec![0.0; n * n * n]);
        for t in &self.terms {
            let k: Vec<f64> = t.freq.iter().map(|&v| v as f64).collect();
            let th: f64 = k.iter().zip(x).map(|(a, b)| a * b).sum();
            let (s, c) = th.sin_cos();
            let even = t.cos * c + t.sin * s;
            let odd = -t.cos * s + t.sin * c;
            value += even;
            for i in 0..n {
                grad[i] += k[i] * odd;
                for j in 0..n {
                    hess[(i, j)] -= k[i] * k[j] * even;
                }
            }
            if let Some(tt) = third.as_mut() {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            tt[(i * n + j) * n + l] -= k[i] * k[j] * k[l] * odd;
                        }
                    }
                }
            }
        }
        Jet { value, grad, hess, third }
    }
}

/// Polynomial on ℝ^{n+1} restricted to the unit sphere Sⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereField {
    ambient: PolyField,
}

impl SphereField {
    pub fn new(ambient: PolyField) -> Self {
        Self { ambient }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(PolyField::constant(n + 1, c))
    }

    /// Intrinsic dimension n of the sphere.
    pub fn n(&self) -> usize {
        self.ambient.dim() - 1
    }

    pub fn ambient(&self) -> &PolyField {
        &self.ambient
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        self.ambient.eval(p)
    }
}

/// A scalar field of one of the supported kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Poly(PolyField),
    Trig(TrigField),
    Sphere(SphereField),
}

impl Field {
    pub fn add(&self, other: &Field) -> Result<Field> {
        match (self, other) {
            (Field::Poly(a), Field::Poly(b)) => Ok(Field::Poly(a.add(b)?)),
            (Field::Trig(a), Field::Trig(b)) => Ok(Field::Trig(a.add(b)?)),
            (Field::Sphere(a), Field::Sphere(b)) => Ok(Field::Sphere(SphereField::new(a.ambient.add(&b.ambient)?))),
            _ => Err(Error::UnsupportedPairing),
        }
    }

    pub fn scaled(&self, s: f64) -> Field {
        match self {
            Field::Poly(a) => Field::Poly(a.scaled(s)),
            Field::Trig(a) => Field::Trig(a.scaled(s)),
            Field::Sphere(a) => Field::Sphere(SphereField::new(a.ambient.scaled(s))),
        }
    }

    pub fn add_constant(&self, c: f64) -> Field {
        match self {
            Field::Poly(a) => Field::Poly(a.add_constant(c)),
            Field::Trig(a) => Field::Trig(a.add_constant(c)),
            Field::Sphere(a) => Field::Sphere(SphereField::new(a.ambient.add_constant(c))),
        }
    }

    /// `self + t·other`
    pub fn axpy(&self, t: f64, other: &Field) -> Result<Field> {
        self.add(&other.scaled(t))
    }

    /// Value at a point in the backend's coordinates (ambient ones for spheres).
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Field::Poly(a) => a.eval(x),
            Field::Trig(a) => a.eval(x),
            Field::Sphere(a) => a.eval(x),
        }
    }

    /// Length of a coordinate point accepted by `eval`.
    pub fn coord_dim(&self) -> usize {
        match self {
            Field::Poly(a) => a.dim(),
            Field::Trig(a) => a.dim(),
            Field::Sphere(a) => a.ambient.dim(),
        }
    }
}

impl From<PolyField> for Field {
    fn from(f: PolyField) -> Self {
        Field::Poly(f)
    }
}

impl From<TrigField> for Field {
    fn from(f: TrigField) -> Self {
        Field::Trig(f)
    }
}

impl From<SphereField> for Field {
    fn from(f: SphereField) -> Self {
        Field::Sphere(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_poly() -> PolyField {
        PolyField::from_terms(
            2,
            [(vec![3, 1], 0.5), (vec![0, 2], -1.0), (vec![1, 0], 2.0), (vec![2, 2], 0.25), (vec![0, 0], 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn derivatives_commute() {
        let p = sample_poly();
        assert_eq!(p.derivative(0).derivative(1), p.derivative(1).derivative(0));
        let t = TrigField::new(2, vec![TrigTerm { freq: vec![1, 2], cos: 0.3, sin: -0.2 }]).unwrap();
        assert_eq!(t.derivative(0).derivative(1), t.derivative(1).derivative(0));
    }

    #[test]
    fn poly_jet_matches_derivative_fields() {
        let p = sample_poly();
        let x = [0.7, -1.3];
        let j = p.jet(&x, true);
        assert!((j.value - p.eval(&x)).abs() < 1e-14);
        for i in 0..2 {
            assert!((j.grad[i] - p.derivative(i).eval(&x)).abs() < 1e-13);
            for k in 0..2 {
                assert!((j.hess[(i, k)] - p.derivative(i).derivative(k).eval(&x)).abs() < 1e-13);
                for l in 0..2 {
                    let d3 = p.derivative(i).derivative(k).derivative(l).eval(&x);
                    assert!((j.third(i, k, l) - d3).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn trig_jet_matches_derivative_fields() {
        let t = TrigField::new(
            2,
            vec![
                TrigTerm { freq: vec![1, 0], cos: 0.3, sin: 0.0 },
                TrigTerm { freq: vec![1, 1], cos: 0.0, sin: 0.2 },
                TrigTerm { freq: vec![2, -1], cos: -0.1, sin: 0.4 },
            ],
        )
        .unwrap();
        let x = [0.4, 2.1];
        let j = t.jet(&x, true);
        for i in 0..2 {
            assert!((j.grad[i] - t.derivative(i).eval(&x)).abs() < 1e-14);
            for k in 0..2 {
                assert!((j.hess[(i, k)] - t.derivative(i).derivative(k).eval(&x)).abs() < 1e-14);
                for l in 0..2 {
                    let d3 = t.derivative(i).derivative(k).derivative(l).eval(&x);
                    assert!((j.third(i, k, l) - d3).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn quadratic_part_split() {
        // ½ xᵀAx + bᵀx + c with A = [[2, 1], [1, -2]]
        let p = PolyField::from_terms(
            2,
            [(vec![2, 0], 1.0), (vec![1, 1], 1.0), (vec![0, 2], -1.0), (vec![0, 1], 3.0), (vec![0, 0], 0.5), (vec![4, 0], 9.0)],
        )
        .unwrap();
        let (a, b, c) = p.quadratic_part();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, -2.0]));
        assert_eq!(b, DVector::from_vec(vec![0.0, 3.0]));
        assert_eq!(c, 0.5);
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let p = PolyField::coordinate(2, 0);
        let z = p.add(&p.scaled(-1.0)).unwrap();
        assert_eq!(z, PolyField::zero(2));
        let sq = p.mul(&p).unwrap();
        assert_eq!(sq.degree(), 2);
    }
}
