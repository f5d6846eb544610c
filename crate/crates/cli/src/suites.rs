//! The verification suites. Each returns one record per check.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use sigma_forge_core::functionals::{
    self as fun, divergence_residuals, dsigma_identity_residual, first_variation_phi, gaussian_second_variation,
    hat_gradient, hat_w_coeffs, hat_w_eval, normalize_c1, obata_identity_residual, second_variation,
    selfadjoint_residual, soliton_suite, spectral_gap, w_eval, Functional,
};
use sigma_forge_core::geom::{point_curvature, scale_metric, unit_sphere_volume};
use sigma_forge_core::sampling::{self, SeededRng};
use sigma_forge_core::tensor;
use sigma_forge_core::wsym::{self, SymPair, WeightedSpectrum};
use sigma_forge_core::{DensityConfig, Field, Mode, PolyField, QuadSpec, SphereField, VariationPath};

use crate::config::{BackendName, ModelName, SuiteConfig, SuiteName};
use crate::report::Record;
use crate::CliError;

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    match name {
        SuiteName::Algebra => algebra(cfg),
        SuiteName::Identities => identities(cfg),
        SuiteName::Soliton => soliton(cfg),
        SuiteName::Variation => variation(cfg),
        SuiteName::Spectrum => spectrum(cfg),
        SuiteName::All => {
            let mut out = Vec::new();
            for s in SuiteName::All.expand() {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
    }
}

/// Collects records for one suite, looking tolerances up in the config.
struct Sink<'a> {
    suite: &'static str,
    cfg: &'a SuiteConfig,
    records: Vec<Record>,
}

impl<'a> Sink<'a> {
    fn new(suite: SuiteName, cfg: &'a SuiteConfig) -> Self {
        Sink { suite: suite.as_str(), cfg, records: Vec::new() }
    }

    /// `|value − reference| / norm ≤ tol`
    fn compare(&mut self, id: String, anchor: &str, value: f64, reference: f64, norm: f64, base_tol: f64) {
        let tol = self.cfg.tol(&id, base_tol);
        let residual = (value - reference).abs() / norm;
        self.records.push(Record::new(self.suite, id, anchor, value, Some(reference), residual, tol));
    }

    /// `residual ≤ tol` for a quantity without a reference value.
    fn bound(&mut self, id: String, anchor: &str, value: f64, residual: f64, base_tol: f64) {
        let tol = self.cfg.tol(&id, base_tol);
        self.records.push(Record::new(self.suite, id, anchor, value, None, residual, tol));
    }
}

fn max_into(acc: &mut f64, v: f64) {
    *acc = if v.is_nan() { f64::NAN } else { acc.max(v) };
}

// ---------------------------------------------------------------------------

fn algebra(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let mut sink = Sink::new(SuiteName::Algebra, cfg);
    let mut rng = sampling::rng(cfg.seed());
    let samples = cfg.samples.unwrap_or(1_000);
    let max_n = cfg.n.unwrap_or(8);
    let kmax = cfg.k.unwrap_or(10);
    let (mut shift, mut gen, mut gap, mut fam) = (0.0, 0.0, 0.0f64, 0.0);
    for _ in 0..samples {
        let ws = sampling::spectrum(&mut rng, max_n, 5.0);
        let s = rng.random_range(-5.0..=5.0);
        let moved = ws.shifted(s);
        let direct = wsym::weighted_sigmas(kmax, &moved);
        let coeffs = wsym::generating_coeffs(&moved, kmax);
        for k in 0..=kmax {
            let sc = moved.scale(k);
            max_into(&mut shift, (direct[k] - wsym::weighted_sigma_shifted(k, &ws, s)).abs() / sc);
            max_into(&mut gen, (direct[k] - coeffs[k]).abs() / sc);
        }
        for k in 1..=kmax {
            gap = gap.max(-wsym::newton_gap(k, &ws) / ws.scale(2 * k));
        }
        let n = ws.n();
        let k = rng.random_range(1..=kmax);
        let zero = WeightedSpectrum::new(ws.mu0(), vec![0.0; n])?;
        max_into(&mut fam, wsym::newton_gap(k, &zero).abs() / zero.scale(2 * k));
        if n > 0 {
            let k = rng.random_range(1..=n.min(kmax));
            let mut mu = ws.mu().to_vec();
            mu.iter_mut().take(n + 1 - k).for_each(|m| *m = 0.0);
            let unweighted = WeightedSpectrum::new(0.0, mu)?;
            max_into(&mut fam, wsym::newton_gap(k, &unweighted).abs() / unweighted.scale(2 * k));
        }
    }
    sink.bound("shift_formula".into(), "σ_k(μ₀+s; μ+s) = Σ_j C(n+k−j, k−j) s^{k−j} σ_j", shift, shift, 1e-12);
    sink.bound("generating_function".into(), "Σ σ_k t^k = e^{μ₀t} Π(1+μ_i t)", gen, gen, 1e-10);
    sink.bound("newton_inequality".into(), "σ_k² ≥ σ_{k−1}σ_{k+1}(k+1)/k", -gap, gap.max(0.0), 1e-12);
    sink.bound("newton_equality_families".into(), "equality for μ = 0, or μ₀ = 0 with ≥ n+1−k zeros", fam, fam, 1e-12);

    let (mut eig, mut contr, mut min_def) = (0.0, 0.0, f64::INFINITY);
    let mat_samples = (samples / 10).max(10);
    for _ in 0..mat_samples {
        let n = rng.random_range(1..=max_n.clamp(1, 6));
        let (p, _) = sampling::symmetric_with_spectrum(&mut rng, n, 2.0);
        let mu0 = rng.random_range(-2.0..=2.0);
        let sp = SymPair::new(mu0, p.clone())?;
        let sig = sp.sigmas(7);
        let e = nalgebra::SymmetricEigen::new(p.clone());
        let ws = sp.spectrum();
        for k in 0..=6 {
            let t = wsym::newton_transform(k, &sp);
            let sc = ws.scale(k + 1);
            for i in 0..n {
                let mut rest: Vec<f64> = e.eigenvalues.iter().copied().collect();
                rest.remove(i);
                let expect = wsym::weighted_sigma(k, &WeightedSpectrum::new(mu0, rest)?);
                let v = e.eigenvectors.column(i);
                max_into(&mut eig, (&t * v - v * expect).amax() / sc);
            }
            let rhs = (k + 1) as f64 * sig[k + 1] - mu0 * sig[k];
            max_into(&mut contr, ((&t * &p).trace() - rhs).abs() / sc);
        }
        let k = rng.random_range(0..=5);
        let cone = sampling::cone_point(&mut rng, k + 1, n);
        let q = sampling::orthogonal(&mut rng, n);
        let d = DMatrix::from_diagonal(&DVector::from_row_slice(cone.mu()));
        let sp = SymPair::new(cone.mu0(), &q * d * q.transpose())?;
        min_def = f64::min(min_def, wsym::definiteness(k, &sp).min_eigenvalue());
    }
    sink.bound("newton_transform_eigenvalues".into(), "T_k v_i = σ_k(μ₀; μ without μ_i) v_i", eig, eig, 1e-9);
    sink.bound("newton_transform_contraction".into(), "⟨T_k, P⟩ = (k+1)σ_{k+1} − μ₀σ_k", contr, contr, 1e-9);
    let def_id = "newton_transform_definite".to_string();
    let tol = cfg.tol(&def_id, 0.0);
    sink.records.push(Record {
        pass: min_def > -tol,
        ..Record::new("algebra", def_id, "(−1)^k T_k > 0 on the cone Γ_{k+1}", min_def, None, -min_def, tol)
    });
    Ok(sink.records)
}

// ---------------------------------------------------------------------------

/// Density on the configured backend: the literal φ if given, otherwise a
/// seeded random potential suited to the backend.
fn random_density(cfg: &SuiteConfig, rng: &mut SeededRng, default_backend: BackendName) -> Result<DensityConfig, CliError> {
    let n = cfg.n.unwrap_or(2);
    let (name, backend) = cfg.backend(default_backend, n);
    let tau = cfg.tau.unwrap_or(0.5);
    let phi: Field = match (&cfg.phi, name) {
        (Some(lit), _) => lit.to_field(name, n)?,
        (None, BackendName::Torus) => sampling::trig_field(rng, n, 3, 2, 0.3).into(),
        (None, BackendName::Euclidean) => {
            // weaker quartic in high dimension keeps the product rule affordable
            let quartic = if n <= 3 { 0.01 } else { 0.001 };
            let mut phi = PolyField::squared_norm(n).scaled(1.0 / (4.0 * tau));
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 4;
                phi = phi.add(&PolyField::from_terms(n, [(e, quartic)])?)?;
            }
            phi.into()
        }
        (None, BackendName::Sphere) => Field::Sphere(SphereField::new(sampling::poly_field(rng, n + 1, 2, 0.15))),
    };
    let order = match name {
        BackendName::Torus => cfg.grid.unwrap_or(match n {
            1 | 2 => 32,
            3 => 24,
            _ => 12,
        }),
        BackendName::Euclidean => cfg.quad_order.unwrap_or(match n {
            1 => 64,
            2 => 48,
            3 => 32,
            _ => 14,
        }),
        BackendName::Sphere => cfg.quad_order.unwrap_or(if n <= 3 { 14 } else { 8 }),
    };
    Ok(DensityConfig::new(backend, phi, tau, cfg.mode(), QuadSpec::new(order))?)
}

fn random_test_field(density: &DensityConfig, rng: &mut SeededRng) -> Field {
    let n = density.n();
    match density.phi {
        Field::Trig(_) => sampling::trig_field(rng, n, 2, 2, 0.5).into(),
        Field::Poly(_) => sampling::poly_field(rng, n, 2, 0.5).into(),
        Field::Sphere(_) => Field::Sphere(SphereField::new(sampling::poly_field(rng, n + 1, 2, 0.5))),
    }
}

fn identities(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let mut sink = Sink::new(SuiteName::Identities, cfg);
    let mut rng = sampling::rng(cfg.seed());
    let density = random_density(cfg, &mut rng, BackendName::Torus)?;
    let kmax = cfg.k.unwrap_or(4);
    let flat = density.backend.is_flat();
    if flat {
        let b = fun::bianchi_residual(&density)?;
        sink.bound("weighted_bianchi".into(), "δ_φ R̃ic = ½ dR̃", b.value, b.relative(), 1e-8);
    }
    for k in 0..=kmax {
        if flat {
            let (newton, trace) = divergence_residuals(k, &density, 0.0)?;
            sink.bound(format!("divergence_newton.k{k}"), "δ_φ T̃_k + σ̃_k ∇φ = 0", newton.value, newton.relative(), 1e-8);
            sink.bound(format!("divergence_trace_adjusted.k{k}"), "δ_φ Ẽ_k + dσ̃_k = 0", trace.value, trace.relative(), 1e-8);
            let ds = dsigma_identity_residual(k, &density, 0.0)?;
            sink.bound(format!("dsigma.k{k}"), "∇σ̃_k = σ̃_{k−1}∇Ỹ + Σ_j (−1)^j/(j+1) σ̃_{k−1−j} ∇tr R̃ic^{j+1}", ds.value, ds.relative(), 1e-8);
        }
        if k >= 1 && (flat || k <= 2) {
            let eta = random_test_field(&density, &mut rng);
            let omega = random_test_field(&density, &mut rng);
            let r = selfadjoint_residual(k, &density, &eta, &omega)?;
            sink.bound(format!("selfadjoint.k{k}"), "∫ η D̃_k ω = ∫ ω D̃_k η", r.value, r.relative(), 1e-8);
        }
        if !flat && k >= 3 && density.n() >= 2 {
            // the obstruction: at curvature data of this density, the leading
            // coefficient in |X| of the to-flat transform matches the
            // prediction and does not vanish
            let n = density.n();
            let rule = density.rule()?;
            let (mut fit, mut zero) = (0.0, 0usize);
            let trials = rule.len().min(20);
            for t in 0..trials {
                let p = rule.point(t * rule.len() / trials);
                let pc = point_curvature(&density.backend, &density.phi, density.lambda(), p)?;
                let x = DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
                let g = DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
                let (fitted, predicted) = tensor::to_flat_leading_coeff(k, &pc, &x, &g)?;
                let size = predicted.norm();
                if size <= 1e-8 * pc.scale(1) {
                    zero += 1;
                } else {
                    max_into(&mut fit, (fitted - &predicted).norm() / size);
                }
            }
            sink.bound(format!("to_flat_leading_coefficient.k{k}"), "leading |X| coefficient = (−1)^k/(k−3)! R̃ic·Rm(·,·,X,·)", fit, fit, 1e-8);
            let frac = 1.0 - zero as f64 / trials as f64;
            sink.bound(format!("nonvariational_fraction.k{k}"), "leading coefficient nonzero on curved data", frac, 1.0 - frac, 0.05);
        }
        if k == 0 {
            continue;
        }
        let ob = obata_identity_residual(k, &density)?;
        sink.bound(format!("contraction_identity.k{k}"), "⟨Ê_k, R̃ic⟩ = (k+1)σ̂_{k+1} − σ̂₁σ̂_k", ob.residual, ob.residual / ob.scale, 1e-9);
        if ob.cone_nodes > 0 {
            sink.bound(format!("cone_sign.k{k}"), "(−1)^{k+1}[(k+1)σ̂_{k+1} − σ̂₁σ̂_k] ≤ 0 on the cone", ob.sign_excess, ob.sign_excess.max(0.0), 1e-10);
        }
        sink.bound(format!("equality_kernel.k{k}"), "bracket = 0 on the cone only where R̃ic = 0", ob.equality_off_kernel as f64, ob.equality_off_kernel as f64, 0.0);
    }
    Ok(sink.records)
}

// ---------------------------------------------------------------------------

fn soliton_model(cfg: &SuiteConfig) -> ModelName {
    cfg.model.unwrap_or(if cfg.backend == Some(BackendName::Sphere) { ModelName::Sphere } else { ModelName::Gaussian })
}

/// The normalized model soliton.
fn model_density(cfg: &SuiteConfig, model: ModelName) -> Result<DensityConfig, CliError> {
    let d = match model {
        ModelName::Gaussian => {
            let n = cfg.n.unwrap_or(2);
            let tau = cfg.tau.unwrap_or(0.5);
            let phi = PolyField::squared_norm(n).scaled(1.0 / (4.0 * tau));
            DensityConfig::new(
                sigma_forge_core::Backend::euclidean(n),
                phi.into(),
                tau,
                cfg.mode(),
                QuadSpec::new(cfg.quad_order.unwrap_or(10)),
            )?
        }
        ModelName::Sphere => {
            let n = cfg.n.unwrap_or(2);
            if n < 2 {
                return Err(CliError::Config("the sphere model needs n >= 2".into()));
            }
            let tau = cfg.tau.unwrap_or(1.0 / (2.0 * (n as f64 - 1.0)));
            DensityConfig::new(
                sigma_forge_core::Backend::sphere(n),
                SphereField::constant(n, 0.0).into(),
                tau,
                cfg.mode(),
                QuadSpec::new(cfg.quad_order.unwrap_or(8)),
            )?
        }
    };
    Ok(normalize_c1(&d)?)
}

fn soliton(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let mut sink = Sink::new(SuiteName::Soliton, cfg);
    let model = soliton_model(cfg);
    let density = model_density(cfg, model)?;
    if density.mode != Mode::Shrinking {
        return Err(CliError::Config("the soliton suite needs --mode shrinking and no --lambda".into()));
    }
    let r = soliton_suite(&density)?;
    let n = density.n() as f64;
    let tau = density.tau;
    sink.bound("soliton_equation".into(), "R̃ic_φ = Ric + ∇²φ − g/2τ = 0", r.soliton_residual, r.soliton_residual, 1e-12);
    sink.bound("sigma_powers".into(), "σ̃_k = σ̃₁^k / k!", r.power_residual, r.power_residual, 1e-10);
    sink.bound("sigma1_sign".into(), "σ̃₁ ≤ 0", r.sigma1_max, r.sigma1_max.max(0.0), 1e-12);
    sink.bound("potential_equation".into(), "−Δ_φ φ₀ = φ₀/τ", r.potential_residual, r.potential_residual, 1e-9);
    match model {
        ModelName::Gaussian => {
            sink.compare("phi0_squared".into(), "∫ φ₀² (4πτ)^{-n/2} e^{-φ} = n/2", r.phi0_sq, r.phi0_sq_reference, 1.0, 1e-8)
        }
        ModelName::Sphere => {
            let excess = (r.phi0_sq - r.phi0_sq_reference).max(0.0);
            sink.bound("phi0_squared".into(), "∫ φ₀² (4πτ)^{-n/2} e^{-φ} ≤ n/2", r.phi0_sq, excess, 1e-8)
        }
    }
    let rel = |x: f64| x.abs().max(1.0);
    sink.compare("sigma1_integral".into(), "∫ σ₁ (4πτ)^{-n/2} e^{-φ} = n/4τ", r.sigma1_total, r.sigma1_reference, rel(r.sigma1_reference), 1e-9);
    sink.compare(
        "sigma2_integral".into(),
        "∫ σ₂ (4πτ)^{-n/2} e^{-φ} = n(n−4)/32τ² + ∫φ₀²/8τ²",
        r.sigma2_total,
        r.sigma2_reference,
        rel(r.sigma2_reference),
        1e-9,
    );
    if model == ModelName::Sphere {
        let c = density.phi.eval(&{
            let mut p = vec![0.0; density.n() + 1];
            p[0] = 1.0;
            p
        });
        let expect = unit_sphere_volume(density.n()).ln() - n / 2.0 * (4.0 * std::f64::consts::PI * tau).ln();
        sink.compare("normalizing_constant".into(), "φ = ln Vol(Sⁿ) − (n/2) ln 4πτ", c, expect, 1.0, 1e-9);
    }
    let kmax = cfg.k.unwrap_or(4);
    for k in 1..=kmax.min(2) {
        if k == 2 && !density.backend.is_flat() {
            break;
        }
        let c = fun::critical_point_residual(k, &density)?;
        sink.bound(format!("critical_point.k{k}"), "σ̃_k − λσ̃_{k−1} is constant at a critical point", c.stddev, c.stddev, 1e-9);
    }
    Ok(sink.records)
}

// ---------------------------------------------------------------------------

fn richardson_first(f: impl Fn(f64) -> Result<f64, CliError>) -> Result<f64, CliError> {
    let d = |h: f64| -> Result<f64, CliError> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let (a, b) = (d(1e-3)?, d(5e-4)?);
    Ok((4.0 * b - a) / 3.0)
}

fn variation(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let mut sink = Sink::new(SuiteName::Variation, cfg);
    let mut rng = sampling::rng(cfg.seed());
    let kmax = cfg.k.unwrap_or(4);
    let samples = cfg.samples.unwrap_or(20);
    let h = 2e-3;

    for k in 1..=kmax {
        let c = hat_w_coeffs(k);
        let r = c.recursion_residual();
        sink.bound(format!("hat_coefficients.k{k}"), "c_m = c_{m+1}/2 + (−½)^{k−m}/(k−m)!", r, r, 1e-14);
    }

    // first variations on a generic density
    let density = random_density(cfg, &mut rng, BackendName::Torus)?;
    let top = if density.backend.is_flat() { kmax } else { kmax.min(2) };
    for k in 1..=top {
        let psi = random_test_field(&density, &mut rng).add_constant(0.3);
        let exact = first_variation_phi(k, &density, &psi)?;
        let fd = richardson_first(|t| Ok(w_eval(k, &density.with_phi(density.phi.axpy(t, &psi)?)?)?))?;
        sink.compare(format!("first_variation.k{k}"), "d/dt 𝒲_k = −∫ τ^k (σ̃_k − λσ̃_{k−1}) ψ", exact, fd, 1.0 + exact.abs(), 1e-6);
        if density.backend.is_flat() {
            let exact = hat_gradient(k, &density, &psi)?;
            let fd = richardson_first(|t| Ok(hat_w_eval(k, &density.with_phi(density.phi.axpy(t, &psi)?)?)?))?;
            sink.compare(format!("hat_gradient.k{k}"), "d/dt Ŵ_k = −∫ τ^k σ̂_k ψ", exact, fd, 1.0 + exact.abs(), 1e-6);
        }
    }
    if density.backend.is_flat() {
        let mut worst = 0.0;
        for c in [0.5, 2.0, 5.0] {
            let scaled = density.with_backend(scale_metric(&density.backend, c)?)?;
            let shrunk = density.with_tau(density.tau / c)?;
            for k in 0..=kmax {
                let (a, b) = (w_eval(k, &scaled)?, w_eval(k, &shrunk)?);
                max_into(&mut worst, (a - b).abs() / (1.0 + b.abs()));
            }
        }
        sink.bound("scale_invariance".into(), "𝒲_k(cg, φ, τ) = 𝒲_k(g, φ, τ/c)", worst, worst, 1e-10);
    }

    // second variations at the model soliton
    let model = soliton_model(cfg);
    let base = SuiteConfig { mode: None, lambda: None, ..cfg.clone() };
    match model {
        ModelName::Gaussian => {
            let sol = model_density(&SuiteConfig { n: Some(cfg.n.unwrap_or(1)), quad_order: Some(cfg.quad_order.unwrap_or(8)), ..base }, model)?;
            let n = sol.n();
            let (mut sign, mut closed, mut linear) = (f64::NEG_INFINITY, 0.0, 0.0f64);
            for i in 0..samples {
                let k = 1 + i % kmax.max(1);
                let psi: Field = sampling::poly_field(&mut rng, n, 2, 0.5).into();
                let path = VariationPath { psi: psi.clone(), alpha: 0.0, renormalize: true };
                let v = second_variation(Functional::HatW(k), &sol, &path, h)?;
                sign = sign.max(if k % 2 == 0 { v } else { -v });
                let cf = gaussian_second_variation(k, &sol, &psi)?;
                max_into(&mut closed, (v - cf).abs() / cf.abs().max(1e-3));
                let lin: Field = sampling::poly_field(&mut rng, n, 1, 0.7).into();
                let path = VariationPath { psi: lin, alpha: 0.0, renormalize: true };
                linear = linear.max(second_variation(Functional::HatW(k), &sol, &path, h)?.abs());
            }
            sink.bound("hat_second_variation_sign".into(), "(−1)^k d²Ŵ_k ≤ 0 at the Gaussian", sign, sign.max(0.0), 1e-6);
            sink.bound("hat_second_variation_closed_form".into(), "d²Ŵ_k = (−½)^{k−1} τ/(k−1)! ∫ |∇ψ₀|² − ψ₀²/2τ", closed, closed, 1e-6);
            sink.bound("hat_second_variation_linear".into(), "d²Ŵ_k = 0 for affine ψ", linear, linear, 1e-6);
            let worked = model_density(
                &SuiteConfig { n: Some(1), tau: Some(0.5), quad_order: Some(8), mode: None, lambda: None, ..Default::default() },
                ModelName::Gaussian,
            )?;
            let psi: Field = PolyField::from_terms(1, [(vec![2], 1.0)])?.into();
            let v = second_variation(Functional::HatW(2), &worked, &VariationPath { psi, alpha: 0.0, renormalize: true }, h)?;
            sink.compare("hat_second_variation_x2".into(), "d²Ŵ₂ at n = 1, τ = ½, ψ = x²", v, -0.5, 1.0, 1e-6);
        }
        ModelName::Sphere => {
            let sol = model_density(&SuiteConfig { n: Some(cfg.n.unwrap_or(2)), quad_order: Some(cfg.quad_order.unwrap_or(10)), ..base }, model)?;
            let n = sol.n();
            let (mut w1, mut w2) = (f64::INFINITY, f64::NEG_INFINITY);
            for _ in 0..samples {
                let psi = Field::Sphere(sampling::harmonic_sphere_field(&mut rng, n, 0.5));
                let alpha = rng.random_range(-0.3..=0.3);
                let path = VariationPath { psi, alpha, renormalize: true };
                w1 = w1.min(second_variation(Functional::W(1), &sol, &path, h)?);
                w2 = w2.max(second_variation(Functional::W(2), &sol, &path, h)?);
            }
            sink.bound("second_variation_w1".into(), "d²𝒲₁ ≥ 0 at the round sphere", w1, (-w1).max(0.0), 1e-6);
            sink.bound("second_variation_w2".into(), "d²𝒲₂ ≤ 0 at the round sphere", w2, w2.max(0.0), 1e-6);
        }
    }
    Ok(sink.records)
}

// ---------------------------------------------------------------------------

fn spectrum(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let mut sink = Sink::new(SuiteName::Spectrum, cfg);
    let taus = match cfg.tau {
        Some(t) => vec![t],
        None => vec![0.25, 0.5, 1.0],
    };
    for tau in taus {
        let c = SuiteConfig { n: Some(1), tau: Some(tau), mode: None, lambda: None, quad_order: Some(cfg.quad_order.unwrap_or(12)), ..Default::default() };
        let d = model_density(&c, ModelName::Gaussian)?;
        let g = spectral_gap(&d, 8)?;
        sink.compare(format!("spectral_gap.tau{tau}"), "λ₁(−Δ_φ) = 1/2τ on the 1-D Gaussian", g, 0.5 / tau, 1.0, 1e-10);
    }
    Ok(sink.records)
}
