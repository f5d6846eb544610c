use nalgebra::DMatrix;
use proptest::prelude::*;
use sigma_forge_core::tensor::{self, PointCurvature};
use sigma_forge_core::wsym::{self, SymPair, WeightedSpectrum};
use sigma_forge_core::{sampling, Sym2};

fn spectrum(max_n: usize) -> impl Strategy<Value = WeightedSpectrum> {
    (-5.0..5.0f64, prop::collection::vec(-5.0..5.0f64, 0..=max_n))
        .prop_map(|(mu0, mu)| WeightedSpectrum::new(mu0, mu).unwrap())
}

proptest! {
    #[test]
    fn sigmas_ignore_eigenvalue_order(ws in spectrum(7), seed in any::<u64>()) {
        let mut mu = ws.mu().to_vec();
        let n = mu.len();
        if n > 1 {
            mu.rotate_left((seed as usize) % n);
            mu.swap(0, n - 1);
        }
        let perm = WeightedSpectrum::new(ws.mu0(), mu).unwrap();
        let a = wsym::weighted_sigmas(8, &ws);
        let b = wsym::weighted_sigmas(8, &perm);
        for k in 0..=8 {
            prop_assert!((a[k] - b[k]).abs() <= 1e-12 * ws.scale(k));
        }
    }

    #[test]
    fn sigma_is_homogeneous(ws in spectrum(6), t in -3.0..3.0f64) {
        let mu: Vec<f64> = ws.mu().iter().map(|m| t * m).collect();
        let scaled = WeightedSpectrum::new(t * ws.mu0(), mu).unwrap();
        for k in 0..=7 {
            let lhs = wsym::weighted_sigma(k, &scaled);
            let rhs = t.powi(k as i32) * wsym::weighted_sigma(k, &ws);
            prop_assert!((lhs - rhs).abs() <= 1e-11 * scaled.scale(k).max(1.0));
        }
    }

    #[test]
    fn removing_an_eigenvalue_peels_one_factor(ws in spectrum(7), pick in any::<usize>()) {
        prop_assume!(ws.n() > 0);
        let i = pick % ws.n();
        let rest = wsym::remove_coordinate(&ws, i).unwrap();
        let mu = ws.mu()[i];
        let full = wsym::weighted_sigmas(8, &ws);
        let part = wsym::weighted_sigmas(8, &rest);
        for k in 1..=8 {
            let rhs = part[k] + mu * part[k - 1];
            prop_assert!((full[k] - rhs).abs() <= 1e-11 * ws.scale(k));
        }
    }

    #[test]
    fn cones_are_nested(seed in any::<u64>(), k in 1usize..6, n in 1usize..6) {
        let mut rng = sampling::rng(seed);
        let ws = sampling::cone_point(&mut rng, k, n);
        let report = wsym::cone_report(&ws, k);
        for j in 1..=k {
            prop_assert!(report.contains(j));
        }
    }

    #[test]
    fn newton_gap_is_nonnegative(ws in spectrum(8), k in 1usize..9) {
        prop_assert!(wsym::newton_gap(k, &ws) >= -1e-12 * ws.scale(2 * k));
    }

    #[test]
    fn trace_route_matches_eigen_route(seed in any::<u64>(), n in 1usize..7, mu0 in -3.0..3.0f64) {
        let mut rng = sampling::rng(seed);
        let (p, _) = sampling::symmetric_with_spectrum(&mut rng, n, 3.0);
        let sp = SymPair::new(mu0, p).unwrap();
        let a = sp.sigmas(7);
        let b = sp.sigmas_by_trace(7);
        let ws = sp.spectrum();
        for k in 0..=7 {
            prop_assert!((a[k] - b[k]).abs() <= 1e-10 * ws.scale(k));
        }
    }

    #[test]
    fn newton_transform_recursion(seed in any::<u64>(), n in 1usize..6, mu0 in -2.0..2.0f64) {
        let mut rng = sampling::rng(seed);
        let (p, _) = sampling::symmetric_with_spectrum(&mut rng, n, 2.0);
        let sp = SymPair::new(mu0, p.clone()).unwrap();
        let sig = sp.sigmas(6);
        let scale = sp.spectrum().scale(6);
        for k in 1..=5 {
            let lhs = wsym::newton_transform(k, &sp);
            let rhs = DMatrix::identity(n, n) * sig[k] - wsym::newton_transform(k - 1, &sp) * &p;
            prop_assert!((lhs - rhs).amax() <= 1e-10 * scale);
        }
    }

    #[test]
    fn newton_transform_commutes_with_conjugation(seed in any::<u64>(), n in 1usize..6, mu0 in -2.0..2.0f64, k in 0usize..5) {
        let mut rng = sampling::rng(seed);
        let (p, _) = sampling::symmetric_with_spectrum(&mut rng, n, 2.0);
        let q = sampling::orthogonal(&mut rng, n);
        let t = wsym::newton_transform(k, &SymPair::new(mu0, p.clone()).unwrap());
        let rotated = SymPair::new(mu0, &q * &p * q.transpose()).unwrap();
        let tr = wsym::newton_transform(k, &rotated);
        let scale = rotated.spectrum().scale(k);
        prop_assert!((tr - &q * t * q.transpose()).amax() <= 1e-10 * scale);
    }

    #[test]
    fn pointwise_contraction_identity(seed in any::<u64>(), n in 1usize..6, k in 0usize..5) {
        let mut rng = sampling::rng(seed);
        let pc: PointCurvature = sampling::point_curvature(&mut rng, n, 1.5);
        let sig = tensor::sigmas_pt(k + 1, &pc);
        let lhs = tensor::e_pt(k, &pc).dot(&pc.ric);
        let rhs = (k + 1) as f64 * sig[k + 1] - sig[1] * sig[k];
        prop_assert!((lhs - rhs).abs() <= 1e-10 * pc.scale(k + 1));
    }

    #[test]
    fn curvature_samples_have_exact_symmetries(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = sampling::rng(seed);
        let r = sampling::curvature(&mut rng, n, 1.0);
        prop_assert!(r.symmetry_residual() <= 1e-12 * (1.0 + r.max_abs()));
    }

    #[test]
    fn constant_curvature_ricci(n in 1usize..7, kappa in -3.0..3.0f64) {
        let r = sigma_forge_core::Curv4::constant_curvature(n, kappa);
        let expect = Sym2::identity(n).into_matrix() * ((n as f64 - 1.0) * kappa);
        prop_assert!((r.ricci().into_matrix() - expect).amax() <= 1e-12 * (1.0 + kappa.abs()));
    }
}
