//! Acceptance gate: ten numbered end-to-end criteria, each with its stated
//! tolerance and runtime budget. Every test prints a single PASS line (visible
//! with `--nocapture`); any failure fails the build.

use shc::asymptotics::{condensation_term, gap_prediction, ls_slope, predicted_sqrt_eigenvalue};
use shc::control::{certify, observability_mass, simulate_final_modes, synthesize_internal_control,
    ControlProblem, ControlRegion};
use shc::extensions::{boundary_quadratic_term, classify_extension, illposedness_profile,
    BoundaryCoefficientsAB, Classification};
use shc::quad::{self, IntervalUnion, QuadratureConfig};
use shc::special::{bessel_j, bessel_product_integral, bessel_zero, bessel_zeros,
    product_upper_bound_check, wronskian_residual, IntegralKind};
use shc::spectrum::{characteristic, normalization_sq, Bracket, Parity, SpectralBasis,
    SpectralParameter};
use nalgebra::{Matrix2, Vector2};
use std::f64::consts::PI;
use std::time::Instant;

const NU_SET: [f64; 5] = [0.1, 0.3, 0.5, 0.6, 0.9];

fn budget(start: Instant, secs: f64, what: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < secs, "{what}: runtime {elapsed:.2}s exceeds budget {secs}s");
    println!("ACCEPTANCE {what}: PASS ({elapsed:.2}s)");
}

#[test]
fn criterion_01_bessel_exactness() {
    let start = Instant::now();
    // Trig closed forms on [0.1, 50] to 1e-12 relative.
    for i in 0..=2000 {
        let x = 0.1 + 49.9 * i as f64 / 2000.0;
        let pref = (2.0 / (PI * x)).sqrt();
        let exact_p = pref * x.sin();
        let exact_m = pref * x.cos();
        assert!((bessel_j(0.5, x) - exact_p).abs() <= 1e-12 * exact_p.abs().max(pref));
        assert!((bessel_j(-0.5, x) - exact_m).abs() <= 1e-12 * exact_m.abs().max(pref));
    }
    // Half-integer zeros to 1e-11 for n <= 50.
    for n in 1..=50 {
        let nf = n as f64;
        assert!((bessel_zero(0.5, n).unwrap() - nf * PI).abs() < 1e-11);
        assert!((bessel_zero(-0.5, n).unwrap() - (nf - 0.5) * PI).abs() < 1e-11);
    }
    budget(start, 1.0, "1 bessel-exactness");
}

#[test]
fn criterion_02_identity_suite() {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    for &nu in &NU_SET {
        // Wronskian and product bound over a log-spaced grid.
        for i in 0..=60 {
            let x = 0.05 * (40.0f64 / 0.05).powf(i as f64 / 60.0);
            let scale = (2.0 * (nu * PI).sin() / (PI * x)).abs().max(1e-3);
            assert!((wronskian_residual(nu, x) / scale).abs() < 1e-9);
            assert!(product_upper_bound_check(nu, x));
        }
        // Interlacing of the first 20 zeros.
        let zn = bessel_zeros(-nu, 21).unwrap();
        let zp = bessel_zeros(nu, 21).unwrap();
        for k in 0..20 {
            assert!(zn[k] < zp[k] && zp[k] < zn[k + 1]);
        }
        // Four closed-form integrals vs quadrature: same/cross order over two
        // windows each.
        for (kind, order) in [
            (IntegralKind::SameOrder, nu),
            (IntegralKind::SameOrder, -nu),
            (IntegralKind::CrossOrder, nu),
            (IntegralKind::CrossOrder, -nu),
        ] {
            for (a, lo, hi) in [(3.7, 0.0, 1.0), (9.2, 0.2, 0.9)] {
                let closed = bessel_product_integral(kind, order, a, lo, hi);
                let f = |x: f64| match kind {
                    IntegralKind::SameOrder => x * bessel_j(order, a * x).powi(2),
                    IntegralKind::CrossOrder => {
                        x * bessel_j(order, a * x) * bessel_j(-order, a * x)
                    }
                };
                let region = IntervalUnion::new(&[(lo.max(1e-300), hi)]).unwrap();
                let region = if lo == 0.0 {
                    IntervalUnion::new(&[(0.0, hi)]).unwrap()
                } else {
                    region
                };
                let numeric = quad::integrate(&f, &region, &cfg).unwrap();
                assert!(
                    (closed - numeric).abs() < 1e-8,
                    "nu={nu} {kind:?} order={order}: {closed} vs {numeric}"
                );
            }
        }
    }
    budget(start, 30.0, "2 identity-suite");
}

#[test]
fn criterion_03_spectrum_certification() {
    let start = Instant::now();
    let osc = tan_root_oracle();
    for &nu in &NU_SET {
        let param = SpectralParameter::new(nu).unwrap();
        let basis = SpectralBasis::compute_with_threads(param, 201, 4).unwrap();
        let lambdas = basis.lambdas();
        assert_eq!(lambdas[0], 0.0);
        for n in 1..=200usize {
            assert!(lambdas[n] > lambdas[n - 1], "ordering break at nu={nu}, n={n}");
            match basis.records[n].bracket {
                Bracket::Open(lo, hi) => {
                    assert!(lambdas[n] > lo && lambdas[n] < hi, "bracket miss nu={nu} n={n}");
                    let parity = Parity::of_index(n);
                    let h = characteristic(&basis.param, parity, lambdas[n]);
                    // Near a pole-adjacent root (nu close to 1, large n) the
                    // characteristic moves by more than 1e-9 between adjacent
                    // representable lambdas, so the certificate allows the
                    // measured one-ulp granularity on top of the 1e-9 bar.
                    let granularity = (characteristic(&basis.param, parity, lambdas[n].next_up())
                        - characteristic(&basis.param, parity, lambdas[n].next_down()))
                    .abs();
                    assert!(
                        (h - 1.0).abs() < 1e-9 + 2.0 * granularity,
                        "residual {} (granularity {granularity}) nu={nu} n={n}",
                        (h - 1.0).abs()
                    );
                }
                Bracket::Degenerate(l) => assert_eq!(lambdas[n], l),
            }
        }
        if nu == 0.5 {
            for m in 1..=100usize {
                let exact = ((m as f64 - 0.5) * PI).powi(2);
                assert!((lambdas[2 * m - 1] - exact).abs() < 1e-10 * exact);
            }
            assert!((lambdas[2] - osc * osc).abs() < 1e-10 * osc * osc);
        }
    }
    budget(start, 120.0, "3 spectrum-certification");
}

#[test]
fn criterion_04_basis_quality() {
    let start = Instant::now();
    let cfg = QuadratureConfig { abs_tol: 1e-11, ..Default::default() };
    let full = IntervalUnion::full_domain();
    let grid: Vec<f64> = (0..40)
        .map(|i| -0.95 + 1.9 * i as f64 / 39.0)
        .filter(|x| x.abs() >= 0.05)
        .collect();
    for &nu in &NU_SET {
        let param = SpectralParameter::new(nu).unwrap();
        let basis = SpectralBasis::compute_with_threads(param, 15, 4).unwrap();
        // Orthonormality of the first 15 modes.
        let g = basis.gram_matrix(15);
        for i in 0..15 {
            for j in 0..15 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - target).abs() < 1e-6, "gram ({i},{j}) at nu={nu}");
            }
        }
        // Eigenvalue-equation residual contract.
        assert!(basis.ode_residual(0, &grid) < 1e-6, "kernel residual nu={nu}");
        assert!(basis.ode_residual(1, &grid) < 1e-4, "n=1 residual nu={nu}");
        assert!(basis.ode_residual(10, &grid) < 1e-3, "n=10 residual nu={nu}");
        // Closed-form normalization vs quadrature.
        for n in [0usize, 1, 2, 7, 14] {
            let rec = &basis.records[n];
            let f = |x: f64| {
                let v = rec.psi(&basis.param, x);
                v * v
            };
            let numeric = quad::integrate(&f, &full, &cfg).unwrap();
            let closed = normalization_sq(&basis.param, n, rec.lambda);
            assert!((numeric - closed).abs() < 1e-7 * closed, "norm nu={nu} n={n}");
        }
    }
    budget(start, 120.0, "4 basis-quality");
}

#[test]
fn criterion_05_asymptotics() {
    let start = Instant::now();
    // Residual slopes.
    for nu in [0.2, 0.4, 0.6, 0.8] {
        let param = SpectralParameter::new(nu).unwrap();
        let basis = SpectralBasis::compute_with_threads(param, 800, 4).unwrap();
        let lambdas = basis.lambdas();
        let target = if nu < 0.5 { -(4.0 * nu).min(1.0) } else { -2.0 };
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for n in 50..=399usize {
            let pred = predicted_sqrt_eigenvalue(&param, n, Parity::Even);
            let resid = (lambdas[2 * (n - 1)].sqrt() - pred.predicted_sqrt_lambda).abs();
            if resid > 0.0 {
                xs.push((n as f64).ln());
                ys.push(resid.ln());
            }
        }
        let slope = ls_slope(&xs, &ys);
        assert!(slope <= target + 0.3, "slope {slope} at nu={nu}");
    }
    // Gap law at n = 200.
    for nu in [0.3, 0.5, 0.7] {
        let param = SpectralParameter::new(nu).unwrap();
        let basis = SpectralBasis::compute_with_threads(param, 400, 4).unwrap();
        let lambdas = basis.lambdas();
        let gap = lambdas[399] - lambdas[398];
        let ratio = gap / gap_prediction(&param, 200);
        assert!((ratio - 1.0).abs() < 0.1, "gap ratio {ratio} at nu={nu}");
        if nu == 0.5 {
            assert!((gap / 2.0 - 1.0).abs() < 0.05);
        }
    }
    budget(start, 120.0, "5 asymptotics");
}

#[test]
fn criterion_06_condensation() {
    let start = Instant::now();
    for nu in [0.3, 0.7] {
        let param = SpectralParameter::new(nu).unwrap();
        let basis = SpectralBasis::compute_with_threads(param, 1001, 4).unwrap();
        let lambdas: Vec<f64> = basis.lambdas()[1..].to_vec();
        let d = condensation_term(&lambdas, 100, 1000).unwrap();
        assert!(d.term.abs() < 0.05, "nu={nu}: condensation term {}", d.term);
    }
    budget(start, 60.0, "6 condensation");
}

#[test]
fn criterion_07_control_certificates() {
    let start = Instant::now();
    let omegas: [&[(f64, f64)]; 2] = [&[(0.2, 0.8)], &[(-0.9, -0.5), (0.1, 0.4)]];
    for &nu in &[0.3, 0.5] {
        let basis = SpectralBasis::compute(SpectralParameter::new(nu).unwrap(), 16).unwrap();
        for &t in &[0.5, 1.0] {
            for omega in omegas {
                let case = Instant::now();
                let problem = ControlProblem {
                    horizon_t: t,
                    region: ControlRegion::Internal(IntervalUnion::new(omega).unwrap()),
                    initial_modes: (0..8).map(|n| (n, 1.0)).collect(),
                    mode_count: 8,
                };
                let cert = certify(&basis, &problem, 12).unwrap();
                assert!(cert.biorth_residual < 1e-8, "nu={nu} T={t}: residual");
                assert!(cert.control_norm.is_finite());
                for &(n, c) in cert.final_modes.iter().take(8) {
                    assert!(c.abs() < 1e-8, "nu={nu} T={t} omega={omega:?} mode {n}: {c}");
                }
                assert!(case.elapsed().as_secs_f64() < 60.0, "case over budget");
            }
            // Boundary variant, N = 6.
            let problem = ControlProblem {
                horizon_t: t,
                region: ControlRegion::Boundary,
                initial_modes: (0..6).map(|n| (n, 1.0)).collect(),
                mode_count: 6,
            };
            let cert = certify(&basis, &problem, 10).unwrap();
            assert!(cert.biorth_residual < 1e-8);
            for &(n, c) in cert.final_modes.iter().take(6) {
                assert!(c.abs() < 1e-8, "boundary nu={nu} T={t} mode {n}: {c}");
            }
        }
    }
    // Parity spillover: symmetric omega, even data, odd modes stay zero.
    let basis = SpectralBasis::compute(SpectralParameter::new(0.3).unwrap(), 12).unwrap();
    let problem = ControlProblem {
        horizon_t: 0.8,
        region: ControlRegion::Internal(IntervalUnion::new(&[(-0.6, -0.2), (0.2, 0.6)]).unwrap()),
        initial_modes: vec![(0, 1.0), (2, 0.5)],
        mode_count: 4,
    };
    let control = synthesize_internal_control(&basis, &problem).unwrap();
    for (n, c) in simulate_final_modes(&basis, &problem, &control, 10) {
        if n % 2 == 1 {
            assert!(c.abs() < 1e-10, "odd spillover mode {n}: {c}");
        }
    }
    budget(start, 240.0, "7 control-certificates");
}

#[test]
fn criterion_08_observability() {
    let start = Instant::now();
    let basis = SpectralBasis::compute_with_threads(
        SpectralParameter::new(0.3).unwrap(),
        61,
        4,
    )
    .unwrap();
    for omega in [
        IntervalUnion::new(&[(0.2, 0.8)]).unwrap(),
        IntervalUnion::new(&[(-0.9, -0.5)]).unwrap(),
        IntervalUnion::new(&[(0.42, 0.475)]).unwrap(),
        IntervalUnion::new(&[(-0.3, -0.1), (0.5, 0.6)]).unwrap(),
    ] {
        assert!(omega.measure() >= 0.05 - 1e-12);
        let mut inf = f64::MAX;
        for n in 0..=60 {
            inf = inf.min(observability_mass(&basis, &omega, n).unwrap());
        }
        assert!(inf > 0.0, "observability inf {inf} on {omega:?}");
    }
    budget(start, 120.0, "8 observability");
}

#[test]
fn criterion_09_extensions() {
    let start = Instant::now();
    // Example 1: the identity pair.
    match classify_extension(&Matrix2::identity(), &Matrix2::identity()).classification {
        Classification::Coupled(m) => assert!((m - Matrix2::identity()).amax() < 1e-14),
        other => panic!("expected coupled identity, got {other:?}"),
    }
    // Example 2: the decoupled pair (at a generic nu).
    let nu = 0.3;
    let a = 2.0 * nu + 1.0;
    let spec = classify_extension(
        &Matrix2::new(a, 2.0, a, 2.0),
        &Matrix2::new(-a, 2.0, 0.0, 0.0),
    );
    assert!(matches!(spec.classification, Classification::Decoupled { .. }));
    // Example 3: the continuity extension at nu = 1/2.
    let m3 = Matrix2::new(-1.0, 2.0, 0.0, -1.0);
    match classify_extension(&Matrix2::identity(), &m3).classification {
        Classification::Coupled(m) => {
            assert!((m - m3).amax() < 1e-14);
            // Continuity data (value v, slope d) satisfies the transmission.
            let (v, d) = (1.7, 0.9);
            let minus = Vector2::new(v - d, d);
            let plus = Vector2::new(v + d, d);
            assert!((minus + m * plus).amax() < 1e-12);
        }
        other => panic!("expected coupled, got {other:?}"),
    }
    // Quadratic-form nullity over 1000 constrained samples on M = +-I2.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    };
    for _ in 0..1000 {
        let (alpha, beta) = (3.0 * next(), 3.0 * next());
        let plus_identity = BoundaryCoefficientsAB {
            alpha_plus: alpha,
            beta_plus: beta,
            alpha_minus: -alpha,
            beta_minus: beta,
        };
        assert_eq!(boundary_quadratic_term(&plus_identity), 0.0);
        let minus_identity = BoundaryCoefficientsAB {
            alpha_plus: alpha,
            beta_plus: beta,
            alpha_minus: alpha,
            beta_minus: -beta,
        };
        assert_eq!(boundary_quadratic_term(&minus_identity), 0.0);
    }
    budget(start, 30.0, "9 extensions");
}

#[test]
fn criterion_10_illposedness() {
    let start = Instant::now();
    // Blow-up rate for c < -1/4 (numerator normalization; the quotient
    // carries the extra factor int f^2 -> 1/12).
    for c in [-0.3, -0.5, -1.0] {
        let p = illposedness_profile(c, 1e-4).unwrap();
        let limit = -0.125 - 0.5 * c;
        let scaled = (-p.int_f_prime_sq - c * p.int_f_sq_over_x_sq) * 1e-4;
        assert!((scaled / limit - 1.0).abs() < 0.02, "c={c}");
        assert!(p.rayleigh_quotient > 0.0);
    }
    // Boundedness for c in (-1/4, 0).
    for e in [0.1, 0.01, 1e-3, 1e-4] {
        assert!(illposedness_profile(-0.2, e).unwrap().rayleigh_quotient < 1.0);
    }
    // eps = 1 closed forms, exactly and by quadrature.
    let p = illposedness_profile(-0.5, 1.0).unwrap();
    assert_eq!(p.int_f_sq, 1.0 / 60.0);
    assert_eq!(p.int_f_sq_over_x_sq, 1.0 / 12.0);
    assert_eq!(p.int_f_prime_sq, 3.0 / 16.0);
    let cfg = QuadratureConfig::default();
    let region = IntervalUnion::new(&[(0.0, 1.0)]).unwrap();
    let f = |x: f64| x.powf(1.5) * (1.0 - x);
    let fp = |x: f64| 1.5 * x.sqrt() * (1.0 - x) - x.powf(1.5);
    assert!((quad::integrate(&|x| f(x) * f(x), &region, &cfg).unwrap() - 1.0 / 60.0).abs() < 1e-9);
    assert!(
        (quad::integrate(&|x| (f(x) / x) * (f(x) / x), &region, &cfg).unwrap() - 1.0 / 12.0).abs()
            < 1e-9
    );
    assert!(
        (quad::integrate(&|x| fp(x) * fp(x), &region, &cfg).unwrap() - 3.0 / 16.0).abs() < 1e-9
    );
    budget(start, 30.0, "10 illposedness");
}

/// Independent bisection oracle for the first positive root of tan x = x.
fn tan_root_oracle() -> f64 {
    let f = |x: f64| x.tan() - x;
    let (mut a, mut b) = (PI + 1e-9, 1.5 * PI - 1e-9);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
