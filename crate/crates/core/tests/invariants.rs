use eosi::grid::{make_grid, SpectralGrid};
use eosi::interferometer::{apply_shear, ideal_interferogram, ShearConfig};
use eosi::mode::{inner_product, mode_overlap, SpectralMode};
use eosi::synthesis::{synthesize, PulseSpec, SpectralPhase};
use eosi::wigner::wigner;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{LN_2, PI};

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_and_round_trip(amp in complex_vec(128), center in 1.5f64..3.0, span in 0.01f64..1.0) {
        let grid = make_grid(center, span, 128).unwrap();
        prop_assume!(amp.iter().any(|z| z.norm() > 1e-3));
        let mode = SpectralMode::new(grid, amp).unwrap();
        let t = mode.to_time_domain();
        prop_assert!((t.norm() - 1.0).abs() < 1e-10);
        let back = t.to_spectral_domain(&grid).unwrap();
        for (a, b) in back.amplitude().iter().zip(mode.amplitude()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(a in complex_vec(64), b in complex_vec(64)) {
        let grid = make_grid(2.0, 0.2, 64).unwrap();
        prop_assume!(a.iter().any(|z| z.norm() > 1e-3) && b.iter().any(|z| z.norm() > 1e-3));
        let (ma, mb) = (SpectralMode::new(grid, a).unwrap(), SpectralMode::new(grid, b).unwrap());
        let ab = mode_overlap(&ma, &mb).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - mode_overlap(&mb, &ma).unwrap()).abs() < 1e-12);
        prop_assert!((mode_overlap(&ma, &ma.with_global_phase(1.3)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integer_shear_round_trip(amp in complex_vec(64), bins in 1i32..15) {
        let grid = make_grid(2.0, 0.2, 64).unwrap();
        prop_assume!(amp.iter().any(|z| z.norm() > 1e-3));
        let m = SpectralMode::new(grid, amp).unwrap();
        let s = bins as f64 * grid.omega_step();
        let back = apply_shear(&apply_shear(&m, s).unwrap(), -s).unwrap();
        for (a, b) in back.amplitude().iter().zip(m.amplitude()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn outputs_conserve_the_arm_spectra(phi2 in -5e4f64..5e4, tau in 2000.0f64..20000.0) {
        let spec = PulseSpec::gaussian(830.0, 8.0, SpectralPhase::Polynomial { poly_coeffs: vec![0.0, phi2] });
        let grid = make_grid(spec.carrier_omega().unwrap(), 10.0 * spec.bandwidth_omega().unwrap(), 1024).unwrap();
        let m = synthesize(&spec, &grid).unwrap();
        let i = ideal_interferogram(&m, ShearConfig::new(10.0 * grid.omega_step(), tau)).unwrap();
        let total: f64 = i.sum().iter().sum::<f64>() * grid.omega_step();
        // ½(‖ψ‖² + ‖ψ sheared‖²) = 1 for a mode clear of the grid edges.
        prop_assert!((total - 1.0).abs() < 1e-9, "{}", total);
    }
}

/// Dawson's integral `D(x) = e^{−x²}∫₀ˣ e^{t²}dt` by composite Simpson.
fn dawson(x: f64) -> f64 {
    let n = 20_000;
    let h = x / n as f64;
    let f = |t: f64| (t * t - x * x).exp();
    let mut acc = f(0.0) + f(x);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn dawson_reference_values() {
    assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-10);
    assert!((dawson(0.5) - 0.424_436_383_502_022_4).abs() < 1e-10);
}

#[test]
fn v_lambda_overlap_matches_dawson_formula() {
    // ⟨V|Λ⟩ = ∫S(x)e^{−iA|x|}dx for a Gaussian S of rms width σ and A = a_V − a_Λ
    // equals e^{−A²σ²/2} − i(2/√π)D(Aσ/√2).
    let dw = eosi::units::bandwidth_nm_to_omega(8.0, 830.0).unwrap();
    let sigma = dw / (8.0 * LN_2).sqrt();
    let w0 = eosi::units::wavelength_to_omega(830.0).unwrap();
    let grid: SpectralGrid = make_grid(w0, 10.0 * dw, 16384).unwrap();
    for (av, al) in [(1050.0, -1100.0), (300.0, -300.0), (80.0, -50.0)] {
        let v = synthesize(&PulseSpec::gaussian(830.0, 8.0, SpectralPhase::VLambda { v_slope_fs: av }), &grid).unwrap();
        let l = synthesize(&PulseSpec::gaussian(830.0, 8.0, SpectralPhase::VLambda { v_slope_fs: al }), &grid).unwrap();
        let a = av - al;
        let z = a * sigma / 2f64.sqrt();
        let expected = (-(a * sigma).powi(2)).exp() + 4.0 / PI * dawson(z).powi(2);
        let got = mode_overlap(&v, &l).unwrap();
        assert!((got - expected).abs() < 1e-3 * expected, "A = {a}: {got} vs {expected}");
        let ip = inner_product(&v, &l).unwrap();
        assert!((ip.im + 2.0 / PI.sqrt() * dawson(z)).abs() < 1e-3 * dawson(z));
    }
}

/// Smooth random mode: Gaussian envelope with a mild random cubic phase,
/// well inside both the frequency grid and the time window.
fn smooth_mode(grid: &SpectralGrid, seed: u64) -> SpectralMode {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    let c = grid.center() + (next() - 0.5) * 0.1 * grid.span();
    let w = (0.04 + 0.06 * next()) * grid.span();
    let (p1, p2, p3) = (next() - 0.5, (next() - 0.5) * 4.0, (next() - 0.5) * 8.0);
    let amp = grid
        .omegas()
        .iter()
        .map(|&om| {
            let x = (om - c) / w;
            let phase = p1 * x + 0.25 * p2 * x * x + 0.05 * p3 * x * x * x;
            Complex64::from_polar((-x * x / 2.0).exp(), phase)
        })
        .collect();
    SpectralMode::new(*grid, amp).unwrap()
}

#[test]
fn wigner_marginals_of_smooth_modes() {
    let grid = make_grid(2.0, 0.4, 64).unwrap();
    let n = grid.len();
    // Half-step ω lattice and 2N time samples across the window.
    let omegas: Vec<f64> = (0..2 * n - 1).map(|p| grid.omega_start() + p as f64 * grid.omega_step() / 2.0).collect();
    let dt = grid.time_step() / 2.0;
    let times: Vec<f64> = (0..2 * n).map(|j| (j as f64 - n as f64) * dt).collect();
    for seed in 0..20 {
        let m = smooth_mode(&grid, seed);
        let map = wigner(&m, &times, &omegas).unwrap();
        let spectral = m.intensity();
        let fm = map.frequency_marginal();
        let peak = spectral.iter().cloned().fold(0.0, f64::max);
        for (i, s) in spectral.iter().enumerate() {
            assert!((fm[2 * i] - s).abs() < 1e-6 * peak, "seed {seed} bin {i}");
        }
        let temporal = m.to_time_domain().intensity();
        let tm = map.time_marginal();
        let tpeak = temporal.iter().cloned().fold(0.0, f64::max);
        for (j, s) in temporal.iter().enumerate() {
            assert!((tm[2 * j] - s).abs() < 1e-6 * tpeak, "seed {seed} t {j}");
        }
    }
}
