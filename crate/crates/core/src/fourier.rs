//! Centred unitary discrete Fourier transforms.
//!
//! Convention: `ψ(t) = (1/√2π) ∫ ψ̃(ω) e^{-i(ω-ω_c)t} dω`, with `ω_c` the
//! grid centre. Both axes are centred (sample `N/2` is the origin), so the
//! centring phases reduce to alternating signs and the transform pair is
//! exactly unitary for `N` divisible by four.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

fn alternate(buf: &mut [Complex64]) {
    buf.iter_mut().skip(1).step_by(2).for_each(|z| *z = -*z);
}

/// Spectral samples (spacing `omega_step`) to centred time samples.
pub fn to_time(spectrum: &[Complex64], omega_step: f64) -> Vec<Complex64> {
    let n = spectrum.len();
    debug_assert!(n.is_multiple_of(4));
    let mut buf = spectrum.to_vec();
    alternate(&mut buf);
    plan(n, true).process(&mut buf);
    alternate(&mut buf);
    let scale = omega_step / (2.0 * PI).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// Centred time samples (spacing `t_step`) back to spectral samples.
pub fn to_spectrum(signal: &[Complex64], t_step: f64) -> Vec<Complex64> {
    let n = signal.len();
    debug_assert!(n.is_multiple_of(4));
    let mut buf = signal.to_vec();
    alternate(&mut buf);
    plan(n, false).process(&mut buf);
    alternate(&mut buf);
    let scale = t_step / (2.0 * PI).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// Centred time axis for `n` samples at `t_step`.
pub fn centred_times(n: usize, t_step: f64) -> impl Iterator<Item = f64> {
    let half = (n / 2) as f64;
    (0..n).map(move |j| (j as f64 - half) * t_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(N²) evaluation of the centred transform.
    fn direct_to_time(spec: &[Complex64], dw: f64) -> Vec<Complex64> {
        let n = spec.len();
        let dt = 2.0 * PI / (n as f64 * dw);
        let half = (n / 2) as f64;
        (0..n)
            .map(|j| {
                let t = (j as f64 - half) * dt;
                spec.iter()
                    .enumerate()
                    .map(|(i, &s)| {
                        let w = (i as f64 - half) * dw;
                        s * Complex64::from_polar(1.0, -w * t)
                    })
                    .sum::<Complex64>()
                    * (dw / (2.0 * PI).sqrt())
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let spec: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let fast = to_time(&spec, 0.01);
        let slow = direct_to_time(&spec, 0.01);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_recovers_input() {
        let spec: Vec<Complex64> = (0..64)
            .map(|i| Complex64::new(i as f64, -(i as f64).sqrt()))
            .collect();
        let dw = 0.003;
        let dt = 2.0 * PI / (64.0 * dw);
        let back = to_spectrum(&to_time(&spec, dw), dt);
        for (a, b) in back.iter().zip(&spec) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
