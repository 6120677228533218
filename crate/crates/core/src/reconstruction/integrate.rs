//! Recovery of φ(ω) from sheared differences `Δφ(ω) = φ(ω) − φ(ω+Ω)`.

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    /// `φ′(ω) = −Δφ(ω−Ω/2)/Ω`, integrated with the trapezoid rule.
    #[default]
    MidpointIntegration,
    /// `φ(ω+Ω) = φ(ω) − Δφ(ω)` chained from the anchor in steps of Ω,
    /// linearly interpolated between the chained samples.
    Concatenation,
}

/// Linear interpolation of uniformly sampled `values` at fractional index
/// `pos`, extrapolating linearly beyond the ends.
pub(crate) fn sample_at(values: &[f64], pos: f64) -> f64 {
    let n = values.len();
    let k = (pos.floor() as isize).clamp(0, n as isize - 2) as usize;
    let f = pos - k as f64;
    values[k] + f * (values[k + 1] - values[k])
}

/// Replaces samples outside the outermost valid bins by straight lines
/// fitted to the `span` valid bins nearest each edge.
pub(crate) fn extend_edges(values: &mut [f64], valid: &[bool], span: usize) {
    let idx: Vec<usize> = (0..values.len()).filter(|&i| valid[i]).collect();
    if idx.len() < 2 * span.max(2) {
        return;
    }
    let span = span.max(2);
    let line = |pts: &[usize]| {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|&i| i as f64).sum::<f64>() / n;
        let my = pts.iter().map(|&i| values[i]).sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for &i in pts {
            sxy += (i as f64 - mx) * (values[i] - my);
            sxx += (i as f64 - mx).powi(2);
        }
        let slope = sxy / sxx;
        move |i: usize| my + slope * (i as f64 - mx)
    };
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    let head = line(&idx[..span]);
    let tail = line(&idx[idx.len() - span..]);
    let (h0, t0) = (head(first) - values[first], tail(last) - values[last]);
    for i in 0..first {
        values[i] = head(i) - h0;
    }
    for i in last + 1..values.len() {
        values[i] = tail(i) - t0;
    }
}

/// Integrates sheared phase differences into a spectral phase on `grid`,
/// anchored so that `φ(anchor_omega) = 0`.
pub fn integrate_phase(
    delta_phi: &[f64],
    shear: f64,
    grid: &SpectralGrid,
    method: IntegrationMethod,
    anchor_omega: f64,
) -> Result<Vec<f64>> {
    if delta_phi.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "phase difference has {} samples, grid has {}",
            delta_phi.len(),
            grid.len()
        )));
    }
    if shear == 0.0 || !shear.is_finite() {
        return Err(Error::invalid("shear must be non-zero to integrate phase differences"));
    }
    let dw = grid.omega_step();
    let shift = shear / dw;
    let mut phase = match method {
        IntegrationMethod::MidpointIntegration => {
            let slope: Vec<f64> = (0..grid.len())
                .map(|i| -sample_at(delta_phi, i as f64 - shift / 2.0) / shear)
                .collect();
            let mut acc = vec![0.0; grid.len()];
            for i in 1..grid.len() {
                acc[i] = acc[i - 1] + 0.5 * (slope[i - 1] + slope[i]) * dw;
            }
            acc
        }
        IntegrationMethod::Concatenation => {
            // Chained samples at anchor + kΩ, k spanning the grid.
            let anchor = grid.position(anchor_omega);
            let reach = (grid.len() as f64 / shift.abs()).ceil() as isize + 1;
            let mut nodes: Vec<(f64, f64)> = vec![(anchor, 0.0)];
            let mut value = 0.0;
            for k in 0..reach {
                value -= sample_at(delta_phi, anchor + k as f64 * shift);
                nodes.push((anchor + (k + 1) as f64 * shift, value));
            }
            value = 0.0;
            for k in 1..=reach {
                value += sample_at(delta_phi, anchor - k as f64 * shift);
                nodes.push((anchor - k as f64 * shift, value));
            }
            nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
            (0..grid.len())
                .map(|i| {
                    let x = i as f64;
                    let j = nodes.partition_point(|n| n.0 <= x).clamp(1, nodes.len() - 1);
                    let (a, b) = (nodes[j - 1], nodes[j]);
                    a.1 + (x - a.0) / (b.0 - a.0) * (b.1 - a.1)
                })
                .collect()
        }
    };
    let offset = sample_at(&phase, grid.position(anchor_omega));
    phase.iter_mut().for_each(|p| *p -= offset);
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use proptest::prelude::*;

    const METHODS: [IntegrationMethod; 2] = [
        IntegrationMethod::MidpointIntegration,
        IntegrationMethod::Concatenation,
    ];

    #[test]
    fn edges_extend_linearly() {
        let mut v: Vec<f64> = (0..20).map(|i| 0.5 * i as f64).collect();
        let mask: Vec<bool> = (0..20).map(|i| (5..15).contains(&i)).collect();
        v[..5].iter_mut().for_each(|x| *x = 99.0);
        v[15..].iter_mut().for_each(|x| *x = -99.0);
        extend_edges(&mut v, &mask, 4);
        for (i, x) in v.iter().enumerate() {
            assert!((x - 0.5 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_difference_gives_flat_phase() {
        let grid = make_grid(2.0, 0.1, 256).unwrap();
        for m in METHODS {
            let p = integrate_phase(&vec![0.0; 256], 1e-3, &grid, m, 2.0).unwrap();
            assert!(p.iter().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn constant_difference_is_a_group_delay() {
        let grid = make_grid(2.0, 0.1, 256).unwrap();
        let (c, shear) = (0.4, 1.3e-3);
        for m in METHODS {
            let p = integrate_phase(&vec![c; 256], shear, &grid, m, 2.0).unwrap();
            for (i, v) in p.iter().enumerate() {
                let expected = -c * (grid.omega(i) - 2.0) / shear;
                assert!((v - expected).abs() < 1e-9, "{m:?} {i}");
            }
        }
    }

    #[test]
    fn quadratic_phase_from_exact_differences() {
        let grid = make_grid(2.27, 0.22, 4096).unwrap();
        let (phi2, shear, w0) = (8.7e4, 1.5859e-3, 2.27);
        let dphi: Vec<f64> = grid
            .omegas()
            .iter()
            .map(|w| {
                let x = w - w0;
                -phi2 * shear * x - phi2 * shear * shear / 2.0
            })
            .collect();
        let p = integrate_phase(&dphi, shear, &grid, IntegrationMethod::MidpointIntegration, w0).unwrap();
        for (i, v) in p.iter().enumerate() {
            let x = grid.omega(i) - w0;
            assert!((v - phi2 * x * x / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_shear_is_rejected() {
        let grid = make_grid(2.0, 0.1, 64).unwrap();
        assert!(integrate_phase(&vec![0.0; 64], 0.0, &grid, IntegrationMethod::Concatenation, 2.0).is_err());
    }

    #[test]
    fn carrier_error_becomes_quadratic() {
        // A delay error δτ adds −ωδτ to Δφ, i.e. φ gains (ω−ω₀)²δτ/(2Ω) plus linear terms.
        let grid = make_grid(2.27, 0.22, 4096).unwrap();
        let (shear, w0, dt) = (1.5859e-3, 2.27, 50.0);
        let extra: Vec<f64> = grid.omegas().iter().map(|w| -w * dt).collect();
        for m in METHODS {
            let p = integrate_phase(&extra, shear, &grid, m, w0).unwrap();
            let weights: Vec<f64> = (0..grid.len()).map(|i| if (1500..2600).contains(&i) { 1.0 } else { 0.0 }).collect();
            let fit = super::super::fit::fit_phase_polynomial(&p, &weights, &grid, w0, 3).unwrap();
            // φ₂ multiplies x²/2.
            let expected = dt / shear;
            let got = fit.coefficient(2);
            assert!((got - expected).abs() < 1e-3 * expected, "{m:?}: {got} vs {expected}");
        }
    }

    proptest! {
        // Measuring with −Ω gives Δφ₋(ω) = φ(ω) − φ(ω−Ω) = −Δφ(ω−Ω); both
        // records integrate to the same phase.
        #[test]
        fn shear_sign_consistency(a in -5e4f64..5e4, b in -5e5f64..5e5, bins in 1usize..20, conc in any::<bool>()) {
            let grid = make_grid(2.27, 0.1, 1024).unwrap();
            let shift = 2 * bins;
            let shear = shift as f64 * grid.omega_step();
            let w0 = grid.center();
            let phi = |w: f64| {
                let x = w - w0;
                a * x * x / 2.0 + b * x * x * x / 6.0
            };
            let plus: Vec<f64> = grid.omegas().iter().map(|&w| phi(w) - phi(w + shear)).collect();
            let minus: Vec<f64> = grid.omegas().iter().map(|&w| phi(w) - phi(w - shear)).collect();
            let method = if conc { IntegrationMethod::Concatenation } else { IntegrationMethod::MidpointIntegration };
            let p1 = integrate_phase(&plus, shear, &grid, method, w0).unwrap();
            let p2 = integrate_phase(&minus, -shear, &grid, method, w0).unwrap();
            for i in shift..grid.len() - shift {
                prop_assert!((p1[i] - p2[i]).abs() < 1e-9, "bin {}: {} vs {}", i, p1[i], p2[i]);
            }
        }
    }
}
