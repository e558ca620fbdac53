//! Savitzky-Golay smoothing via Gram-polynomial convolution weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavGolConfig {
    pub window_len: usize,
    pub poly_order: usize,
}

impl Default for SavGolConfig {
    fn default() -> Self {
        SavGolConfig {
            window_len: 11,
            poly_order: 3,
        }
    }
}

impl SavGolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len.is_multiple_of(2) {
            return Err(Error::FilterConfig(format!(
                "window length must be odd, got {}",
                self.window_len
            )));
        }
        if self.poly_order >= self.window_len {
            return Err(Error::FilterConfig(format!(
                "polynomial order {} must be below window length {}",
                self.poly_order, self.window_len
            )));
        }
        Ok(())
    }

    /// Convolution weights for the centre point, ordered from offset `-h` to `+h`.
    pub fn weights(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let m = (self.window_len / 2) as i64;
        let order = self.poly_order as i64;
        let at_centre = gram_values(0, m, order);
        let norms: Vec<f64> = (0..=order).map(|k| gram_norm(m, k)).collect();
        Ok((-m..=m)
            .map(|i| {
                let p = gram_values(i, m, order);
                (0..=order as usize)
                    .map(|k| p[k] * at_centre[k] / norms[k])
                    .sum()
            })
            .collect())
    }
}

/// Gram polynomials `P_0..=P_order` over the points `-m..=m`, evaluated at `i`.
fn gram_values(i: i64, m: i64, order: i64) -> Vec<f64> {
    let mut p = Vec::with_capacity(order as usize + 1);
    p.push(1.0);
    let (i, mf) = (i as f64, m as f64);
    for k in 1..=order {
        let kf = k as f64;
        let denom = kf * (2.0 * mf - kf + 1.0);
        let prev = p[k as usize - 1];
        let prev2 = if k >= 2 { p[k as usize - 2] } else { 0.0 };
        p.push((4.0 * kf - 2.0) / denom * i * prev - (kf - 1.0) * (2.0 * mf + kf) / denom * prev2);
    }
    p
}

/// Squared norm `Σ_i P_k(i)^2` over `-m..=m`.
fn gram_norm(m: i64, k: i64) -> f64 {
    (-m..=m).map(|i| gram_values(i, m, k)[k as usize].powi(2)).sum()
}

/// Pads by point reflection about each end sample (`2·x0 − x_j`), which keeps
/// straight lines straight across the boundary.
pub fn mirror_pad(signal: &[f64], half: usize) -> Vec<f64> {
    let n = signal.len();
    let mut out = Vec::with_capacity(n + 2 * half);
    for j in (1..=half).rev() {
        out.push(2.0 * signal[0] - signal[j]);
    }
    out.extend_from_slice(signal);
    for j in 1..=half {
        out.push(2.0 * signal[n - 1] - signal[n - 1 - j]);
    }
    out
}

/// Least-squares local polynomial smoothing; output has the input's length.
pub fn savgol_smooth(signal: &[f64], window_len: usize, poly_order: usize) -> Result<Vec<f64>> {
    let cfg = SavGolConfig {
        window_len,
        poly_order,
    };
    let weights = cfg.weights()?;
    if signal.len() < window_len {
        return Err(Error::FilterConfig(format!(
            "signal of length {} is shorter than the window ({window_len})",
            signal.len()
        )));
    }
    let padded = mirror_pad(signal, window_len / 2);
    Ok(padded
        .windows(window_len)
        .map(|win| win.iter().zip(&weights).map(|(x, c)| x * c).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    /// Independent reference: fit the polynomial on each padded window by
    /// pseudo-inverse and evaluate it at the window centre.
    fn lstsq_oracle(signal: &[f64], window_len: usize, order: usize) -> Vec<f64> {
        let h = window_len / 2;
        let padded = mirror_pad(signal, h);
        let a = DMatrix::from_fn(window_len, order + 1, |r, c| {
            (r as f64 - h as f64).powi(c as i32)
        });
        let pinv = a.clone().pseudo_inverse(1e-12).unwrap();
        padded
            .windows(window_len)
            .map(|win| {
                let coef = &pinv * DVector::from_column_slice(win);
                coef[0]
            })
            .collect()
    }

    #[test]
    fn constants_and_lines_are_preserved() {
        for (len, order) in [(5, 2), (3, 0), (5, 4)] {
            let out = savgol_smooth(&[5.0; 5], len, order).unwrap();
            assert!(out.iter().all(|v| (v - 5.0).abs() < 1e-12), "{out:?}");
        }
        let ramp = savgol_smooth(&[0.0, 1.0, 2.0, 3.0, 4.0], 5, 1).unwrap();
        for (i, v) in ramp.iter().enumerate() {
            assert!((v - i as f64).abs() < 1e-12, "{ramp:?}");
        }
    }

    #[test]
    fn noisy_sine_matches_direct_least_squares() {
        let signal: Vec<f64> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.02;
                (2.0 * std::f64::consts::PI * 1.3 * t).sin() + 0.2 * ((i * 7919 % 101) as f64 / 101.0 - 0.5)
            })
            .collect();
        let got = savgol_smooth(&signal, 11, 3).unwrap();
        let want = lstsq_oracle(&signal, 11, 3);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn known_weights() {
        // Classic 5-point quadratic smoother: (-3, 12, 17, 12, -3) / 35.
        let w = SavGolConfig { window_len: 5, poly_order: 2 }.weights().unwrap();
        let want = [-3.0, 12.0, 17.0, 12.0, -3.0].map(|v| v / 35.0);
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(savgol_smooth(&[0.0; 20], 4, 1), Err(Error::FilterConfig(_))));
        assert!(matches!(savgol_smooth(&[0.0; 20], 5, 5), Err(Error::FilterConfig(_))));
        assert!(matches!(savgol_smooth(&[0.0; 3], 5, 2), Err(Error::FilterConfig(_))));
    }

    proptest! {
        #[test]
        fn smoothing_is_linear(
            x in proptest::collection::vec(-100.0f64..100.0, 15..60),
            seed in any::<u64>(),
            a in -5.0f64..5.0,
            b in -5.0f64..5.0,
        ) {
            let y: Vec<f64> = x.iter().enumerate()
                .map(|(i, v)| v * 0.3 + ((seed.wrapping_mul(i as u64 + 1) % 1000) as f64) / 10.0)
                .collect();
            let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
            let lhs = savgol_smooth(&mix, 11, 3).unwrap();
            let sx = savgol_smooth(&x, 11, 3).unwrap();
            let sy = savgol_smooth(&y, 11, 3).unwrap();
            for i in 0..lhs.len() {
                prop_assert!((lhs[i] - (a * sx[i] + b * sy[i])).abs() < 1e-9);
            }
        }
    }
}
