//! Small statistics helpers: two-sample Kolmogorov-Smirnov test with the
//! asymptotic p-value approximation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sample KS statistic and p-value. Ties are handled by advancing both
/// empirical CDFs past equal values before comparing, so integer-valued
/// samples are fine (the test is conservative under heavy ties).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsReport {
    assert!(!a.is_empty() && !b.is_empty(), "empty sample");
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let (n1, n2) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n1 && j < n2 {
        let v = xs[i].min(ys[j]);
        while i < n1 && xs[i] <= v {
            i += 1;
        }
        while j < n2 && ys[j] <= v {
            j += 1;
        }
        let f1 = i as f64 / n1 as f64;
        let f2 = j as f64 / n2 as f64;
        d = d.max((f1 - f2).abs());
    }
    let ne = (n1 as f64 * n2 as f64) / (n1 + n2) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    KsReport {
        statistic: d,
        p_value: ks_q(lambda),
        n1,
        n2,
    }
}

/// Kolmogorov tail function `Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) e^(-2 k^2 lambda^2)`.
pub fn ks_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let a2 = -2.0 * lambda * lambda;
    let mut sum = 0.0f64;
    let mut sign = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..=100 {
        let term = sign * (a2 * (k * k) as f64).exp();
        sum += term;
        if term.abs() <= 1e-12 * sum.abs() || term.abs() >= prev {
            break;
        }
        prev = term.abs();
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Mean and standard error of a sample.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n > 0);
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_have_zero_statistic() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn q_reference_values() {
        // 2(e^-2 - e^-8 + e^-18 - ...) at lambda = 1
        assert!((ks_q(1.0) - 0.26999967).abs() < 1e-6);
        assert!(ks_q(0.0) == 1.0);
        assert!(ks_q(10.0) < 1e-10);
        // monotone decreasing
        assert!(ks_q(0.5) > ks_q(1.0));
        assert!(ks_q(1.0) > ks_q(1.5));
    }

    #[test]
    fn separated_samples_are_rejected() {
        let a: Vec<f64> = (0..200).map(|i| i as f64 / 200.0).collect();
        let b: Vec<f64> = (0..200).map(|i| 2.0 + i as f64 / 200.0).collect();
        let r = ks_two_sample(&a, &b);
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value < 1e-6);
    }

    #[test]
    fn shifted_normals_reject_same_law_accepts() {
        // crude deterministic pseudo-normals via sums of uniforms
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next_uniform = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut gauss = || {
            let s: f64 = (0..12).map(|_| next_uniform()).sum();
            s - 6.0
        };
        let a: Vec<f64> = (0..400).map(|_| gauss()).collect();
        let b: Vec<f64> = (0..400).map(|_| gauss()).collect();
        let c: Vec<f64> = (0..400).map(|_| gauss() + 0.5).collect();
        assert!(ks_two_sample(&a, &b).p_value > 0.01);
        assert!(ks_two_sample(&a, &c).p_value < 0.01);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[2.0, 4.0, 6.0, 8.0]);
        assert_eq!(m, 5.0);
        assert!((se - (20.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
    }
}
