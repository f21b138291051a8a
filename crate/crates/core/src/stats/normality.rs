use statrs::function::erf::erfc;

use super::{check_finite, mean, variance, Df, Method, StatsError, TestResult};

const MIN_SAMPLE: usize = 8;

/// Anderson–Darling test against a normal with estimated mean and variance.
///
/// The statistic reported is the small-sample adjusted
/// `A*^2 = A^2 (1 + 0.75/n + 2.25/n^2)`; the p-value uses the piecewise
/// exponential approximation of D'Agostino and Stephens (1986).
pub fn normality(sample: &[f64]) -> Result<TestResult, StatsError> {
    if sample.len() < MIN_SAMPLE {
        return Err(StatsError::TooFew { what: "observations", needed: MIN_SAMPLE, got: sample.len() });
    }
    check_finite(sample)?;
    let n = sample.len();
    let m = mean(sample);
    let sd = variance(sample).sqrt();
    if sd == 0.0 {
        return Err(StatsError::Degenerate("sample has zero variance".into()));
    }
    let mut z: Vec<f64> = sample.iter().map(|v| (v - m) / sd).collect();
    z.sort_by(f64::total_cmp);

    // ln Phi(z) and ln(1 - Phi(z)) through erfc keep precision in both tails
    let ln_cdf = |x: f64| (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln();
    let ln_sf = |x: f64| (0.5 * erfc(x / std::f64::consts::SQRT_2)).ln();
    let nf = n as f64;
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (ln_cdf(z[i]) + ln_sf(z[n - 1 - i])))
        .sum();
    let a2 = -nf - s / nf;
    let adjusted = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    let mut result = TestResult::new(Method::AndersonDarling, adjusted, p_value(adjusted), Df::None);
    result.notes.push(format!("A^2 = {a2}"));
    Ok(result)
}

fn p_value(a: f64) -> f64 {
    let p = if a >= 0.6 {
        (1.2937 - 5.709 * a + 0.0186 * a * a).exp()
    } else if a >= 0.34 {
        (0.9177 - 4.279 * a - 1.38 * a * a).exp()
    } else if a >= 0.2 {
        1.0 - (-8.318 + 42.796 * a - 59.938 * a * a).exp()
    } else {
        1.0 - (-13.436 + 101.14 * a - 223.73 * a * a).exp()
    };
    p.clamp(0.0, 1.0)
}
