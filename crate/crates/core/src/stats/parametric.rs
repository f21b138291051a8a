use serde::{Deserialize, Serialize};

use super::dist::{chi_square_sf, f_sf, t_sf_two_sided};
use super::{check_finite, mean, variance, Df, Method, StatsError, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomogeneityMethod {
    Bartlett,
    /// Levene's test on absolute deviations from group means.
    LeveneMean,
}

/// Tests whether all groups share one variance.
pub fn variance_homogeneity<G: AsRef<[f64]>>(
    groups: &[G],
    method: HomogeneityMethod,
) -> Result<TestResult, StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFew { what: "groups", needed: 2, got: k });
    }
    for g in groups {
        let g = g.as_ref();
        if g.len() < 2 {
            return Err(StatsError::TooFew { what: "observations per group", needed: 2, got: g.len() });
        }
        check_finite(g)?;
    }
    match method {
        HomogeneityMethod::Bartlett => bartlett(groups),
        HomogeneityMethod::LeveneMean => levene_mean(groups),
    }
}

fn bartlett<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult, StatsError> {
    let k = groups.len() as f64;
    let mut n_total = 0.0;
    let mut pooled = 0.0;
    let mut log_sum = 0.0;
    let mut inv_sum = 0.0;
    for (i, g) in groups.iter().enumerate() {
        let g = g.as_ref();
        let dof = g.len() as f64 - 1.0;
        let v = variance(g);
        if v <= 0.0 {
            return Err(StatsError::Degenerate(format!("group {i} has zero variance")));
        }
        n_total += g.len() as f64;
        pooled += dof * v;
        log_sum += dof * v.ln();
        inv_sum += 1.0 / dof;
    }
    let dof_total = n_total - k;
    pooled /= dof_total;
    let numerator = dof_total * pooled.ln() - log_sum;
    let scale = 1.0 + (inv_sum - 1.0 / dof_total) / (3.0 * (k - 1.0));
    let statistic = (numerator / scale).max(0.0);
    Ok(TestResult::new(Method::Bartlett, statistic, chi_square_sf(statistic, k - 1.0), Df::One(k - 1.0)))
}

fn levene_mean<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult, StatsError> {
    let deviations: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let g = g.as_ref();
            let m = mean(g);
            g.iter().map(|v| (v - m).abs()).collect()
        })
        .collect();
    let k = groups.len() as f64;
    let n: f64 = deviations.iter().map(|z| z.len() as f64).sum();
    let grand = deviations.iter().flatten().sum::<f64>() / n;
    let mut between = 0.0;
    let mut within = 0.0;
    for z in &deviations {
        let zm = mean(z);
        between += z.len() as f64 * (zm - grand).powi(2);
        within += z.iter().map(|v| (v - zm).powi(2)).sum::<f64>();
    }
    let df = Df::Two(k - 1.0, n - k);
    if within == 0.0 {
        if between == 0.0 {
            return Ok(TestResult::degenerate(Method::LeveneMean, df, "all absolute deviations are equal"));
        }
        return Err(StatsError::Degenerate("no spread of deviations within groups".into()));
    }
    let statistic = (n - k) / (k - 1.0) * between / within;
    Ok(TestResult::new(Method::LeveneMean, statistic, f_sf(statistic, k - 1.0, n - k), df))
}

/// Two-sample t-test with pooled variance, two-sided.
pub fn t_test_independent(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFew { what: "observations per sample", needed: 2, got: s.len() });
        }
        check_finite(s)?;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let dof = na + nb - 2.0;
    let pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / dof;
    let diff = mean(a) - mean(b);
    let df = Df::One(dof);
    if pooled == 0.0 {
        if diff == 0.0 {
            return Ok(TestResult::degenerate(Method::PooledTTest, df, "both samples constant and equal"));
        }
        return Err(StatsError::Degenerate("zero pooled variance with different means".into()));
    }
    let t = diff / (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    Ok(TestResult::new(Method::PooledTTest, t, t_sf_two_sided(t, dof), df))
}
