use super::dist::chi_square_sf;
use super::{check_finite, Df, Method, StatsError, TestResult};

/// Mid-ranks (1-based) of `values` and the tie term `sum(t^3 - t)` over tie groups.
pub fn mid_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share the average of ranks start+1 ..= end
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

/// Kruskal–Wallis H test across `groups`.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<TestResult, StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFew { what: "groups", needed: 2, got: k });
    }
    let mut pooled = Vec::new();
    for g in groups {
        let g = g.as_ref();
        if g.is_empty() {
            return Err(StatsError::TooFew { what: "observations per group", needed: 1, got: 0 });
        }
        check_finite(g)?;
        pooled.extend_from_slice(g);
    }
    let df = Df::One((k - 1) as f64);
    let n = pooled.len() as f64;
    let (ranks, ties) = mid_ranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(TestResult::degenerate(Method::KruskalWallis, df, "all pooled values are identical"));
    }
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let len = g.as_ref().len();
        let r: f64 = ranks[offset..offset + len].iter().sum();
        sum += r * r / len as f64;
        offset += len;
    }
    let h = ((12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction).max(0.0);
    Ok(TestResult::new(Method::KruskalWallis, h, chi_square_sf(h, (k - 1) as f64), df))
}

/// Friedman test on `blocks`, each holding one observation per treatment.
pub fn friedman<B: AsRef<[f64]>>(blocks: &[B]) -> Result<TestResult, StatsError> {
    let n = blocks.len();
    if n < 2 {
        return Err(StatsError::TooFew { what: "blocks", needed: 2, got: n });
    }
    let k = blocks[0].as_ref().len();
    if k < 2 {
        return Err(StatsError::TooFew { what: "treatments", needed: 2, got: k });
    }
    let df = Df::One((k - 1) as f64);
    let mut rank_sums = vec![0.0; k];
    let mut ties = 0.0;
    let mut tied_blocks = 0;
    for b in blocks {
        let b = b.as_ref();
        if b.len() != k {
            return Err(StatsError::Ragged { expected: k, found: b.len() });
        }
        check_finite(b)?;
        let (ranks, t) = mid_ranks(b);
        for (s, r) in rank_sums.iter_mut().zip(ranks) {
            *s += r;
        }
        ties += t;
        if b.iter().all(|&v| v == b[0]) {
            tied_blocks += 1;
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    let correction = 1.0 - ties / (nf * (kf * kf * kf - kf));
    if correction <= 0.0 {
        return Ok(TestResult::degenerate(Method::Friedman, df, "every block is entirely tied"));
    }
    let centre = (kf + 1.0) / 2.0;
    let spread: f64 = rank_sums.iter().map(|s| (s / nf - centre).powi(2)).sum();
    let statistic = 12.0 * nf / (kf * (kf + 1.0)) * spread / correction;
    let mut result = TestResult::new(Method::Friedman, statistic, chi_square_sf(statistic, kf - 1.0), df);
    if tied_blocks > 0 {
        result.notes.push(format!("{tied_blocks} block(s) entirely tied carry no information"));
    }
    Ok(result)
}
