use sso_core::rng::StreamTag;
use sso_core::stats::chi_square_sf;
use sso_core::step::select_branch;
use sso_core::{Branch, RngStream, SsoParams};

const SAMPLES: usize = 1_000_000;

/// Deviates over a (particle, variable, iteration) grid covering `SAMPLES` keys.
fn deviates(seed: u64, tag: StreamTag) -> impl Iterator<Item = f64> {
    let rng = RngStream::new(seed);
    (0..SAMPLES).map(move |k| rng.uniform(k % 100, (k / 100) % 50, k / 5000, tag))
}

#[test]
fn branch_frequencies_follow_thresholds() {
    let params = SsoParams::default();
    let mut counts = [0usize; 4];
    for u in deviates(2024, StreamTag::Branch) {
        counts[select_branch(u, &params).index()] += 1;
    }
    let expected = [0.3, 0.3, 0.2, 0.2];
    for b in Branch::ALL {
        let freq = counts[b.index()] as f64 / SAMPLES as f64;
        assert!((freq - expected[b.index()]).abs() <= 0.003, "{b:?}: {freq}");
    }
}

#[test]
fn uniform_deviates_pass_chi_square() {
    for tag in [StreamTag::Branch, StreamTag::Fresh, StreamTag::Init] {
        let mut bins = [0usize; 16];
        for u in deviates(7, tag) {
            assert!((0.0..1.0).contains(&u));
            bins[(u * 16.0) as usize] += 1;
        }
        let e = SAMPLES as f64 / 16.0;
        let stat: f64 = bins.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
        let p = chi_square_sf(stat, 15.0);
        assert!(p > 0.001, "{tag:?}: chi2 = {stat}, p = {p}");
    }
}

#[test]
fn streams_are_distinct() {
    let rng = RngStream::new(1);
    let a = rng.uniform(3, 4, 5, StreamTag::Branch);
    assert_ne!(a, rng.uniform(3, 4, 5, StreamTag::Fresh));
    assert_ne!(a, rng.uniform(4, 3, 5, StreamTag::Branch));
    assert_ne!(a, RngStream::new(2).uniform(3, 4, 5, StreamTag::Branch));
    assert_eq!(a, RngStream::new(1).uniform(3, 4, 5, StreamTag::Branch));
}
