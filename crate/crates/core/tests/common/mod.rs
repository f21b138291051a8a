//! Reference data and helpers shared by the statistics tests and the
//! acceptance run.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use sso_core::stats::{
    friedman, kruskal_wallis, normality, t_test_independent, variance_homogeneity, HomogeneityMethod, TestResult,
};

// (x, df, P(X > x)). x are printed critical values; probabilities at exactly
// those x were computed independently to 10 digits.
pub const CHI_SQUARE: [(f64, f64, f64); 20] = [
    (3.841, 1.0, 0.0500136838),
    (6.635, 1.0, 0.0099994196),
    (5.991, 2.0, 0.0500116150),
    (9.21, 2.0, 0.0100017020),
    (7.815, 3.0, 0.0499939030),
    (11.345, 3.0, 0.0099993841),
    (9.488, 4.0, 0.0499944056),
    (13.277, 4.0, 0.0099987144),
    (11.07, 5.0, 0.0500096186),
    (15.086, 5.0, 0.0100011248),
    (12.592, 6.0, 0.0499924582),
    (14.067, 7.0, 0.0500024447),
    (15.507, 8.0, 0.0500052193),
    (16.919, 9.0, 0.0499996408),
    (18.307, 10.0, 0.0500005891),
    (23.209, 10.0, 0.0100008658),
    (24.996, 15.0, 0.0499971788),
    (31.41, 20.0, 0.0500052392),
    (37.652, 25.0, 0.0500053874),
    (43.773, 30.0, 0.0499997078),
];

// (t, df, P(T <= t))
pub const STUDENT_T: [(f64, f64, f64); 20] = [
    (6.314, 1.0, 0.9500019355),
    (12.706, 1.0, 0.9749995988),
    (2.92, 2.0, 0.9500004222),
    (4.303, 2.0, 0.9750037375),
    (2.353, 3.0, 0.9499835058),
    (3.182, 3.0, 0.9749914317),
    (2.132, 4.0, 0.9500086136),
    (2.015, 5.0, 0.9499969138),
    (2.571, 5.0, 0.9750126827),
    (1.943, 6.0, 0.9499875011),
    (1.86, 8.0, 0.9500346945),
    (1.812, 10.0, 0.9499623690),
    (2.228, 10.0, 0.9749941141),
    (1.782, 12.0, 0.9499755801),
    (1.753, 15.0, 0.9499955517),
    (1.725, 20.0, 0.9500258799),
    (2.086, 20.0, 0.9750018228),
    (2.06, 25.0, 0.9750237516),
    (1.697, 30.0, 0.9499750754),
    (2.75, 30.0, 0.9950000527),
];

// (x, d1, d2, P(F > x))
pub const FISHER_F: [(f64, f64, f64, f64); 20] = [
    (161.4, 1.0, 1.0, 0.0500073481),
    (6.608, 1.0, 5.0, 0.0499987133),
    (4.965, 1.0, 10.0, 0.0499924439),
    (5.786, 2.0, 5.0, 0.0500020372),
    (4.103, 2.0, 10.0, 0.0499950846),
    (3.493, 2.0, 20.0, 0.0499936444),
    (3.708, 3.0, 10.0, 0.0500087816),
    (3.098, 3.0, 20.0, 0.0500183701),
    (3.478, 4.0, 10.0, 0.0500018558),
    (2.69, 4.0, 30.0, 0.0499766618),
    (3.326, 5.0, 10.0, 0.0499932847),
    (2.711, 5.0, 20.0, 0.0499932338),
    (2.996, 6.0, 12.0, 0.0500059908),
    (2.591, 8.0, 16.0, 0.0500064474),
    (2.978, 10.0, 10.0, 0.0500118334),
    (2.348, 10.0, 20.0, 0.0499898345),
    (2.183, 12.0, 24.0, 0.0500372640),
    (2.015, 15.0, 30.0, 0.0499766708),
    (2.124, 20.0, 20.0, 0.0500160914),
    (5.636, 5.0, 10.0, 0.0100019580),
];

pub fn normal_samples(rng: &mut StdRng, groups: usize, n: usize) -> Vec<Vec<f64>> {
    let d = Normal::new(3.0, 2.0).unwrap();
    (0..groups).map(|_| (0..n).map(|_| d.sample(rng)).collect()).collect()
}

pub fn rejection_rate(seed: u64, mut trial: impl FnMut(&mut StdRng) -> TestResult) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let rejected = (0..1000).filter(|_| trial(&mut rng).p_value < 0.05).count();
    rejected as f64 / 1000.0
}

/// Rejection rates at the 5% level over 1000 seeded trials per test, with
/// every group drawn from the same normal distribution.
pub fn null_rejection_rates() -> Vec<(&'static str, f64)> {
    vec![
        ("kruskal-wallis", rejection_rate(1, |r| kruskal_wallis(&normal_samples(r, 3, 10)).unwrap())),
        ("friedman", rejection_rate(2, |r| friedman(&normal_samples(r, 15, 4)).unwrap())),
        (
            "bartlett",
            rejection_rate(3, |r| variance_homogeneity(&normal_samples(r, 3, 15), HomogeneityMethod::Bartlett).unwrap()),
        ),
        (
            "levene-mean",
            rejection_rate(4, |r| variance_homogeneity(&normal_samples(r, 3, 15), HomogeneityMethod::LeveneMean).unwrap()),
        ),
        (
            "pooled-t",
            rejection_rate(5, |r| {
                let g = normal_samples(r, 2, 12);
                t_test_independent(&g[0], &g[1]).unwrap()
            }),
        ),
        ("anderson-darling", rejection_rate(6, |r| normality(&normal_samples(r, 1, 50)[0]).unwrap())),
    ]
}
