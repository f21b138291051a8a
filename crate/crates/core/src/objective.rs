/// A fitness function to minimize.
///
/// Implementations must be pure: the parallel schedule calls `evaluate`
/// from many workers at once and relies on identical inputs giving
/// identical outputs.
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// Sum of squares; handy for tests and examples.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}
