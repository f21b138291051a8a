//! Counter-based random numbers.
//!
//! Every deviate is a pure function of `(seed, particle, variable, iteration,
//! stream)`, so the order in which workers ask for them cannot change a run.
//! The block cipher is Philox4x32-10 (Salmon et al., SC'11), the same
//! generator family cuRAND ships.

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;
const PHILOX_ROUNDS: usize = 10;

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let product = u64::from(a) * u64::from(b);
    ((product >> 32) as u32, product as u32)
}

/// Philox4x32 with 10 rounds: maps a 128-bit counter and 64-bit key to 128
/// pseudo-random bits.
pub fn philox4x32_10(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut ctr = counter;
    let mut key = key;
    for round in 0..PHILOX_ROUNDS {
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0];
        if round + 1 < PHILOX_ROUNDS {
            key[0] = key[0].wrapping_add(PHILOX_W0);
            key[1] = key[1].wrapping_add(PHILOX_W1);
        }
    }
    ctr
}

/// Which sub-stream a deviate belongs to.
///
/// Branch decisions and fresh draws live in separate sub-streams so that
/// whether a fresh value was consumed never shifts any other coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum StreamTag {
    Branch = 0,
    Fresh = 1,
    Init = 2,
}

/// Stateless random source keyed by a 64-bit seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform deviate in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, particle: usize, variable: usize, iteration: usize, tag: StreamTag) -> f64 {
        let key = [self.seed as u32, (self.seed >> 32) as u32];
        let out = philox4x32_10(
            [particle as u32, variable as u32, iteration as u32, tag as u32],
            key,
        );
        let bits = ((u64::from(out[0]) << 32) | u64::from(out[1])) >> 11;
        bits as f64 * TWO_POW_NEG_53
    }

    #[inline]
    pub fn branch(&self, particle: usize, variable: usize, iteration: usize) -> f64 {
        self.uniform(particle, variable, iteration, StreamTag::Branch)
    }

    #[inline]
    pub fn fresh(&self, particle: usize, variable: usize, iteration: usize) -> f64 {
        self.uniform(particle, variable, iteration, StreamTag::Fresh)
    }

    #[inline]
    pub fn init(&self, particle: usize, variable: usize) -> f64 {
        self.uniform(particle, variable, 0, StreamTag::Init)
    }
}

/// Tally of deviates consumed by a run, per sub-stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DrawCount {
    pub branch: u64,
    pub fresh: u64,
    pub init: u64,
}

impl std::ops::AddAssign for DrawCount {
    fn add_assign(&mut self, rhs: Self) {
        self.branch += rhs.branch;
        self.fresh += rhs.fresh;
        self.init += rhs.init;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors distributed with the Random123 library.
    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x32_10([0; 4], [0; 2]),
            [0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8]
        );
        assert_eq!(
            philox4x32_10([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd]
        );
        assert_eq!(
            philox4x32_10(
                [0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344],
                [0xa4093822, 0x299f31d0]
            ),
            [0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1]
        );
    }

    #[test]
    fn deviates_are_pure_functions_of_the_key() {
        let a = RngStream::new(42);
        let b = RngStream::new(42);
        for i in 0..50 {
            assert_eq!(a.branch(i, 3, 7), b.branch(i, 3, 7));
        }
        assert_ne!(a.branch(0, 0, 0), a.fresh(0, 0, 0));
        assert_ne!(a.branch(0, 0, 0), RngStream::new(43).branch(0, 0, 0));
        assert_ne!(a.branch(1, 0, 0), a.branch(0, 1, 0));
    }

    #[test]
    fn deviates_lie_in_unit_interval() {
        let r = RngStream::new(7);
        for i in 0..10_000 {
            let u = r.branch(i, i % 13, i % 5);
            assert!((0.0..1.0).contains(&u));
        }
    }
}
