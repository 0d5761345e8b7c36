//! Deterministic random numbers.
//!
//! Every stochastic feature in the crate (measurement sampling, noise
//! injection) draws from [`SplitMix64`] streams derived from a single master
//! seed, so a run is replayable bit-for-bit. Streams are split with
//! [`derive_stream`]: `master -> (tag, index) -> child seed`, where `tag`
//! names the consumer (state noise, Hamiltonian noise, shot sampling, ...)
//! and `index` is typically the iteration number.

/// SplitMix64 generator (Steele, Lea, Flood 2014). Tiny state, good mixing,
/// and trivially portable; statistical quality is ample for noise draws.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-half_width, half_width].
    pub fn uniform_symmetric(&mut self, half_width: f64) -> f64 {
        (2.0 * self.next_f64() - 1.0) * half_width
    }

    /// Standard normal via Box-Muller (one draw per call; the partner
    /// variate is discarded to keep stream usage position-independent).
    pub fn gaussian(&mut self, sigma: f64) -> f64 {
        // Guard against ln(0).
        let u1 = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.next_f64();
        let r = crate::math::sqrt(-2.0 * crate::math::ln(u1));
        sigma * r * crate::math::cos(2.0 * core::f64::consts::PI * u2)
    }
}

/// Stream tags for the documented splitting rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamTag {
    HamiltonianNoise,
    StateNoise,
    Shots,
    Lanczos,
    Test,
}

impl StreamTag {
    fn id(self) -> u64 {
        match self {
            StreamTag::HamiltonianNoise => 1,
            StreamTag::StateNoise => 2,
            StreamTag::Shots => 3,
            StreamTag::Lanczos => 4,
            StreamTag::Test => 5,
        }
    }
}

/// Derive a child generator from `(master, tag, index)`.
///
/// The three inputs are mixed through one SplitMix64 step each, so distinct
/// (tag, index) pairs give statistically independent streams while a fixed
/// triple always reproduces the same stream.
pub fn derive_stream(master: u64, tag: StreamTag, index: u64) -> SplitMix64 {
    let mut mixer = SplitMix64::new(master);
    let a = mixer.next_u64();
    let mut mixer = SplitMix64::new(a ^ tag.id().wrapping_mul(0xA24BAED4963EE407));
    let b = mixer.next_u64();
    let mut mixer = SplitMix64::new(b ^ index.wrapping_mul(0x9FB21C651E98DF25));
    SplitMix64::new(mixer.next_u64())
}
