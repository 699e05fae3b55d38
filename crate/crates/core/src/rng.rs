use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named random streams derived from one root seed through the ChaCha stream
/// counter. Environment noise and agent weight draws never share a stream, so
/// the processing order inside one consumer cannot perturb the other; a third
/// stream is reserved for randomized tie-breaking.
#[derive(Debug, Clone)]
pub struct RngStreams {
    /// Environment transition noise.
    pub env: ChaCha8Rng,
    /// Beta mixing-weight draws.
    pub weights: ChaCha8Rng,
    /// Reserved; argmax ties currently break by smallest index.
    pub tie_break: ChaCha8Rng,
}

impl RngStreams {
    pub fn from_root(seed: u64) -> Self {
        let stream = |index: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index);
            rng
        };
        Self {
            env: stream(0),
            weights: stream(1),
            tie_break: stream(2),
        }
    }
}
