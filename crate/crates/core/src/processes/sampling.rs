use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::process::Process;

/// Generator for path `stream` under `seed`: ChaCha8 keyed by the seed with
/// the stream selecting an independent keystream. Replays bit-exactly.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sampled increments for slots `1..=t`, with the visited states
/// `J_0..J_t` of a Markov additive process.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub increments: Vec<f64>,
    pub states: Option<Vec<usize>>,
}

/// Draws `t` slots of `process` from stream 0 of `seed`.
pub fn sample_path(process: &Process, t: usize, seed: u64) -> SamplePath {
    let mut rng = path_rng(seed, 0);
    let mut increments = vec![0.0; t];
    let mut states = Vec::new();
    process.fill_increments(&mut rng, &mut increments, Some(&mut states));
    SamplePath {
        increments,
        states: process.is_markov().then_some(states),
    }
}
