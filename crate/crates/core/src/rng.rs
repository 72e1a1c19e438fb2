// SPDX-License-Identifier: Apache-2.0

//! Counter-keyed random streams: trial `i` of a run seeded with `seed` always
//! sees the same stream, whichever worker executes it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
