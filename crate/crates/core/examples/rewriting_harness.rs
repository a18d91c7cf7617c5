//! Local confluence and facial compatibility of the gamma rules on random
//! Cayley cells, checked by bounded join search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unimod::cayley::gamma_family;
use unimod::rewrite::{check_facial_compatibility, check_local_confluence, HarnessOptions};
use unimod::sampling::{random_cayley, CellShape};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<_> = (0..30).map(|_| random_cayley(&mut rng, CellShape::default())).collect();
    let family = gamma_family();
    let opts = HarnessOptions::default();
    let local = check_local_confluence(&family, &samples, opts);
    let facial = check_facial_compatibility(&family, &samples, opts);
    for (name, r) in [("local confluence", local), ("facial compatibility", facial)] {
        println!("{name}: {} checks, {} joined, {} inconclusive, {} failures", r.checked, r.passed, r.inconclusive, r.failures.len());
    }
}
