//! Times the pipeline on synthetic reads sampled from a random genome.
//!
//! Usage: `scaling [min_exp] [max_exp]` (defaults 18 and 22).

use std::time::Instant;

use compact_scs::pipeline::{compute_superstring, PipelineOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let lo = args.first().copied().unwrap_or(18);
    let hi = args.get(1).copied().unwrap_or(22);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for exp in lo..=hi {
        let n = 1usize << exp;
        let genome: Vec<u8> = (0..n / 8).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        let mut reads = Vec::new();
        let mut total = 0;
        while total < n {
            let len = rng.gen_range(80..=120).min(n - total);
            let start = rng.gen_range(0..=genome.len() - len);
            reads.push(genome[start..start + len].to_vec());
            total += len;
        }
        let t = Instant::now();
        let out = compute_superstring(&reads, &PipelineOptions::default()).unwrap();
        let s = &out.stats;
        println!(
            "2^{exp}: total {:.3}s pre {:.3} idx {:.3} init {:.3} overlap {:.3} asm {:.3} verify {:.3} | {:.2} bits/char {:?}",
            t.elapsed().as_secs_f64(),
            s.seconds.preprocess,
            s.seconds.index,
            s.seconds.init_iterators,
            s.seconds.overlap,
            s.seconds.assembly,
            s.seconds.verify,
            s.bits_per_input_char,
            s.bits
        );
    }
}
