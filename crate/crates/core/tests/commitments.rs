use npshare_core::commitments::{commit, crs_gen, Crs, Opening};
use npshare_core::prg::Expander;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const DRAWS: usize = 10_000;
const ALPHA: f64 = 0.001;

/// Histogram of the first byte of the first block of `commit(value, ·)`.
fn first_block_histogram(crs: &Crs, value: usize, seed: u64) -> [usize; 256] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = [0usize; 256];
    for _ in 0..DRAWS {
        let com = commit(value, &Opening::random(crs, &mut rng), crs).unwrap();
        h[com.block(crs, 0).to_bytes()[0] as usize] += 1;
    }
    h
}

fn two_sample(a: &[usize], b: &[usize]) -> (f64, f64) {
    let mut stat = 0.0;
    let mut bins = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x + y > 0 {
            stat += (x as f64 - y as f64).powi(2) / (x + y) as f64;
            bins += 1;
        }
    }
    (stat, ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(1.0 - ALPHA))
}

fn hiding_statistic(k: usize) -> (f64, f64) {
    let crs = crs_gen(4, k, Expander::SplitMix64, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    two_sample(&first_block_histogram(&crs, 1, 1), &first_block_histogram(&crs, 2, 2))
}

#[test]
fn first_block_marginals_do_not_separate_with_wide_seeds() {
    for k in [24, 32, 64] {
        let (stat, crit) = hiding_statistic(k);
        assert!(stat < crit, "k = {k}: {stat} >= {crit}");
    }
}

#[test]
fn desk_scale_seeds_are_separable_by_counting() {
    // 256 seeds per block: 10^4 draws expose the two finite supports.
    let (stat, crit) = hiding_statistic(8);
    assert!(stat > crit, "{stat} <= {crit}");
}
