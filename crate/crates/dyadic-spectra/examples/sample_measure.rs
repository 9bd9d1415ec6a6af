//! Draw words from the telescopic measures and check what they promise:
//! hard pattern constraints at the endpoints, typical frequencies in the
//! interior, and the per-head stream structure that makes samples
//! prefix-stable in n.
//!
//! ```sh
//! cargo run --example sample_measure
//! ```

use dyadic_spectra::measure::MeasureParams;

fn main() {
    let n = 1usize << 18;
    let seed = 42u64;

    println!(
        "{:>24} {:>10} {:>10} {:>10} {:>10}",
        "measure", "digits", "xi", "pairs", "xi*p11"
    );
    for (label, params) in [
        (
            "alpha = 0".to_string(),
            MeasureParams::from_alpha(0.0).unwrap(),
        ),
        (
            "alpha = 0.2".to_string(),
            MeasureParams::from_alpha(0.2).unwrap(),
        ),
        (
            "alpha = 0.5".to_string(),
            MeasureParams::from_alpha(0.5).unwrap(),
        ),
        (
            "theta 0.4, alpha 0.1".to_string(),
            MeasureParams::from_theta_alpha(0.4, 0.1).unwrap(),
        ),
        ("uniform".to_string(), MeasureParams::uniform()),
    ] {
        let word = params.sample(n, seed);
        let digits = word.count_ones() as f64 / n as f64;
        let pairs = word.pair_count() as f64 / (n / 2) as f64;
        println!(
            "{label:>24} {digits:>10.5} {:>10.5} {pairs:>10.5} {:>10.5}",
            params.xi().value(),
            params.expected_pair_freq()
        );
    }

    // Hard constraints at the endpoints of the alpha family.
    let no_pair = MeasureParams::from_alpha(0.0).unwrap().sample(n, seed);
    println!(
        "\nalpha = 0 sample has {} in-range 11 pairs (always 0)",
        no_pair.pair_count()
    );
    let locked = MeasureParams::from_alpha(0.5).unwrap().sample(n, seed);
    let equal = (1..=n / 2).all(|k| locked.bit(k) == locked.bit(2 * k));
    println!("alpha = 1/2 sample has every pair equal: {equal}");

    // Seed and length stability: a sample extends itself.
    let params = MeasureParams::from_alpha(0.2).unwrap();
    let short = params.sample(n, seed);
    let long = params.sample(2 * n, seed);
    println!(
        "\nsample({n}, {seed}) is a prefix of sample({}, {seed}): {}",
        2 * n,
        long.prefix(n) == short
    );
}
