//! Word diagnostics: block frequencies, dyadic block membership, the
//! X-table identities, and the 11/00 balance gaps — run on a typical
//! sampled word and on an adversarial periodic one.
//!
//! ```sh
//! cargo run --example diagnose_word
//! ```

use dyadic_spectra::diagnostics::{
    block_frequencies, membership_normal, membership_pair_freq, nnorm_gap, x_table,
};
use dyadic_spectra::measure::MeasureParams;
use dyadic_spectra::word::Word;

fn summarize(label: &str, word: &Word, alpha: f64) {
    let n_exp = 14;
    let m = 3;
    let eps = 0.05;
    println!("== {label} (length {}) ==", word.len());

    let blocks = block_frequencies(word, 3).unwrap();
    println!("  order-3 block max deviation: {:.5}", blocks.max_deviation);

    let normal = membership_normal(word, n_exp, m, eps).unwrap();
    println!(
        "  dyadic-block normality at N = {n_exp}, m = {m}, eps = {eps}: pass = {} ({} violations)",
        normal.pass,
        normal.violations.len()
    );

    let pairs = membership_pair_freq(word, alpha, n_exp, eps).unwrap();
    println!(
        "  pair-frequency membership at alpha = {alpha}: pass = {} (prefix freqs {:?})",
        pairs.pass,
        pairs
            .scales
            .iter()
            .map(|s| (s.scale, (s.frequency * 1e4).round() / 1e4))
            .collect::<Vec<_>>()
    );

    let table = x_table(word, m).unwrap();
    let relations = table.relations();
    println!(
        "  X-table: {} relations, all exact = {}",
        relations.len(),
        table.relations_hold()
    );
    let gaps = nnorm_gap(&table, eps);
    println!(
        "  11/00 balance: min eps making all bounds hold = {:.5}",
        gaps.min_epsilon
    );
    println!();
}

fn main() {
    let n = 1usize << 14;

    let typical = MeasureParams::from_alpha(0.2).unwrap().sample(n, 9);
    summarize("sampled word, alpha = 0.2", &typical, 0.2);

    let periodic = Word::from_fn(n, |pos| pos % 2 == 0);
    summarize("periodic word 0101...", &periodic, 0.0);

    let zeros = Word::zeros(n);
    summarize("all-zeros word", &zeros, 0.0);
}
