//! Monte-Carlo consistency checks for the measure family: sampled words
//! must reproduce cylinder probabilities, typical frequencies, block
//! statistics, and membership in the sets the measures are built for.
//! All seeds are fixed, so every run is deterministic.

use dyadic_spectra::diagnostics::{block_frequencies, membership_normal, membership_pair_freq};
use dyadic_spectra::measure::MeasureParams;
use dyadic_spectra::spectra::binary_entropy;
use dyadic_spectra::word::Word;

const LN_2: f64 = std::f64::consts::LN_2;

/// Chi-square of sampled prefixes against cylinder probabilities, for all
/// word lengths k <= 8 at 10^6 samples, plus a per-cell 4-sigma check.
#[test]
fn sampled_prefixes_match_cylinder_probabilities() {
    let params = MeasureParams::from_alpha(0.3).unwrap();
    let samples = 1_000_000u64;
    let mut tallies = [0u64; 256];
    for i in 0..samples {
        let word = params.sample(8, 1_000_000 + i);
        let mut value = 0usize;
        for pos in 1..=8 {
            value = value << 1 | word.bit(pos) as usize;
        }
        tallies[value] += 1;
    }
    for k in 1..=8usize {
        let cells = 1usize << k;
        let mut chi2 = 0.0f64;
        for cell in 0..cells {
            let mut observed = 0u64;
            for (full, tally) in tallies.iter().enumerate() {
                if full >> (8 - k) == cell {
                    observed += tally;
                }
            }
            let word = Word::from_fn(k, |pos| (cell >> (k - pos)) & 1 == 1);
            let probability = params.cylinder_prob(&word);
            let expected = samples as f64 * probability;
            chi2 += (observed as f64 - expected).powi(2) / expected;

            let sigma = (expected * (1.0 - probability)).sqrt();
            assert!(
                (observed as f64 - expected).abs() <= 4.0 * sigma,
                "k={k} cell={cell:0k$b}: observed {observed} vs expected {expected:.1} \
                 beyond 4 sigma"
            );
        }
        // Generous chi-square ceiling: df + 5 sqrt(2 df) + 10 keeps the
        // false-alarm probability around 1e-6 per length.
        let df = (cells - 1) as f64;
        let ceiling = df + 5.0 * (2.0 * df).sqrt() + 10.0;
        assert!(
            chi2 <= ceiling,
            "k={k}: chi2 = {chi2:.1} above ceiling {ceiling:.1}"
        );
    }
}

/// Typical-frequency targets: digit frequency near xi and pair frequency
/// near xi * p11 at n = 2^20 for several parameter choices.
#[test]
fn strong_law_targets() {
    let n = 1usize << 20;
    let cases = [
        MeasureParams::from_alpha(0.2).unwrap(),
        MeasureParams::from_alpha(0.45).unwrap(),
        MeasureParams::from_theta_alpha(0.55, 0.3).unwrap(),
        MeasureParams::new(0.3, 0.7, 0.6, 0.4, 0.2, 0.8).unwrap(),
    ];
    for (index, params) in cases.iter().enumerate() {
        let word = params.sample(n, 4242 + index as u64);
        let digit = word.count_ones() as f64 / n as f64;
        let pair = word.pair_count() as f64 / (n / 2) as f64;
        let xi = params.xi().value();
        assert!(
            (digit - xi).abs() < 0.01,
            "case {index}: digit {digit} vs xi {xi}"
        );
        assert!(
            (pair - params.expected_pair_freq()).abs() < 0.01,
            "case {index}: pair {pair} vs {}",
            params.expected_pair_freq()
        );
    }
}

/// Local-entropy concentration: the per-symbol log-measure of a sampled
/// word approaches the closed-form local entropy.
#[test]
fn local_entropy_concentrates() {
    let n = 1usize << 20;
    for (params, label) in [
        (MeasureParams::from_alpha(0.2).unwrap(), "alpha 0.2"),
        (
            MeasureParams::from_theta_alpha(0.4, 0.1).unwrap(),
            "theta 0.4 alpha 0.1",
        ),
        (MeasureParams::uniform(), "uniform"),
    ] {
        let word = params.sample(n, 99);
        let empirical = params.empirical_local_entropy(&word).unwrap();
        let formula = params.local_entropy();
        assert!(
            (empirical - formula).abs() < 0.02,
            "{label}: empirical {empirical} vs formula {formula}"
        );
    }
}

/// The doubling increment of the log-measure matches its expected slope:
/// (2/n) [log mu(C_2n) - log mu(C_n)] = -(ln 2 + H(2 alpha)) + o(1)
/// for the normal-slice family.
#[test]
fn doubling_increment_slope() {
    let alpha = 0.25f64;
    let params = MeasureParams::from_alpha(alpha).unwrap();
    let full = 1usize << 18;
    let word = params.sample(full, 7);
    let increment = params.h_n_increment(&word).unwrap();
    let slope = 2.0 * increment / (full / 2) as f64;
    let expected = -(LN_2 + binary_entropy(2.0 * alpha).unwrap());
    assert!(
        (slope - expected).abs() < 0.02,
        "slope {slope} vs {expected}"
    );
}

/// Block-frequency deviations of sampled words at every order m <= 4 stay
/// below 0.02 at n = 2^20, across the alpha family including both
/// degenerate endpoints.
#[test]
fn block_frequencies_near_uniform() {
    let n = 1usize << 20;
    for alpha in [0.0, 0.2, 0.5] {
        let params = MeasureParams::from_alpha(alpha).unwrap();
        let word = params.sample(n, 31);
        for order in 1..=4u32 {
            let report = block_frequencies(&word, order).unwrap();
            assert!(
                report.max_deviation < 0.02,
                "alpha={alpha} order={order}: deviation {}",
                report.max_deviation
            );
        }
    }
}

/// Block deviations shrink with scale: order-4 deviation at n = 2^22 is
/// below the deviation at n = 2^16, averaged over seeds.
#[test]
fn block_deviation_decays_with_scale() {
    let params = MeasureParams::from_alpha(0.2).unwrap();
    let mut small = 0.0f64;
    let mut large = 0.0f64;
    for seed in 0..5u64 {
        let w_small = params.sample(1 << 16, 7000 + seed);
        let w_large = params.sample(1 << 22, 7000 + seed);
        small += block_frequencies(&w_small, 4).unwrap().max_deviation;
        large += block_frequencies(&w_large, 4).unwrap().max_deviation;
    }
    assert!(
        large < small,
        "order-4 deviation did not decay: {large} vs {small}"
    );
}

/// Sampled words pass both membership proxies at N = 16 with rate at
/// least 95% over 100 seeds (the support statement at finite scale).
#[test]
fn membership_success_rate() {
    let alpha = 0.2f64;
    let params = MeasureParams::from_alpha(alpha).unwrap();
    let mut successes = 0u32;
    for seed in 0..100u64 {
        let word = params.sample(1 << 16, seed);
        let normal = membership_normal(&word, 16, 3, 0.05).unwrap().pass;
        let pairs = membership_pair_freq(&word, alpha, 16, 0.05).unwrap().pass;
        if normal && pairs {
            successes += 1;
        }
    }
    assert!(successes >= 95, "membership success rate {successes}/100");
}

/// For words passing the block membership check at epsilon, the 11/00
/// balance gaps hold within a small multiple of epsilon (empirically
/// C = 4 is ample).
#[test]
fn nnorm_gaps_track_membership_epsilon() {
    let params = MeasureParams::from_alpha(0.2).unwrap();
    let epsilon = 0.05;
    for seed in 0..20u64 {
        let word = params.sample(1 << 16, seed);
        if !membership_normal(&word, 16, 3, epsilon).unwrap().pass {
            continue;
        }
        let table = dyadic_spectra::diagnostics::x_table(&word, 3).unwrap();
        let gaps = dyadic_spectra::diagnostics::nnorm_gap(&table, epsilon);
        assert!(
            gaps.min_epsilon <= 4.0 * epsilon,
            "seed {seed}: min epsilon {} above 4 * {epsilon}",
            gaps.min_epsilon
        );
    }
}

/// Restriction to an arithmetic subsequence keeps sampled words block-
/// balanced (the subsequence-normality statement at finite scale).
#[test]
fn arithmetic_subsequence_stays_balanced() {
    let params = MeasureParams::uniform();
    let word = params.sample(1 << 20, 55);
    let sub = dyadic_spectra::diagnostics::arithmetic_subsequence(&word, 0, 3).unwrap();
    for order in 1..=2u32 {
        let report = block_frequencies(&sub, order).unwrap();
        assert!(
            report.max_deviation < 0.02,
            "order {order}: deviation {}",
            report.max_deviation
        );
    }
}
