//! Windowed level-set counts against the closed-form spectrum.
//!
//! The count of length-n words with digit frequency near theta and pair
//! frequency near alpha grows like exp(n * rate); the rate approaches the
//! spectrum value from above (single-scale counting over-counts the
//! all-scales sets slightly). Above n = 1024 the count switches to the
//! tilted windowed pass, so n = 2^12 and 2^13 stay cheap.
//!
//! ```sh
//! cargo run --example level_set_rate
//! ```

use dyadic_spectra::counting::{cover_bound, level_set_count, window_from_fractions, CountMode};
use dyadic_spectra::spectra::h_freq;

fn main() {
    let (theta, alpha, eps) = (0.4, 0.1, 0.02);
    let formula = h_freq(theta, alpha).unwrap().entropy_nats.unwrap();
    println!("target (theta, alpha) = ({theta}, {alpha}), windows ± {eps}");
    println!("spectrum value h = {formula:.6} nats\n");
    println!(
        "{:>6} {:>14} {:>12} {:>10}",
        "n", "ln count", "rate", "rate - h"
    );
    for exp in [8u32, 10, 12, 13] {
        let n = 1u32 << exp;
        let ones = window_from_fractions(n, theta - eps, theta + eps);
        let pairs = window_from_fractions(n / 2, alpha - eps, alpha + eps);
        let count = level_set_count(n, ones, pairs, CountMode::LogSpace).unwrap();
        let rate = count.log_value() / f64::from(n);
        println!(
            "{n:>6} {:>14.4} {rate:>12.6} {:>+10.6}",
            count.log_value(),
            rate - formula
        );
    }

    // The analytic cover bound dominates the exact count at its scale.
    let (n_exp, m, eps, alpha) = (10u32, 4u32, 0.05, 0.1);
    let n = 1u32 << n_exp;
    let ones = window_from_fractions(n, 0.5 - eps, 0.5 + eps);
    let pairs = window_from_fractions(n / 2, alpha - eps, alpha + eps);
    let exact = level_set_count(n, ones, pairs, CountMode::LogSpace)
        .unwrap()
        .log_value();
    let bound = cover_bound(n_exp, m, eps, alpha).unwrap();
    println!("\ncover bound at 2^{n_exp}, m = {m}, eps = {eps}, alpha = {alpha}:");
    println!("  exact windowed ln count = {exact:.2}");
    println!(
        "  analytic bound          = {bound:.2}  (dominates: {})",
        bound >= exact
    );
}
