//! Profile matrices: the joint tally of words by (ones, pairs).
//!
//! Small matrices print exactly and match full enumeration; log-space
//! matrices normalize to n ln 2 at sizes where enumeration is hopeless.
//!
//! ```sh
//! cargo run --example profile_matrix
//! ```

use dyadic_spectra::counting::{brute_force_profile, profile_matrix, CountMode};

fn main() {
    let n = 8u32;
    let matrix = profile_matrix(n, CountMode::Exact).unwrap();
    let oracle = brute_force_profile(n).unwrap();

    println!("profile matrix at n = {n} (rows: ones, columns: pairs):");
    print!("{:>6}", "");
    for pairs in 0..=n / 2 {
        print!("{pairs:>8}");
    }
    println!();
    for ones in 0..=n {
        print!("{ones:>6}");
        for pairs in 0..=n / 2 {
            print!("{:>8}", matrix.entry_exact(ones, pairs));
            assert_eq!(
                matrix.entry_exact(ones, pairs),
                oracle.entry_exact(ones, pairs)
            );
        }
        println!();
    }
    println!(
        "total = {} = 2^{n}; every cell equals the enumeration oracle",
        matrix.total_exact()
    );

    let pairs_zero: dyadic_spectra::BigCount = (0..=n).map(|o| matrix.entry_exact(o, 0)).sum();
    println!("pairs = 0 column sums to {pairs_zero} = count of no-11 words");

    let n = 512u32;
    let log_matrix = profile_matrix(n, CountMode::LogSpace).unwrap();
    let total = log_matrix.total_log();
    println!("\nlog-space matrix at n = {n}:");
    println!("  log total      = {total:.12}");
    println!(
        "  n ln 2         = {:.12}",
        f64::from(n) * std::f64::consts::LN_2
    );
    println!("  mode peak cell = (ones {}, pairs {})", n / 2, n / 8);
    println!(
        "  log count there = {:.6}",
        log_matrix.entry_log(n / 2, n / 8)
    );
}
