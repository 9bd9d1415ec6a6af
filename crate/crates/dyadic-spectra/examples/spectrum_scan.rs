//! Tabulate all three spectrum families over an alpha grid and print the
//! fixed-layout CSV. The subset chain normal <= freq(1/2) <= level is
//! visible directly in the columns.
//!
//! ```sh
//! cargo run --example spectrum_scan
//! ```

use dyadic_spectra::spectra::{spectrum_scan, write_scan_csv, GridSpec, SpectrumFamily};

fn main() {
    let alpha = GridSpec::new(0.0, 0.5, 0.05).unwrap();
    let theta_half = GridSpec::point(0.5).unwrap();

    println!("# level-set family");
    let rows = spectrum_scan(SpectrumFamily::LevelSet, &alpha, None, 1e-12).unwrap();
    write_scan_csv(&rows, std::io::stdout()).unwrap();

    println!("\n# normal slice");
    let rows = spectrum_scan(SpectrumFamily::Normal, &alpha, None, 1e-12).unwrap();
    write_scan_csv(&rows, std::io::stdout()).unwrap();

    println!("\n# digit-frequency slice at theta = 1/2");
    let rows = spectrum_scan(SpectrumFamily::Frequency, &alpha, Some(&theta_half), 1e-12).unwrap();
    write_scan_csv(&rows, std::io::stdout()).unwrap();
}
