fn main() {
    std::process::exit(dyadic_spectra::cli::run_from_env());
}
