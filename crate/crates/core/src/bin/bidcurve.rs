fn main() {
    std::process::exit(bidcurve::cli::run(std::env::args_os()));
}
