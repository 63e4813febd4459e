fn main() {
    std::process::exit(iwagraph::cli::run());
}
