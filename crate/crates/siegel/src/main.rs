fn main() {
    std::process::exit(siegel::cli::run());
}
