fn main() {
    std::process::exit(bbranching::cli::run());
}
