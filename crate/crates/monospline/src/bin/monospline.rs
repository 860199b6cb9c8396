fn main() {
    std::process::exit(monospline::cli::run());
}
