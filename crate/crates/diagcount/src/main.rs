fn main() {
    std::process::exit(diagcount::cli::run(std::env::args().skip(1).collect()));
}
