fn main() {
    std::process::exit(ulrich_cli::run(std::env::args()));
}
