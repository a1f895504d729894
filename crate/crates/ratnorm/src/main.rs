fn main() {
    std::process::exit(ratnorm::cli::main_with_args(std::env::args().collect()));
}
