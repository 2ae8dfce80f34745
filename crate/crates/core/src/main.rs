fn main() {
    std::process::exit(edvqe::cli::run(std::env::args_os()));
}
