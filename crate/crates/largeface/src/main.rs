fn main() {
    std::process::exit(largeface::cli::run(std::env::args_os()));
}
