fn main() {
    std::process::exit(polydouble::cli::run(std::env::args_os()));
}
