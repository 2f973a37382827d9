fn main() {
    std::process::exit(cayley_census::cli::run(std::env::args_os()));
}
