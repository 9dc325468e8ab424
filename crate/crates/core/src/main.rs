fn main() {
    std::process::exit(trapspace::cli::run(std::env::args_os()));
}
