fn main() {
    std::process::exit(logfol::cli::run(std::env::args_os()));
}
