fn main() {
    std::process::exit(pinset::cli::run_cli(std::env::args_os()));
}
