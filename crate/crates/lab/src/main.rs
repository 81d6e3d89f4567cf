fn main() {
    std::process::exit(prset::cli::run_cli(std::env::args_os()));
}
