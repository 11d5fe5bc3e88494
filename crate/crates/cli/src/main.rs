fn main() {
    std::process::exit(squeeze_cli::run(std::env::args_os()));
}
