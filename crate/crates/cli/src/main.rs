fn main() {
    std::process::exit(binext_cli::run(std::env::args_os()));
}
