fn main() {
    std::process::exit(divsum_cli::run(std::env::args_os()));
}
