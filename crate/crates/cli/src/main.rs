fn main() {
    std::process::exit(unimoment_cli::run(std::env::args_os()));
}
