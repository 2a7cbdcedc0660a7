fn main() {
    std::process::exit(etsg_cli::run(std::env::args_os()));
}
