fn main() {
    std::process::exit(bsq_cli::run(std::env::args_os()));
}
