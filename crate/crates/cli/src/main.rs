fn main() {
    std::process::exit(lfam_cli::run(std::env::args_os()));
}
