fn main() {
    std::process::exit(ambigame::cli::run(std::env::args_os()));
}
