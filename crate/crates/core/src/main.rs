fn main() {
    std::process::exit(memvel::cli::run(std::env::args_os()));
}
