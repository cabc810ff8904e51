fn main() {
    std::process::exit(latfix::cli::run(std::env::args_os()));
}
