fn main() {
    std::process::exit(likesim::cli::run(std::env::args_os()));
}
