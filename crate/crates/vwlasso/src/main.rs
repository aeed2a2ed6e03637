fn main() {
    std::process::exit(vwlasso::cli::run(std::env::args_os()));
}
