fn main() {
    std::process::exit(unimod::cli::run(std::env::args_os()));
}
