fn main() {
    std::process::exit(insertion_encoding::cli::run(std::env::args_os()));
}
