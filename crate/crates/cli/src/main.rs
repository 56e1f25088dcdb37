fn main() {
    std::process::exit(hmskit::cli::main_with_args(std::env::args_os()));
}
