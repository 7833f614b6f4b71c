fn main() {
    std::process::exit(depthsep::cli::main_with_args(std::env::args_os()));
}
