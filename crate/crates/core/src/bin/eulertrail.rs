fn main() {
    std::process::exit(eulertrail::cli::main_with_args(std::env::args_os()));
}
