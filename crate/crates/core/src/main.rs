fn main() {
    std::process::exit(oulab::cli::main_with_args(std::env::args_os()));
}
