fn main() {
    std::process::exit(k0var::cli::main_with_args(std::env::args_os()));
}
