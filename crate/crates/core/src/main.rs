fn main() {
    std::process::exit(altpow::cli::main_with_args(std::env::args_os()));
}
