fn main() {
    std::process::exit(mmwsim::cli::main_with_args(std::env::args_os()));
}
