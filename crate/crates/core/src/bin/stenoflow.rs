fn main() {
    std::process::exit(stenoflow::cli::main_with_args(std::env::args_os()));
}
