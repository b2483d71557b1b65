fn main() {
    std::process::exit(dssc::cli::main_with_args(std::env::args_os()));
}
