fn main() {
    std::process::exit(haargauss::cli::main_with_args(std::env::args_os()));
}
