fn main() {
    std::process::exit(qhchain::cli::main_with(std::env::args_os()));
}
