fn main() {
    std::process::exit(panto::cli::main_with_env());
}
