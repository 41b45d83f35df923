fn main() {
    std::process::exit(eflab::cli::main_with_env());
}
