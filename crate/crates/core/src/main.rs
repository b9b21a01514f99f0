fn main() {
    std::process::exit(starcore::cli::main_with_env());
}
