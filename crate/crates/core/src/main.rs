fn main() {
    std::process::exit(excised_core::pipeline::cli::main_from_env());
}
