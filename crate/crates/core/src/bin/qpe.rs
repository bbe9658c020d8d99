fn main() {
    std::process::exit(qpe_core::cli::main());
}
