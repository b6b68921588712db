fn main() {
    std::process::exit(qframe::cli::main());
}
