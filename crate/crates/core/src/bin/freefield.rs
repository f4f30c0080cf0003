fn main() {
    std::process::exit(freefield::cli::main());
}
