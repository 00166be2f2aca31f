fn main() {
    std::process::exit(jordan_envelope::cli::main());
}
