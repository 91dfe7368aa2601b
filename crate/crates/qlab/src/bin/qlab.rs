fn main() {
    std::process::exit(qlab::cli::main());
}
