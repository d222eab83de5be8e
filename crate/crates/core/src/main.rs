fn main() {
    std::process::exit(powerfree::cli::main());
}
