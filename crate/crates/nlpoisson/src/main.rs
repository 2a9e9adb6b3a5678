fn main() {
    std::process::exit(nlpoisson::cli::main_entry());
}
