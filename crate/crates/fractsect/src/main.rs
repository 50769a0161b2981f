fn main() {
    std::process::exit(fractsect::cli::main_entry());
}
