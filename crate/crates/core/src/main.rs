fn main() {
    std::process::exit(spreadlab::cli::main_with_std());
}
