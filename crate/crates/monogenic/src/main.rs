fn main() {
    std::process::exit(monogenic::cli::run());
}
