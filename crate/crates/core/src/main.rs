fn main() {
    std::process::exit(kuga_satake::cli::run());
}
