fn main() {
    std::process::exit(thuefam::cli::run());
}
