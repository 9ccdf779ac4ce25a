fn main() {
    std::process::exit(commsat::cli::run());
}
