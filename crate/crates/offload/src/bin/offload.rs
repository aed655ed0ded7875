fn main() {
    std::process::exit(offload::cli::run());
}
