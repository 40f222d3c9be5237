fn main() {
    std::process::exit(diarkit::cli::run());
}
