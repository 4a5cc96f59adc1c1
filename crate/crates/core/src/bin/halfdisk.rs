fn main() {
    std::process::exit(halfdisk::cli::run(std::env::args_os()));
}
