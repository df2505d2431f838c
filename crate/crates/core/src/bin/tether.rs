fn main() {
    std::process::exit(tether_cover::cli::run(std::env::args_os()));
}
