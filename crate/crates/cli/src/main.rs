fn main() {
    std::process::exit(geoop_cli::run(std::env::args_os()));
}
