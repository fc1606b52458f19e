fn main() {
    std::process::exit(geodom_cli::run(std::env::args_os()));
}
