fn main() {
    std::process::exit(icdof_cli::run(std::env::args_os()));
}
