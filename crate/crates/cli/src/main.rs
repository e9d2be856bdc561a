fn main() {
    std::process::exit(rsgraph_cli::run(std::env::args_os()));
}
