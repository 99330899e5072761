fn main() {
    std::process::exit(subdiv_cli::run(std::env::args_os()));
}
