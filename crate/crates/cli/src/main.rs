fn main() {
    std::process::exit(tridyn_cli::run_cli(std::env::args_os()));
}
