fn main() {
    std::process::exit(cosserat_cli::main_with_args(std::env::args_os().collect()));
}
