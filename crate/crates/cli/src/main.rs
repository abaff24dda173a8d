fn main() {
    std::process::exit(qwalk_cli::main_with_args(std::env::args_os()));
}
