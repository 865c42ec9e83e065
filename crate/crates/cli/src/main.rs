fn main() {
    std::process::exit(shiftlab_cli::run(std::env::args_os()));
}
