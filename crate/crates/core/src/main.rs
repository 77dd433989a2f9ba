fn main() {
    std::process::exit(simgcf::cli::main_with_args(std::env::args_os()));
}
