fn main() {
    std::process::exit(vertex_cohomology::cli::main_with_args(std::env::args_os()));
}
