fn main() {
    let code = framed_deformations::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
