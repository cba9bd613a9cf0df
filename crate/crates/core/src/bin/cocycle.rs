fn main() {
    std::process::exit(rigid_cocycles::cli::main_with(std::env::args_os()));
}
