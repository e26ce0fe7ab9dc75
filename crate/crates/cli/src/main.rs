fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = std::panic::catch_unwind(|| stackelberg_cli::main_with_args(args)).unwrap_or(1);
    std::process::exit(code);
}
