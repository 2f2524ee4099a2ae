fn main() {
    let code = optframe::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
