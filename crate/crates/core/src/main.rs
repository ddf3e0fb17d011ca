fn main() {
    let mut out = std::io::stdout();
    let code = drinfeld_ao::cli::run(std::env::args_os(), &mut out);
    std::process::exit(code);
}
