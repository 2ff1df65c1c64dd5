fn main() {
    std::process::exit(sclasso::cli::main(std::env::args_os()));
}
