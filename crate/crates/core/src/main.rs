fn main() {
    std::process::exit(hecke::cli::run(std::env::args_os()));
}
