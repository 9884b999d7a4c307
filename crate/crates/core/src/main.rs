fn main() {
    std::process::exit(qstruct::cli::run(std::env::args_os()));
}
