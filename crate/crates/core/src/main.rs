fn main() {
    std::process::exit(horolab::cli::run(std::env::args_os()));
}
