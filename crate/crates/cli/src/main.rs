fn main() {
    std::process::exit(gqs_cli::run(std::env::args_os()));
}
