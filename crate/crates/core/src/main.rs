fn main() {
    std::process::exit(gaussent::cli::run(std::env::args_os()));
}
