fn main() {
    std::process::exit(sigma_forge::run(std::env::args_os()));
}
