fn main() {
    env_logger::init();
    std::process::exit(keyvec::cli::run(std::env::args_os()));
}
