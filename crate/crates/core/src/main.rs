fn main() {
    env_logger::init();
    std::process::exit(quadfourier::harness::cli_dispatch(std::env::args_os()));
}
