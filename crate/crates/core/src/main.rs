fn main() {
    std::process::exit(netdict::cli::dispatch(std::env::args_os()));
}
