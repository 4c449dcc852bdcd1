fn main() {
    std::process::exit(weakdep::cli::dispatch(std::env::args_os()));
}
