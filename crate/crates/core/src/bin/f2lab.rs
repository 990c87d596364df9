fn main() {
    std::process::exit(f2lab::cli::dispatch(std::env::args_os()));
}
