fn main() {
    std::process::exit(monic_rank::cli::run(std::env::args_os()));
}
