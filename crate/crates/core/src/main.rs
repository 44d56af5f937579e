fn main() {
    std::process::exit(rigepi::cli::run(std::env::args_os()));
}
