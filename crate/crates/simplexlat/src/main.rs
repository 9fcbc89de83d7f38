fn main() {
    std::process::exit(simplexlat::cli::run(std::env::args_os()));
}
