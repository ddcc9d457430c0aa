fn main() {
    std::process::exit(positroidal::cli::run(std::env::args()));
}
