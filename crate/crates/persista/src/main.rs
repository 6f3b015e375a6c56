fn main() { std::process::exit(persista::cli::run(std::env::args())); }
