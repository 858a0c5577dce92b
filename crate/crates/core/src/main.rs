fn main() { std::process::exit(eisenpole::cli::run()); }
