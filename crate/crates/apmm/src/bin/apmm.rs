use std::process::exit;

fn main() {
    exit(apmm::cli::run(std::env::args()));
}
