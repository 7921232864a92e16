use clap::Parser;

use colored_tverberg::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
