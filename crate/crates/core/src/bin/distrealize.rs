use clap::Parser;

use distrealize::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
