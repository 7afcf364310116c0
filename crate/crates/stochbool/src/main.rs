use clap::Parser;

use stochbool::cli::{run, Cli};

fn main() -> anyhow::Result<()> {
    run(Cli::parse())
}
