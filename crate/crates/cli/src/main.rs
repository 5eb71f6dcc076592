use clap::Parser;
use rootnum_cli::{run, RunConfig};
use std::io::Write;

fn main() {
    let config = RunConfig::parse();
    let out = run(&config);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.status);
}
