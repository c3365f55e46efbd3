use std::io::Write;

use clap::Parser;
use moishezon_cli::{run, Cli};

fn main() {
    let out = run(Cli::parse());
    std::io::stdout()
        .write_all(out.stdout.as_bytes())
        .expect("stdout");
    std::io::stderr()
        .write_all(out.stderr.as_bytes())
        .expect("stderr");
    std::process::exit(out.code);
}
