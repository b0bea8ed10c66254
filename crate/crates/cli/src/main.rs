use clap::Parser;
use superdirac_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, text) = execute(&cli);
    print!("{}", text);
    std::process::exit(code);
}
