//! Binary entry point: parse arguments, execute, print, map errors to exit
//! codes (2 for invalid input, 3 for internal cross-check failures).

use clap::Parser;

fn main() {
    let cli = gibbsgate::Cli::parse();
    match gibbsgate::execute(&cli) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
