use clap::Parser;
use filcol::config::{Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|rc| filcol::run(&rc));
    match result {
        Ok(artifact) => {
            if let Some(s) = artifact.summary {
                eprintln!("{s}");
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
