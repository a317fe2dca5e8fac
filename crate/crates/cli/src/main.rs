use clap::Parser;
use magharden_cli::{configure_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    if let Err(e) = result {
        eprintln!("magharden: {e}");
        std::process::exit(e.exit_code());
    }
}
