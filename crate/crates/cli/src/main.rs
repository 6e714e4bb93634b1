use clap::Parser;
use resprune_cli::args::Cli;
use resprune_cli::{exit, run};

fn main() {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("RESPRUNE_THREADS") {
        match n.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // Only fails if a pool already exists, which cannot happen here.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: RESPRUNE_THREADS must be a positive integer, got {n:?}");
                std::process::exit(exit::USAGE);
            }
        }
    }
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
