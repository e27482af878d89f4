use clap::Parser;
use dynsa::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = run(cli, &mut stdout.lock()) {
        eprintln!("dynsa: {e}");
        std::process::exit(e.exit_code());
    }
}
