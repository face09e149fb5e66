use clap::Parser;

use ncv_cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(error) = ncv_cli::run(cli) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
