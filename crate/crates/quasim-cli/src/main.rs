use clap::Parser;

fn main() {
    let cli = quasim_cli::Cli::parse();
    if let Err(e) = quasim_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
