use clap::Parser;

fn main() {
    let cli = transporter_cli::Cli::parse();
    std::process::exit(transporter_cli::main_with(&cli));
}
