use clap::Parser;

fn main() {
    let cli = qfsplit_cli::args::Cli::parse();
    std::process::exit(qfsplit_cli::run(&cli));
}
