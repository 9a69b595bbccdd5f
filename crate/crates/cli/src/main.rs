use clap::Parser;

fn main() {
    let cli = hlb::commands::Cli::parse();
    std::process::exit(hlb::commands::run(cli));
}
