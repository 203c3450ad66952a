use clap::Parser;
use nashvop_cli::{run_command, Cli};

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    let code = run_command(&cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
