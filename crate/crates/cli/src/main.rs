use clap::Parser;

use dehornoy_cli::{run, CliConfig};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let config = CliConfig::parse();
    std::process::exit(run(config));
}
