use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = poisson_avg_cli::Cli::parse();
    std::process::exit(poisson_avg_cli::run(&cli));
}
