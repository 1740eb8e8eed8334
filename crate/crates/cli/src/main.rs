use clap::Parser;
use poisson_motion_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let code = match poisson_motion_cli::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pmotion: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
