use std::process::ExitCode;

use clap::Parser;
use whc::report::{self, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let out = report::run(&cli, &argv);
    print!("{}", out.stdout);
    if let Some(path) = &cli.report {
        let text = serde_json::to_string_pretty(&out.report).expect("serializable report");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("whc: cannot write report {}: {e}", path.display());
            return ExitCode::from(report::EXIT_INPUT as u8);
        }
    }
    ExitCode::from(out.exit_code as u8)
}
