use std::process::ExitCode;

use clap::Parser;
use stackel_cli::{exit_code, run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match &result {
        Ok(Outcome::Pass) => {}
        Ok(Outcome::Distinct(reason)) => println!("distinct: {reason}"),
        Ok(Outcome::Structural(reason)) => eprintln!("{}", serde_json::json!({ "error": "structure", "message": reason })),
        Err(e) => eprintln!("{}", e.reason()),
    }
    ExitCode::from(exit_code(&result))
}
