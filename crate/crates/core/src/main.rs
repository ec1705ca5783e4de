use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tbk::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut text = serde_json::to_string_pretty(&outcome.report).expect("serializable");
            text.push('\n');
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(4);
            }
            eprintln!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let err =
                serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{err}");
            ExitCode::from(e.kind().exit_code() as u8)
        }
    }
}
