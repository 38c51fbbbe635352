use std::process::ExitCode;

use rmwb::commands::{run, Options};
use rmwb::CmdError;

const USAGE: &str = "usage: rmwb <validate|builtin|functor|roundtrip|iso|render> [args] \
[--functor <name>] [--out <path>] [--bounded] [--generalized]";

fn parse_args(argv: &[String]) -> Result<(String, Vec<String>, Options), CmdError> {
    let mut it = argv.iter();
    let command = it
        .next()
        .ok_or_else(|| CmdError::Parse(USAGE.into()))?
        .clone();
    let mut positional = Vec::new();
    let mut opts = Options::default();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--functor" => {
                opts.functor = Some(
                    it.next()
                        .ok_or_else(|| CmdError::Parse("--functor needs a value".into()))?
                        .clone(),
                )
            }
            "--out" => {
                opts.out = Some(
                    it.next()
                        .ok_or_else(|| CmdError::Parse("--out needs a value".into()))?
                        .clone(),
                )
            }
            "--bounded" => opts.bounded = true,
            "--generalized" => opts.generalized = true,
            flag if flag.starts_with("--") => {
                return Err(CmdError::Parse(format!("unknown flag '{flag}'")))
            }
            _ => positional.push(arg.clone()),
        }
    }
    Ok((command, positional, opts))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let parsed = match parse_args(&argv) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", e.message());
            return ExitCode::from(e.code() as u8);
        }
    };
    let (command, positional, opts) = parsed;
    match run(&command, &positional, &opts) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.code() as u8)
        }
    }
}
