use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use holefem_cli::{report, run, Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Study(args) => match run(&args) {
            Ok((records, csv)) => {
                if args.csv.is_none() {
                    let _ = std::io::stdout().write_all(&csv);
                }
                for (series, (h1, l2)) in report::rate_table(&records) {
                    let fmt = |r: Option<f64>| r.map_or("-".to_string(), |r| format!("{r:.3}"));
                    eprintln!("{series}: H1 rate {}, L2 rate {}", fmt(h1), fmt(l2));
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
