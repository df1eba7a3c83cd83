mod cli;
mod commands;
mod config;
mod error;
mod goldens;
mod output;
mod values;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use config::ConfigFile;
use error::{CliError, CliResult};
use output::{render, Format, Table};

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, cfg: &ConfigFile, tables: &[Table]) -> CliResult<()> {
    let format = cli.format.or(cfg.format).unwrap_or(Format::Csv);
    let raw = cli.raw || cfg.raw.unwrap_or(false);
    if let Some(dir) = cli.out_dir.as_ref().or(if cli.out.is_none() { cfg.out_dir.as_ref() } else { None }) {
        fs::create_dir_all(dir).map_err(|e| CliError::invalid(format!("{}: {e}", dir.display())))?;
        for t in tables {
            write_file(&dir.join(format!("{}.{}", t.name, format.extension())), &render(std::slice::from_ref(t), format, raw))?;
        }
        return Ok(());
    }
    let text = render(tables, format, raw);
    match &cli.out {
        Some(path) => write_file(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::invalid(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let tables = match &cli.command {
        Command::Rcr(a) => commands::rcr(&cfg.merge("rcr", a, &["portfolio"])?)?,
        Command::Hqla(a) => commands::hqla(&cfg.merge("hqla", a, &[])?)?,
        Command::Rst(a) => commands::rst(&cfg.merge("rst", a, &["portfolio"])?)?,
        Command::Optimize(a) => commands::optimize(&cfg.merge("optimize", a, &["portfolio", "corr"])?)?,
        Command::Buffer(a) => commands::buffer(&cfg.merge("buffer", a, &[])?)?,
        Command::Swing(a) => commands::swing(&cfg.merge("swing", a, &[])?)?,
        Command::Gate(a) => commands::gate(&cfg.merge("gate", a, &[])?)?,
        Command::Goldens(a) => {
            let report = match &a.bless {
                Some(dir) => goldens::bless(dir)?,
                None => goldens::check()?,
            };
            print!("{report}");
            return Ok(());
        }
    };
    emit(cli, &cfg, &tables)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, matching our validation code
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.code() as u8)
        }
    }
}
