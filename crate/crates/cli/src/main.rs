use std::process::ExitCode;

use qsm_cli::{runner, CliError};

const USAGE: &str = "\
usage: qsm <subcommand> ...
  solve <config>                     run gradient descent per the config
  build <config>                     assemble and dump the Pauli-sum Hamiltonian
  diag <config>                      exact sector diagonalization
  resources <config>                 resource/complexity table over presets
  fit <config>                       calibrate well depths and fit the formula
  batch <output-dir>                 run every preset, writing traces/summaries
  trace-compare <a.csv> <b.csv> <tol_mev>   compare two trace files
";

fn dispatch(args: &[String]) -> Result<i32, CliError> {
    match args {
        [cmd, path] if cmd == "solve" => runner::cmd_solve(path),
        [cmd, path] if cmd == "build" => runner::cmd_build(path),
        [cmd, path] if cmd == "diag" => runner::cmd_diag(path),
        [cmd, path] if cmd == "resources" => runner::cmd_resources(path),
        [cmd, path] if cmd == "fit" => runner::cmd_fit(path),
        [cmd, dir] if cmd == "batch" => runner::cmd_batch(dir),
        [cmd, a, b, tol] if cmd == "trace-compare" => {
            let tol: f64 = tol
                .parse()
                .map_err(|_| CliError::Run(format!("bad tolerance '{tol}'")))?;
            runner::cmd_trace_compare(a, b, tol)
        }
        _ => {
            eprint!("{USAGE}");
            Ok(2)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                CliError::Config { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
