use std::io::{self, IsTerminal};
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let color = io::stdout().is_terminal();
    let code = rds_core::cli::run_cli_with_color(&argv, &mut io::stdout().lock(), &mut io::stderr().lock(), color);
    ExitCode::from(code as u8)
}
