use std::process::ExitCode;

fn main() -> ExitCode {
    hbgrid::cli::main_entry()
}
