use std::process::ExitCode;

fn main() -> ExitCode {
    adaptroot_cli::main_entry()
}
