use std::process::ExitCode;

fn main() -> ExitCode {
    seqbreak::cli::main_entry()
}
