use std::process::ExitCode;

fn main() -> ExitCode {
    lame_spectra_cli::run_main()
}
