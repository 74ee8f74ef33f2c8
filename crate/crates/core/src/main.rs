//! Binary entry point; all logic lives in the library's `cli` module.

use std::io::Write;

fn main() {
    let mut stdout = std::io::stdout().lock();
    let code = toricproj::cli::run_from(std::env::args_os(), &mut stdout);
    let _ = stdout.flush();
    std::process::exit(code);
}
