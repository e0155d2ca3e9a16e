use std::io::{BufWriter, Write};

fn main() {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut code = hca_core::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    if out.flush().is_err() && code == hca_core::cli::EXIT_OK {
        code = hca_core::cli::EXIT_INTERNAL;
    }
    std::process::exit(code);
}
