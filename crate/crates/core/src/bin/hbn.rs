use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use hbn::cli::{run, Request};

fn main() -> ExitCode {
    let request = Request::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run(&request, &mut out, &mut io::stderr());
    let _ = out.flush();
    ExitCode::from(code as u8)
}
