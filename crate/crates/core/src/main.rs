use std::io::{self, Write};
use std::process::ExitCode;

// Normalizing λ-terms and melding deep diagrams recurse deeply; run on a
// thread with room for it.
const STACK_SIZE: usize = 1 << 30;

fn main() -> ExitCode {
    let code = std::thread::Builder::new()
        .name("hashcons".into())
        .stack_size(STACK_SIZE)
        .spawn(|| {
            let stdout = io::stdout();
            let stderr = io::stderr();
            let (mut out, mut err) = (stdout.lock(), stderr.lock());
            let code = hashcons::cli::main_with_args(std::env::args_os(), &mut out, &mut err);
            let _ = out.flush();
            code
        })
        .expect("failed to spawn the worker thread")
        .join()
        .unwrap_or(101);
    ExitCode::from(code as u8)
}
