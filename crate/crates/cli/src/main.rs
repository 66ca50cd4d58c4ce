use clap::Parser;
use stable_ergo::cli::Cli;
use stable_ergo::{commands, report};

fn main() {
    // usage errors are configuration errors, not the "unknown" status 2
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let _ = e.print();
        std::process::exit(if e.use_stderr() { 1 } else { 0 });
    });
    let code = match commands::execute(&cli) {
        Ok(run) => match report::emit(&run.doc, run.output.format, run.output.out.as_deref(), &run.config, std::io::stdout().lock()) {
            Ok(()) => run.doc.exit as i32,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code() as i32
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    };
    std::process::exit(code);
}
