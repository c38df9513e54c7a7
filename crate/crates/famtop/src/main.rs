use clap::Parser;
use famtop::cli::{exit_code_for, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &report) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            } else {
                print!("{report}");
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}
