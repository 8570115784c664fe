use clap::Parser;

use flowset::cli::{run, Cli, THREADS_ENV};

fn main() {
    let cli = Cli::parse();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = run(cli);
    if let Some(json) = &out.json {
        println!("{json}");
    }
    eprint!("{}", out.text);
    std::process::exit(out.code);
}
