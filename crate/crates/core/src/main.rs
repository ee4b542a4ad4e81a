use clap::Parser;

fn main() {
    let config = extmodular::cli::RunConfig::parse();
    let (report, code) = extmodular::cli::run(config);
    print!("{report}");
    std::process::exit(code);
}
