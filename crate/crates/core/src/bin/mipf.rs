use clap::Parser;

fn main() {
    std::process::exit(mipf::cli::run(mipf::cli::Cli::parse()));
}
