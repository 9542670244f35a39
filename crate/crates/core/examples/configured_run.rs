//! Drive the persisted workflow from a TOML configuration: simulate, estimate, report.
//!
//! cargo run --release --example configured_run -- configs/irregular.toml

use afdecon::cli::{cmd_estimate, cmd_report, cmd_simulate, ObservationFormat, RunConfig};

fn main() -> afdecon::Result<()> {
    let mut cfg = match std::env::args().nth(1) {
        Some(path) => RunConfig::load(path.as_ref())?,
        None => RunConfig::default(),
    };
    let root = cfg.out.clone();

    cfg.out = root.join("simulate");
    print!("{}", cmd_simulate(&cfg)?);
    let file = match cfg.sample.format {
        ObservationFormat::Csv => "observations.csv",
        ObservationFormat::Afdc => "observations.afdc",
    };
    cfg.sample.input = Some(cfg.out.join(file));

    cfg.out = root.join("estimate");
    print!("{}", cmd_estimate(&cfg)?);

    cfg.out = root.join("report");
    print!("{}", cmd_report(&cfg)?);
    println!("outputs under {}", root.display());
    Ok(())
}
