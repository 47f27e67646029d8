//! Limit temperature of one criterion for one Hamiltonian.
//!
//!     cargo run --release --example limit_temperature -- [N] [sud|spin|ppt]

use sudsq::models::{HamiltonianSpec, ModelKind};
use sudsq::scan::{limit_temperature, CriterionTag, ScanConfig};

fn main() -> sudsq::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let tag: CriterionTag = args.get(2).map(String::as_str).unwrap_or("sud").parse()?;
    let cfg = ScanConfig::new(HamiltonianSpec::new(ModelKind::SudSinglet, n, 3), tag);
    let start = std::time::Instant::now();
    let r = limit_temperature(&cfg)?;
    println!(
        "N={n} d=3 {tag}: T_limit = {:.4} ({} evaluations, {:.1?})",
        r.limit_temperature,
        r.evaluations,
        start.elapsed()
    );
    Ok(())
}
