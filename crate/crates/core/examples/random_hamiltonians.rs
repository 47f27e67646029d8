//! Random collective Hamiltonians: how long the su(d) parameter and the
//! spin-squeezing inequalities keep detecting their thermal states.

use sudsq::models::{HamiltonianSpec, ModelKind};
use sudsq::scan::{CriterionTag, ScanConfig, ThermalScanner};

fn main() -> sudsq::Result<()> {
    let (mut sud_wins, trials) = (0, 10);
    for seed in 0..trials {
        let mut spec = HamiltonianSpec::new(ModelKind::RandomCollective, 4, 3);
        spec.seed = Some(seed);
        let scanner = ThermalScanner::from_spec(&spec)?;
        let cfg = ScanConfig::new(spec, CriterionTag::Sud);
        let t_sud = scanner.limit_temperature(CriterionTag::Sud, &cfg)?.limit_temperature;
        let t_spin = scanner.limit_temperature(CriterionTag::Spin, &cfg)?.limit_temperature;
        if t_sud > t_spin {
            sud_wins += 1;
        }
        println!("seed {seed}: T_sud {t_sud:.4}  T_spin {t_spin:.4}");
    }
    println!("su(d) parameter detects longer in {sud_wins}/{trials} cases");
    Ok(())
}
