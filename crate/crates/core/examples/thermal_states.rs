//! Collective Hamiltonians, their low-lying spectrum and thermal states.

use sudsq::basis::gellmann_basis;
use sudsq::correlations::collective_bundle;
use sudsq::criteria::xi_sud_collective;
use sudsq::models::{HamiltonianSpec, ModelKind, ThermalFamily};

fn main() -> sudsq::Result<()> {
    let basis = gellmann_basis(3)?;
    let specs = [
        HamiltonianSpec::new(ModelKind::SudSinglet, 4, 3),
        HamiltonianSpec::new(ModelKind::Spin, 4, 3).with_gamma(1.0),
        HamiltonianSpec::new(ModelKind::SpinFerro, 4, 3).with_gamma(0.0),
        HamiltonianSpec {
            seed: Some(1),
            ..HamiltonianSpec::new(ModelKind::RandomCollective, 4, 3)
        },
    ];
    for spec in specs {
        let fam = ThermalFamily::new(&spec.build()?, spec.d, spec.n)?;
        let levels = fam.levels();
        let low: Vec<String> = levels
            .iter()
            .take(4)
            .map(|l| format!("{:.4}(×{})", l.energy, l.end - l.start))
            .collect();
        println!("{}", serde_json::to_string(&spec)?);
        println!("  {} levels, lowest {}", levels.len(), low.join(" "));
        for t in [0.0, 0.5, 2.0, 8.0] {
            let xi = xi_sud_collective(&collective_bundle(&fam.state(t), &basis)?)?;
            println!("  T={t:<4} ξ = {:+.4}", xi.value);
        }
    }
    Ok(())
}
