//! Spin-squeezing inequalities on Dicke states mapped to spin-1 particles,
//! compared with the su(3) parameter.

use sudsq::basis::{gellmann_basis, spin_matrices};
use sudsq::correlations::collective_bundle;
use sudsq::criteria::{spin_squeezing_set, xi_spin, xi_sud_collective};
use sudsq::many_body::avg_two_body;
use sudsq::models::{dicke_state, spin1_map};

fn main() -> sudsq::Result<()> {
    let spin = spin_matrices(3)?;
    let basis = gellmann_basis(3)?;
    for m in 0..=4 {
        let st = spin1_map(&dicke_state(8, m)?)?;
        let set = spin_squeezing_set(&st, &spin)?;
        let xj = xi_spin(&avg_two_body(&st)?, 4, &spin)?;
        let xs = xi_sud_collective(&collective_bundle(&st, &basis)?)?;
        println!(
            "Dicke(8,{m}) → 4 spin-1: margins [{:.3}, {:.3}, {:.3}, {:.3}], ξ_J {:+.3}, ξ_su(3) {:+.3}",
            set.details["margin_1"], set.details["margin_2"], set.details["margin_3"], set.details["margin_4"],
            xj.value, xs.value
        );
    }
    Ok(())
}
