//! Collective correlation matrices of a random three-qutrit state, and the
//! identities tying them to the average two-body matrix.

use sudsq::basis::gellmann_basis;
use sudsq::correlations::{check_identities, collective_bundle};
use sudsq::models::{random_state, rng_from_seed};

fn main() -> sudsq::Result<()> {
    let basis = gellmann_basis(3)?;
    let state = random_state(3, 3, &mut rng_from_seed(7))?;
    let b = collective_bundle(&state, &basis)?;

    println!("<G> = {:?}", b.gexp.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());
    println!("Tr C = {:.6}  Tr γ = {:.6}  Tr Q = {:.6}", b.c.trace(), b.gamma.trace(), b.q.trace());
    println!("diag 𝔘 = {:?}", b.u.diag().iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>());

    let ids = check_identities(&state, &basis)?;
    println!("largest identity residual: {:.2e}", ids.max_residual());
    Ok(())
}
