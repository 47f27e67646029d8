//! A two-qutrit state that the squeezing parameter and CCNR miss while PPT
//! detects it.

use sudsq::basis::gellmann_basis;
use sudsq::criteria::{ccnr, ppt_all_bipartitions, xi_sud_two_body};
use sudsq::linalg::min_eigenvalue;
use sudsq::models::rho_ps3;

fn main() -> sudsq::Result<()> {
    let rho = rho_ps3();
    let basis = gellmann_basis(3)?;
    println!("physical: {} (λmin = {:.3e})", rho.is_physical(), min_eigenvalue(rho.rho())?);
    println!("ξ = {:.3e}", xi_sud_two_body(&rho, 2, &basis)?.value);
    println!("PPT λmin = {:.6}", ppt_all_bipartitions(&rho)?.value);
    println!("CCNR trace norm = {:.10}", ccnr(&rho)?.details["trace_norm"]);
    Ok(())
}
