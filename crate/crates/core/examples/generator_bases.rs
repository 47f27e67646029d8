//! Generalized Gell-Mann bases, the anticommuting qutrit basis, spin
//! matrices and the flip operator.

use sudsq::basis::{anticomm_basis_d3, flip_from_basis, gellmann_basis, lambda_max, spin_matrices, swap_matrix};

fn main() -> sudsq::Result<()> {
    for d in 2..=5 {
        let b = gellmann_basis(d)?;
        let status = match b.validate() {
            Ok(()) => "ok".to_string(),
            Err(defect) => defect.to_string(),
        };
        println!("d={d}: {} generators, Λmax = {:.4}, validation {status}", b.len(), lambda_max(d));
    }

    let g = anticomm_basis_d3();
    println!("anticommuting qutrit basis valid: {}", g.validate().is_ok());
    let flip = flip_from_basis(&g);
    println!("F from generators vs swap: {:.2e}", flip.max_abs_diff(&swap_matrix(3)));

    let s = spin_matrices(3)?;
    println!("spin-{} algebra residual {:.2e}", s.j(), s.algebra_residual());
    Ok(())
}
