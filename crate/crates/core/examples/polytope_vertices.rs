//! Polytope vertices for fixed ⟨G⟩, the coordinates of a random state, and
//! the vertex states that realize A_k and B_k.

use sudsq::basis::gellmann_basis;
use sudsq::correlations::collective_bundle;
use sudsq::models::{random_state, rng_from_seed};
use sudsq::polytope::{constraint_residual, diagonal_coordinates, min_facet_margin, vertex_correspondence_check, vertices, xi_from_point};

fn main() -> sudsq::Result<()> {
    let spec = vertices(&[0.0; 8], 4, 3)?;
    println!("Λ = {:.4}, κ = {:.4}", spec.lambda, spec.kappa);
    println!("A_1 = {:?}", spec.a[0].coords);
    println!("B_1 = {:?}", spec.b[0].coords);

    let basis = gellmann_basis(3)?;
    let st = random_state(3, 4, &mut rng_from_seed(4))?;
    let bundle = collective_bundle(&st, &basis)?;
    let (p, rotated) = diagonal_coordinates(&bundle);
    let (best, facet) = min_facet_margin(&p, 4)?;
    println!("random state: constraint residual {:.2e}", constraint_residual(&p, &rotated.gexp, 4));
    println!("  ξ from point {:.6}, best facet {facet:?} margin {best:.6}", xi_from_point(&p, 4));

    for n in [4, 5] {
        let c = vertex_correspondence_check(&basis, &[0.0; 8], n, 0)?;
        println!(
            "N={n}: N·p = {:.2}, A exact {}, B exact {}, B displacement/edge = {:.4}",
            c.n_plus_exact, c.a_exact, c.b_exact, c.b_ratio
        );
    }
    Ok(())
}
