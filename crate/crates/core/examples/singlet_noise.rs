//! The su(3) singlet of three and six qutrits, and the noise level where its
//! squeezing parameter crosses zero.

use sudsq::basis::gellmann_basis;
use sudsq::correlations::collective_bundle;
use sudsq::criteria::{xi_sud_collective, xi_sud_two_body};
use sudsq::models::{noisy_singlet_marginal, singlet_noise_tolerance, sud_singlet};

fn main() -> sudsq::Result<()> {
    let basis = gellmann_basis(3)?;
    for n in [3, 6] {
        let s = sud_singlet(n, 3)?;
        let xi = xi_sud_collective(&collective_bundle(&s, &basis)?)?;
        println!("N={n}: ξ = {:.6}", xi.value);
    }
    if let Err(e) = sud_singlet(4, 3) {
        println!("N=4: {e}");
    }

    let n = 10;
    println!("noise tolerance d/(d+1) = {}", singlet_noise_tolerance(3));
    for p in [0.0, 0.5, 0.7, 0.75, 0.8, 1.0] {
        let m = noisy_singlet_marginal(n, 3, p)?;
        let xi = xi_sud_two_body(&m, n, &basis)?;
        println!("N={n} p={p:.2}: ξ = {:+.6} detected={}", xi.value, xi.detected);
    }
    Ok(())
}
