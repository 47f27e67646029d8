//! PPT over all bipartitions and the realignment criterion on a few states.

use sudsq::criteria::{bipartitions, ccnr, ppt_all_bipartitions};
use sudsq::linalg::{C64, ONE, ZERO};
use sudsq::many_body::{avg_two_body, NQuditState};
use sudsq::models::{random_separable, rng_from_seed, sud_singlet, werner_two_qudit};

fn main() -> sudsq::Result<()> {
    println!("bipartitions of 4 sites: {:?}", bipartitions(4, false));

    let mut psi = vec![ZERO; 9];
    for a in 0..3 {
        psi[a * 4] = ONE * C64::new(1.0 / 3f64.sqrt(), 0.0);
    }
    let maximally_entangled = NQuditState::pure(3, 2, &psi)?;
    let cases = [
        ("maximally entangled", maximally_entangled),
        ("Werner <F> = -0.5", werner_two_qudit(-0.5, 3)?),
        ("Werner <F> = 0.5", werner_two_qudit(0.5, 3)?),
        ("random separable", random_separable(3, 2, 5, &mut rng_from_seed(3))?),
    ];
    for (name, st) in &cases {
        let ppt = ppt_all_bipartitions(st)?;
        let c = ccnr(st)?;
        println!(
            "{name:>20}: PPT λmin {:+.4} ({}), CCNR ‖R‖₁ {:.4} ({})",
            ppt.value, ppt.detected, c.details["trace_norm"], c.detected
        );
    }

    let singlet = sud_singlet(3, 3)?;
    println!("singlet N=3: PPT detected {}", ppt_all_bipartitions(&singlet)?.detected);
    println!("  its two-body average, CCNR detected {}", ccnr(&avg_two_body(&singlet)?)?.detected);
    Ok(())
}
