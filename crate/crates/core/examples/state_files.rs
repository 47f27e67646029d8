//! Writing a state to the JSON exchange format, reading it back and
//! producing the full criterion report.

use sudsq::io::to_sorted_json;
use sudsq::many_body::NQuditState;
use sudsq::models::sud_singlet;
use sudsq::report::{evaluate, EvaluateOptions};

fn main() -> sudsq::Result<()> {
    let path = std::env::temp_dir().join("singlet_3x3.json");
    std::fs::write(&path, sud_singlet(3, 3)?.to_json()?)?;
    let state = NQuditState::from_json(&std::fs::read_to_string(&path)?)?.check_physical()?;
    let report = evaluate(&state, &EvaluateOptions::default())?;
    for key in ["xi_sud", "xi_spin", "spin_squeezing", "ppt", "ccnr", "werner"] {
        println!("{key:>15}: value {:+.6} detected {}", report[key]["value"], report[key]["detected"]);
    }
    println!("{} bytes of JSON written to {}", to_sorted_json(&report)?.len(), path.display());
    Ok(())
}
