//! Diagonal of 𝔘 for three four-qutrit thermal states in the anticommuting
//! basis, with the expected sign pattern checked.

use sudsq::scan::{fig3_csv, fig3_data, fig3_sign_violations};

fn main() -> sudsq::Result<()> {
    let series = fig3_data()?;
    print!("{}", fig3_csv(&series));
    let bad = fig3_sign_violations(&series);
    println!("sign pattern: {}", if bad.is_empty() { "as expected".to_string() } else { bad.join("; ") });
    Ok(())
}
