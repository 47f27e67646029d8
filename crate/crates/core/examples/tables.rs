//! Limit-temperature tables as CSV. Table 1 takes about a minute in release
//! mode because of the PPT column.
//!
//!     cargo run --release --example tables -- [1|2|3]

fn main() -> sudsq::Result<()> {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    for id in if ids.is_empty() { vec![1, 2, 3] } else { ids } {
        println!("# table {id}");
        print!("{}", sudsq::scan::table(id)?.to_csv());
    }
    Ok(())
}
