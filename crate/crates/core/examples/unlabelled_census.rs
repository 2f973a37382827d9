//! Counting Cayley digraphs up to isomorphism with canonical forms.
//!
//!     cargo run --release --example unlabelled_census -- 8

use cayley_census::census::unlabelled_census;
use cayley_census::groups::{catalog_up_to, make_group};
use cayley_census::Error;

fn main() -> cayley_census::Result<()> {
    let max: usize = std::env::args()
        .nth(1)
        .map_or(Ok(8), |s| s.parse())
        .map_err(|e| Error::Parse(format!("{e}")))?;
    println!(
        "{:<16} {:>6} {:>9} {:>9} {:>11} {:>7}",
        "group", "|Aut R|", "classes", "DRR cls", "DRR sets", "bound"
    );
    for spec in catalog_up_to(max) {
        let g = make_group(&spec)?;
        let u = unlabelled_census(&g, 12, 0)?
            .unlabelled
            .expect("unlabelled mode");
        // Each isomorphism class of DRRs is one Aut(R)-orbit of connection sets.
        let lower = u.drr_subset_count.div_ceil(u.aut_r_order);
        println!(
            "{:<16} {:>6} {:>9} {:>9} {:>11} {:>7}",
            g.id(),
            u.aut_r_order,
            u.cd_count,
            u.drr_count,
            u.drr_subset_count,
            lower
        );
    }
    Ok(())
}
