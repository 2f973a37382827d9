//! Building a Cayley digraph from a connection set, and its text encodings.
//!
//!     cargo run --example cayley_digraph -- cyclic:6 16

use cayley_census::groups::make_group;
use cayley_census::{cayley, ConnectionSet};

fn main() -> cayley_census::Result<()> {
    let mut args = std::env::args().skip(1);
    let group = make_group(&args.next().unwrap_or_else(|| "cyclic:6".into()).parse()?)?;
    let s = ConnectionSet::from_hex(group.order(), &args.next().unwrap_or_else(|| "16".into()))?;
    println!(
        "S = {:?} (hex {}) in {}",
        s.elements().collect::<Vec<_>>(),
        s.to_hex(),
        group.id()
    );

    // Arc (g, h) iff h g^-1 is in S, so the out-neighbours of g are the products s g.
    let d = cayley(&group, &s)?;
    for g in 0..group.order() {
        println!(
            "  {g} -> {:?}",
            d.out_neighbors(g).ones().collect::<Vec<_>>()
        );
    }
    println!(
        "{} arcs = r |S| = {}",
        d.arc_count(),
        group.order() * s.len()
    );
    println!("json: {}", d.to_json());
    print!("hex rows:\n{}", d.to_hex_rows());
    Ok(())
}
