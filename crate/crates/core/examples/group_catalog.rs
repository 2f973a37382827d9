//! Finite groups by multiplication table: the built-in catalog, automorphisms,
//! normal subgroups and quotients.
//!
//!     cargo run --example group_catalog -- dihedral:8

use cayley_census::groups::{
    catalog, group_automorphisms, make_group, normal_subgroups, quotient_group,
};
use cayley_census::GroupSpec;

fn main() -> cayley_census::Result<()> {
    let spec: GroupSpec = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dihedral:8".into())
        .parse()?;
    println!("catalog ({} groups):", catalog().len());
    for s in catalog() {
        print!(" {s}");
    }
    println!();

    let g = make_group(&spec)?;
    println!(
        "\n{} has order {}; generating set {:?}",
        g.id(),
        g.order(),
        g.generating_set()
    );
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    println!("element orders: {orders:?}");
    println!("|Aut| = {}", group_automorphisms(&g, 64)?.len());
    for n in normal_subgroups(&g, 64)? {
        let (q, _) = quotient_group(&g, &n)?;
        println!("normal subgroup {n:?}, quotient of order {}", q.order());
    }
    print!("\ntable text:\n{}", g.to_table_text());
    Ok(())
}
