//! Permutation groups: orders, membership, orbits and stabilizers.
//!
//!     cargo run --example permutation_groups

use cayley_census::perm::{core_in, is_normal};
use cayley_census::{PermGroup, Permutation};

fn main() -> cayley_census::Result<()> {
    // Permutations act on the right: compose(p, q) applies p first.
    let p = Permutation::parse_cycles(4, "(0 1 2 3)")?;
    let q = Permutation::parse_cycles(4, "(1 3)")?;
    println!(
        "p = {p:?}, q = {q:?}, pq = {:?}, q^-1 p q = {:?}",
        p.compose(&q),
        p.conjugate_by(&q)
    );

    let d8 = PermGroup::from_generators(4, vec![p.clone(), q.clone()])?;
    println!("<p, q> has order {} and base {:?}", d8.order(), d8.base());
    println!(
        "transitive: {}, regular: {}",
        d8.is_transitive(),
        d8.is_regular()
    );
    println!(
        "stabilizer of 0 has order {}, orbits {:?}",
        d8.point_stabilizer(0).order(),
        d8.point_stabilizer(0).orbits().cells()
    );

    let rotations = PermGroup::from_generators(4, vec![p])?;
    println!("rotations normal in D8: {}", is_normal(&d8, &rotations)?);
    println!(
        "core of the rotations in D8 has order {}",
        core_in(&d8, &rotations, 1_000)?.order()
    );

    let s6 = PermGroup::symmetric(6);
    let setwise = s6.setwise_stabilizer_by_filter(&[0, 1], 1_000)?;
    println!(
        "Sym(6) has order {}; the stabilizer of {{0, 1}} has order {}",
        s6.order(),
        setwise.order()
    );
    Ok(())
}
