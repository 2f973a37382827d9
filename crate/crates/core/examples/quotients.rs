//! Quotients of Cayley digraphs by the cosets of a normal subgroup.
//!
//!     cargo run --example quotients

use cayley_census::groups::{make_group, quotient_group, regular_representation};
use cayley_census::quotient::{
    coset_partition, normal_quotient, odd_connection_set, odd_quotient,
    partition_preserving_subgroup, subgroup_fixing_partition,
};
use cayley_census::{automorphism_group, cayley, ConnectionSet, PermGroup};

fn main() -> cayley_census::Result<()> {
    let group = make_group(&"cyclic:12".parse()?)?;
    let normal = [0, 3, 6, 9];
    let s = ConnectionSet::from_elements(12, [1, 2, 4, 7, 10])?;
    let d = cayley(&group, &s)?;
    let cells = coset_partition(&group, &normal)?;
    println!("cosets of {normal:?}: {:?}", cells.cells());

    let fixing = subgroup_fixing_partition(&d, &cells)?;
    let preserving = partition_preserving_subgroup(&d, &cells)?;
    let aut = automorphism_group(&d, None)?;
    println!(
        "|Aut| = {}, cells permuted by {}, every cell fixed by {}",
        aut.order(),
        preserving.order(),
        fixing.order()
    );

    let odd = odd_quotient(&d, &cells)?;
    let (q, _) = quotient_group(&group, &normal)?;
    let odd_set = odd_connection_set(&group, &normal, &s)?;
    println!("odd quotient arcs {:?}", odd.arcs());
    println!(
        "equals the Cayley digraph of {} on {:?}: {}",
        q.id(),
        odd_set.elements().collect::<Vec<_>>(),
        odd == cayley(&q, &odd_set)?
    );

    let reg = regular_representation(&group);
    let n_reg = PermGroup::from_generators(
        12,
        normal
            .iter()
            .map(|&x| group.right_multiplication(x))
            .collect(),
    )?;
    let nq = normal_quotient(&d, &reg, &n_reg)?;
    println!(
        "normal quotient arcs {:?}; block stabilizer identity holds: {}",
        nq.digraph.arcs(),
        nq.stabilizer_identity_holds
    );
    Ok(())
}
