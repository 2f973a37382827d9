//! Automorphism groups and canonical forms of colored digraphs.
//!
//!     cargo run --example automorphisms_and_canonical_form

use cayley_census::autgrp::canonical_form_with_group;
use cayley_census::groups::{make_group, regular_representation};
use cayley_census::{
    automorphism_group, brute_force_automorphisms, canonical_form, cayley, ColoredDigraph,
    ConnectionSet, Permutation,
};

fn main() -> cayley_census::Result<()> {
    let petersen_like =
        ColoredDigraph::from_arcs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])?;
    let aut = automorphism_group(&petersen_like, None)?;
    println!(
        "digraph on 5 vertices: |Aut| = {} (brute force {})",
        aut.order(),
        brute_force_automorphisms(&petersen_like)?.order()
    );

    // Colors restrict automorphisms to color-preserving maps.
    let cycle = ColoredDigraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?;
    let colored = cycle.clone().with_colors(vec![0, 1, 0, 1])?;
    println!(
        "directed 4-cycle: |Aut| = {}, with alternating colors {}",
        automorphism_group(&cycle, None)?.order(),
        automorphism_group(&colored, None)?.order()
    );

    // Seeding with a known subgroup (here the regular representation) gives the same group.
    let group = make_group(&"dihedral:8".parse()?)?;
    let d = cayley(&group, &ConnectionSet::from_elements(8, [1, 4])?)?;
    let reg = regular_representation(&group);
    let seeded = automorphism_group(&d, Some(&reg))?;
    println!(
        "Cayley digraph on {}: |Aut| = {} (unseeded {})",
        group.id(),
        seeded.order(),
        automorphism_group(&d, None)?.order()
    );

    let code = canonical_form_with_group(&d, &seeded);
    let shuffled = d.relabel(&Permutation::parse_cycles(8, "(0 5 2)(3 7)")?)?;
    println!("canonical code {code}");
    println!(
        "relabelled copy has the same code: {}",
        canonical_form(&shuffled) == code
    );
    println!("labeling into canonical order: {:?}", code.labeling());
    Ok(())
}
