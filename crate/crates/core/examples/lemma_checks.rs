//! Brute-force checks of the counting facts: fixed subsets, invariant
//! digraphs, the partition-fixing subgroup, Φ_i counts and σ sets.
//!
//!     cargo run --release --example lemma_checks

use cayley_census::groups::make_group;
use cayley_census::lemmalab::{
    fixed_subsets_count, invariant_digraph_count, lemma41_verify, phi_census_all, run_suite, sigma,
    Suite, SuiteOptions,
};
use cayley_census::quotient::coset_partition;
use cayley_census::{ConnectionSet, PermGroup, Permutation};

fn main() -> cayley_census::Result<()> {
    let p = Permutation::parse_cycles(6, "(0 1)(2 3 4)")?;
    let c = fixed_subsets_count(&p)?;
    println!(
        "(0 1)(2 3 4) on 6 points fixes {} subsets (bound {:.2})",
        c.exact, c.bound
    );

    let s4 = PermGroup::symmetric(4);
    let inv = invariant_digraph_count(&s4, 0)?;
    println!(
        "Sym(4): rank {}, {} invariant digraphs",
        inv.kappa, inv.count
    );

    let group = make_group(&"cyclic:6".parse()?)?;
    let normal = [0, 3];
    for hex in ["00", "16", "2e"] {
        let rep = lemma41_verify(&group, &normal, &ConnectionSet::from_hex(6, hex)?)?;
        println!(
            "C6, N = {normal:?}, S = {hex}: hypothesis {}, |F_S| = {}, F_S = N: {}",
            rep.hypothesis_holds, rep.fs_order, rep.equals_n
        );
    }

    let cells = coset_partition(&group, &normal)?;
    let s = ConnectionSet::from_elements(6, [1, 2, 4])?;
    println!(
        "sigma(S, u = 1, cell 1) = {:?}",
        sigma(&group, &s, 1, 1, &cells)?
    );

    for rep in phi_census_all(&group, &normal, 0)? {
        println!(
            "phi {:<10} cell {}: {:>2} of {} subsets, log2 bound {:.3}",
            rep.variant.to_string(),
            rep.cell,
            rep.count,
            rep.total,
            rep.log2_bound
        );
    }

    let opts = SuiteOptions {
        max_order: 8,
        workers: 0,
        ..Default::default()
    };
    for suite in Suite::ALL {
        let rep = run_suite(suite, &opts)?;
        println!(
            "suite {:<20} pass {} over {} instances",
            suite.to_string(),
            rep.pass,
            rep.instances
        );
    }
    Ok(())
}
