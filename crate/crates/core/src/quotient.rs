//! Partition-fixing subgroups, normal quotients and odd quotients.
//!
//! Cells of a [`BlockPartition`] are sorted by minimum vertex, so the cell of
//! vertex 0 always has index 0.

use serde::{Deserialize, Serialize};

use crate::autgrp::automorphism_group;
use crate::bitset::Bitset;
use crate::digraph::{ColoredDigraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::groups::{quotient_group, FiniteGroup};
use crate::partition::BlockPartition;
use crate::perm::{is_normal, PermGroup, Permutation};

fn check_partition(g: &ColoredDigraph, p: &BlockPartition) -> Result<()> {
    if p.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition of {} points for {} vertices",
            p.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Left cosets `xN` of `normal` in `group` (the orbits of `N` acting by right
/// multiplication), as a partition of the element indices.
pub fn coset_partition(group: &FiniteGroup, subgroup: &[usize]) -> Result<BlockPartition> {
    let r = group.order();
    let mut label = vec![usize::MAX; r];
    let mut cells = Vec::new();
    for x in 0..r {
        if label[x] == usize::MAX {
            let cell: Vec<usize> = subgroup.iter().map(|&n| group.mul(x, n)).collect();
            for &y in &cell {
                if label[y] != usize::MAX {
                    return Err(Error::NotSubgroup(format!(
                        "{subgroup:?} does not partition the group into cosets"
                    )));
                }
                label[y] = cells.len();
            }
            cells.push(cell);
        }
    }
    BlockPartition::new(r, cells)
}

/// Recolors `g` so that each vertex color is the rank of the pair
/// (old color, cell index).
fn recolor_by_cells(g: &ColoredDigraph, p: &BlockPartition) -> Result<ColoredDigraph> {
    let cell = p.cell_map();
    let mut pairs: Vec<(u32, usize)> = (0..g.n()).map(|v| (g.color(v), cell[v])).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let colors = (0..g.n())
        .map(|v| {
            pairs
                .binary_search(&(g.color(v), cell[v]))
                .expect("present") as u32
        })
        .collect();
    g.clone().with_colors(colors)
}

/// Automorphisms of `g` fixing every cell of `p` setwise.
pub fn subgroup_fixing_partition(g: &ColoredDigraph, p: &BlockPartition) -> Result<PermGroup> {
    subgroup_fixing_partition_seeded(g, p, None)
}

/// As [`subgroup_fixing_partition`]; `seed` must consist of automorphisms
/// fixing every cell.
pub fn subgroup_fixing_partition_seeded(
    g: &ColoredDigraph,
    p: &BlockPartition,
    seed: Option<&PermGroup>,
) -> Result<PermGroup> {
    check_partition(g, p)?;
    automorphism_group(&recolor_by_cells(g, p)?, seed)
}

/// Automorphisms of `g` permuting the cells of `p` among themselves.
///
/// Computed on an augmented digraph with one extra vertex per cell (in a new
/// color) and an arc from every vertex to its cell's extra vertex.
pub fn partition_preserving_subgroup(g: &ColoredDigraph, p: &BlockPartition) -> Result<PermGroup> {
    check_partition(g, p)?;
    let n = g.n();
    let k = p.num_cells();
    let mut rows: Vec<Bitset> = (0..n)
        .map(|u| Bitset::from_indices(n + k, g.out_neighbors(u).ones()))
        .collect();
    for (i, cell) in p.cells().iter().enumerate() {
        for &v in cell {
            rows[v].insert(n + i);
        }
    }
    rows.extend((0..k).map(|_| Bitset::new(n + k)));
    let extra = g.num_colors() as u32;
    let colors = g
        .colors()
        .iter()
        .copied()
        .chain(std::iter::repeat_n(extra, k))
        .collect();
    let augmented = ColoredDigraph::from_out_adjacency(rows)?.with_colors(colors)?;
    let aut = automorphism_group(&augmented, None)?;
    let points: Vec<usize> = (0..n).collect();
    let gens = aut
        .generators()
        .iter()
        .map(|x| {
            x.restrict(&points)
                .expect("original vertices are preserved")
        })
        .collect();
    PermGroup::from_generators(n, gens)
}

/// Quotient of `g` by the cells of `p`: arc between cells iff some arc of `g`
/// joins them. All colors are 0.
pub fn cell_quotient(g: &ColoredDigraph, p: &BlockPartition) -> Result<ColoredDigraph> {
    check_partition(g, p)?;
    let cell = p.cell_map();
    let mut q = ColoredDigraph::new(p.num_cells());
    for (u, v) in g.arcs() {
        q.add_arc(cell[u], cell[v]);
    }
    Ok(q)
}

/// The normal quotient `Γ_N` and the block-stabilizer identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalQuotient {
    pub digraph: ColoredDigraph,
    pub cells: BlockPartition,
    /// Setwise stabilizer in `G` of the cell of vertex 0.
    #[serde(skip)]
    pub block_stabilizer: Option<PermGroup>,
    /// Whether the block stabilizer equals `G_0 N`.
    pub stabilizer_identity_holds: bool,
}

/// Quotient of `g` by the orbits of `n`, where `n` is normal in a
/// vertex-transitive `big <= Aut(g)`.
pub fn normal_quotient(
    g: &ColoredDigraph,
    big: &PermGroup,
    n: &PermGroup,
) -> Result<NormalQuotient> {
    let deg = g.n();
    for grp in [big, n] {
        if grp.degree() != deg {
            return Err(Error::DegreeMismatch {
                expected: deg,
                found: grp.degree(),
            });
        }
    }
    if let Some(bad) = big
        .generators()
        .iter()
        .find(|x| !g.is_automorphism_unchecked(x))
    {
        return Err(Error::NotSubgroup(format!(
            "{bad} is not an automorphism of the digraph"
        )));
    }
    if !big.is_transitive() {
        return Err(Error::NotTransitive);
    }
    if !is_normal(big, n)? {
        return Err(Error::NotNormal("N is not normal in G".into()));
    }
    let cells = n.orbits();
    let digraph = cell_quotient(g, &cells)?;
    let block = cells.cell(0);
    let trans = big.orbit_transversal(0);
    let stab0 = big.point_stabilizer(0);
    let mut gens: Vec<Permutation> = stab0.generators().to_vec();
    gens.extend(
        block
            .iter()
            .filter(|&&b| b != 0)
            .map(|&b| trans[b].clone().expect("transitive")),
    );
    let block_stabilizer = PermGroup::from_generators(deg, gens)?;
    let stab_times_n = stab0.closure(n.generators())?;
    let stabilizer_identity_holds = block_stabilizer == stab_times_n;
    Ok(NormalQuotient {
        digraph,
        cells,
        block_stabilizer: Some(block_stabilizer),
        stabilizer_identity_holds,
    })
}

/// Odd quotient: arc from cell `B` to `B'` iff every vertex of `B` has the same,
/// odd, number of out-neighbours in `B'`.
pub fn odd_quotient(g: &ColoredDigraph, p: &BlockPartition) -> Result<ColoredDigraph> {
    check_partition(g, p)?;
    let bits: Vec<Bitset> = p
        .cells()
        .iter()
        .map(|c| Bitset::from_indices(g.n(), c.iter().copied()))
        .collect();
    let mut q = ColoredDigraph::new(p.num_cells());
    for (i, cell) in p.cells().iter().enumerate() {
        for (j, target) in bits.iter().enumerate() {
            let count = g.out_neighbors(cell[0]).intersection_count(target);
            if let Some(&v) = cell
                .iter()
                .find(|&&v| g.out_neighbors(v).intersection_count(target) != count)
            {
                return Err(Error::OddQuotientUndefined(format!(
                    "vertices {} and {v} of cell {i} send different numbers of arcs to cell {j}",
                    cell[0]
                )));
            }
            if count % 2 == 1 {
                q.add_arc(i, j);
            }
        }
    }
    Ok(q)
}

/// `S' = { gN : |S ∩ gN| odd }` over `R/N`, indexed as in [`quotient_group`].
pub fn odd_connection_set(
    group: &FiniteGroup,
    normal: &[usize],
    s: &ConnectionSet,
) -> Result<ConnectionSet> {
    if s.r() != group.order() {
        return Err(Error::SizeMismatch(format!(
            "connection set of length {} for order {}",
            s.r(),
            group.order()
        )));
    }
    let (q, projection) = quotient_group(group, normal)?;
    let mut parity = vec![false; q.order()];
    for x in s.elements() {
        parity[projection[x]] ^= true;
    }
    ConnectionSet::from_elements(q.order(), (0..q.order()).filter(|&c| parity[c]))
}

/// Digraph plus cell list, for JSON output of quotient results.
#[derive(Serialize)]
pub struct QuotientReport<'a> {
    pub digraph: &'a ColoredDigraph,
    pub cells: &'a [Vec<usize>],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::cayley;
    use crate::groups::{catalog_up_to, make_group, normal_subgroups, regular_representation};
    use crate::perm::core_in;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn grp(s: &str) -> FiniteGroup {
        make_group(&s.parse().unwrap()).unwrap()
    }

    fn cay(group: &FiniteGroup, s: &[usize]) -> ColoredDigraph {
        cayley(
            group,
            &ConnectionSet::from_elements(group.order(), s.iter().copied()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fixing_partition_examples() {
        let c4 = grp("cyclic:4");
        let d = cay(&c4, &[1]);
        assert_eq!(
            subgroup_fixing_partition(&d, &BlockPartition::singletons(4))
                .unwrap()
                .order(),
            1
        );
        assert_eq!(
            subgroup_fixing_partition(&d, &BlockPartition::single_cell(4))
                .unwrap()
                .order(),
            4
        );
        let cells = coset_partition(&c4, &[0, 2]).unwrap();
        assert_eq!(cells.cells(), &[vec![0, 2], vec![1, 3]]);
        // Oracle: filter the automorphisms of the directed 4-cycle.
        let aut = crate::autgrp::brute_force_automorphisms(&d).unwrap();
        assert_eq!(aut.order(), 4);
        let mut fixing = 0;
        aut.for_each_element(|p| {
            if cells.cells().iter().all(|c| p.fixes_set(c)) {
                fixing += 1;
            }
        });
        assert_eq!(fixing, 2);
        assert_eq!(subgroup_fixing_partition(&d, &cells).unwrap().order(), 2);
        assert!(subgroup_fixing_partition(&d, &BlockPartition::singletons(3)).is_err());
    }

    #[test]
    fn normal_quotient_examples() {
        let c4 = grp("cyclic:4");
        let d = cay(&c4, &[1]);
        let big = regular_representation(&c4);
        let q = normal_quotient(&d, &big, &PermGroup::trivial(4)).unwrap();
        assert_eq!(q.digraph, d);
        assert!(q.stabilizer_identity_holds);
        let q = normal_quotient(&d, &big, &big).unwrap();
        assert_eq!(q.digraph.arcs(), vec![(0, 0)]);
        let empty = normal_quotient(&cay(&c4, &[]), &big, &big).unwrap();
        assert_eq!(empty.digraph.arc_count(), 0);
        let half = PermGroup::from_generators(4, vec![c4.right_multiplication(2)]).unwrap();
        let q = normal_quotient(&d, &big, &half).unwrap();
        assert_eq!(q.digraph.arcs(), vec![(0, 1), (1, 0)]);
        assert_eq!(q.cells.cells(), &[vec![0, 2], vec![1, 3]]);
        assert!(q.stabilizer_identity_holds);
        let flip =
            PermGroup::from_generators(4, vec![Permutation::parse_cycles(4, "(1 3)").unwrap()])
                .unwrap();
        assert!(normal_quotient(&d, &big, &flip).is_err());
        let not_aut = PermGroup::symmetric(4);
        assert!(normal_quotient(&d, &not_aut, &big).is_err());
    }

    #[test]
    fn odd_quotient_examples() {
        let c4 = grp("cyclic:4");
        let d = cay(&c4, &[1, 2, 3]);
        assert_eq!(odd_quotient(&d, &BlockPartition::singletons(4)).unwrap(), d);
        let cells = coset_partition(&c4, &[0, 2]).unwrap();
        assert_eq!(
            odd_quotient(&d, &cells).unwrap().arcs(),
            vec![(0, 0), (1, 1)]
        );
        assert_eq!(
            odd_quotient(&ColoredDigraph::new(4), &cells)
                .unwrap()
                .arc_count(),
            0
        );
        let s = ConnectionSet::from_elements(4, [1, 2, 3]).unwrap();
        assert_eq!(
            odd_connection_set(&c4, &[0, 2], &s)
                .unwrap()
                .elements()
                .collect::<Vec<_>>(),
            vec![0]
        );
        assert!(odd_connection_set(&c4, &[0, 2], &ConnectionSet::empty(4))
            .unwrap()
            .is_empty());
        let c9 = grp("cyclic:9");
        let coset = ConnectionSet::from_elements(9, [1, 4, 7]).unwrap();
        assert_eq!(
            odd_connection_set(&c9, &[0, 3, 6], &coset)
                .unwrap()
                .elements()
                .collect::<Vec<_>>(),
            vec![1]
        );
        // Unequal counts: 0 -> {1}, 2 -> nothing.
        let lopsided = ColoredDigraph::from_arcs(4, &[(0, 1)]).unwrap();
        assert!(matches!(
            odd_quotient(&lopsided, &cells),
            Err(Error::OddQuotientUndefined(_))
        ));
        assert!(odd_connection_set(&grp("dihedral:6"), &[0, 3], &ConnectionSet::empty(6)).is_err());
    }

    #[test]
    fn parity_of_subsets() {
        for m in 1..=20u32 {
            let even = (0u32..1 << m).filter(|x| x.count_ones() % 2 == 0).count();
            assert_eq!(even, 1 << (m - 1));
            assert_eq!((1usize << m) - even, 1 << (m - 1));
        }
    }

    fn arb_case() -> impl Strategy<Value = (usize, usize, u64)> {
        (0..catalog_up_to(16).len(), any::<usize>(), any::<u64>())
    }

    fn setup(gi: usize, ni: usize, mask: u64) -> (FiniteGroup, Vec<usize>, ConnectionSet) {
        let group = make_group(&catalog_up_to(16)[gi]).unwrap();
        let normals = normal_subgroups(&group, 64).unwrap();
        let normal = normals[ni % normals.len()].clone();
        let s = ConnectionSet::from_mask(group.order(), mask);
        (group, normal, s)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn odd_connection_set_matches_odd_quotient((gi, ni, mask) in arb_case()) {
            let (group, normal, s) = setup(gi, ni, mask);
            let d = cayley(&group, &s).unwrap();
            let cells = coset_partition(&group, &normal).unwrap();
            let (q, _) = quotient_group(&group, &normal).unwrap();
            let s2 = odd_connection_set(&group, &normal, &s).unwrap();
            prop_assert_eq!(odd_quotient(&d, &cells).unwrap(), cayley(&q, &s2).unwrap());
        }

        #[test]
        fn partition_preserving_automorphisms_act_on_odd_quotient((gi, ni, mask) in arb_case()) {
            let (group, normal, s) = setup(gi, ni, mask);
            let d = cayley(&group, &s).unwrap();
            let cells = coset_partition(&group, &normal).unwrap();
            let odd = odd_quotient(&d, &cells).unwrap();
            let cell = cells.cell_map();
            let preserving = partition_preserving_subgroup(&d, &cells).unwrap();
            prop_assert!(regular_representation(&group).is_subgroup_of(&preserving));
            for x in preserving.generators() {
                prop_assert!(d.is_automorphism(x).unwrap());
                let mut images = vec![usize::MAX; cells.num_cells()];
                for v in 0..d.n() {
                    let (from, to) = (cell[v], cell[x.apply(v)]);
                    prop_assert!(images[from] == usize::MAX || images[from] == to);
                    images[from] = to;
                }
                let induced = Permutation::from_images(images).unwrap();
                prop_assert!(odd.is_automorphism(&induced).unwrap());
            }
        }

        #[test]
        fn normal_quotient_stabilizer_identity((gi, ni, mask) in arb_case()) {
            let (group, normal, s) = setup(gi, ni, mask);
            let d = cayley(&group, &s).unwrap();
            let reg = regular_representation(&group);
            let aut = automorphism_group(&d, Some(&reg)).unwrap();
            prop_assume!(aut.order() <= 2_000);
            // Normal subgroups of Aut(Γ) coming from R: the core of N_reg.
            let n_reg = PermGroup::from_generators(group.order(), normal.iter().map(|&x| group.right_multiplication(x)).collect()).unwrap();
            let n = core_in(&aut, &n_reg, 10_000).unwrap();
            let q = normal_quotient(&d, &aut, &n).unwrap();
            prop_assert!(q.stabilizer_identity_holds);
            // Oracle: setwise stabilizer by filtering, and the product set G_0 N.
            let block = q.cells.cell(0).to_vec();
            let elems = aut.elements(10_000).unwrap();
            let setwise: HashSet<Permutation> = elems.iter().filter(|x| x.fixes_set(&block)).cloned().collect();
            let stab0 = aut.point_stabilizer(0).elements(10_000).unwrap();
            let nel = n.elements(10_000).unwrap();
            let product: HashSet<Permutation> = stab0.iter().flat_map(|a| nel.iter().map(move |b| a.compose(b))).collect();
            prop_assert_eq!(&setwise, &product);
            let from_search: HashSet<Permutation> = q.block_stabilizer.unwrap().elements(10_000).unwrap().into_iter().collect();
            prop_assert_eq!(setwise, from_search);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn kernel_on_core_orbits((gi, mask) in (0..catalog_up_to(12).len(), any::<u64>())) {
            let group = make_group(&catalog_up_to(12)[gi]).unwrap();
            let d = cayley(&group, &ConnectionSet::from_mask(group.order(), mask)).unwrap();
            let reg = regular_representation(&group);
            let aut = automorphism_group(&d, Some(&reg)).unwrap();
            prop_assume!(aut.order() <= 1_500);
            let core = core_in(&aut, &reg, 10_000).unwrap();
            let cells = core.orbits();
            let elems = aut.elements(10_000).unwrap();
            let kernel: HashSet<Permutation> = elems
                .iter()
                .filter(|x| cells.cells().iter().all(|c| x.fixes_set(c)))
                .cloned()
                .collect();
            let stab0 = aut.point_stabilizer(0).elements(10_000).unwrap();
            let core_el = core.elements(10_000).unwrap();
            let product: HashSet<Permutation> = stab0.iter().flat_map(|a| core_el.iter().map(move |b| a.compose(b))).collect();
            let mut meet = product.clone();
            for g in &elems {
                let conj: HashSet<Permutation> = product.iter().map(|x| x.conjugate_by(g)).collect();
                meet.retain(|x| conj.contains(x));
            }
            prop_assert_eq!(kernel, meet);
        }
    }
}
