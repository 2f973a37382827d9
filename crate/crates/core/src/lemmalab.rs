//! Brute-force checks of the counting lemmas on small instances.
//!
//! Throughout, `N` is a normal subgroup of `R` given by its element indices,
//! its orbits (the cosets of `N`) are the cells of a [`BlockPartition`] with
//! the cell containing vertex 0 at index 0, and `N_reg` is the image of `N`
//! in the regular representation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autgrp::automorphism_group;
use crate::census::{bound_eval, parallel_chunks, BoundKind, BoundParams};
use crate::digraph::{cayley, ConnectionSet};
use crate::error::{Error, Result};
use crate::groups::{
    catalog_up_to, make_group, normal_subgroups, regular_representation, FiniteGroup,
    DEFAULT_LATTICE_CAP,
};
use crate::partition::BlockPartition;
use crate::perm::{PermGroup, Permutation};
use crate::quotient::{coset_partition, subgroup_fixing_partition_seeded};

pub const DEFAULT_LEMMA_CAP: usize = 12;
pub const PHI_CAP: usize = 10;
const SUBSET_CHUNK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedSubsetCount {
    /// `2^(number of cycles)`, fixed points included.
    pub exact: u64,
    /// `2^(|Δ| + (n - |Δ|)/2)` with `Δ` the fixed points.
    pub bound: f64,
    pub fixed_points: usize,
}

/// Number of subsets of the points fixed setwise by `p`, and the upper bound
/// from its fixed points.
pub fn fixed_subsets_count(p: &Permutation) -> Result<FixedSubsetCount> {
    let n = p.degree();
    if n > 62 {
        return Err(Error::CapExceeded {
            what: "permutation degree",
            value: n as u128,
            cap: 62,
        });
    }
    let delta = p.fixed_points();
    Ok(FixedSubsetCount {
        exact: 1 << p.cycle_count(),
        bound: 2f64.powf(delta as f64 + (n - delta) as f64 / 2.0),
        fixed_points: delta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantDigraphCount {
    /// Orbits of the point stabilizer `G_ω` on all points.
    pub kappa: usize,
    /// `2^kappa`: digraphs on the points admitting `G`.
    pub count: u128,
    pub regular: bool,
    /// `kappa <= 3n/4`, or `G` regular.
    pub bound_holds: bool,
}

pub fn invariant_digraph_count(g: &PermGroup, omega: usize) -> Result<InvariantDigraphCount> {
    let n = g.degree();
    if omega >= n {
        return Err(Error::InvalidParams(format!(
            "point {omega} out of range for degree {n}"
        )));
    }
    if !g.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let kappa = g.point_stabilizer(omega).orbits().num_cells();
    if kappa >= 128 {
        return Err(Error::CapExceeded {
            what: "rank",
            value: kappa as u128,
            cap: 127,
        });
    }
    let regular = g.is_regular();
    Ok(InvariantDigraphCount {
        kappa,
        count: 1 << kappa,
        regular,
        bound_holds: regular || 4 * kappa <= 3 * n,
    })
}

/// Number of orbits of `g` on ordered pairs of points.
pub fn arc_orbit_count(g: &PermGroup) -> usize {
    let n = g.degree();
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in g.generators() {
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (
                    find(&mut parent, a * n + b),
                    find(&mut parent, p.apply(a) * n + p.apply(b)),
                );
                parent[x] = y;
            }
        }
    }
    (0..n * n).filter(|&x| find(&mut parent, x) == x).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma41Witness {
    pub cell: usize,
    /// Non-identity restriction fixing `S_i` setwise, on the cell's vertices
    /// re-indexed in ascending order.
    pub element: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma41Report {
    pub hypothesis_holds: bool,
    pub fs_order: u128,
    #[serde(rename = "equals_N")]
    pub equals_n: bool,
    pub witness: Option<Lemma41Witness>,
}

impl Lemma41Report {
    /// The implication checked by the lemma.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.equals_n
    }
}

/// `N_reg` and the coset partition, after checking `1 < |N| < r` and normality.
fn normal_setup(
    group: &FiniteGroup,
    normal: &[usize],
    cap: usize,
) -> Result<(PermGroup, BlockPartition)> {
    let r = group.order();
    if r > cap {
        return Err(Error::CapExceeded {
            what: "group order",
            value: r as u128,
            cap: cap as u128,
        });
    }
    let distinct: BTreeSet<usize> = normal.iter().copied().collect();
    if distinct.len() != normal.len() || normal.len() <= 1 || normal.len() >= r {
        return Err(Error::InvalidParams(format!(
            "need a proper nontrivial subgroup, got {normal:?}"
        )));
    }
    if !group.is_normal_subset(normal) {
        return Err(Error::NotNormal(format!("{normal:?}")));
    }
    let gens = normal
        .iter()
        .map(|&x| group.right_multiplication(x))
        .collect();
    Ok((
        PermGroup::from_generators(r, gens)?,
        coset_partition(group, normal)?,
    ))
}

fn fixing_subgroup(
    group: &FiniteGroup,
    s: &ConnectionSet,
    cells: &BlockPartition,
    n_reg: &PermGroup,
) -> Result<PermGroup> {
    subgroup_fixing_partition_seeded(&cayley(group, s)?, cells, Some(n_reg))
}

/// Checks the hypothesis "no `S_i` (for `i` not the base cell) is fixed by a
/// non-identity element of `(F_S)_0` restricted to cell `i`" and whether
/// `F_S = N_reg`.
pub fn lemma41_verify(
    group: &FiniteGroup,
    normal: &[usize],
    s: &ConnectionSet,
) -> Result<Lemma41Report> {
    let (n_reg, cells) = normal_setup(group, normal, DEFAULT_LEMMA_CAP)?;
    let fs = fixing_subgroup(group, s, &cells, &n_reg)?;
    Ok(lemma41_from_parts(s, &cells, &n_reg, &fs))
}

fn lemma41_from_parts(
    s: &ConnectionSet,
    cells: &BlockPartition,
    n_reg: &PermGroup,
    fs: &PermGroup,
) -> Lemma41Report {
    let stab = fs.point_stabilizer(0);
    let mut witness = None;
    for i in (0..cells.num_cells()).filter(|&i| i != cells.base_cell_index()) {
        let cell = cells.cell(i);
        let gens: Vec<Permutation> = stab
            .generators()
            .iter()
            .map(|g| g.restrict(cell).expect("cells are invariant"))
            .collect();
        if gens.iter().all(Permutation::is_identity) {
            continue;
        }
        let mut sorted = cell.to_vec();
        sorted.sort_unstable();
        let s_i: Vec<usize> = sorted
            .iter()
            .enumerate()
            .filter(|(_, &v)| s.contains(v))
            .map(|(k, _)| k)
            .collect();
        let restricted = PermGroup::from_generators(cell.len(), gens).expect("same degree");
        let mut found = None;
        restricted.for_each_element(|e| {
            if found.is_none() && !e.is_identity() && e.fixes_set(&s_i) {
                found = Some(e.clone());
            }
        });
        if let Some(element) = found {
            witness = Some(Lemma41Witness { cell: i, element });
            break;
        }
    }
    Lemma41Report {
        hypothesis_holds: witness.is_none(),
        fs_order: fs.order(),
        equals_n: fs == n_reg,
        witness,
    }
}

/// Common out-neighbours of vertex 0 and `u` inside cell `j` of `p`, ascending.
pub fn sigma(
    group: &FiniteGroup,
    s: &ConnectionSet,
    u: usize,
    j: usize,
    p: &BlockPartition,
) -> Result<Vec<usize>> {
    if j >= p.num_cells() {
        return Err(Error::InvalidParams(format!(
            "cell index {j} out of range ({} cells)",
            p.num_cells()
        )));
    }
    if u >= group.order() || p.n() != group.order() {
        return Err(Error::InvalidParams(format!(
            "vertex {u} or partition does not fit order {}",
            group.order()
        )));
    }
    let d = cayley(group, s)?;
    let (a, b) = (d.out_neighbors(0), d.out_neighbors(u));
    let mut out: Vec<usize> = p
        .cell(j)
        .iter()
        .copied()
        .filter(|&v| a.contains(v) && b.contains(v))
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiVariant {
    /// The witnessing element must also normalise `N_reg`.
    Normaliser,
    Plain,
}

impl PhiVariant {
    pub fn bound_kind(self) -> BoundKind {
        match self {
            PhiVariant::Normaliser => BoundKind::L2_2,
            PhiVariant::Plain => BoundKind::L2_3,
        }
    }
}

impl fmt::Display for PhiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiVariant::Normaliser => "normaliser",
            PhiVariant::Plain => "plain",
        })
    }
}

impl FromStr for PhiVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normaliser" | "normalizer" => Ok(PhiVariant::Normaliser),
            "plain" => Ok(PhiVariant::Plain),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub variant: PhiVariant,
    pub cell: usize,
    pub count: u64,
    pub total: u64,
    pub log2_bound: f64,
    /// `count <= min(2^r, 2^log2_bound)`.
    pub within_bound: bool,
}

/// Subsets `S` for which some element of `(F_S)_0` acts nontrivially on cell
/// `i` (and, for the normaliser variant, normalises `N_reg`).
pub fn phi_census(
    group: &FiniteGroup,
    normal: &[usize],
    i: usize,
    variant: PhiVariant,
    workers: usize,
) -> Result<PhiReport> {
    let all = phi_census_all(group, normal, workers)?;
    all.into_iter()
        .find(|rep| rep.cell == i && rep.variant == variant)
        .ok_or_else(|| Error::InvalidParams(format!("cell {i} is the base cell or out of range")))
}

/// [`phi_census`] for every non-base cell and both variants, from one scan.
pub fn phi_census_all(
    group: &FiniteGroup,
    normal: &[usize],
    workers: usize,
) -> Result<Vec<PhiReport>> {
    let (n_reg, cells) = normal_setup(group, normal, PHI_CAP)?;
    let r = group.order();
    let total = 1u64 << r;
    let k = cells.num_cells();
    let cell_of = cells.cell_map();
    let in_n: Vec<bool> = (0..r).map(|x| normal.contains(&x)).collect();
    let normalises = |f: &Permutation| {
        n_reg.generators().iter().all(|m| {
            let c = m.conjugate_by(f);
            let x = c.apply(0);
            in_n[x] && c == group.right_multiplication(x)
        })
    };
    // Per subset: cells moved by (F_S)_0, and cells moved by its normalising elements.
    let classify = |mask: u64| -> Result<(Vec<bool>, Vec<bool>)> {
        let fs = fixing_subgroup(group, &ConnectionSet::from_mask(r, mask), &cells, &n_reg)?;
        let stab = fs.point_stabilizer(0);
        let mut plain = vec![false; k];
        for g in stab.generators() {
            (0..r)
                .filter(|&v| g.apply(v) != v)
                .for_each(|v| plain[cell_of[v]] = true);
        }
        let mut norm = vec![false; k];
        if plain.iter().any(|&b| b) {
            stab.for_each_element(|f| {
                if !f.is_identity() && normalises(f) {
                    (0..r)
                        .filter(|&v| f.apply(v) != v)
                        .for_each(|v| norm[cell_of[v]] = true);
                }
            });
        }
        Ok((plain, norm))
    };
    let mut plain_counts = vec![0u64; k];
    let mut norm_counts = vec![0u64; k];
    let chunks = (total as usize).div_ceil(SUBSET_CHUNK);
    let work = |c: usize| -> Result<Vec<(Vec<bool>, Vec<bool>)>> {
        let lo = (c * SUBSET_CHUNK) as u64;
        (lo..(lo + SUBSET_CHUNK as u64).min(total))
            .map(classify)
            .collect()
    };
    parallel_chunks(0, chunks, workers, work, |_, rows| {
        for (plain, norm) in rows {
            for c in 0..k {
                plain_counts[c] += plain[c] as u64;
                norm_counts[c] += norm[c] as u64;
            }
        }
        Ok(true)
    })?;
    let mut out = Vec::new();
    for variant in [PhiVariant::Normaliser, PhiVariant::Plain] {
        let log2_bound = bound_eval(
            variant.bound_kind(),
            &BoundParams::new(r as u64).with_n(normal.len() as u64),
        )?;
        let cap = 2f64.powf(log2_bound.min(r as f64));
        for cell in (0..k).filter(|&c| c != cells.base_cell_index()) {
            let count = if variant == PhiVariant::Plain {
                plain_counts[cell]
            } else {
                norm_counts[cell]
            };
            out.push(PhiReport {
                variant,
                cell,
                count,
                total,
                log2_bound,
                within_bound: count as f64 <= cap * (1.0 + 1e-12),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Fixed-subset counts of permutations against their bound.
    FixedSubsets,
    /// Invariant digraph counts and the rank bound for non-regular groups.
    InvariantDigraphs,
    /// The fixing subgroup equals `N_reg` whenever its hypothesis holds.
    FixingSubgroup,
    /// `Φ_i` counts against their bounds.
    Phi,
    /// Common out-neighbour sets against the algebraic formula.
    Sigma,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::FixedSubsets,
        Suite::InvariantDigraphs,
        Suite::FixingSubgroup,
        Suite::Phi,
        Suite::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FixedSubsets => "fixed-subsets",
            Suite::InvariantDigraphs => "invariant-digraphs",
            Suite::FixingSubgroup => "fixing-subgroup",
            Suite::Phi => "phi",
            Suite::Sigma => "sigma",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Largest group order scanned; each suite also applies its own ceiling.
    pub max_order: usize,
    pub workers: usize,
    pub seed: u64,
    pub sigma_instances: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_order: 8,
            workers: 1,
            seed: 0,
            sigma_instances: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub instances: u64,
    /// Up to ten failing instances.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub wall_time: Option<Duration>,
}

struct Collector {
    instances: u64,
    failures: Vec<String>,
    failed: bool,
}

impl Collector {
    fn new() -> Self {
        Collector {
            instances: 0,
            failures: Vec::new(),
            failed: false,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < 10 {
                self.failures.push(what());
            }
        }
    }
}

fn groups_up_to(max: usize) -> Result<Vec<FiniteGroup>> {
    catalog_up_to(max).iter().map(make_group).collect()
}

fn proper_normals(group: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let r = group.order();
    Ok(normal_subgroups(group, DEFAULT_LATTICE_CAP)?
        .into_iter()
        .filter(|n| n.len() > 1 && n.len() < r)
        .collect())
}

/// Transitive groups on `n <= max` points arising as regular images or as
/// automorphism groups of Cayley digraphs on catalog groups, deduplicated.
pub fn catalog_transitive_groups(max: usize) -> Result<Vec<PermGroup>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for group in groups_up_to(max)? {
        let r = group.order();
        let reg = regular_representation(&group);
        let mut candidates = vec![reg.clone()];
        for mask in 0..1u64 << r {
            candidates.push(automorphism_group(
                &cayley(&group, &ConnectionSet::from_mask(r, mask))?,
                Some(&reg),
            )?);
        }
        for g in candidates {
            let mut elems = g.elements(u128::MAX)?;
            elems.sort();
            if seen.insert(elems) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut col = Collector::new();
    match suite {
        Suite::FixedSubsets => {
            for group in groups_up_to(opts.max_order.min(DEFAULT_LEMMA_CAP))? {
                for p in regular_representation(&group).elements(u128::MAX)? {
                    let c = fixed_subsets_count(&p)?;
                    let n = p.degree();
                    let scanned = (0..1u64 << n)
                        .filter(|m| (0..n).all(|x| (m >> x & 1) == (m >> p.apply(x) & 1)))
                        .count() as u64;
                    col.check(c.exact == scanned && c.exact as f64 <= c.bound, || {
                        format!(
                            "{}: {p:?} exact {} scanned {scanned} bound {}",
                            group.id(),
                            c.exact,
                            c.bound
                        )
                    });
                }
            }
        }
        Suite::InvariantDigraphs => {
            for g in catalog_transitive_groups(opts.max_order.min(6))? {
                let c = invariant_digraph_count(&g, 0)?;
                let arcs = arc_orbit_count(&g);
                col.check(c.bound_holds && c.kappa == arcs, || {
                    format!(
                        "degree {} order {}: kappa {} arc orbits {arcs}",
                        g.degree(),
                        g.order(),
                        c.kappa
                    )
                });
            }
        }
        Suite::FixingSubgroup => {
            for group in groups_up_to(opts.max_order.min(DEFAULT_LEMMA_CAP))? {
                let r = group.order();
                for normal in proper_normals(&group)? {
                    let (n_reg, cells) = normal_setup(&group, &normal, DEFAULT_LEMMA_CAP)?;
                    let chunks = (1usize << r).div_ceil(SUBSET_CHUNK);
                    let work = |c: usize| -> Result<Vec<(u64, Lemma41Report)>> {
                        let lo = (c * SUBSET_CHUNK) as u64;
                        (lo..(lo + SUBSET_CHUNK as u64).min(1 << r))
                            .map(|m| {
                                let s = ConnectionSet::from_mask(r, m);
                                Ok((
                                    m,
                                    lemma41_from_parts(
                                        &s,
                                        &cells,
                                        &n_reg,
                                        &fixing_subgroup(&group, &s, &cells, &n_reg)?,
                                    ),
                                ))
                            })
                            .collect()
                    };
                    parallel_chunks(0, chunks, opts.workers, work, |_, rows| {
                        for (m, rep) in rows {
                            col.check(rep.consistent(), || {
                                format!("{} N={normal:?} S={m:#x}", group.id())
                            });
                        }
                        Ok(true)
                    })?;
                }
            }
        }
        Suite::Phi => {
            for group in groups_up_to(opts.max_order.min(PHI_CAP))? {
                for normal in proper_normals(&group)? {
                    let reps = phi_census_all(&group, &normal, opts.workers)?;
                    for rep in &reps {
                        col.check(rep.within_bound, || {
                            format!("{} N={normal:?} {rep:?}", group.id())
                        });
                    }
                    for (a, b) in reps
                        .iter()
                        .filter(|x| x.variant == PhiVariant::Normaliser)
                        .zip(reps.iter().filter(|x| x.variant == PhiVariant::Plain))
                    {
                        col.check(a.count <= b.count, || {
                            format!(
                                "{} N={normal:?} cell {}: normaliser count exceeds plain",
                                group.id(),
                                a.cell
                            )
                        });
                    }
                }
            }
        }
        Suite::Sigma => {
            let groups: Vec<(FiniteGroup, Vec<Vec<usize>>)> = groups_up_to(opts.max_order.min(16))?
                .into_iter()
                .map(|g| proper_normals(&g).map(|n| (g, n)))
                .filter(|x| x.as_ref().map_or(true, |(_, n)| !n.is_empty()))
                .collect::<Result<_>>()?;
            if !groups.is_empty() {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                for _ in 0..opts.sigma_instances {
                    let (group, normals) = &groups[rng.gen_range(0..groups.len())];
                    let normal = &normals[rng.gen_range(0..normals.len())];
                    let r = group.order();
                    let s = ConnectionSet::from_mask(r, rng.gen::<u64>() & ((1u64 << r) - 1));
                    let cells = coset_partition(group, normal)?;
                    let (u, j) = (rng.gen_range(0..r), rng.gen_range(0..cells.num_cells()));
                    let got = sigma(group, &s, u, j, &cells)?;
                    let shifted: BTreeSet<usize> = s.elements().map(|x| group.mul(x, u)).collect();
                    let mut want: Vec<usize> = cells
                        .cell(j)
                        .iter()
                        .copied()
                        .filter(|v| s.contains(*v) && shifted.contains(v))
                        .collect();
                    want.sort_unstable();
                    col.check(got == want, || {
                        format!("{} S={} u={u} j={j}", group.id(), s.to_hex())
                    });
                }
            }
        }
    }
    Ok(SuiteReport {
        suite,
        pass: !col.failed,
        instances: col.instances,
        failures: col.failures,
        wall_time: Some(started.elapsed()),
    })
}
