//! Acceptance criteria, one line of output per criterion. Runs without the
//! libtest harness so the lines always appear; exits non-zero on any failure.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use cayley_census::autgrp::{automorphism_group, canonical_form};
use cayley_census::census::{
    bound_eval, exact_census, sampled_census, unlabelled_census, BoundKind, BoundParams,
    CensusRecord, Classification, ExactOptions,
};
use cayley_census::cli::run_with_output;
use cayley_census::groups::{
    catalog_up_to, group_automorphisms, make_group, normal_subgroups, quotient_group,
    regular_representation, FiniteGroup,
};
use cayley_census::lemmalab::{
    catalog_transitive_groups, fixed_subsets_count, invariant_digraph_count, lemma41_verify,
    phi_census_all, PhiVariant,
};
use cayley_census::perm::{core_in, PermGroup, Permutation};
use cayley_census::quotient::{
    coset_partition, normal_quotient, odd_connection_set, odd_quotient,
    partition_preserving_subgroup,
};
use cayley_census::{cayley, ColoredDigraph, ConnectionSet, Error};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn group(spec: &str) -> FiniteGroup {
    make_group(&spec.parse().unwrap()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

// ---------- independent oracles ----------

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Maps `a` onto `b` (arcs and colors).
fn maps_onto(a: &ColoredDigraph, b: &ColoredDigraph, p: &[usize]) -> bool {
    let n = a.n();
    (0..n).all(|u| {
        a.color(u) == b.color(p[u]) && (0..n).all(|v| a.has_arc(u, v) == b.has_arc(p[u], p[v]))
    })
}

fn isomorphic(a: &ColoredDigraph, b: &ColoredDigraph, perms: &[Vec<usize>]) -> bool {
    a.n() == b.n() && perms.iter().any(|p| maps_onto(a, b, p))
}

/// Number of automorphisms of `d`, stopping once it exceeds `cap`.
fn aut_count_capped(d: &ColoredDigraph, cap: usize) -> usize {
    let n = d.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| d.has_arc(u, v)).collect())
        .collect();
    fn go(
        i: usize,
        adj: &[Vec<bool>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        count: &mut usize,
        cap: usize,
    ) {
        let n = adj.len();
        if *count > cap {
            return;
        }
        if i == n {
            *count += 1;
            return;
        }
        for w in 0..n {
            if used[w] || adj[i][i] != adj[w][w] {
                continue;
            }
            if (0..i).all(|j| adj[i][j] == adj[w][map[j]] && adj[j][i] == adj[map[j]][w]) {
                used[w] = true;
                map.push(w);
                go(i + 1, adj, map, used, count, cap);
                map.pop();
                used[w] = false;
            }
        }
    }
    let mut count = 0;
    go(
        0,
        &adj,
        &mut Vec::new(),
        &mut vec![false; n],
        &mut count,
        cap,
    );
    count
}

fn random_digraph(rng: &mut ChaCha8Rng, n: usize) -> ColoredDigraph {
    let density = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let distinct: BTreeSet<u32> = raw.iter().copied().collect();
    let colors = raw
        .iter()
        .map(|c| distinct.range(..c).count() as u32)
        .collect();
    ColoredDigraph::from_arcs(n, &arcs)
        .unwrap()
        .with_colors(colors)
        .unwrap()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

// ---------- criteria ----------

fn c1_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let perms: Vec<Vec<Vec<usize>>> = (0..=7).map(all_perms).collect();
    for case in 0..1000 {
        let n = rng.gen_range(1..=7);
        let d = random_digraph(&mut rng, n);
        let oracle: BTreeSet<Vec<usize>> = perms[n]
            .iter()
            .filter(|p| maps_onto(&d, &d, p))
            .cloned()
            .collect();
        let aut = ok(automorphism_group(&d, None))?;
        let found: BTreeSet<Vec<usize>> = ok(aut.elements(u128::MAX))?
            .into_iter()
            .map(|p| p.images().to_vec())
            .collect();
        ensure!(
            aut.order() == oracle.len() as u128 && found == oracle,
            "case {case}: group mismatch on n = {n}"
        );
    }
    let (mut iso, mut non_iso) = (0, 0);
    for case in 0..1000 {
        let n = rng.gen_range(1..=7);
        let a = random_digraph(&mut rng, n);
        let mut b = ok(a.relabel(&random_perm(&mut rng, n)))?;
        if rng.gen_bool(0.5) {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let arcs: Vec<(usize, usize)> = b
                .arcs()
                .into_iter()
                .filter(|&x| x != (u, v))
                .chain((!b.has_arc(u, v)).then_some((u, v)))
                .collect();
            b = ok(ok(ColoredDigraph::from_arcs(n, &arcs))?.with_colors(b.colors().to_vec()))?;
        }
        let oracle = isomorphic(&a, &b, &perms[n]);
        ensure!(
            (canonical_form(&a) == canonical_form(&b)) == oracle,
            "pair {case}: separation disagrees (oracle iso = {oracle})"
        );
        if oracle {
            iso += 1
        } else {
            non_iso += 1
        }
    }
    Ok(format!(
        "1000 groups match; 1000 pairs ({iso} isomorphic, {non_iso} not) separated correctly"
    ))
}

fn c2_invariant_digraphs() -> Outcome {
    let groups: Vec<PermGroup> = ok(catalog_transitive_groups(6))?
        .into_iter()
        .filter(|g| g.degree() >= 3)
        .collect();
    let mut non_regular = 0;
    for g in &groups {
        let n = g.degree();
        let elems = ok(g.elements(u128::MAX))?;
        let c = ok(invariant_digraph_count(g, 0))?;
        let oracle = if n == 3 {
            (0..1u32 << 9)
                .filter(|&m| {
                    elems.iter().all(|p| {
                        (0..9).all(|k| {
                            (m >> k & 1) == (m >> (p.apply(k / 3) * 3 + p.apply(k % 3)) & 1)
                        })
                    })
                })
                .count() as u128
        } else {
            let mut seen = HashSet::new();
            let mut orbits = 0u32;
            for a in 0..n {
                for b in 0..n {
                    if seen.insert((a, b)) {
                        orbits += 1;
                        for p in &elems {
                            seen.insert((p.apply(a), p.apply(b)));
                        }
                    }
                }
            }
            1u128 << orbits
        };
        ensure!(
            c.count == oracle,
            "degree {n}, order {}: 2^kappa = {} but oracle = {oracle}",
            g.order(),
            c.count
        );
        let regular = elems.len() == n;
        if !regular {
            non_regular += 1;
            ensure!(
                4 * c.kappa <= 3 * n,
                "degree {n}, order {}: kappa {} exceeds 3n/4",
                g.order(),
                c.kappa
            );
        }
    }
    Ok(format!(
        "{} transitive groups of degree 3..6 ({non_regular} non-regular)",
        groups.len()
    ))
}

fn c3_fixed_subsets() -> Outcome {
    let mut count = 0;
    for spec in catalog_up_to(12) {
        let group = ok(make_group(&spec))?;
        let n = group.order();
        for x in 0..n {
            let p: Vec<usize> = (0..n).map(|v| group.mul(v, x)).collect();
            let scanned = (0..1u32 << n)
                .filter(|&m| (0..n).all(|v| (m >> v & 1) == (m >> p[v] & 1)))
                .count() as u64;
            let mut seen = vec![false; n];
            let mut cycles = 0;
            for v in 0..n {
                if !seen[v] {
                    cycles += 1;
                    let mut w = v;
                    while !seen[w] {
                        seen[w] = true;
                        w = p[w];
                    }
                }
            }
            let delta = (0..n).filter(|&v| p[v] == v).count();
            let bound = 2f64.powf(delta as f64 + (n - delta) as f64 / 2.0);
            let c = ok(fixed_subsets_count(&ok(Permutation::from_images(p))?))?;
            ensure!(
                c.exact == scanned && scanned == 1 << cycles,
                "{spec} element {x}: {} vs scan {scanned}",
                c.exact
            );
            ensure!(
                scanned as f64 <= bound && (c.bound - bound).abs() < 1e-9,
                "{spec} element {x}: bound"
            );
            count += 1;
        }
    }
    Ok(format!("{count} permutations"))
}

fn proper_normals(group: &FiniteGroup) -> Result<Vec<Vec<usize>>, String> {
    let r = group.order();
    Ok(ok(normal_subgroups(group, 64))?
        .into_iter()
        .filter(|n| n.len() > 1 && n.len() < r)
        .collect())
}

fn c4_fixing_subgroup() -> Outcome {
    let (mut instances, mut holding) = (0u64, 0u64);
    let perms6: Vec<Vec<Vec<usize>>> = (0..=6).map(all_perms).collect();
    for spec in catalog_up_to(8) {
        let group = ok(make_group(&spec))?;
        let r = group.order();
        for normal in proper_normals(&group)? {
            let cells = ok(coset_partition(&group, &normal))?;
            for m in 0..1u64 << r {
                let s = ConnectionSet::from_mask(r, m);
                let rep = ok(lemma41_verify(&group, &normal, &s))?;
                ensure!(
                    !rep.hypothesis_holds || rep.equals_n,
                    "{spec} N={normal:?} S={m:#x}: hypothesis holds but F_S != N"
                );
                instances += 1;
                holding += rep.hypothesis_holds as u64;
                if r <= 6 {
                    let d = ok(cayley(&group, &s))?;
                    let fs = perms6[r]
                        .iter()
                        .filter(|p| {
                            maps_onto(&d, &d, p)
                                && cells.cells().iter().all(|c| {
                                    c.iter()
                                        .all(|&v| cells.cell_map()[p[v]] == cells.cell_map()[v])
                                })
                        })
                        .count() as u128;
                    ensure!(
                        fs == rep.fs_order,
                        "{spec} N={normal:?} S={m:#x}: |F_S| {} vs oracle {fs}",
                        rep.fs_order
                    );
                }
            }
        }
    }
    Ok(format!(
        "{instances} instances, hypothesis holds in {holding}, no counterexample"
    ))
}

fn c5_census_exactness() -> Outcome {
    for spec in catalog_up_to(10) {
        let g = ok(make_group(&spec))?;
        let plain = ok(exact_census(
            &g,
            &ExactOptions {
                reduce_by_aut: false,
                ..Default::default()
            },
            None,
        ))?;
        let reduced = ok(exact_census(
            &g,
            &ExactOptions {
                reduce_by_aut: true,
                workers: 4,
                ..Default::default()
            },
            None,
        ))?;
        ensure!(
            plain.counts == reduced.counts,
            "{spec}: {:?} vs {:?}",
            plain.counts,
            reduced.counts
        );
    }
    let oracle_drr = |g: &FiniteGroup| -> u64 {
        let r = g.order();
        let perms = all_perms(r);
        (0..1u64 << r)
            .filter(|&m| {
                let d = cayley(g, &ConnectionSet::from_mask(r, m)).unwrap();
                perms.iter().filter(|p| maps_onto(&d, &d, p)).count() == r
            })
            .count() as u64
    };
    let v4 = group("klein4");
    let s = ok(exact_census(&v4, &ExactOptions::default(), None))?;
    ensure!(
        s.counts.drr == 0 && s.total == 16 && oracle_drr(&v4) == 0,
        "klein4: {}/{}",
        s.counts.drr,
        s.total
    );
    let c3 = group("cyclic:3");
    let s = ok(exact_census(&c3, &ExactOptions::default(), None))?;
    let pinned = ok(std::fs::read_to_string(fixture("cyclic3_exact.json")))?;
    ensure!(
        s.counts.drr == oracle_drr(&c3),
        "cyclic:3 disagrees with the brute-force oracle"
    );
    ensure!(
        s.to_json() + "\n" == pinned,
        "cyclic:3 summary differs from fixture"
    );
    Ok(format!(
        "reduction agrees on {} groups; klein4 0/16; cyclic:3 {}/{}",
        catalog_up_to(10).len(),
        s.counts.drr,
        s.total
    ))
}

fn cyclic_table(workers: usize, reduce: bool) -> Result<String, String> {
    let mut text = String::from("r,drr_count,total,fraction,decimal\n");
    for r in 5..=14 {
        let g = group(&format!("cyclic:{r}"));
        let s = ok(exact_census(
            &g,
            &ExactOptions {
                reduce_by_aut: reduce,
                workers,
                ..Default::default()
            },
            None,
        ))?;
        let p = &s.drr_proportion;
        text += &format!(
            "{r},{},{},{}/{},{}\n",
            s.counts.drr, s.total, p.numerator, p.denominator, p.decimal
        );
    }
    Ok(text)
}

fn c6_cyclic_trend() -> Outcome {
    let pinned = ok(std::fs::read_to_string(fixture(
        "cyclic_drr_proportions.csv",
    )))?;
    for (workers, reduce) in [(1, true), (8, true), (3, false)] {
        ensure!(
            cyclic_table(workers, reduce)? == pinned,
            "table with {workers} workers (reduce = {reduce}) differs from fixture"
        );
    }
    // Backtracking oracle for every subset.
    let rows: Vec<Vec<&str>> = pinned
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    for row in &rows {
        let r: usize = row[0].parse().unwrap();
        let g = group(&format!("cyclic:{r}"));
        let drr = (0..1u64 << r)
            .filter(|&m| {
                aut_count_capped(&cayley(&g, &ConnectionSet::from_mask(r, m)).unwrap(), r) == r
            })
            .count();
        ensure!(
            drr.to_string() == row[1],
            "cyclic:{r}: oracle DRR count {drr} vs pinned {}",
            row[1]
        );
    }
    let frac = |row: &Vec<&str>| row[1].parse::<f64>().unwrap() / row[2].parse::<f64>().unwrap();
    let (first, last) = (frac(&rows[0]), frac(&rows[rows.len() - 1]));
    ensure!(
        last > first,
        "proportion at r = 14 ({last}) does not exceed r = 5 ({first})"
    );
    Ok(format!(
        "fixture reproduced for 1, 3, 8 workers; oracle-checked; {:.6} at r=5 < {:.6} at r=14",
        first, last
    ))
}

fn c7_quotients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let specs = catalog_up_to(16);
    let mut identity_checked = 0;
    for case in 0..200 {
        let g = ok(make_group(&specs[rng.gen_range(0..specs.len())]))?;
        let r = g.order();
        let normals = ok(normal_subgroups(&g, 64))?;
        let normal = normals[rng.gen_range(0..normals.len())].clone();
        let s = ConnectionSet::from_mask(r, rng.gen::<u64>() & ((1u64 << r) - 1));
        let d = ok(cayley(&g, &s))?;
        let cells = ok(coset_partition(&g, &normal))?;
        let (q, proj) = ok(quotient_group(&g, &normal))?;
        let odd = ok(odd_quotient(&d, &cells))?;
        ensure!(
            odd == ok(cayley(&q, &ok(odd_connection_set(&g, &normal, &s))?))?,
            "case {case}: odd quotient vs quotient Cayley digraph"
        );
        // Parity oracle under the projection.
        for a in 0..cells.num_cells() {
            let rep = cells.representative(a);
            for b in 0..cells.num_cells() {
                let arcs = (0..r)
                    .filter(|&v| proj[v] == b && d.has_arc(rep, v))
                    .count();
                ensure!(
                    odd.has_arc(proj[rep], b) == (arcs % 2 == 1),
                    "case {case}: parity at ({a}, {b})"
                );
            }
        }
        let cell_of = cells.cell_map();
        for x in ok(partition_preserving_subgroup(&d, &cells))?.generators() {
            ensure!(
                ok(d.is_automorphism(x))?,
                "case {case}: non-automorphism generator"
            );
            let images: Vec<usize> = (0..cells.num_cells())
                .map(|c| cell_of[x.apply(cells.representative(c))])
                .collect();
            ensure!(
                (0..r).all(|v| cell_of[x.apply(v)] == images[cell_of[v]]),
                "case {case}: cells not permuted"
            );
            let induced = ok(Permutation::from_images(images))?;
            ensure!(
                ok(odd.is_automorphism(&induced))?,
                "case {case}: induced map is not a quotient automorphism"
            );
        }
        let reg = regular_representation(&g);
        let aut = ok(automorphism_group(&d, Some(&reg)))?;
        if aut.order() <= 2_000 {
            let n_reg = ok(PermGroup::from_generators(
                r,
                normal.iter().map(|&x| g.right_multiplication(x)).collect(),
            ))?;
            let n = ok(core_in(&aut, &n_reg, 10_000))?;
            let nq = ok(normal_quotient(&d, &aut, &n))?;
            let block = nq.cells.cell(0).to_vec();
            let elems = ok(aut.elements(10_000))?;
            let setwise: HashSet<Permutation> = elems
                .iter()
                .filter(|x| x.fixes_set(&block))
                .cloned()
                .collect();
            let stab0 = ok(aut.point_stabilizer(0).elements(10_000))?;
            let nel = ok(n.elements(10_000))?;
            let product: HashSet<Permutation> = stab0
                .iter()
                .flat_map(|a| nel.iter().map(move |b| a.compose(b)))
                .collect();
            ensure!(
                setwise == product && nq.stabilizer_identity_holds,
                "case {case}: block stabilizer identity fails"
            );
            identity_checked += 1;
        }
    }
    let mut kernels = 0;
    for spec in catalog_up_to(10) {
        let g = ok(make_group(&spec))?;
        let r = g.order();
        let reg = regular_representation(&g);
        for m in (0..1u64 << r).step_by(7) {
            let aut = ok(automorphism_group(
                &ok(cayley(&g, &ConnectionSet::from_mask(r, m)))?,
                Some(&reg),
            ))?;
            if aut.order() > 1_500 {
                continue;
            }
            let core = ok(core_in(&aut, &reg, 10_000))?;
            let orbits = core.orbits();
            let elems = ok(aut.elements(10_000))?;
            let kernel: HashSet<Permutation> = elems
                .iter()
                .filter(|x| orbits.cells().iter().all(|c| x.fixes_set(c)))
                .cloned()
                .collect();
            let stab0 = ok(aut.point_stabilizer(0).elements(10_000))?;
            let core_el = ok(core.elements(10_000))?;
            let product: HashSet<Permutation> = stab0
                .iter()
                .flat_map(|a| core_el.iter().map(move |b| a.compose(b)))
                .collect();
            let mut meet = product.clone();
            for x in &elems {
                let conj: HashSet<Permutation> =
                    product.iter().map(|y| y.conjugate_by(x)).collect();
                meet.retain(|y| conj.contains(y));
            }
            ensure!(kernel == meet, "{spec} S={m:#x}: kernel identity fails");
            kernels += 1;
        }
    }
    Ok(format!("200 random cases ({identity_checked} with the stabilizer identity checked); kernel identity on {kernels} digraphs"))
}

fn c8_unlabelled() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let specs = catalog_up_to(10);
    for spec in &specs {
        let g = ok(make_group(spec))?;
        let r = g.order();
        let u = ok(unlabelled_census(&g, 12, 2))?.unlabelled.unwrap();
        let mut drr_masks = Vec::new();
        let mut collect = |rec: &CensusRecord| {
            if rec.classification == Classification::Drr {
                drr_masks.push(rec.set.mask().unwrap());
            }
            Ok(())
        };
        ok(exact_census(
            &g,
            &ExactOptions {
                reduce_by_aut: false,
                ..Default::default()
            },
            Some(&mut collect),
        ))?;
        let auts = ok(group_automorphisms(&g, 64))?;
        let mut seen = HashSet::new();
        let mut orbits = 0u64;
        for &m in &drr_masks {
            if seen.insert(m) {
                orbits += 1;
                for phi in &auts {
                    seen.insert(ConnectionSet::from_mask(r, m).image(phi).mask().unwrap());
                }
            }
        }
        ensure!(
            u.drr_count == orbits,
            "{spec}: drr_count {} vs {orbits} Aut(R)-orbits",
            u.drr_count
        );
        ensure!(
            u.drr_subset_count == drr_masks.len() as u64,
            "{spec}: DRR subset count"
        );
        ensure!(
            u.drr_count * auts.len() as u64 >= u.drr_subset_count,
            "{spec}: orbit-count inequality"
        );
        let mut codes = HashSet::new();
        for m in 0..1u64 << r {
            let d = ok(cayley(&g, &ConnectionSet::from_mask(r, m)))?;
            codes.insert(canonical_form(&ok(d.relabel(&random_perm(&mut rng, r)))?));
        }
        ensure!(
            codes.len() as u64 == u.cd_count,
            "{spec}: relabelled dedup gives {} classes, census {}",
            codes.len(),
            u.cd_count
        );
    }
    Ok(format!("{} groups", specs.len()))
}

fn c9_bounds() -> Outcome {
    let close = |a: f64, b: f64| ((a - b) / b).abs() <= 1e-9;
    let v = ok(bound_eval(BoundKind::L2_2, &BoundParams::new(16).with_n(4)))?;
    ensure!(close(v, 21.0), "L2.2(16, 4) = {v}");
    for r in [2u64, 16, 1024, 1 << 20] {
        let mut p = BoundParams::new(r);
        p.b = 0.0;
        let v = ok(bound_eval(BoundKind::T1_3, &p))?;
        ensure!(close(v, r as f64 + 2.0), "T1.3 at b = 0, r = {r}: {v}");
    }
    let v = ok(bound_eval(BoundKind::T3_3, &BoundParams::new(1024)))?;
    ensure!(close(v, 768.0 + 1024f64.powf(0.999)), "T3.3(1024) = {v}");
    let mut checked = 0;
    for spec in catalog_up_to(10) {
        let g = ok(make_group(&spec))?;
        let r = g.order();
        for normal in proper_normals(&g)? {
            let reps = ok(phi_census_all(&g, &normal, 2))?;
            for rep in &reps {
                let cap = (r as f64).min(rep.log2_bound);
                ensure!(
                    rep.count <= 1 << r && (rep.count as f64) <= 2f64.powf(cap) * (1.0 + 1e-12),
                    "{spec} N={normal:?}: {rep:?}"
                );
                checked += 1;
            }
            for a in reps.iter().filter(|x| x.variant == PhiVariant::Normaliser) {
                let b = reps
                    .iter()
                    .find(|x| x.variant == PhiVariant::Plain && x.cell == a.cell)
                    .unwrap();
                ensure!(
                    a.count <= b.count,
                    "{spec} N={normal:?} cell {}: normaliser count exceeds plain",
                    a.cell
                );
            }
        }
    }
    Ok(format!(
        "spot values match; {checked} phi counts within bounds"
    ))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let code = run_with_output(
        std::iter::once("cayley-census").chain(args.iter().copied()),
        &mut out,
        &mut std::io::sink(),
    );
    (code, out)
}

fn c10_determinism() -> Outcome {
    let dir = ok(tempfile::tempdir())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let mut runs = Vec::new();
    for workers in ["1", "2", "5"] {
        let out_file = path(&format!("sampled{workers}.csv"));
        let (code, stdout) = cli(&[
            "census",
            "--group",
            "dihedral:12",
            "--mode",
            "sampled",
            "--samples",
            "600",
            "--seed",
            "11",
            "--workers",
            workers,
            "--out",
            &out_file,
            "--format",
            "csv",
        ]);
        ensure!(code == 0, "sampled census exit {code}");
        runs.push((stdout, ok(std::fs::read(&out_file))?));
    }
    ensure!(
        runs.windows(2).all(|w| w[0] == w[1]),
        "sampled census output depends on worker count"
    );
    let mut exact = Vec::new();
    for workers in ["1", "4"] {
        let out_file = path(&format!("exact{workers}.json"));
        let (code, stdout) = cli(&[
            "census",
            "--group",
            "abelian:2,6",
            "--workers",
            workers,
            "--out",
            &out_file,
        ]);
        ensure!(code == 0, "exact census exit {code}");
        exact.push((stdout, ok(std::fs::read(&out_file))?));
    }
    ensure!(
        exact[0] == exact[1],
        "exact census output depends on worker count"
    );
    let verify: Vec<_> = (0..2)
        .map(|_| cli(&["verify", "--max-order", "6", "--workers", "2"]))
        .collect();
    ensure!(
        verify[0].0 == 0 && verify[0] == verify[1],
        "verify output differs between runs"
    );
    let a = ok(sampled_census(&group("cyclic:10"), 300, 3, 1, None))?;
    let b = ok(sampled_census(&group("cyclic:10"), 300, 3, 6, None))?;
    ensure!(
        a.to_json() == b.to_json(),
        "library sampled summaries differ"
    );

    // Interrupt after a few chunks, resume through the CLI, compare with an uninterrupted run.
    let g = group("dihedral:10");
    let ckpt = dir.path().join("census.ckpt");
    let opts = ExactOptions {
        reduce_by_aut: false,
        workers: 3,
        chunk_size: 100,
        checkpoint: Some(ckpt.clone()),
        stop_after_chunks: Some(4),
        ..Default::default()
    };
    match exact_census(&g, &opts, None) {
        Err(Error::Interrupted { completed: 4 }) => {}
        other => return Err(format!("expected interruption, got {other:?}")),
    }
    let (code, resumed) = cli(&[
        "census",
        "--group",
        "dihedral:10",
        "--workers",
        "2",
        "--chunk-size",
        "100",
        "--checkpoint",
        &ckpt.to_string_lossy(),
    ]);
    ensure!(code == 0, "resume exit {code}");
    let (_, fresh) = cli(&[
        "census",
        "--group",
        "dihedral:10",
        "--workers",
        "1",
        "--chunk-size",
        "100",
    ]);
    ensure!(
        resumed == fresh,
        "resumed summary differs from uninterrupted run"
    );
    let mut cut = ok(std::fs::read_to_string(&ckpt))?;
    cut.truncate(cut.len() - 20);
    ok(std::fs::write(&ckpt, cut))?;
    let (code, torn) = cli(&[
        "census",
        "--group",
        "dihedral:10",
        "--workers",
        "4",
        "--chunk-size",
        "100",
        "--checkpoint",
        &ckpt.to_string_lossy(),
    ]);
    ensure!(
        code == 0 && torn == fresh,
        "resume from a torn checkpoint differs"
    );
    Ok("sampled, exact, verify and checkpoint resume are byte-identical".into())
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        (
            "oracle equivalence of automorphism groups and canonical forms",
            c1_oracle_equivalence,
        ),
        (
            "invariant digraph counts and rank bound",
            c2_invariant_digraphs,
        ),
        (
            "fixed-subset counts of regular-image elements",
            c3_fixed_subsets,
        ),
        (
            "fixing subgroup equals N under its hypothesis",
            c4_fixing_subgroup,
        ),
        ("census exactness", c5_census_exactness),
        ("cyclic DRR proportions", c6_cyclic_trend),
        ("quotient suite", c7_quotients),
        ("unlabelled counts", c8_unlabelled),
        ("bound evaluators and phi counts", c9_bounds),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
