//! Automorphism groups and canonical forms of colored digraphs.
//!
//! Search tree. A node is an ordered partition of the vertices. The root is
//! the partition into color classes (ascending color), refined. Refinement
//! repeatedly splits every cell by the signature
//! `(loop flag, [out-count into cell j, in-count from cell j] for each j)`
//! computed against the current partition, subcells ordered by ascending
//! signature, until no cell splits. A child individualizes a vertex `v` of the
//! target cell (the first among the smallest non-singleton cells) by placing
//! `[v]` directly before the rest of that cell, then refines.
//!
//! Each node carries a trace: the cell count, then per cell its size, color and
//! loop flag, then the matrix of out-counts between cells. A discrete partition
//! lists vertices in canonical order; its certificate is `n` (u32 LE), the
//! colors (u32 LE each) and the adjacency rows of the relabeled digraph packed
//! as little-endian bitsets.
//!
//! The canonical leaf minimizes (trace sequence, certificate) lexicographically.
//! Children are visited lowest vertex first, one per orbit of the pointwise
//! stabilizer of the individualized prefix in the full automorphism group.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::Bitset;
use crate::digraph::ColoredDigraph;
use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Largest vertex count accepted by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 8;

type Cells = Vec<Vec<usize>>;
type Trace = Vec<u32>;

/// Relabeling-invariant code of a colored digraph.
///
/// Equality, ordering and hashing use the certificate bytes only, so two codes
/// are equal exactly when the digraphs are isomorphic.
#[derive(Clone)]
pub struct CanonicalCode {
    labeling: Option<Permutation>,
    certificate: Vec<u8>,
}

impl CanonicalCode {
    /// Maps each original vertex to its canonical position. `None` for codes
    /// rebuilt from hex.
    pub fn labeling(&self) -> Option<&Permutation> {
        self.labeling.as_ref()
    }

    pub fn certificate(&self) -> &[u8] {
        &self.certificate
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.certificate)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let certificate =
            hex::decode(s.trim()).map_err(|e| Error::Parse(format!("canonical code: {e}")))?;
        Ok(CanonicalCode {
            labeling: None,
            certificate,
        })
    }
}

impl PartialEq for CanonicalCode {
    fn eq(&self, other: &Self) -> bool {
        self.certificate == other.certificate
    }
}

impl Eq for CanonicalCode {}

impl PartialOrd for CanonicalCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.certificate.cmp(&other.certificate)
    }
}

impl std::hash::Hash for CanonicalCode {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.certificate.hash(state);
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalCode::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

struct Searcher<'a> {
    g: &'a ColoredDigraph,
    n: usize,
    in_adj: &'a [Bitset],
}

impl<'a> Searcher<'a> {
    fn new(g: &'a ColoredDigraph) -> Self {
        Searcher {
            g,
            n: g.n(),
            in_adj: g.in_adjacency(),
        }
    }

    fn root(&self) -> Cells {
        let mut cells: Cells = vec![Vec::new(); self.g.num_colors()];
        for v in 0..self.n {
            cells[self.g.color(v) as usize].push(v);
        }
        cells.retain(|c| !c.is_empty());
        self.refine(&mut cells);
        cells
    }

    fn refine(&self, cells: &mut Cells) {
        while cells.len() < self.n {
            let bits: Vec<Bitset> = cells
                .iter()
                .map(|c| Bitset::from_indices(self.n, c.iter().copied()))
                .collect();
            let mut next: Cells = Vec::with_capacity(self.n);
            let mut split = false;
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<u32>, usize)> = cell
                    .iter()
                    .map(|&v| (self.signature(v, &bits), v))
                    .collect();
                keyed.sort_unstable();
                let start = next.len();
                for (i, (sig, v)) in keyed.iter().enumerate() {
                    if i == 0 || *sig != keyed[i - 1].0 {
                        next.push(Vec::new());
                    }
                    next.last_mut().expect("pushed").push(*v);
                }
                split |= next.len() - start > 1;
            }
            *cells = next;
            if !split {
                break;
            }
        }
    }

    fn signature(&self, v: usize, bits: &[Bitset]) -> Vec<u32> {
        let out = self.g.out_neighbors(v);
        let inn = &self.in_adj[v];
        let mut sig = Vec::with_capacity(1 + 2 * bits.len());
        sig.push(self.g.has_loop(v) as u32);
        for b in bits {
            sig.push(out.intersection_count(b) as u32);
            sig.push(inn.intersection_count(b) as u32);
        }
        sig
    }

    fn trace(&self, cells: &Cells) -> Trace {
        let c = cells.len();
        let mut t = Vec::with_capacity(1 + 3 * c + c * c);
        t.push(c as u32);
        for cell in cells {
            t.push(cell.len() as u32);
            t.push(self.g.color(cell[0]));
            t.push(self.g.has_loop(cell[0]) as u32);
        }
        if c < self.n {
            let bits: Vec<Bitset> = cells
                .iter()
                .map(|c| Bitset::from_indices(self.n, c.iter().copied()))
                .collect();
            for cell in cells {
                let out = self.g.out_neighbors(cell[0]);
                t.extend(bits.iter().map(|b| out.intersection_count(b) as u32));
            }
        }
        t
    }

    fn target(cells: &Cells) -> Option<usize> {
        cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }

    fn child(&self, cells: &Cells, target: usize, v: usize) -> Cells {
        let mut next = Vec::with_capacity(cells.len() + 1);
        for (i, cell) in cells.iter().enumerate() {
            if i == target {
                next.push(vec![v]);
                next.push(cell.iter().copied().filter(|&w| w != v).collect());
            } else {
                next.push(cell.clone());
            }
        }
        self.refine(&mut next);
        next
    }

    fn certificate(&self, leaf: &[usize]) -> Vec<u8> {
        let mut pos = vec![0; self.n];
        for (i, &v) in leaf.iter().enumerate() {
            pos[v] = i;
        }
        let mut out = Vec::new();
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        for &v in leaf {
            out.extend_from_slice(&self.g.color(v).to_le_bytes());
        }
        for &v in leaf {
            let row = Bitset::from_indices(self.n, self.g.out_neighbors(v).ones().map(|w| pos[w]));
            out.extend(row.to_le_bytes());
        }
        out
    }

    /// Depth-first search below `cells` for a leaf whose traces follow `path`
    /// and whose certificate equals `cert`; returns the leaf order.
    fn find_equivalent(
        &self,
        cells: &Cells,
        depth: usize,
        path: &[Trace],
        cert: &[u8],
    ) -> Option<Vec<usize>> {
        let Some(t) = Self::target(cells) else {
            let leaf: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            return (self.certificate(&leaf) == cert).then_some(leaf);
        };
        for &w in &cells[t] {
            let child = self.child(cells, t, w);
            if self.trace(&child) == path[depth + 1] {
                if let Some(leaf) = self.find_equivalent(&child, depth + 1, path, cert) {
                    return Some(leaf);
                }
            }
        }
        None
    }
}

fn orbit_of(n: usize, point: usize, gens: &[&Permutation]) -> Bitset {
    let mut seen = Bitset::new(n);
    seen.insert(point);
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen.contains(y) {
                seen.insert(y);
                stack.push(y);
            }
        }
    }
    seen
}

/// Full color- and arc-preserving automorphism group of `g`.
///
/// A `seed` of known automorphisms (for example the right regular
/// representation of a Cayley digraph) only speeds up the search.
pub fn automorphism_group(g: &ColoredDigraph, seed: Option<&PermGroup>) -> Result<PermGroup> {
    let n = g.n();
    if let Some(seed) = seed {
        if seed.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: seed.degree(),
            });
        }
        if !seed
            .generators()
            .iter()
            .all(|p| g.is_automorphism_unchecked(p))
        {
            return Err(Error::SeedNotAutomorphism);
        }
    }
    if n <= 1 {
        return Ok(PermGroup::trivial(n));
    }
    let s = Searcher::new(g);
    let mut nodes = vec![s.root()];
    let mut path = vec![s.trace(&nodes[0])];
    let mut choices = Vec::new();
    while let Some(t) = Searcher::target(nodes.last().expect("root")) {
        let v = nodes.last().expect("root")[t][0];
        let child = s.child(nodes.last().expect("root"), t, v);
        path.push(s.trace(&child));
        nodes.push(child);
        choices.push((t, v));
    }
    let first_leaf: Vec<usize> = nodes.last().expect("root").iter().map(|c| c[0]).collect();
    let first_cert = s.certificate(&first_leaf);

    let seed_gens: Vec<Permutation> = seed.map(|sd| sd.generators().to_vec()).unwrap_or_default();
    let mut found: Vec<Permutation> = Vec::new();
    for k in (0..choices.len()).rev() {
        let (t, vk) = choices[k];
        let prefix: Vec<usize> = choices[..k].iter().map(|&(_, v)| v).collect();
        let stab: Vec<Permutation> = match seed {
            Some(sd) if !sd.is_trivial() => sd.pointwise_stabilizer(&prefix).generators().to_vec(),
            _ => Vec::new(),
        };
        let gens = |found: &[Permutation]| -> Vec<Permutation> {
            found.iter().chain(stab.iter()).cloned().collect()
        };
        let mut current = gens(&found);
        let mut orbit = orbit_of(n, vk, &current.iter().collect::<Vec<_>>());
        for &w in &nodes[k][t] {
            if orbit.contains(w) {
                continue;
            }
            let child = s.child(&nodes[k], t, w);
            if s.trace(&child) != path[k + 1] {
                continue;
            }
            if let Some(leaf) = s.find_equivalent(&child, k + 1, &path, &first_cert) {
                let mut images = vec![0; n];
                for (a, b) in first_leaf.iter().zip(&leaf) {
                    images[*a] = *b;
                }
                let gamma = Permutation::from_images(images)?;
                debug_assert!(g.is_automorphism_unchecked(&gamma));
                found.push(gamma);
                current = gens(&found);
                orbit = orbit_of(n, vk, &current.iter().collect::<Vec<_>>());
            }
        }
    }
    let mut all = seed_gens;
    all.extend(found);
    PermGroup::from_generators(n, all)
}

/// Canonical code of `g`.
pub fn canonical_form(g: &ColoredDigraph) -> CanonicalCode {
    let aut = automorphism_group(g, None).expect("no seed");
    canonical_form_with_group(g, &aut)
}

/// Canonical code of `g`, given its full automorphism group `aut`.
pub fn canonical_form_with_group(g: &ColoredDigraph, aut: &PermGroup) -> CanonicalCode {
    let n = g.n();
    if n == 0 {
        return CanonicalCode {
            labeling: Some(Permutation::identity(0)),
            certificate: 0u32.to_le_bytes().to_vec(),
        };
    }
    let s = Searcher::new(g);
    let root = s.root();
    let mut state = CanonState { best: None };
    let mut traces = vec![s.trace(&root)];
    let mut prefix = Vec::new();
    canon_dfs(&s, aut, &root, &mut traces, &mut prefix, &mut state);
    let (_, cert, leaf) = state.best.expect("search reaches a leaf");
    let mut images = vec![0; n];
    for (i, &v) in leaf.iter().enumerate() {
        images[v] = i;
    }
    CanonicalCode {
        labeling: Some(Permutation::from_images(images).expect("leaf is a bijection")),
        certificate: cert,
    }
}

struct CanonState {
    best: Option<(Vec<Trace>, Vec<u8>, Vec<usize>)>,
}

fn canon_dfs(
    s: &Searcher<'_>,
    aut: &PermGroup,
    cells: &Cells,
    traces: &mut Vec<Trace>,
    prefix: &mut Vec<usize>,
    state: &mut CanonState,
) {
    if let Some((best_traces, _, _)) = &state.best {
        let d = traces.len();
        if traces[..] > best_traces[..d.min(best_traces.len())] {
            return;
        }
    }
    let Some(t) = Searcher::target(cells) else {
        let leaf: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let cert = s.certificate(&leaf);
        let better = match &state.best {
            None => true,
            Some((bt, bc, _)) => (&traces[..], &cert[..]) < (&bt[..], &bc[..]),
        };
        if better {
            state.best = Some((traces.clone(), cert, leaf));
        }
        return;
    };
    let stab = aut.pointwise_stabilizer(prefix);
    let gens: Vec<&Permutation> = stab.generators().iter().collect();
    let mut covered = Bitset::new(s.n);
    for &w in &cells[t] {
        if covered.contains(w) {
            continue;
        }
        covered.union_with(&orbit_of(s.n, w, &gens));
        let child = s.child(cells, t, w);
        traces.push(s.trace(&child));
        prefix.push(w);
        canon_dfs(s, aut, &child, traces, prefix, state);
        prefix.pop();
        traces.pop();
    }
}

/// Oracle: filters all `n!` vertex permutations.
pub fn brute_force_automorphisms(g: &ColoredDigraph) -> Result<PermGroup> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count for brute force",
            value: n as u128,
            cap: BRUTE_FORCE_MAX_VERTICES as u128,
        });
    }
    let mut autos = Vec::new();
    PermGroup::symmetric(n).for_each_element(|p| {
        if g.is_automorphism_unchecked(p) {
            autos.push(p.clone());
        }
    });
    PermGroup::from_elements_incremental(n, autos.iter())
}
