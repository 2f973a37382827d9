//! Connection sets, colored digraphs, and the Cayley digraph construction.
//!
//! Hex row format used by regression fixtures:
//!
//! ```text
//! digraph <n>
//! <row 0 hex>
//! ...
//! <row n-1 hex>
//! colors <c0> <c1> ... <cn-1>     (omitted when every color is 0)
//! ```
//!
//! Row `u` is the out-neighbour set of `u` as little-endian bytes (bit `v` is bit
//! `v % 8` of byte `v / 8`), written as lowercase hex.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::perm::Permutation;

/// A subset `S` of a group of order `r`; bit `g` is set iff element `g` is in `S`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionSet {
    bits: Bitset,
}

impl ConnectionSet {
    pub fn empty(r: usize) -> Self {
        ConnectionSet {
            bits: Bitset::new(r),
        }
    }

    pub fn full(r: usize) -> Self {
        ConnectionSet {
            bits: Bitset::full(r),
        }
    }

    pub fn from_elements(r: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = Bitset::new(r);
        for g in elements {
            if g >= r {
                return Err(Error::SizeMismatch(format!(
                    "element {g} out of range for order {r}"
                )));
            }
            bits.insert(g);
        }
        Ok(ConnectionSet { bits })
    }

    /// Low `r` bits of `mask` (`r <= 64`).
    pub fn from_mask(r: usize, mask: u64) -> Self {
        ConnectionSet {
            bits: Bitset::from_u64(r, mask),
        }
    }

    pub fn from_bitset(bits: Bitset) -> Self {
        ConnectionSet { bits }
    }

    pub fn mask(&self) -> Option<u64> {
        self.bits.to_u64()
    }

    pub fn r(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    pub fn contains(&self, g: usize) -> bool {
        self.bits.contains(g)
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Elements in ascending index order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn rank(&self, g: usize) -> usize {
        self.bits.rank(g)
    }

    pub fn select(&self, k: usize) -> Option<usize> {
        self.bits.select(k)
    }

    /// `S^phi` for a permutation `phi` of the element indices.
    pub fn image(&self, phi: &Permutation) -> ConnectionSet {
        ConnectionSet {
            bits: Bitset::from_indices(self.r(), self.elements().map(|g| phi.apply(g))),
        }
    }

    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }

    pub fn from_hex(r: usize, s: &str) -> Result<Self> {
        Bitset::from_hex(r, s)
            .map(|bits| ConnectionSet { bits })
            .ok_or_else(|| Error::Parse(format!("bad connection-set hex {s:?} for order {r}")))
    }
}

impl fmt::Debug for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConnectionSet(r={}, {:?})", self.r(), self.bits)
    }
}

/// Digraph on `0..n` with out-adjacency bitsets and vertex colors. Loops allowed.
///
/// Serializes as JSON `{"n": .., "arcs": [[u, v], ..], "colors": [..]}`.
#[derive(Serialize, Deserialize)]
#[serde(into = "DigraphJson", try_from = "DigraphJson")]
pub struct ColoredDigraph {
    n: usize,
    out_adj: Vec<Bitset>,
    colors: Vec<u32>,
    in_adj: OnceLock<Vec<Bitset>>,
}

impl Clone for ColoredDigraph {
    fn clone(&self) -> Self {
        ColoredDigraph {
            n: self.n,
            out_adj: self.out_adj.clone(),
            colors: self.colors.clone(),
            in_adj: OnceLock::new(),
        }
    }
}

impl PartialEq for ColoredDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.out_adj == other.out_adj && self.colors == other.colors
    }
}

impl Eq for ColoredDigraph {}

impl std::hash::Hash for ColoredDigraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.out_adj.hash(state);
        self.colors.hash(state);
    }
}

impl fmt::Debug for ColoredDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColoredDigraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs())
            .field("colors", &self.colors)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct DigraphJson {
    n: usize,
    arcs: Vec<(usize, usize)>,
    colors: Vec<u32>,
}

impl From<ColoredDigraph> for DigraphJson {
    fn from(d: ColoredDigraph) -> Self {
        DigraphJson {
            n: d.n,
            arcs: d.arcs(),
            colors: d.colors,
        }
    }
}

impl TryFrom<DigraphJson> for ColoredDigraph {
    type Error = Error;
    fn try_from(j: DigraphJson) -> Result<Self> {
        ColoredDigraph::from_arcs(j.n, &j.arcs)?.with_colors(j.colors)
    }
}

impl ColoredDigraph {
    /// Arcless digraph, all vertices color 0.
    pub fn new(n: usize) -> Self {
        ColoredDigraph {
            n,
            out_adj: vec![Bitset::new(n); n],
            colors: vec![0; n],
            in_adj: OnceLock::new(),
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = ColoredDigraph::new(n);
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::SizeMismatch(format!(
                    "arc ({u}, {v}) out of range for {n} vertices"
                )));
            }
            d.out_adj[u].insert(v);
        }
        Ok(d)
    }

    pub fn from_out_adjacency(out_adj: Vec<Bitset>) -> Result<Self> {
        let n = out_adj.len();
        if let Some(row) = out_adj.iter().find(|row| row.len() != n) {
            return Err(Error::SizeMismatch(format!(
                "row of length {} in digraph on {n} vertices",
                row.len()
            )));
        }
        Ok(ColoredDigraph {
            n,
            out_adj,
            colors: vec![0; n],
            in_adj: OnceLock::new(),
        })
    }

    /// Replaces the coloring; colors must cover a contiguous range `0..k`.
    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "{} colors for {} vertices",
                colors.len(),
                self.n
            )));
        }
        let k = colors.iter().max().map_or(0, |&m| m as usize + 1);
        let mut seen = vec![false; k];
        for &c in &colors {
            seen[c as usize] = true;
        }
        if seen.contains(&false) {
            return Err(Error::InvalidParams(
                "vertex colors must form a contiguous range from 0".into(),
            ));
        }
        self.colors = colors;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_arc(v, v)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        self.out_adj[u].insert(v);
        self.in_adj = OnceLock::new();
    }

    pub fn out_neighbors(&self, u: usize) -> &Bitset {
        &self.out_adj[u]
    }

    /// In-neighbour sets, computed on first use and cached.
    pub fn in_neighbors(&self, v: usize) -> &Bitset {
        &self.in_adjacency()[v]
    }

    pub fn out_adjacency(&self) -> &[Bitset] {
        &self.out_adj
    }

    pub fn in_adjacency(&self) -> &[Bitset] {
        self.in_adj.get_or_init(|| {
            let mut t = vec![Bitset::new(self.n); self.n];
            for (u, row) in self.out_adj.iter().enumerate() {
                for v in row.ones() {
                    t[v].insert(u);
                }
            }
            t
        })
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Bitset::count).sum()
    }

    /// Arcs in row-major order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().map(move |v| (u, v)))
            .collect()
    }

    /// The digraph with vertex `v` renamed `p(v)`.
    pub fn relabel(&self, p: &Permutation) -> Result<ColoredDigraph> {
        self.check_degree(p)?;
        let mut out_adj = vec![Bitset::new(self.n); self.n];
        let mut colors = vec![0; self.n];
        for u in 0..self.n {
            colors[p.apply(u)] = self.colors[u];
            for v in self.out_adj[u].ones() {
                out_adj[p.apply(u)].insert(p.apply(v));
            }
        }
        Ok(ColoredDigraph {
            n: self.n,
            out_adj,
            colors,
            in_adj: OnceLock::new(),
        })
    }

    /// Whether `p` maps arcs onto arcs and preserves colors.
    pub fn is_automorphism(&self, p: &Permutation) -> Result<bool> {
        self.check_degree(p)?;
        Ok(self.is_automorphism_unchecked(p))
    }

    pub(crate) fn is_automorphism_unchecked(&self, p: &Permutation) -> bool {
        (0..self.n).all(|u| {
            self.colors[p.apply(u)] == self.colors[u]
                && self.out_adj[u].count() == self.out_adj[p.apply(u)].count()
                && self.out_adj[u]
                    .ones()
                    .all(|v| self.has_arc(p.apply(u), p.apply(v)))
        })
    }

    fn check_degree(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.n {
            return Err(Error::DegreeMismatch {
                expected: self.n,
                found: p.degree(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_hex_rows(&self) -> String {
        let mut out = format!("digraph {}\n", self.n);
        for row in &self.out_adj {
            out.push_str(&row.to_hex());
            out.push('\n');
        }
        if self.colors.iter().any(|&c| c != 0) {
            let cs: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("colors {}\n", cs.join(" ")));
        }
        out
    }

    pub fn from_hex_rows(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty digraph text".into()))?;
        let n: usize = header
            .strip_prefix("digraph")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad digraph header {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("missing adjacency row".into()))?;
            rows.push(
                Bitset::from_hex(n, line)
                    .ok_or_else(|| Error::Parse(format!("bad row {line:?}")))?,
            );
        }
        let mut d = ColoredDigraph::from_out_adjacency(rows)?;
        if let Some(line) = lines.next() {
            let colors = line
                .strip_prefix("colors")
                .ok_or_else(|| Error::Parse(format!("unexpected line {line:?}")))?
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            d = d.with_colors(colors)?;
        }
        Ok(d)
    }
}

/// The Cayley digraph `Γ(R, S)`: vertex `g` has out-neighbours `s·g` for `s` in `S`.
pub fn cayley(group: &FiniteGroup, s: &ConnectionSet) -> Result<ColoredDigraph> {
    let r = group.order();
    if s.r() != r {
        return Err(Error::SizeMismatch(format!(
            "connection set of length {} for group of order {r}",
            s.r()
        )));
    }
    let out_adj = (0..r)
        .map(|g| Bitset::from_indices(r, s.elements().map(|x| group.mul(x, g))))
        .collect();
    Ok(ColoredDigraph {
        n: r,
        out_adj,
        colors: vec![0; r],
        in_adj: OnceLock::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_up_to, group_automorphisms, make_group, regular_representation};
    use proptest::prelude::*;

    fn triangle() -> ColoredDigraph {
        let c3 = make_group(&"cyclic:3".parse().unwrap()).unwrap();
        cayley(&c3, &ConnectionSet::from_elements(3, [1]).unwrap()).unwrap()
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(triangle().arcs(), vec![(0, 1), (1, 2), (2, 0)]);
        let d6 = make_group(&"dihedral:6".parse().unwrap()).unwrap();
        assert_eq!(
            cayley(&d6, &ConnectionSet::empty(6)).unwrap().arc_count(),
            0
        );
        let full = cayley(&d6, &ConnectionSet::full(6)).unwrap();
        assert_eq!(full.arc_count(), 36);
        assert!((0..6).all(|v| full.has_loop(v)));
        assert!(cayley(&d6, &ConnectionSet::empty(5)).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let t = triangle();
        assert!(t.is_automorphism(&Permutation::identity(3)).unwrap());
        assert!(t
            .is_automorphism(&Permutation::parse_cycles(3, "(0 1 2)").unwrap())
            .unwrap());
        assert!(!t
            .is_automorphism(&Permutation::parse_cycles(3, "(0 1)").unwrap())
            .unwrap());
        assert!(t.is_automorphism(&Permutation::identity(4)).is_err());
        let colored = t.clone().with_colors(vec![0, 1, 1]).unwrap();
        assert!(!colored
            .is_automorphism(&Permutation::parse_cycles(3, "(0 1 2)").unwrap())
            .unwrap());
    }

    #[test]
    fn connection_set_hex() {
        assert_eq!(ConnectionSet::from_elements(3, [1]).unwrap().to_hex(), "02");
        let s = ConnectionSet::from_elements(12, [0, 9, 11]).unwrap();
        assert_eq!(s.to_hex(), "010a");
        assert_eq!(ConnectionSet::from_hex(12, "010a").unwrap(), s);
        assert_eq!(s.rank(10), 2);
        assert_eq!(s.select(1), Some(9));
        assert!(ConnectionSet::from_elements(3, [3]).is_err());
    }

    #[test]
    fn serialization_round_trips() {
        let d = triangle().with_colors(vec![0, 1, 0]).unwrap();
        assert_eq!(d.to_hex_rows(), "digraph 3\n02\n04\n01\ncolors 0 1 0\n");
        assert_eq!(ColoredDigraph::from_hex_rows(&d.to_hex_rows()).unwrap(), d);
        assert_eq!(ColoredDigraph::from_json(&d.to_json()).unwrap(), d);
        assert_eq!(
            d.to_json(),
            r#"{"n":3,"arcs":[[0,1],[1,2],[2,0]],"colors":[0,1,0]}"#
        );
        assert!(ColoredDigraph::new(3).with_colors(vec![0, 2, 2]).is_err());
    }

    #[test]
    fn transpose_matches_arcs() {
        let d = triangle();
        assert_eq!(d.in_neighbors(0).ones().collect::<Vec<_>>(), vec![2]);
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| assert_eq!(d.in_neighbors(1).ones().collect::<Vec<_>>(), vec![0]));
            }
        });
    }

    fn arb_group_and_set() -> impl Strategy<Value = (usize, u64)> {
        let specs = catalog_up_to(16).len();
        (0..specs, any::<u64>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn regular_action_preserves_cayley_digraphs((gi, mask) in arb_group_and_set()) {
            let group = make_group(&catalog_up_to(16)[gi]).unwrap();
            let s = ConnectionSet::from_mask(group.order(), mask);
            let d = cayley(&group, &s).unwrap();
            prop_assert_eq!(d.arc_count(), group.order() * s.len());
            for g in regular_representation(&group).generators() {
                prop_assert!(d.is_automorphism(g).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn group_automorphisms_are_isomorphisms((gi, mask) in arb_group_and_set()) {
            let group = make_group(&catalog_up_to(16)[gi]).unwrap();
            let s = ConnectionSet::from_mask(group.order(), mask);
            let d = cayley(&group, &s).unwrap();
            for phi in group_automorphisms(&group, 64).unwrap().iter().take(16) {
                prop_assert_eq!(d.relabel(phi).unwrap(), cayley(&group, &s.image(phi)).unwrap());
            }
        }
    }
}
