//! Finite groups given by multiplication tables.
//!
//! Element orderings per family (element 0 is always the identity):
//!
//! * `cyclic:n` — residues `0..n`, product is addition mod `n`.
//! * `dihedral:2m` — rotations `r^i` at index `i`, then reflections `s r^i` at `m + i`.
//! * `dicyclic:4m` — `a^i` at index `i`, then `a^i x` at `2m + i`, with `x^2 = a^m`
//!   and `x^-1 a x = a^-1`.
//! * `abelian:n1,n2,..` — tuples in lexicographic order (first coordinate most significant).
//! * `A*B` (direct product) — pairs `(a, b)` at index `a * |B| + b`.
//! * `file:PATH` — the table as written in the file.
//!
//! The table file format is a header line `order r` followed by `r` lines of
//! `r` whitespace-separated indices; row `g`, column `h` holds `g·h`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

/// Default cap on `r` for automorphism and subgroup-lattice computations.
pub const DEFAULT_LATTICE_CAP: usize = 64;

/// Orders up to this are checked for associativity on every triple.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Abelian(Vec<usize>),
    DirectProduct(Vec<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::Dihedral(_) => "dihedral",
            GroupSpec::Dicyclic(_) => "dicyclic",
            GroupSpec::Abelian(_) => "abelian",
            GroupSpec::DirectProduct(_) => "direct_product",
            GroupSpec::File(_) => "file",
        }
    }

    /// Order implied by the parameters; `None` for file-backed groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) | GroupSpec::Dicyclic(n) => Some(*n),
            GroupSpec::Abelian(f) => Some(f.iter().product()),
            GroupSpec::DirectProduct(parts) => parts.iter().map(|p| p.order()).product(),
            GroupSpec::File(_) => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGroupSpec(msg));
        match self {
            GroupSpec::Cyclic(0) => bad("cyclic order must be at least 1".into()),
            GroupSpec::Dihedral(n) if *n < 2 || n % 2 != 0 => {
                bad(format!("dihedral order {n} must be even and at least 2"))
            }
            GroupSpec::Dicyclic(n) if *n < 4 || n % 4 != 0 => bad(format!(
                "dicyclic order {n} must be a positive multiple of 4"
            )),
            GroupSpec::Abelian(f) => {
                if f.is_empty() || f.contains(&0) {
                    return bad(format!("abelian invariant factors {f:?} must be positive"));
                }
                if f.windows(2).any(|w| w[1] % w[0] != 0) {
                    return bad(format!(
                        "abelian invariant factors {f:?} must form a divisor chain"
                    ));
                }
                Ok(())
            }
            GroupSpec::DirectProduct(parts) => {
                if parts.len() < 2 {
                    return bad("direct product needs at least two factors".into());
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Dicyclic(n) => write!(f, "dicyclic:{n}"),
            GroupSpec::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            GroupSpec::DirectProduct(parts) => {
                let parts: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            GroupSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `cyclic:n`, `dihedral:n`, `dicyclic:n`, `abelian:a,b,..`,
    /// `klein4`, `file:PATH`, and `*`-separated direct products of these.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = if let Some(path) = s.strip_prefix("file:") {
            GroupSpec::File(PathBuf::from(path))
        } else if s.contains('*') {
            GroupSpec::DirectProduct(s.split('*').map(str::parse).collect::<Result<_>>()?)
        } else if s == "klein4" {
            GroupSpec::Abelian(vec![2, 2])
        } else {
            let (kind, arg) = s.split_once(':').ok_or_else(|| {
                Error::InvalidGroupSpec(format!("expected KIND:PARAM, got {s:?}"))
            })?;
            let num = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidGroupSpec(format!("{t:?}: {e}")))
            };
            match kind {
                "cyclic" => GroupSpec::Cyclic(num(arg)?),
                "dihedral" => GroupSpec::Dihedral(num(arg)?),
                "dicyclic" => GroupSpec::Dicyclic(num(arg)?),
                "abelian" => GroupSpec::Abelian(arg.split(',').map(num).collect::<Result<_>>()?),
                _ => {
                    return Err(Error::InvalidGroupSpec(format!(
                        "unknown group kind {kind:?}"
                    )))
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<GroupSpec> for String {
    fn from(g: GroupSpec) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A finite group of order `r` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    id: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates and wraps a multiplication table (`table[g][h] = g·h`).
    pub fn from_table(
        id: impl Into<String>,
        table: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let r = table.len();
        if r == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != r {
                return Err(Error::MalformedTable(format!(
                    "row {g} has {} entries, expected {r}",
                    row.len()
                )));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let names = names.unwrap_or_else(|| (0..r).map(|i| i.to_string()).collect());
        if names.len() != r {
            return Err(Error::MalformedTable(
                "wrong number of element names".into(),
            ));
        }
        let mut group = FiniteGroup {
            id: id.into(),
            order: r,
            table: flat,
            inverses: Vec::new(),
            names,
        };
        group.check_latin_and_identity()?;
        group.inverses = (0..r)
            .map(|g| {
                (0..r)
                    .find(|&h| group.mul(g, h) == 0)
                    .expect("latin square has inverses")
            })
            .collect();
        group.check_associativity()?;
        Ok(group)
    }

    fn check_latin_and_identity(&self) -> Result<()> {
        let r = self.order;
        for g in 0..r {
            let mut row_seen = vec![false; r];
            let mut col_seen = vec![false; r];
            for h in 0..r {
                let (a, b) = (self.table[g * r + h], self.table[h * r + g]);
                if a >= r || b >= r {
                    return Err(Error::MalformedTable(format!(
                        "entry out of range in row/column {g}"
                    )));
                }
                if std::mem::replace(&mut row_seen[a], true)
                    || std::mem::replace(&mut col_seen[b], true)
                {
                    return Err(Error::MalformedTable(format!(
                        "row or column {g} repeats an element"
                    )));
                }
            }
            if self.table[g] != g || self.table[g * r] != g {
                return Err(Error::MalformedTable(
                    "element 0 is not the identity".into(),
                ));
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<()> {
        let r = self.order;
        let check = |a: usize, b: usize, c: usize| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::MalformedTable(format!(
                    "not associative at ({a}, {b}, {c})"
                )))
            } else {
                Ok(())
            }
        };
        if r <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6173_736f_6369_6174);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                check(
                    rng.gen_range(0..r),
                    rng.gen_range(0..r),
                    rng.gen_range(0..r),
                )?;
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|c| c.to_vec()).collect()
    }

    /// `g^-1 · x · g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a membership vector.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !std::mem::replace(&mut member[y], true) {
                    queue.push(y);
                }
            }
        }
        member
    }

    /// Greedy generating set: scan elements in index order, keeping each one not
    /// yet in the subgroup generated so far. Each kept element at least doubles
    /// that subgroup, so at most `floor(log2 r)` elements are kept.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = self.subgroup_generated(&gens);
        for g in 0..self.order {
            if !member[g] {
                gens.push(g);
                member = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// The permutation `x -> x·g` of the element indices.
    pub fn right_multiplication(&self, g: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|x| self.mul(x, g)).collect())
            .expect("latin square row")
    }

    /// Whether `set` (sorted or not) is a normal subgroup.
    pub fn is_normal_subset(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in set {
            if x >= self.order {
                return false;
            }
            member[x] = true;
        }
        if !member[0] {
            return false;
        }
        set.iter().all(|&a| {
            set.iter().all(|&b| member[self.mul(a, b)])
                && (0..self.order).all(|g| member[self.conjugate(a, g)])
        })
    }

    /// Reads the `order r` + rows text format.
    pub fn parse_table(id: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedTable("missing header".into()))?;
        let r: usize = header
            .strip_prefix("order")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| Error::MalformedTable(format!("bad header {header:?}")))?;
        let mut rows = Vec::with_capacity(r);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::MalformedTable(format!("{t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != r {
            return Err(Error::MalformedTable(format!(
                "expected {r} rows, found {}",
                rows.len()
            )));
        }
        FiniteGroup::from_table(id, rows, None)
    }

    pub fn to_table_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for row in self.table.chunks(self.order) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

fn dihedral(order: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    let m = order / 2;
    let split = |x: usize| (x / m, x % m);
    let table = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    let ((a, i), (b, j)) = (split(x), split(y));
                    let rot = if b == 0 { (i + j) % m } else { (m - i + j) % m };
                    ((a + b) % 2) * m + rot
                })
                .collect()
        })
        .collect();
    let names = (0..order)
        .map(|x| {
            let (a, i) = split(x);
            if a == 0 {
                format!("r^{i}")
            } else {
                format!("s r^{i}")
            }
        })
        .collect();
    (table, names)
}

fn dicyclic(order: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    let m2 = order / 2;
    let m = m2 / 2;
    let split = |x: usize| (x / m2, x % m2);
    let table = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    let ((f, i), (g, j)) = (split(x), split(y));
                    let mut exp = if f == 0 { i + j } else { i + m2 - j };
                    let mut xs = f + g;
                    if xs == 2 {
                        exp += m;
                        xs = 0;
                    }
                    xs * m2 + exp % m2
                })
                .collect()
        })
        .collect();
    let names = (0..order)
        .map(|x| {
            let (f, i) = split(x);
            if f == 0 {
                format!("a^{i}")
            } else {
                format!("a^{i} x")
            }
        })
        .collect();
    (table, names)
}

fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> (Vec<Vec<usize>>, Vec<String>) {
    let (ra, rb) = (a.order(), b.order());
    let table = (0..ra * rb)
        .map(|x| {
            (0..ra * rb)
                .map(|y| a.mul(x / rb, y / rb) * rb + b.mul(x % rb, y % rb))
                .collect()
        })
        .collect();
    let names = (0..ra * rb)
        .map(|x| format!("({},{})", a.name(x / rb), b.name(x % rb)))
        .collect();
    (table, names)
}

/// Builds the group described by `spec`.
pub fn make_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    spec.validate()?;
    let id = spec.to_string();
    match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::from_table(id, cyclic(*n), None),
        GroupSpec::Dihedral(n) => {
            let (t, names) = dihedral(*n);
            FiniteGroup::from_table(id, t, Some(names))
        }
        GroupSpec::Dicyclic(n) => {
            let (t, names) = dicyclic(*n);
            FiniteGroup::from_table(id, t, Some(names))
        }
        GroupSpec::Abelian(factors) => {
            let mut g = FiniteGroup::from_table("", cyclic(factors[0]), None)?;
            for &f in &factors[1..] {
                let (t, names) = direct_product(&g, &FiniteGroup::from_table("", cyclic(f), None)?);
                g = FiniteGroup::from_table("", t, Some(names))?;
            }
            g.id = id;
            Ok(g)
        }
        GroupSpec::DirectProduct(parts) => {
            let mut g = make_group(&parts[0])?;
            for p in &parts[1..] {
                let (t, names) = direct_product(&g, &make_group(p)?);
                g = FiniteGroup::from_table("", t, Some(names))?;
            }
            g.id = id;
            Ok(g)
        }
        GroupSpec::File(path) => load_group_file(path, id),
    }
}

fn load_group_file(path: &Path, id: String) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    FiniteGroup::parse_table(id, &text)
}

/// Built-in groups used by the census and the verification suites, ascending by order.
pub fn catalog() -> Vec<GroupSpec> {
    use GroupSpec::*;
    let mut out: Vec<GroupSpec> = (1..=16).map(Cyclic).collect();
    out.extend([
        Abelian(vec![2, 2]),
        Dihedral(6),
        Abelian(vec![2, 4]),
        Abelian(vec![2, 2, 2]),
        Dihedral(8),
        Dicyclic(8),
        Abelian(vec![3, 3]),
        Dihedral(10),
        Abelian(vec![2, 6]),
        Dihedral(12),
        Dicyclic(12),
        Dihedral(14),
        Abelian(vec![2, 8]),
        Abelian(vec![4, 4]),
        Abelian(vec![2, 2, 4]),
        Abelian(vec![2, 2, 2, 2]),
        Dihedral(16),
        Dicyclic(16),
        DirectProduct(vec![Dihedral(8), Cyclic(2)]),
    ]);
    out.sort_by_key(|g| g.order().unwrap_or(usize::MAX));
    out
}

/// Catalog groups of order at most `max_order`.
pub fn catalog_up_to(max_order: usize) -> Vec<GroupSpec> {
    catalog()
        .into_iter()
        .filter(|g| g.order().is_some_and(|r| r <= max_order))
        .collect()
}

/// Right regular representation: element `g` maps vertex `x` to `x·g`.
pub fn regular_representation(group: &FiniteGroup) -> PermGroup {
    let gens = group
        .generating_set()
        .into_iter()
        .map(|g| group.right_multiplication(g))
        .collect();
    PermGroup::from_generators(group.order(), gens).expect("degree matches")
}

/// All automorphisms of `group` as permutations of element indices, sorted.
///
/// Images of the greedy generating set are searched (each image must have the
/// same element order and lie outside the subgroup generated by earlier images);
/// each assignment is extended along a spanning tree of the Cayley graph and
/// kept when it is a bijective homomorphism.
pub fn group_automorphisms(group: &FiniteGroup, cap: usize) -> Result<Vec<Permutation>> {
    let r = group.order();
    if r > cap {
        return Err(Error::CapExceeded {
            what: "group order",
            value: r as u128,
            cap: cap as u128,
        });
    }
    let gens = group.generating_set();
    // Spanning tree: each non-identity element reached as parent·gens[k].
    let mut tree: Vec<(usize, usize, usize)> = Vec::with_capacity(r);
    let mut reached = vec![false; r];
    reached[0] = true;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (k, &g) in gens.iter().enumerate() {
            let y = group.mul(x, g);
            if !std::mem::replace(&mut reached[y], true) {
                tree.push((y, x, k));
                queue.push_back(y);
            }
        }
    }
    let orders: Vec<usize> = (0..r).map(|g| group.element_order(g)).collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    search_gen_images(group, &gens, &orders, &tree, &mut images, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn search_gen_images(
    group: &FiniteGroup,
    gens: &[usize],
    orders: &[usize],
    tree: &[(usize, usize, usize)],
    images: &mut Vec<usize>,
    out: &mut Vec<Permutation>,
) {
    let r = group.order();
    if images.len() == gens.len() {
        let mut phi = vec![usize::MAX; r];
        phi[0] = 0;
        for &(y, x, k) in tree {
            phi[y] = group.mul(phi[x], images[k]);
        }
        let homomorphism = (0..r).all(|x| {
            gens.iter()
                .zip(images.iter())
                .all(|(&g, &img)| phi[group.mul(x, g)] == group.mul(phi[x], img))
        });
        if homomorphism {
            if let Ok(p) = Permutation::from_images(phi) {
                out.push(p);
            }
        }
        return;
    }
    let k = images.len();
    let span = group.subgroup_generated(images);
    for candidate in 0..r {
        if orders[candidate] == orders[gens[k]] && !span[candidate] {
            images.push(candidate);
            search_gen_images(group, gens, orders, tree, images, out);
            images.pop();
        }
    }
}

/// All normal subgroups as sorted element lists, ordered by size then elements.
///
/// Every normal subgroup is the join of the normal closures of its elements,
/// so the lattice is the join-closure of the single-element normal closures.
pub fn normal_subgroups(group: &FiniteGroup, cap: usize) -> Result<Vec<Vec<usize>>> {
    let r = group.order();
    if r > cap.min(64) {
        return Err(Error::CapExceeded {
            what: "group order",
            value: r as u128,
            cap: cap.min(64) as u128,
        });
    }
    let to_mask = |member: &[bool]| -> u64 {
        member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    };
    let from_mask = |mask: u64| -> Vec<usize> { (0..r).filter(|&i| mask >> i & 1 == 1).collect() };
    let mut lattice: Vec<u64> = vec![1];
    for x in 0..r {
        let class: Vec<usize> = (0..r).map(|g| group.conjugate(x, g)).collect();
        let m = to_mask(&group.subgroup_generated(&class));
        if !lattice.contains(&m) {
            lattice.push(m);
        }
    }
    let mut i = 0;
    while i < lattice.len() {
        for j in 0..i {
            let joined = lattice[i] | lattice[j];
            let m = to_mask(&group.subgroup_generated(&from_mask(joined)));
            if !lattice.contains(&m) {
                lattice.push(m);
            }
        }
        i += 1;
    }
    let mut out: Vec<Vec<usize>> = lattice.into_iter().map(from_mask).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Quotient by a normal subgroup.
///
/// Cosets are indexed in order of their smallest element, so the coset of the
/// identity is 0. Returns the quotient group and the projection `element -> coset`.
pub fn quotient_group(group: &FiniteGroup, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
    if !group.is_normal_subset(normal) {
        return Err(Error::NotNormal(format!(
            "{normal:?} is not a normal subgroup of {}",
            group.id()
        )));
    }
    let r = group.order();
    let mut projection = vec![usize::MAX; r];
    let mut reps = Vec::new();
    for x in 0..r {
        if projection[x] == usize::MAX {
            for &n in normal {
                projection[group.mul(x, n)] = reps.len();
            }
            reps.push(x);
        }
    }
    let q = reps.len();
    let table: Vec<Vec<usize>> = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| projection[group.mul(reps[a], reps[b])])
                .collect()
        })
        .collect();
    let names = reps
        .iter()
        .map(|&x| format!("{}N", group.name(x)))
        .collect();
    let mut sorted = normal.to_vec();
    sorted.sort_unstable();
    let id = format!("{}/{:?}", group.id(), sorted);
    let quotient = FiniteGroup::from_table(id, table, Some(names))?;
    for a in 0..r {
        for b in 0..r {
            if projection[group.mul(a, b)] != quotient.mul(projection[a], projection[b]) {
                return Err(Error::NotNormal("projection is not a homomorphism".into()));
            }
        }
    }
    Ok((quotient, projection))
}
