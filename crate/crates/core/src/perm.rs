//! Permutations and permutation groups.
//!
//! Points are `0..n`. Permutations act on the right: `p.apply(x)` is `x^p`, and
//! `p.compose(q)` is the permutation "first `p`, then `q`" (`x^(pq) = (x^p)^q`).
//!
//! [`PermGroup`] stores a base and strong generating set built by a deterministic
//! Schreier–Sims run. Base points are taken from an optional caller-supplied
//! prefix, then as the smallest point moved by the element that needs a new
//! level, so two runs on the same input always produce the same structure.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::BlockPartition;

/// Element-count cap used by operations that enumerate a group.
pub const DEFAULT_ELEMENT_CAP: u128 = 1_000_000;

/// Groups at most this large are fingerprinted by their sorted element list.
const ELEMENT_FINGERPRINT_LIMIT: u128 = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { images })
    }

    /// Product of the given cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree || std::mem::replace(&mut touched[x], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "bad cycle {cycle:?} on {degree} points"
                    )));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(0 1 2)(3 4)"`; `"()"` is the identity.
    pub fn parse_cycles(degree: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// First `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(self).compose(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x)
            .count()
    }

    /// All cycles, fixed points included, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, num_integer::lcm)
    }

    /// Restriction to an invariant point set, re-indexed by ascending point order.
    pub fn restrict(&self, points: &[usize]) -> Option<Permutation> {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        let index: HashMap<usize, usize> =
            sorted.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let images = sorted
            .iter()
            .map(|&p| index.get(&self.images[p]).copied())
            .collect::<Option<Vec<_>>>()?;
        Some(Permutation { images })
    }

    /// Whether the point set is mapped onto itself.
    pub fn fixes_set(&self, set: &[usize]) -> bool {
        let members: HashSet<usize> = set.iter().copied().collect();
        set.iter().all(|&x| members.contains(&self.images[x]))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[x]` maps the base point to `x`; paired with its inverse.
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(degree: usize, base_point: usize, gens: Vec<Permutation>) -> Self {
        let mut level = Level {
            base_point,
            gens,
            orbit: Vec::new(),
            transversal: Vec::new(),
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let mut transversal: Vec<Option<(Permutation, Permutation)>> = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[self.base_point] = Some((id.clone(), id));
        let mut orbit = vec![self.base_point];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for s in &self.gens {
                let y = s.apply(x);
                if transversal[y].is_none() {
                    let u = transversal[x].as_ref().unwrap().0.compose(s);
                    let inv = u.inverse();
                    transversal[y] = Some((u, inv));
                    orbit.push(y);
                }
            }
        }
        self.orbit = orbit;
        self.transversal = transversal;
    }
}

/// A permutation group with a base and strong generating set.
///
/// Immutable once built; share freely across threads.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..degree).collect();
            if degree > 2 {
                gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
            }
        }
        PermGroup::from_generators(degree, gens).unwrap()
    }

    /// Deterministic Schreier–Sims construction.
    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        PermGroup::with_base_prefix(degree, gens, &[])
    }

    /// Like [`PermGroup::from_generators`], with the base starting with `prefix`.
    /// Level `i` then holds the pointwise stabilizer of `prefix[..i]`.
    pub fn with_base_prefix(
        degree: usize,
        gens: Vec<Permutation>,
        prefix: &[usize],
    ) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        if let Some(&p) = prefix.iter().find(|&&p| p >= degree) {
            return Err(Error::InvalidParams(format!(
                "base point {p} out of range {degree}"
            )));
        }
        let mut generators: Vec<Permutation> = Vec::new();
        for g in gens {
            if !g.is_identity() && !generators.contains(&g) {
                generators.push(g);
            }
        }
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &generators {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().unwrap());
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let gens_i: Vec<Permutation> = generators
                .iter()
                .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                .cloned()
                .collect();
            levels.push(Level::new(degree, b, gens_i));
        }
        let mut group = PermGroup {
            degree,
            generators,
            levels,
        };
        group.complete();
        Ok(group)
    }

    /// Builds the group generated by `elements`, keeping only those not already
    /// contained in the group built so far.
    pub fn from_elements_incremental<'a>(
        degree: usize,
        elements: impl IntoIterator<Item = &'a Permutation>,
    ) -> Result<Self> {
        let mut group = PermGroup::trivial(degree);
        for e in elements {
            if e.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: e.degree(),
                });
            }
            if !group.contains(e) {
                let mut gens = group.generators.clone();
                gens.push(e.clone());
                group = PermGroup::from_generators(degree, gens)?;
            }
        }
        Ok(group)
    }

    fn complete(&mut self) {
        let degree = self.degree;
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            match self.find_failing_schreier_generator(iu) {
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let b = residue.first_moved_point().expect("non-trivial residue");
                        self.levels.push(Level::new(degree, b, Vec::new()));
                    }
                    for l in iu + 1..=j {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild_orbit(degree);
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn find_failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &gamma in &level.orbit {
            let u = &level.transversal[gamma].as_ref().unwrap().0;
            for s in &level.gens {
                let img = s.apply(gamma);
                let u_img_inv = &level.transversal[img].as_ref().unwrap().1;
                let h = u.compose(s).compose(u_img_inv);
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = self.sift(h, i + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
            }
        }
        None
    }

    /// Strips `h` through levels `from..`; returns the residue and the level
    /// where stripping stopped (`levels.len()` when it went all the way down).
    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = h.apply(level.base_point);
            match &level.transversal[beta] {
                None => return (h, l),
                Some((_, u_inv)) => h = h.compose(u_inv),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn basic_orbits(&self) -> Vec<Vec<usize>> {
        self.levels.iter().map(|l| l.orbit.clone()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.sift(p.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Visits every element exactly once, as products of transversal elements.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        fn walk(levels: &[Level], acc: &Permutation, f: &mut dyn FnMut(&Permutation)) {
            match levels.split_last() {
                None => f(acc),
                Some((last, rest)) => {
                    for &x in &last.orbit {
                        let u = &last.transversal[x].as_ref().unwrap().0;
                        walk(rest, &acc.compose(u), f);
                    }
                }
            }
        }
        walk(&self.levels, &Permutation::identity(self.degree), &mut f);
    }

    /// All elements, sorted; fails when the order exceeds `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded {
                what: "group order",
                value: order,
                cap,
            });
        }
        let mut out = Vec::with_capacity(order as usize);
        self.for_each_element(|p| out.push(p.clone()));
        out.sort_unstable();
        Ok(out)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            k += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if !std::mem::replace(&mut seen[y], true) {
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// For each point in the orbit of `point`, an element mapping `point` to it.
    pub fn orbit_transversal(&self, point: usize) -> Vec<Option<Permutation>> {
        let mut trans: Vec<Option<Permutation>> = vec![None; self.degree];
        trans[point] = Some(Permutation::identity(self.degree));
        let mut queue = vec![point];
        let mut k = 0;
        while k < queue.len() {
            let x = queue[k];
            k += 1;
            for g in &self.generators {
                let y = g.apply(x);
                if trans[y].is_none() {
                    trans[y] = Some(trans[x].as_ref().expect("visited").compose(g));
                    queue.push(y);
                }
            }
        }
        trans
    }

    /// Orbits on all points, cells ordered by minimum element.
    pub fn orbits(&self) -> BlockPartition {
        let mut label = vec![usize::MAX; self.degree];
        let mut cells = Vec::new();
        for p in 0..self.degree {
            if label[p] == usize::MAX {
                let orbit = self.orbit(p);
                for &x in &orbit {
                    label[x] = cells.len();
                }
                cells.push(orbit);
            }
        }
        BlockPartition::new(self.degree, cells).expect("orbits partition the points")
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Transitive with trivial point stabilizers.
    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order() == self.degree as u128
    }

    pub fn point_stabilizer(&self, p: usize) -> PermGroup {
        self.pointwise_stabilizer(&[p])
    }

    /// Pointwise stabilizer of `points`, via a base change.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        if points.is_empty() {
            return self.clone();
        }
        let rebased = PermGroup::with_base_prefix(self.degree, self.strong_generators(), points)
            .expect("points are in range");
        let gens = rebased
            .levels
            .get(points.len())
            .map(|l| l.gens.clone())
            .unwrap_or_default();
        PermGroup::from_generators(self.degree, gens).expect("same degree")
    }

    /// Smallest group containing `self` and `extra`.
    pub fn closure(&self, extra: &[Permutation]) -> Result<PermGroup> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        PermGroup::from_generators(self.degree, gens)
    }

    /// Subgroup of elements mapping every point of `set` into `set`, by element filtering.
    pub fn setwise_stabilizer_by_filter(&self, set: &[usize], cap: u128) -> Result<PermGroup> {
        let elems = self.elements(cap)?;
        let keep: Vec<&Permutation> = elems.iter().filter(|g| g.fixes_set(set)).collect();
        PermGroup::from_elements_incremental(self.degree, keep)
    }

    fn orbit_signature(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.orbits().cells().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        sizes
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.order() == other.order() && other.is_subgroup_of(self)
    }
}

impl Eq for PermGroup {}

/// Group identity key used for deduplication.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Fingerprint {
    Elements(Vec<Permutation>),
    Coarse(u128, Vec<usize>),
}

fn fingerprint(g: &PermGroup) -> Fingerprint {
    if g.order() <= ELEMENT_FINGERPRINT_LIMIT {
        Fingerprint::Elements(g.elements(ELEMENT_FINGERPRINT_LIMIT).unwrap())
    } else {
        Fingerprint::Coarse(g.order(), g.orbit_signature())
    }
}

fn require_subgroup(h: &PermGroup, g: &PermGroup) -> Result<()> {
    if h.degree != g.degree {
        return Err(Error::DegreeMismatch {
            expected: g.degree,
            found: h.degree,
        });
    }
    if let Some(bad) = h.generators.iter().find(|x| !g.contains(x)) {
        return Err(Error::NotSubgroup(format!(
            "{bad} is not in the ambient group"
        )));
    }
    Ok(())
}

/// Whether `h` is normal in `g`: conjugates of `h`'s generators by `g`'s generators stay in `h`.
pub fn is_normal(g: &PermGroup, h: &PermGroup) -> Result<bool> {
    require_subgroup(h, g)?;
    Ok(g.generators
        .iter()
        .all(|x| h.generators.iter().all(|y| h.contains(&y.conjugate_by(x)))))
}

/// Core of `r` in `g`: the intersection of all `g`-conjugates of `r`.
///
/// Computed by repeatedly discarding elements of `r` whose conjugate by some
/// generator of `g` leaves the surviving set.
pub fn core_in(g: &PermGroup, r: &PermGroup, cap: u128) -> Result<PermGroup> {
    require_subgroup(r, g)?;
    let mut current: HashSet<Permutation> = r.elements(cap)?.into_iter().collect();
    let gens: Vec<(Permutation, Permutation)> = g
        .generators
        .iter()
        .map(|s| (s.clone(), s.inverse()))
        .collect();
    loop {
        let next: HashSet<Permutation> = current
            .iter()
            .filter(|x| {
                gens.iter()
                    .all(|(s, s_inv)| current.contains(&s_inv.compose(x).compose(s)))
            })
            .cloned()
            .collect();
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    let mut elems: Vec<Permutation> = current.into_iter().collect();
    elems.sort_unstable();
    PermGroup::from_elements_incremental(r.degree, &elems)
}

/// One representative per right coset `H x` of `h` in `g`, excluding `H` itself,
/// in ascending element order.
fn right_coset_representatives(
    g: &PermGroup,
    h: &PermGroup,
    cap: u128,
) -> Result<Vec<Permutation>> {
    let h_elems = h.elements(cap)?;
    let mut covered: HashSet<Permutation> = h_elems.iter().cloned().collect();
    let mut reps = Vec::new();
    for x in g.elements(cap)? {
        if covered.contains(&x) {
            continue;
        }
        for y in &h_elems {
            covered.insert(y.compose(&x));
        }
        reps.push(x);
    }
    Ok(reps)
}

/// Every `G` with `r < G <= a` in which `r` is a maximal subgroup, each once.
///
/// Candidates are `<r, x>` for `x` ranging over right-coset representatives of
/// `r` in `a`; a candidate is kept when every `<r, y>` with `y` in `G \ r`
/// equals `G`.
pub fn maximal_overgroups(a: &PermGroup, r: &PermGroup, cap: u128) -> Result<Vec<PermGroup>> {
    require_subgroup(r, a)?;
    if a.order() > cap {
        return Err(Error::CapExceeded {
            what: "ambient group order",
            value: a.order(),
            cap,
        });
    }
    let mut seen_exact: HashSet<Fingerprint> = HashSet::new();
    let mut seen_coarse: HashMap<Fingerprint, Vec<PermGroup>> = HashMap::new();
    let mut out = Vec::new();
    for x in right_coset_representatives(a, r, cap)? {
        let candidate = r.closure(std::slice::from_ref(&x))?;
        let fp = fingerprint(&candidate);
        match &fp {
            Fingerprint::Elements(_) => {
                if !seen_exact.insert(fp) {
                    continue;
                }
            }
            Fingerprint::Coarse(..) => {
                let bucket = seen_coarse.entry(fp).or_default();
                if bucket.contains(&candidate) {
                    continue;
                }
                bucket.push(candidate.clone());
            }
        }
        let order = candidate.order();
        let mut maximal = true;
        for y in right_coset_representatives(&candidate, r, cap)? {
            if r.closure(std::slice::from_ref(&y))?.order() != order {
                maximal = false;
                break;
            }
        }
        if maximal {
            out.push(candidate);
        }
    }
    Ok(out)
}
