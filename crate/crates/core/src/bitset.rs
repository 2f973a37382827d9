//! Fixed-length bitset over `u64` words, sized for vertex sets of small digraphs.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitset {
    len: usize,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitset::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bitset::new(len);
        for i in indices {
            b.insert(i);
        }
        b
    }

    /// Low `len` bits of `mask`; `len` must be at most 64.
    pub fn from_u64(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut b = Bitset::new(len);
        if len > 0 {
            let keep = if len == 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            b.words[0] = mask & keep;
        }
        b
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i >> 6] &= !(1 << (i & 63));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn intersection_count(&self, other: &Bitset) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// Set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Number of set bits strictly below `i`.
    pub fn rank(&self, i: usize) -> usize {
        let i = i.min(self.len);
        let (full, rem) = (i >> 6, i & 63);
        let mut c: usize = self.words[..full]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum();
        if rem > 0 {
            c += (self.words[full] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        c
    }

    /// Index of the `k`-th set bit (0-based).
    pub fn select(&self, k: usize) -> Option<usize> {
        self.ones().nth(k)
    }

    /// Little-endian bytes: bit `i` is bit `i % 8` of byte `i / 8`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8).max(1);
        let mut out = vec![0u8; nbytes];
        for i in self.ones() {
            out[i / 8] |= 1 << (i % 8);
        }
        out
    }

    pub fn from_le_bytes(len: usize, bytes: &[u8]) -> Option<Self> {
        let mut b = Bitset::new(len);
        for (bi, &byte) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if byte >> bit & 1 == 1 {
                    let i = bi * 8 + bit;
                    if i >= len {
                        return None;
                    }
                    b.insert(i);
                }
            }
        }
        Some(b)
    }

    /// Lowercase hex of [`Bitset::to_le_bytes`].
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_le_bytes())
    }

    pub fn from_hex(len: usize, s: &str) -> Option<Self> {
        let bytes = hex::decode(s.trim()).ok()?;
        Bitset::from_le_bytes(len, &bytes)
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}
