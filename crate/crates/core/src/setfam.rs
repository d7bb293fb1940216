//! Subset families over [n]: upset closure, minimal elements, and the size
//! of the partition family a generator family induces via fixed-point sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::bell::BellTable;
use crate::{BigCount, Error, Result};

/// Largest ground set for which an upset is materialized explicitly.
pub const MAX_UPSET_GROUND_SET: u32 = 24;

/// A subset of `[n]` as a bitmask (bit `e-1` for element `e`), `n <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SubsetMask {
    n: u32,
    bits: u64,
}

impl SubsetMask {
    pub fn from_bits(n: u32, bits: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::arg(format!("ground set size {n} exceeds 64")));
        }
        let full = full_mask(n);
        if bits & !full != 0 {
            return Err(Error::arg("subset has elements outside [n]"));
        }
        Ok(SubsetMask { n, bits })
    }

    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::arg(format!("element {e} outside [{n}]")));
            }
            bits |= 1 << (e - 1);
        }
        SubsetMask::from_bits(n, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn cardinality(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, e: u32) -> bool {
        e >= 1 && e <= self.n && self.bits & (1 << (e - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let bits = self.bits;
        (1..=self.n).filter(move |e| bits & (1 << (e - 1)) != 0)
    }
}

pub(crate) fn full_mask(n: u32) -> u64 {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for SubsetMask {
    /// Comma-separated elements, e.g. `1,2,3`; the empty set prints as
    /// nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A deduplicated family of subsets of a common `[n]`, with a flag recording
/// whether it is known to be superset-closed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetFamily {
    n: u32,
    sets: BTreeSet<u64>,
    is_upset: bool,
}

impl SetFamily {
    pub fn new(n: u32) -> Result<Self> {
        if n > 64 {
            return Err(Error::arg(format!("ground set size {n} exceeds 64")));
        }
        Ok(SetFamily {
            n,
            sets: BTreeSet::new(),
            is_upset: false,
        })
    }

    pub fn from_masks<I: IntoIterator<Item = SubsetMask>>(n: u32, iter: I) -> Result<Self> {
        let mut fam = SetFamily::new(n)?;
        for s in iter {
            fam.insert(s)?;
        }
        Ok(fam)
    }

    pub fn insert(&mut self, s: SubsetMask) -> Result<bool> {
        if s.n() != self.n {
            return Err(Error::arg("ground set mismatch"));
        }
        self.is_upset = false;
        Ok(self.sets.insert(s.bits()))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_upset_flagged(&self) -> bool {
        self.is_upset
    }

    pub fn contains_bits(&self, bits: u64) -> bool {
        self.sets.contains(&bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.sets.iter().map(|&bits| SubsetMask {
            n: self.n,
            bits,
        })
    }

    /// Upset membership by predicate: some member is a subset of `bits`.
    /// Never materializes the closure.
    pub fn generates(&self, bits: u64) -> bool {
        self.sets.iter().any(|&g| g & !bits == 0)
    }

    /// Count of members per cardinality `0..=n`.
    pub fn cardinality_profile(&self) -> Vec<usize> {
        let mut profile = vec![0usize; self.n as usize + 1];
        for &bits in &self.sets {
            profile[bits.count_ones() as usize] += 1;
        }
        profile
    }
}

impl fmt::Display for SetFamily {
    /// One comma-separated element list per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut masks = Vec::new();
        let mut n = 0u32;
        for line in s.lines() {
            let line = line.trim();
            let mut elements = Vec::new();
            if !line.is_empty() {
                for tok in line.split(',') {
                    let e: u32 = tok
                        .trim()
                        .parse()
                        .map_err(|_| Error::arg(format!("bad element `{tok}`")))?;
                    elements.push(e);
                    n = n.max(e);
                }
            }
            masks.push(elements);
        }
        let mut fam = SetFamily::new(n)?;
        for elements in masks {
            fam.insert(SubsetMask::from_elements(n, &elements)?)?;
        }
        Ok(fam)
    }
}

/// Materializes `{ S : some member of family is a subset of S }`,
/// `n <= 24`.
pub fn upset_closure(family: &SetFamily) -> Result<SetFamily> {
    let n = family.n();
    if n > MAX_UPSET_GROUND_SET {
        return Err(Error::Capacity {
            what: "upset materialization",
            requested: n as usize,
            cap: MAX_UPSET_GROUND_SET as usize,
        });
    }
    let mut out = SetFamily::new(n)?;
    for bits in 0..=full_mask(n) {
        if family.generates(bits) {
            out.sets.insert(bits);
        }
    }
    out.is_upset = true;
    Ok(out)
}

/// Members that contain no other member strictly.
pub fn minimal_elements(family: &SetFamily) -> SetFamily {
    let mut out = SetFamily::new(family.n()).expect("family n already validated");
    for a in &family.sets {
        let minimal = family
            .sets
            .iter()
            .all(|b| b == a || b & !a != 0);
        if minimal {
            out.sets.insert(*a);
        }
    }
    out
}

/// Number of partitions of `[n]` whose fixed-point set lies in the upset of
/// `generators`: `sum over upset members S of B~(n - |S|)`.
///
/// Organized by cardinality classes instead of materializing partitions:
/// membership of S only depends on its trace on the union support of the
/// generators, so subsets split as (trace T) x (free part K outside the
/// support), contributing `C(n-m, |K|) B~(n-|T|-|K|)` each. The sweep over
/// the `2^m` traces requires support size `m <= 24`.
pub fn generated_size(generators: &SetFamily, table: &BellTable) -> Result<BigCount> {
    let n = generators.n();
    table.bell(n as usize)?;
    if generators.is_empty() {
        return Ok(BigCount::zero());
    }
    let support = generators
        .sets
        .iter()
        .fold(0u64, |acc, &g| acc | g);
    let m = support.count_ones();
    if m > MAX_UPSET_GROUND_SET {
        return Err(Error::Capacity {
            what: "generator support sweep",
            requested: m as usize,
            cap: MAX_UPSET_GROUND_SET as usize,
        });
    }

    // Positions of support bits, for packing trace indices.
    let positions: Vec<u32> = (0..64).filter(|&b| support & (1 << b) != 0).collect();
    let outside = n - m;
    let mut total = BigCount::zero();
    for trace in 0u64..(1 << m) {
        let mut bits = 0u64;
        for (idx, &pos) in positions.iter().enumerate() {
            if trace & (1 << idx) != 0 {
                bits |= 1 << pos;
            }
        }
        if !generators.generates(bits) {
            continue;
        }
        let s = bits.count_ones();
        for k in 0..=outside {
            total += table.choose(outside as usize, k as usize)
                * table.reduced_signed(i64::from(n) - i64::from(s) - i64::from(k));
        }
    }
    Ok(total)
}

/// True iff every pair of members intersects in at least `t` elements.
pub fn is_t_intersecting_setfam(family: &SetFamily, t: u32) -> bool {
    let sets: Vec<u64> = family.sets.iter().copied().collect();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if (a & b).count_ones() < t {
                return false;
            }
        }
    }
    true
}
