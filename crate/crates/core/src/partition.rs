//! Set partitions of [n] in canonical form, restricted-growth enumeration,
//! and the fixing / shifting compression operators on partition families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::setfam::SubsetMask;
use crate::{Error, Result};

pub const MAX_GROUND_SET: u32 = 64;

/// Largest `n` for which full enumeration of all B(n) partitions is
/// supported (B(12) is about 4.2 million, the practical desk-scale bound).
pub const MAX_ENUMERATION: u32 = 12;

/// A set partition of `[n] = {1, ..., n}` into disjoint nonempty blocks.
///
/// Each block is a bitmask over `[n]` (bit `e-1` for element `e`); blocks
/// are stored sorted by their minimum element, which makes the
/// representation canonical: equal partitions compare equal structurally.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    n: u32,
    blocks: Vec<u64>,
}

impl SetPartition {
    /// Builds and canonicalizes a partition from explicit blocks, checking
    /// that they are nonempty, disjoint, and cover `[n]` exactly.
    pub fn from_blocks(n: u32, blocks: &[Vec<u32>]) -> Result<Self> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(Error::arg(format!(
                "ground set size must be in 1..={MAX_GROUND_SET}, got {n}"
            )));
        }
        let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
        let mut masks = Vec::with_capacity(blocks.len());
        let mut seen = 0u64;
        for block in blocks {
            if block.is_empty() {
                return Err(Error::arg("empty block"));
            }
            let mut mask = 0u64;
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::arg(format!("element {e} outside [{n}]")));
                }
                mask |= 1 << (e - 1);
            }
            if mask & seen != 0 {
                return Err(Error::arg("blocks are not disjoint"));
            }
            seen |= mask;
            masks.push(mask);
        }
        if seen != full {
            return Err(Error::arg("blocks do not cover the ground set"));
        }
        masks.sort_unstable_by_key(|m| m.trailing_zeros());
        Ok(SetPartition { n, blocks: masks })
    }

    pub(crate) fn from_block_masks(n: u32, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable_by_key(|m| m.trailing_zeros());
        debug_assert_eq!(
            masks.iter().fold(0u64, |acc, m| acc | m),
            if n == 64 { !0 } else { (1u64 << n) - 1 }
        );
        SetPartition { n, blocks: masks }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks as bitmasks, sorted by minimum element.
    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    /// The block containing element `e`.
    pub fn block_of(&self, e: u32) -> u64 {
        debug_assert!(e >= 1 && e <= self.n);
        let bit = 1u64 << (e - 1);
        *self
            .blocks
            .iter()
            .find(|&&m| m & bit != 0)
            .expect("every element lies in a block")
    }

    /// The set of fixed points: elements forming singleton blocks.
    pub fn fixed_points(&self) -> SubsetMask {
        let bits = self
            .blocks
            .iter()
            .filter(|m| m.count_ones() == 1)
            .fold(0u64, |acc, m| acc | m);
        SubsetMask::from_bits(self.n, bits).expect("fixed points lie in [n]")
    }

    pub fn blocks_as_sets(&self) -> Vec<Vec<u32>> {
        self.blocks
            .iter()
            .map(|&m| (1..=self.n).filter(|&e| m & (1 << (e - 1)) != 0).collect())
            .collect()
    }
}

impl fmt::Display for SetPartition {
    /// Canonical text form: blocks joined by `|`, e.g. `{1,2}|{3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bi, block) in self.blocks_as_sets().iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            f.write_str("{")?;
            for (ei, e) in block.iter().enumerate() {
                if ei > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition({self})")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    /// Parses the canonical text form; the ground set is inferred as the
    /// largest element, and the blocks must cover it exactly.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        let mut max = 0u32;
        for part in s.split('|') {
            let part = part.trim();
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| Error::arg(format!("block `{part}` is not brace-delimited")))?;
            let mut block = Vec::new();
            for tok in inner.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(Error::arg("empty element"));
                }
                let e: u32 = tok
                    .parse()
                    .map_err(|_| Error::arg(format!("bad element `{tok}`")))?;
                max = max.max(e);
                block.push(e);
            }
            blocks.push(block);
        }
        SetPartition::from_blocks(max, &blocks)
    }
}

/// A deduplicated family of partitions over a common ground set. Ordered
/// storage keeps iteration deterministic, which the serialization and the
/// witness tie-breaking rely on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionFamily {
    n: u32,
    members: BTreeSet<SetPartition>,
}

impl PartitionFamily {
    pub fn new(n: u32) -> Self {
        PartitionFamily {
            n,
            members: BTreeSet::new(),
        }
    }

    pub fn from_members<I: IntoIterator<Item = SetPartition>>(n: u32, iter: I) -> Result<Self> {
        let mut fam = PartitionFamily::new(n);
        for p in iter {
            fam.insert(p)?;
        }
        Ok(fam)
    }

    pub fn insert(&mut self, p: SetPartition) -> Result<bool> {
        if p.n() != self.n {
            return Err(Error::arg(format!(
                "ground set mismatch: family over [{}], member over [{}]",
                self.n,
                p.n()
            )));
        }
        Ok(self.members.insert(p))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &SetPartition) -> bool {
        self.members.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SetPartition> {
        self.members.iter()
    }
}

impl fmt::Display for PartitionFamily {
    /// Newline-separated canonical partitions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Streaming enumeration of all partitions of `[n]` in lexicographic
/// restricted-growth order, `1 <= n <= 12`.
pub fn enumerate_partitions(n: u32) -> Result<PartitionIter> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::arg(format!(
            "enumeration supports 1..={MAX_ENUMERATION}, got {n}"
        )));
    }
    Ok(PartitionIter {
        n,
        rgs: vec![0; n as usize],
        prefix_max: vec![0; n as usize],
        done: false,
    })
}

/// Iterator over restricted growth strings: `a[0] = 0` and
/// `a[k] <= max(a[0..k]) + 1`, mapped to partitions by block index.
pub struct PartitionIter {
    n: u32,
    rgs: Vec<u8>,
    prefix_max: Vec<u8>,
    done: bool,
}

impl PartitionIter {
    fn current(&self) -> SetPartition {
        let nblocks = self.prefix_max[self.n as usize - 1] as usize + 1;
        let mut masks = vec![0u64; nblocks];
        for (pos, &c) in self.rgs.iter().enumerate() {
            masks[c as usize] |= 1 << pos;
        }
        // Block indices already follow minimum elements in an RGS.
        SetPartition {
            n: self.n,
            blocks: masks,
        }
    }

    fn advance(&mut self) {
        let n = self.n as usize;
        // Rightmost position (>= 1) that can still grow.
        for j in (1..n).rev() {
            if self.rgs[j] <= self.prefix_max[j - 1] {
                self.rgs[j] += 1;
                self.prefix_max[j] = self.prefix_max[j - 1].max(self.rgs[j]);
                for k in j + 1..n {
                    self.rgs[k] = 0;
                    self.prefix_max[k] = self.prefix_max[k - 1];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Number of blocks two partitions share (exact block equality).
pub fn common_parts(p: &SetPartition, q: &SetPartition) -> Result<usize> {
    if p.n() != q.n() {
        return Err(Error::arg("ground set mismatch"));
    }
    // A shared block has the same minimum element on both sides, so it
    // suffices to look up q's block at each p-block's minimum.
    Ok(p.blocks
        .iter()
        .filter(|&&m| q.block_of(m.trailing_zeros() + 1) == m)
        .count())
}

/// True iff every pair of members shares at least `t` blocks (vacuously
/// true for families with fewer than two members).
pub fn is_t_intersecting(family: &PartitionFamily, t: u32) -> bool {
    let members: Vec<&SetPartition> = family.iter().collect();
    for (i, p) in members.iter().enumerate() {
        for q in &members[i + 1..] {
            if common_parts(p, q).expect("family members share n") < t as usize {
                return false;
            }
        }
    }
    true
}

/// Blocks common to all members of a nonempty family.
pub fn common_blocks_of_family(family: &PartitionFamily) -> Result<Vec<u64>> {
    let mut iter = family.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::arg("empty family has no common blocks"))?;
    let mut common: Vec<u64> = first.blocks.clone();
    for p in iter {
        common.retain(|&m| p.block_of(m.trailing_zeros() + 1) == m);
        if common.is_empty() {
            break;
        }
    }
    Ok(common)
}

/// True iff fewer than `t` blocks are common to all members at once.
pub fn is_nontrivial(family: &PartitionFamily, t: u32) -> Result<bool> {
    Ok(common_blocks_of_family(family)?.len() < t as usize)
}

/// Fixing operator: if `j` lies in the block of `i`, split `{i}` off as a
/// singleton; otherwise leave the partition unchanged.
pub fn fix_op(i: u32, j: u32, p: &SetPartition) -> Result<SetPartition> {
    if i == j {
        return Err(Error::arg("fix_op requires i != j"));
    }
    if i == 0 || j == 0 || i > p.n() || j > p.n() {
        return Err(Error::arg("fix_op elements outside ground set"));
    }
    let bi = p.block_of(i);
    if bi & (1 << (j - 1)) == 0 {
        return Ok(p.clone());
    }
    let mut masks: Vec<u64> = p.blocks.iter().copied().filter(|&m| m != bi).collect();
    masks.push(1 << (i - 1));
    masks.push(bi & !(1 << (i - 1)));
    Ok(SetPartition::from_block_masks(p.n(), masks))
}

/// Shifting operator: if `{w}` is a singleton and `v` is not fixed, swap
/// their roles (`w` joins `v`'s former block, `{v}` becomes a singleton).
/// Swapping two singletons is the identity, as is any `p` not fixing `w`.
pub fn shift_op(v: u32, w: u32, p: &SetPartition) -> Result<SetPartition> {
    if v >= w {
        return Err(Error::arg("shift_op requires v < w"));
    }
    shift_op_any_order(v, w, p)
}

/// Shifting with the order restriction relaxed to `v != w`.
pub fn shift_op_any_order(v: u32, w: u32, p: &SetPartition) -> Result<SetPartition> {
    if v == w {
        return Err(Error::arg("shift requires v != w"));
    }
    if v == 0 || w == 0 || v > p.n() || w > p.n() {
        return Err(Error::arg("shift elements outside ground set"));
    }
    let wbit = 1u64 << (w - 1);
    let vbit = 1u64 << (v - 1);
    let fixed = p.fixed_points().bits();
    if fixed & wbit == 0 || fixed & vbit != 0 {
        return Ok(p.clone());
    }
    let bv = p.block_of(v);
    let mut masks: Vec<u64> = p
        .blocks
        .iter()
        .copied()
        .filter(|&m| m != bv && m != wbit)
        .collect();
    masks.push((bv & !vbit) | wbit);
    masks.push(vbit);
    Ok(SetPartition::from_block_masks(p.n(), masks))
}

fn family_op<F>(family: &PartitionFamily, op: F) -> Result<PartitionFamily>
where
    F: Fn(&SetPartition) -> Result<SetPartition>,
{
    // Collision rule: a member keeps its place when its image is a
    // *different* partition already present in the input family; this is
    // what makes the map injective and the size invariant.
    let mut out = PartitionFamily::new(family.n());
    for p in family.iter() {
        let image = op(p)?;
        if image != *p && family.contains(&image) {
            out.insert(p.clone())?;
        } else {
            out.insert(image)?;
        }
    }
    debug_assert_eq!(out.len(), family.len());
    Ok(out)
}

/// Applies `fix_op(i,j)` memberwise with the collision rule; the output has
/// exactly the input's size.
pub fn fix_family_op(i: u32, j: u32, family: &PartitionFamily) -> Result<PartitionFamily> {
    if i == j {
        return Err(Error::arg("fix_family_op requires i != j"));
    }
    family_op(family, |p| fix_op(i, j, p))
}

/// Applies the shifting operator memberwise with the collision rule.
pub fn shift_family_op(
    v: u32,
    w: u32,
    family: &PartitionFamily,
    allow_any_order: bool,
) -> Result<PartitionFamily> {
    if v == w {
        return Err(Error::arg("shift_family_op requires v != w"));
    }
    if !allow_any_order && v > w {
        return Err(Error::arg("shift_family_op requires v < w unless relaxed"));
    }
    family_op(family, |p| shift_op_any_order(v, w, p))
}

/// Termination measure for `compress`: the sum over members of
/// `sum_{e in f(p)} (2n - e)`.
///
/// Every productive operator application strictly increases it: fixing
/// turns at least one non-singleton element into a singleton (each new
/// fixed point `e` contributes `2n - e >= n`, and no fixed point is ever
/// lost), while shifting `v < w` trades the fixed point `w` for `v`,
/// gaining `w - v >= 1`. The measure is bounded by `2 n^2 |family|`, so
/// compression terminates.
pub fn compression_measure(family: &PartitionFamily) -> u64 {
    let n = u64::from(family.n());
    family
        .iter()
        .map(|p| {
            p.fixed_points()
                .elements()
                .map(|e| 2 * n - u64::from(e))
                .sum::<u64>()
        })
        .sum()
}

/// Runs fixing over all ordered pairs `i != j` (lexicographic) to a fixed
/// point, then shifting over all `v < w`, and repeats the two sweeps until
/// a full pass changes nothing.
///
/// The input must be t-intersecting; the output then has the same size, is
/// still t-intersecting, and every pair of members shares at least `t`
/// singleton blocks.
pub fn compress(family: &PartitionFamily, t: u32) -> Result<PartitionFamily> {
    assert!(
        is_t_intersecting(family, t),
        "compress requires a t-intersecting input"
    );
    let n = family.n();
    let mut current = family.clone();
    loop {
        let mut changed = false;
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                loop {
                    let next = fix_family_op(i, j, &current)?;
                    if next == current {
                        break;
                    }
                    debug_assert!(compression_measure(&next) > compression_measure(&current));
                    current = next;
                    changed = true;
                }
            }
        }
        for v in 1..=n {
            for w in v + 1..=n {
                loop {
                    let next = shift_family_op(v, w, &current, false)?;
                    if next == current {
                        break;
                    }
                    debug_assert!(compression_measure(&next) > compression_measure(&current));
                    current = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(current);
        }
    }
}
