//! Brute-force verification routes, independent of the closed-form module:
//! direct enumeration counts, explicitly realized candidate families, an
//! exact branch-and-bound maximum search on the t-intersection graph
//! (optionally restricted to nontrivial families, with node and wall-clock
//! budgets), and the exhaustive zero-common-blocks check over all maximum
//! nontrivial families.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::bell::BellTable;
use crate::extremal::h_family;
use crate::partition::{
    common_parts, enumerate_partitions, is_nontrivial, is_t_intersecting, PartitionFamily,
    SetPartition,
};
use crate::{Error, Result};

/// Largest ground set for direct enumeration counts.
pub const MAX_DIRECT_COUNT: u32 = 10;
/// Largest ground set for the intersection-graph maximum search.
pub const MAX_ORACLE_GROUND_SET: u32 = 8;
/// Largest ground set for the all-maximum-family statement check.
pub const MAX_S1_GROUND_SET: u32 = 5;

/// Counts, by direct enumeration, the partitions of `[n]` whose fixed-point
/// set meets `[t+2r]` in at least `t+r` elements. Independent route for the
/// closed-form candidate size.
pub fn count_frankl_direct(n: u32, t: u32, r: u32) -> Result<u64> {
    if t == 0 {
        return Err(Error::arg("t must be >= 1"));
    }
    let ell = t + 2 * r;
    if ell > n {
        return Err(Error::arg(format!(
            "need t + 2r <= n, got n={n} t={t} r={r}"
        )));
    }
    if n > MAX_DIRECT_COUNT {
        return Err(Error::Capacity {
            what: "direct enumeration count",
            requested: n as usize,
            cap: MAX_DIRECT_COUNT as usize,
        });
    }
    let window = if ell == 64 { u64::MAX } else { (1u64 << ell) - 1 };
    let mut count = 0u64;
    for p in enumerate_partitions(n)? {
        if (p.fixed_points().bits() & window).count_ones() >= t + r {
            count += 1;
        }
    }
    Ok(count)
}

/// Realizes the radius-`r` candidate family explicitly: all partitions of
/// `[n]` whose fixed-point set meets `[t+2r]` in at least `t+r` elements.
pub fn realize_frankl_family(n: u32, t: u32, r: u32) -> Result<PartitionFamily> {
    if t == 0 || t + 2 * r > n {
        return Err(Error::arg(format!(
            "need t >= 1 and t + 2r <= n, got n={n} t={t} r={r}"
        )));
    }
    let ell = t + 2 * r;
    let window = if ell == 64 { u64::MAX } else { (1u64 << ell) - 1 };
    let mut fam = PartitionFamily::new(n);
    for p in enumerate_partitions(n)? {
        if (p.fixed_points().bits() & window).count_ones() >= t + r {
            fam.insert(p)?;
        }
    }
    Ok(fam)
}

/// Realizes the family generated by `H_i` explicitly: all partitions whose
/// fixed-point set contains some generator.
pub fn realize_h_generated_family(n: u32, t: u32, i: u32) -> Result<PartitionFamily> {
    let h = h_family(t, i, n)?;
    let mut fam = PartitionFamily::new(n);
    for p in enumerate_partitions(n)? {
        if h.generates(p.fixed_points().bits()) {
            fam.insert(p)?;
        }
    }
    Ok(fam)
}

/// Node and wall-clock limits for the maximum search.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 100_000_000,
            max_millis: 60_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Restrict the search to nontrivially t-intersecting families.
    pub nontrivial: bool,
    pub budget: OracleBudget,
    /// Accepted for interface stability; the search core is deterministic
    /// and single-threaded, so values above 1 only produce a diagnostic.
    pub threads: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            nontrivial: false,
            budget: OracleBudget::default(),
            threads: 1,
        }
    }
}

/// Whether the search ran to completion (the reported size is exact) or a
/// budget stopped it first (the reported size is the best lower bound).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Exact,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchOutcome::Exact => "exact",
            SearchOutcome::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub n: u32,
    pub t: u32,
    pub nontrivial: bool,
    pub best_size: u64,
    pub outcome: SearchOutcome,
    pub nodes_visited: u64,
    pub elapsed_ms: u64,
    /// Size of the realized candidate family used as the starting incumbent.
    pub seeded_size: u64,
    pub witness: PartitionFamily,
    pub diagnostics: Vec<String>,
}

/// Largest realized candidate family admissible for the mode, used as the
/// starting incumbent so the search only has to certify optimality.
fn seed_family(n: u32, t: u32, nontrivial: bool) -> Result<PartitionFamily> {
    let mut best = PartitionFamily::new(n);
    let mut consider = Vec::new();
    for r in 0..=(n - t) / 2 {
        consider.push(realize_frankl_family(n, t, r)?);
    }
    if n >= t + 3 {
        for i in 2..=n - t - 1 {
            consider.push(realize_h_generated_family(n, t, i)?);
        }
    }
    for fam in consider {
        assert!(
            is_t_intersecting(&fam, t),
            "seed family failed the direct pairwise t-intersection check"
        );
        if nontrivial && !is_nontrivial(&fam, t)? {
            continue;
        }
        if fam.len() > best.len() {
            best = fam;
        }
    }
    Ok(best)
}

fn adj_bit(adj: &[Vec<u64>], v: usize, u: usize) -> bool {
    adj[v][u >> 6] >> (u & 63) & 1 == 1
}

/// Deterministic degeneracy order (repeated smallest-degree removal with
/// smallest-index tie-breaking), reversed so the dense core is labeled
/// first: improves the greedy coloring bound.
fn degeneracy_relabel(adj_lists: &[Vec<usize>]) -> Vec<usize> {
    let n = adj_lists.len();
    let mut degree: Vec<usize> = adj_lists.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("vertex remains");
        removed[v] = true;
        removal.push(v);
        for &u in &adj_lists[v] {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    removal.reverse();
    removal
}

struct Search<'a> {
    verts: &'a [SetPartition],
    adj: &'a [Vec<u64>],
    t: u32,
    nontrivial: bool,
    budget: OracleBudget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
    best: u64,
    best_set: Vec<usize>,
}

impl<'a> Search<'a> {
    fn over_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        if self.nodes >= self.budget.max_nodes
            || (self.nodes.is_multiple_of(1024)
                && self.start.elapsed().as_millis() as u64 >= self.budget.max_millis)
        {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Blocks of `v` that survive in the running common-block set.
    fn shrink_commons(&self, commons: Option<&Vec<u64>>, v: usize) -> Vec<u64> {
        let p = &self.verts[v];
        match commons {
            None => p.block_masks().to_vec(),
            Some(c) => c
                .iter()
                .copied()
                .filter(|&b| p.block_of(b.trailing_zeros() + 1) == b)
                .collect(),
        }
    }

    /// A family is admissible as an incumbent if it is nonempty and, in
    /// nontrivial mode, has fewer than `t` blocks common to all members.
    fn qualifies(&self, commons: &Option<Vec<u64>>) -> bool {
        match commons {
            None => false,
            Some(c) => !self.nontrivial || (c.len() as u32) < self.t,
        }
    }

    /// Greedy coloring of the candidate set: vertices grouped into
    /// independent classes, emitted class by class with the class index as
    /// an upper bound on any clique inside the prefix.
    fn color_sort(&self, p: &[usize]) -> Vec<(usize, u32)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in p {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !adj_bit(self.adj, v, u)))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut out = Vec::with_capacity(p.len());
        for (ci, class) in classes.iter().enumerate() {
            for &v in class {
                out.push((v, ci as u32 + 1));
            }
        }
        out
    }

    fn expand(&mut self, r: &mut Vec<usize>, commons: Option<Vec<u64>>, p: Vec<usize>) {
        self.nodes += 1;
        if self.over_budget() {
            return;
        }
        // Lazy subtree prune: if even adjoining every remaining candidate
        // leaves >= t common blocks, no completion is nontrivial.
        if self.nontrivial {
            if let Some(c) = &commons {
                if c.len() as u32 >= self.t {
                    let all: Vec<u64> = c
                        .iter()
                        .copied()
                        .filter(|&b| {
                            p.iter().all(|&v| {
                                self.verts[v].block_of(b.trailing_zeros() + 1) == b
                            })
                        })
                        .collect();
                    if all.len() as u32 >= self.t {
                        return;
                    }
                }
            }
        }
        if p.is_empty() {
            if (r.len() as u64) > self.best && self.qualifies(&commons) {
                self.best = r.len() as u64;
                self.best_set = r.clone();
            }
            return;
        }
        let ordered = self.color_sort(&p);
        for idx in (0..ordered.len()).rev() {
            let (v, color) = ordered[idx];
            if r.len() as u64 + u64::from(color) <= self.best {
                return;
            }
            let next_commons = self.shrink_commons(commons.as_ref(), v);
            let p2: Vec<usize> = ordered[..idx]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| adj_bit(self.adj, v, u))
                .collect();
            r.push(v);
            self.expand(r, Some(next_commons), p2);
            r.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Exact maximum size of a t-intersecting (optionally nontrivial) family of
/// partitions of `[n]`, by branch-and-bound over the intersection graph
/// with a greedy-coloring bound, seeded with the best realized candidate
/// family. Budget exhaustion is an outcome, not an error: the report then
/// carries the best lower bound found.
pub fn max_t_intersecting(n: u32, t: u32, config: OracleConfig, table: &BellTable) -> Result<OracleReport> {
    if t == 0 || t > n {
        return Err(Error::arg(format!("need 1 <= t <= n, got n={n} t={t}")));
    }
    if n > MAX_ORACLE_GROUND_SET {
        return Err(Error::Capacity {
            what: "intersection-graph maximum search",
            requested: n as usize,
            cap: MAX_ORACLE_GROUND_SET as usize,
        });
    }
    if config.threads == 0 {
        return Err(Error::arg("threads must be >= 1"));
    }
    table.bell(n as usize)?;
    let start = Instant::now();
    let mut diagnostics = Vec::new();
    if config.threads > 1 {
        diagnostics.push(format!(
            "threads: the search core is deterministic and single-threaded; requested {} has no effect",
            config.threads
        ));
    }

    let raw: Vec<SetPartition> = enumerate_partitions(n)?.collect();
    let mut adj_lists: Vec<Vec<usize>> = vec![Vec::new(); raw.len()];
    for a in 0..raw.len() {
        for b in a + 1..raw.len() {
            let shared = common_parts(&raw[a], &raw[b]).expect("same ground set");
            if shared as u32 >= t {
                adj_lists[a].push(b);
                adj_lists[b].push(a);
            }
        }
    }
    let order = degeneracy_relabel(&adj_lists);
    let mut new_index = vec![0usize; raw.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let verts: Vec<SetPartition> = order.iter().map(|&old| raw[old].clone()).collect();
    let words = raw.len().div_ceil(64);
    let mut adj = vec![vec![0u64; words]; raw.len()];
    for (old, list) in adj_lists.iter().enumerate() {
        let v = new_index[old];
        for &old_u in list {
            let u = new_index[old_u];
            adj[v][u >> 6] |= 1u64 << (u & 63);
        }
    }

    let seed = seed_family(n, t, config.nontrivial)?;
    let index_of: BTreeMap<&SetPartition, usize> =
        verts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let seed_set: Vec<usize> = seed
        .iter()
        .map(|p| *index_of.get(p).expect("seed members are partitions of [n]"))
        .collect();

    let mut search = Search {
        verts: &verts,
        adj: &adj,
        t,
        nontrivial: config.nontrivial,
        budget: config.budget,
        start,
        nodes: 0,
        exhausted: false,
        best: seed.len() as u64,
        best_set: seed_set,
    };
    let mut r = Vec::new();
    search.expand(&mut r, None, (0..verts.len()).collect());

    let witness = PartitionFamily::from_members(
        n,
        search.best_set.iter().map(|&v| verts[v].clone()),
    )?;
    assert!(
        is_t_intersecting(&witness, t),
        "witness failed the direct pairwise t-intersection check"
    );
    if config.nontrivial && !witness.is_empty() {
        assert!(
            is_nontrivial(&witness, t)?,
            "witness failed the direct nontriviality check"
        );
    }
    let outcome = if search.exhausted {
        diagnostics.push(format!(
            "budget-exhausted: stopped after {} nodes / {} ms; reported size is a lower bound",
            search.nodes,
            start.elapsed().as_millis()
        ));
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::Exact
    };

    Ok(OracleReport {
        n,
        t,
        nontrivial: config.nontrivial,
        best_size: search.best,
        outcome,
        nodes_visited: search.nodes,
        elapsed_ms: start.elapsed().as_millis() as u64,
        seeded_size: seed.len() as u64,
        witness,
        diagnostics,
    })
}

/// Result of the all-maximum-family check: whether every maximum-size
/// nontrivially t-intersecting family has zero blocks (and zero singleton
/// blocks) common to all of its members.
#[derive(Clone, Debug)]
pub struct S1Report {
    pub n: u32,
    pub t: u32,
    pub max_size: u64,
    pub maximum_family_count: u64,
    /// No maximum family has any block common to all members (the verdict).
    pub zero_common_blocks: bool,
    /// No maximum family has a singleton block common to all members
    /// (weaker variant, carried for diagnostics).
    pub zero_common_fixed_points: bool,
    /// No nontrivial family exists at all; both flags hold vacuously.
    pub vacuous: bool,
}

#[allow(clippy::too_many_arguments)]
fn enumerate_maximum_nontrivial(
    verts: &[SetPartition],
    adj: &[Vec<u64>],
    t: u32,
    target: u64,
    r: &mut Vec<usize>,
    commons: Option<Vec<u64>>,
    p: Vec<usize>,
    found: &mut Vec<Vec<u64>>,
) {
    if r.len() as u64 == target {
        let c = commons.expect("target >= 1");
        if (c.len() as u32) < t {
            found.push(c);
        }
        return;
    }
    if ((r.len() + p.len()) as u64) < target {
        return;
    }
    for (pos, &v) in p.iter().enumerate() {
        let next_commons = match &commons {
            None => verts[v].block_masks().to_vec(),
            Some(c) => c
                .iter()
                .copied()
                .filter(|&b| verts[v].block_of(b.trailing_zeros() + 1) == b)
                .collect(),
        };
        let p2: Vec<usize> = p[pos + 1..]
            .iter()
            .copied()
            .filter(|&u| adj_bit(adj, v, u))
            .collect();
        r.push(v);
        enumerate_maximum_nontrivial(verts, adj, t, target, r, Some(next_commons), p2, found);
        r.pop();
    }
}

/// Exhaustively enumerates every maximum-size nontrivially t-intersecting
/// family of partitions of `[n]` and reports whether all of them have zero
/// common blocks. If no nontrivial family exists, the statement holds
/// vacuously.
pub fn verify_statement_s1(n: u32, t: u32, table: &BellTable) -> Result<S1Report> {
    if t == 0 || t > n {
        return Err(Error::arg(format!("need 1 <= t <= n, got n={n} t={t}")));
    }
    if n > MAX_S1_GROUND_SET {
        return Err(Error::Capacity {
            what: "all-maximum-family statement check",
            requested: n as usize,
            cap: MAX_S1_GROUND_SET as usize,
        });
    }
    let phase1 = max_t_intersecting(
        n,
        t,
        OracleConfig {
            nontrivial: true,
            ..OracleConfig::default()
        },
        table,
    )?;
    if phase1.outcome != SearchOutcome::Exact {
        return Err(Error::arg(
            "statement check requires an exact maximum; search budget exhausted",
        ));
    }
    if phase1.best_size == 0 {
        return Ok(S1Report {
            n,
            t,
            max_size: 0,
            maximum_family_count: 0,
            zero_common_blocks: true,
            zero_common_fixed_points: true,
            vacuous: true,
        });
    }

    let verts: Vec<SetPartition> = enumerate_partitions(n)?.collect();
    let words = verts.len().div_ceil(64);
    let mut adj = vec![vec![0u64; words]; verts.len()];
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            let shared = common_parts(&verts[a], &verts[b]).expect("same ground set");
            if shared as u32 >= t {
                adj[a][b >> 6] |= 1u64 << (b & 63);
                adj[b][a >> 6] |= 1u64 << (a & 63);
            }
        }
    }
    let mut found = Vec::new();
    let mut r = Vec::new();
    enumerate_maximum_nontrivial(
        &verts,
        &adj,
        t,
        phase1.best_size,
        &mut r,
        None,
        (0..verts.len()).collect(),
        &mut found,
    );
    let zero_common_blocks = found.iter().all(|c| c.is_empty());
    let zero_common_fixed_points = found
        .iter()
        .all(|c| c.iter().all(|b| b.count_ones() != 1));
    Ok(S1Report {
        n,
        t,
        max_size: phase1.best_size,
        maximum_family_count: found.len() as u64,
        zero_common_blocks,
        zero_common_fixed_points,
        vacuous: false,
    })
}
