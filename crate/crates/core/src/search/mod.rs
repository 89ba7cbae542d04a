//! Existence witnesses and non-existence certificates for configurations of
//! closed points in general position.

mod space;
pub mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{find_normal_basis, FieldSpec};
use crate::plane::{
    extends_general_position, general_position_raw, is_general_position, orbit_coords, ClosedPointConfig, Coords,
    ProjPoint,
};

pub use space::SCAN_LIMIT;
pub use table::{trace_set, trace_table, traces_with, TraceStatus, TraceTableRow, Witness};
use space::Space;

/// Default number of random trials for [`find_config`].
pub const DEFAULT_BUDGET: u64 = 100_000;
/// Default cap on elementary subset tests for exhaustive searches.
pub const DEFAULT_TEST_BUDGET: u64 = 10_000_000_000;
/// Progress is written to the checkpoint file at least this often (in tests).
pub const CHECKPOINT_EVERY: u64 = 100_000_000;
/// Exhaustive searches whose [`exhaustive_size_estimate`] exceeds this run only with `long`.
pub const LONG_ESTIMATE: f64 = 2e9;

const TRIES_PER_POINT: u32 = 64;
const CHUNK: usize = 64;

/// Multiset of orbit degrees, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreePartition(Vec<u32>);

impl DegreePartition {
    pub fn new(mut parts: Vec<u32>) -> Result<DegreePartition> {
        if parts.is_empty() {
            return Err(Error::InvalidConfig("empty partition".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidConfig("orbit degrees must be at least 1".into()));
        }
        let total: u32 = parts.iter().sum();
        if total > 8 {
            return Err(Error::InvalidConfig(format!("total degree {total} exceeds 8")));
        }
        parts.sort_unstable();
        Ok(DegreePartition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn rational(&self) -> usize {
        self.0.iter().filter(|&&d| d == 1).count()
    }

    /// Degrees of the non-rational orbits, descending.
    pub fn nonrational(&self) -> Vec<u32> {
        self.0.iter().copied().filter(|&d| d > 1).sorted().rev().collect()
    }

    pub fn working_degree(&self) -> u32 {
        self.0.iter().fold(1, |acc, &d| num_integer::lcm(acc, d))
    }

    /// All partitions with total degree between 1 and `max_total`.
    pub fn all_up_to(max_total: u32) -> Vec<DegreePartition> {
        fn rec(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if rest == 0 {
                out.push(cur.clone());
                return;
            }
            for part in (1..=rest.min(max_part)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for total in 1..=max_total {
            rec(total, total, &mut Vec::new(), &mut out);
        }
        out.into_iter().map(|p| DegreePartition::new(p).expect("valid")).collect()
    }
}

impl fmt::Display for DegreePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// Accepts `1,1,1,2` as well as the shorthand `1^3,2`.
impl FromStr for DegreePartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<DegreePartition> {
        let mut parts = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (d, m) = match tok.split_once(['^', 'x']) {
                Some((d, m)) => (d, m),
                None => (tok, "1"),
            };
            let d: u32 = d.trim().parse().map_err(|_| Error::Parse(format!("bad partition entry '{tok}'")))?;
            let m: u32 = m.trim().parse().map_err(|_| Error::Parse(format!("bad partition entry '{tok}'")))?;
            if m > 8 {
                return Err(Error::InvalidConfig(format!("multiplicity {m} too large")));
            }
            parts.extend(std::iter::repeat(d).take(m as usize));
        }
        DegreePartition::new(parts)
    }
}

impl Serialize for DegreePartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegreePartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        DegreePartition::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    /// Random candidate points drawn.
    pub trials: u64,
    /// Search-tree nodes (partial configurations) visited.
    pub nodes: u64,
    /// Elementary subset tests (collinear / conic / singular cubic).
    pub tests: u64,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

// wall time is not part of the result's identity
impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        (self.trials, self.nodes, self.tests, self.seed) == (other.trials, other.nodes, other.tests, other.seed)
    }
}

impl Eq for SearchStats {}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.trials += other.trials;
        self.nodes += other.nodes;
        self.tests += other.tests;
    }
}

/// One level of an exhaustive search: what is placed and how many choices there were.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelInfo {
    pub degree: u32,
    pub candidates: u64,
    /// Candidates are taken in increasing order after the previous level's choice.
    pub increasing: bool,
}

/// Record of an exhausted search space.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certificate {
    pub q: String,
    pub partition: DegreePartition,
    pub method: String,
    pub normalization: String,
    pub fixed_points: Vec<[u64; 3]>,
    pub levels: Vec<LevelInfo>,
    pub nodes: u64,
    pub tests: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchStatus {
    Found { config: ClosedPointConfig },
    NotFound { certificate: Certificate },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SearchResult {
    #[serde(flatten)]
    pub status: SearchStatus,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn is_found(&self) -> bool {
        matches!(self.status, SearchStatus::Found { .. })
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self.status, SearchStatus::NotFound { .. })
    }

    pub fn config(&self) -> Option<&ClosedPointConfig> {
        match &self.status {
            SearchStatus::Found { config } => Some(config),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Random trials for [`find_config`].
    pub budget: u64,
    /// Elementary-test cap for exhaustive searches.
    pub test_budget: u64,
    pub seed: u64,
    /// Enables the expensive exhaustive runs (large fields, many rational points).
    pub long: bool,
    /// Resumable progress file for exhaustive searches.
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, test_budget: DEFAULT_TEST_BUDGET, seed: 0, long: false, checkpoint: None }
    }
}

// ---- randomized search ------------------------------------------------------

/// Randomized search: orbits are sampled one at a time, each accepted only if
/// it keeps the partial configuration in general position; after
/// `TRIES_PER_POINT` failures the attempt restarts. Deterministic per seed.
pub fn find_config(base: &FieldSpec, partition: &DegreePartition, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let mut placement = partition.nonrational();
    placement.extend(std::iter::repeat(1).take(partition.rational()));
    let degrees: Vec<u32> = placement.iter().copied().unique().collect();
    let sp = Space::new(base, partition.working_degree(), &degrees)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut stats = SearchStats { seed: Some(opts.seed), ..Default::default() };
    let mut pts: Vec<Coords> = Vec::with_capacity(8);
    let mut reps: Vec<(u32, Coords)> = Vec::with_capacity(8);
    'attempt: while stats.trials < opts.budget {
        pts.clear();
        reps.clear();
        for &d in &placement {
            let mut placed = false;
            for _ in 0..TRIES_PER_POINT {
                if stats.trials >= opts.budget {
                    break 'attempt;
                }
                stats.trials += 1;
                let c = sp.random_point(d, &mut rng);
                if sp.degree_of(&c) != d {
                    continue;
                }
                let orbit = orbit_coords(&sp.field, &c, sp.n);
                if orbit.iter().any(|o| pts.contains(o)) {
                    continue;
                }
                let old = pts.len();
                pts.extend(orbit);
                stats.nodes += 1;
                if extends_general_position(&sp.field, &pts, old, &mut stats.tests) {
                    reps.push((d, c));
                    placed = true;
                    break;
                }
                pts.truncate(old);
            }
            if !placed {
                continue 'attempt;
            }
        }
        let config = sp.to_config(&reps)?;
        if !is_general_position(&config)? {
            return Err(Error::Consistency("random witness failed re-verification".into()));
        }
        stats.elapsed = start.elapsed();
        return Ok(SearchResult { status: SearchStatus::Found { config }, stats });
    }
    stats.elapsed = start.elapsed();
    Ok(SearchResult {
        status: SearchStatus::Inconclusive { reason: format!("random budget of {} trials exhausted", opts.budget) },
        stats,
    })
}

// ---- exhaustive search -------------------------------------------------------

struct Level {
    degree: u32,
    /// Flattened orbits: `cands[i*degree .. (i+1)*degree]` is the orbit of candidate `i`.
    orbits: Vec<Coords>,
    increasing: bool,
}

impl Level {
    fn len(&self) -> usize {
        self.orbits.len() / self.degree as usize
    }

    fn orbit(&self, i: usize) -> &[Coords] {
        let d = self.degree as usize;
        &self.orbits[i * d..(i + 1) * d]
    }
}

struct Plan {
    space: Space,
    fixed: Vec<Coords>,
    levels: Vec<Level>,
    incremental: bool,
    normalization: String,
}

impl Plan {
    fn build(base: &FieldSpec, partition: &DegreePartition, pruned: bool) -> Result<Plan> {
        let nonrational = partition.nonrational();
        let mut degrees = nonrational.clone();
        degrees.push(1);
        let space = Space::new(base, partition.working_degree(), &degrees)?;
        let k1 = partition.rational();
        let frame: [Coords; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        let fixed: Vec<Coords> = if pruned { frame[..k1.min(4)].to_vec() } else { Vec::new() };
        let mut levels = Vec::new();
        let mut prev: Option<u32> = None;
        for &d in &nonrational {
            let reps = space.orbit_reps(d)?;
            let orbits = reps.iter().flat_map(|c| orbit_coords(&space.field, c, space.n)).collect();
            levels.push(Level { degree: d, orbits, increasing: prev == Some(d) });
            prev = Some(d);
        }
        let free_rational = k1 - fixed.len();
        if free_rational > 0 {
            let rational: Vec<Coords> = space.rational_points().into_iter().filter(|c| !fixed.contains(c)).collect();
            for i in 0..free_rational {
                levels.push(Level { degree: 1, orbits: rational.clone(), increasing: i > 0 });
            }
        }
        let normalization = if pruned {
            format!(
                "first {} rational points fixed to the standard frame (PGL3 transitivity); closed points by \
                 least-code orbit representative; equal-degree orbits and remaining rational points in \
                 increasing order; incremental subset tests",
                fixed.len()
            )
        } else {
            "none: all combinations of distinct closed points, full test at the leaves".into()
        };
        Ok(Plan { space, fixed, levels, incremental: pruned, normalization })
    }

    fn certificate(&self, partition: &DegreePartition, stats: &SearchStats) -> Certificate {
        Certificate {
            q: self.space.base.to_string(),
            partition: partition.clone(),
            method: if self.incremental { "exhaustive-pruned".into() } else { "exhaustive-unpruned".into() },
            normalization: self.normalization.clone(),
            fixed_points: self.fixed.clone(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelInfo { degree: l.degree, candidates: l.len() as u64, increasing: l.increasing })
                .collect(),
            nodes: stats.nodes,
            tests: stats.tests,
        }
    }

    /// Depth-first extension from `level`; returns the chosen candidate indices on success.
    fn dfs(
        &self,
        level: usize,
        prev_index: usize,
        pts: &mut Vec<Coords>,
        chosen: &mut Vec<usize>,
        stats: &mut SearchStats,
    ) -> bool {
        if level == self.levels.len() {
            if self.incremental {
                return true;
            }
            stats.tests += 1;
            return general_position_raw(&self.space.field, pts);
        }
        let lv = &self.levels[level];
        let start = if lv.increasing { prev_index + 1 } else { 0 };
        for i in start..lv.len() {
            if self.try_place(level, i, pts, chosen, stats) {
                return true;
            }
        }
        false
    }

    fn try_place(
        &self,
        level: usize,
        i: usize,
        pts: &mut Vec<Coords>,
        chosen: &mut Vec<usize>,
        stats: &mut SearchStats,
    ) -> bool {
        let orbit = self.levels[level].orbit(i);
        if orbit.iter().any(|o| pts.contains(o)) {
            return false;
        }
        let old = pts.len();
        pts.extend_from_slice(orbit);
        stats.nodes += 1;
        let ok = !self.incremental || extends_general_position(&self.space.field, pts, old, &mut stats.tests);
        if ok {
            chosen.push(i);
            if self.dfs(level + 1, i, pts, chosen, stats) {
                return true;
            }
            chosen.pop();
        }
        pts.truncate(old);
        false
    }

    fn witness(&self, chosen: &[usize]) -> Result<ClosedPointConfig> {
        let mut reps: Vec<(u32, Coords)> = self.fixed.iter().map(|&c| (1, c)).collect();
        for (lv, &i) in self.levels.iter().zip(chosen) {
            reps.push((lv.degree, lv.orbit(i)[0]));
        }
        self.space.to_config(&reps)
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    q: String,
    partition: DegreePartition,
    method: String,
    next_branch: usize,
    nodes: u64,
    tests: u64,
}

fn exhaustive(
    base: &FieldSpec,
    partition: &DegreePartition,
    opts: &SearchOptions,
    pruned: bool,
) -> Result<SearchResult> {
    let start = Instant::now();
    let estimate = exhaustive_size_estimate(base, partition);
    if !opts.long && estimate > LONG_ESTIMATE {
        let reason = format!("estimated search size {estimate:.2e} exceeds {LONG_ESTIMATE:.0e}; rerun with --long");
        return Ok(SearchResult { status: SearchStatus::Inconclusive { reason }, stats: SearchStats::default() });
    }
    let plan = match Plan::build(base, partition, pruned) {
        Ok(p) => p,
        Err(Error::InvalidConfig(reason)) => {
            return Ok(SearchResult { status: SearchStatus::Inconclusive { reason }, stats: SearchStats::default() })
        }
        Err(e) => return Err(e),
    };
    let mut stats = SearchStats::default();
    let mut pts = plan.fixed.clone();
    // the fixed frame points are in general position by construction
    if plan.levels.is_empty() {
        stats.tests += 1;
        let ok = general_position_raw(&plan.space.field, &pts);
        stats.elapsed = start.elapsed();
        let status = if ok {
            SearchStatus::Found { config: plan.witness(&[])? }
        } else {
            SearchStatus::NotFound { certificate: plan.certificate(partition, &stats) }
        };
        return Ok(SearchResult { status, stats });
    }

    let method = if pruned { "exhaustive-pruned" } else { "exhaustive-unpruned" };
    let mut next = 0usize;
    if let Some(path) = &opts.checkpoint {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(cp) = serde_json::from_str::<Checkpoint>(&text) {
                if cp.q == base.to_string() && cp.partition == *partition && cp.method == method {
                    next = cp.next_branch;
                    stats.nodes = cp.nodes;
                    stats.tests = cp.tests;
                }
            }
        }
    }
    let mut last_checkpoint = stats.tests;
    let first = plan.levels[0].len();
    while next < first {
        let end = (next + CHUNK).min(first);
        let results: Vec<(Option<Vec<usize>>, SearchStats)> = (next..end)
            .into_par_iter()
            .map(|i| {
                let mut local = SearchStats::default();
                let mut p = pts.clone();
                let mut chosen = Vec::with_capacity(8);
                let found = plan.try_place(0, i, &mut p, &mut chosen, &mut local);
                (found.then_some(chosen), local)
            })
            .collect();
        for (found, local) in &results {
            stats.absorb(local);
            if let Some(chosen) = found {
                let config = plan.witness(chosen)?;
                if !is_general_position(&config)? {
                    return Err(Error::Consistency("exhaustive witness failed re-verification".into()));
                }
                stats.elapsed = start.elapsed();
                return Ok(SearchResult { status: SearchStatus::Found { config }, stats });
            }
        }
        next = end;
        if let Some(path) = &opts.checkpoint {
            if stats.tests - last_checkpoint >= CHECKPOINT_EVERY || next == first {
                let cp = Checkpoint {
                    q: base.to_string(),
                    partition: partition.clone(),
                    method: method.into(),
                    next_branch: next,
                    nodes: stats.nodes,
                    tests: stats.tests,
                };
                std::fs::write(path, serde_json::to_string(&cp).expect("serializable"))
                    .map_err(|e| Error::InvalidConfig(format!("cannot write checkpoint: {e}")))?;
                last_checkpoint = stats.tests;
            }
        }
        if stats.tests > opts.test_budget && next < first {
            stats.elapsed = start.elapsed();
            return Ok(SearchResult {
                status: SearchStatus::Inconclusive {
                    reason: format!("test budget of {} exhausted after {next} of {first} branches", opts.test_budget),
                },
                stats,
            });
        }
    }
    pts.truncate(plan.fixed.len());
    stats.elapsed = start.elapsed();
    Ok(SearchResult { status: SearchStatus::NotFound { certificate: plan.certificate(partition, &stats) }, stats })
}

/// Exhaustive search with symmetry pruning. `NotFound` only when the whole
/// (normalized) space was exhausted; budget overruns give `Inconclusive`.
pub fn prove_nonexistence(base: &FieldSpec, partition: &DegreePartition, opts: &SearchOptions) -> Result<SearchResult> {
    exhaustive(base, partition, opts, true)
}

/// Exhaustive search without any normalization or incremental pruning; a
/// reference for validating [`prove_nonexistence`] on small fields.
pub fn brute_force(base: &FieldSpec, partition: &DegreePartition, opts: &SearchOptions) -> Result<SearchResult> {
    exhaustive(base, partition, opts, false)
}

/// Rough number of leaves of the pruned search tree (an upper bound).
pub fn exhaustive_size_estimate(base: &FieldSpec, partition: &DegreePartition) -> f64 {
    let q = base.order() as f64;
    let mut est = 1.0;
    for d in partition.nonrational() {
        let qd = q.powi(d as i32);
        est *= (qd * qd) / d as f64;
    }
    let free = partition.rational().saturating_sub(4) as i32;
    let rational = q * q + q + 1.0;
    est * rational.powi(free)
}

/// The closed point `[1 : a : a^3]` for a normal element `a` of `F_{q^d}`.
pub fn normal_basis_config(base: &FieldSpec, d: u32) -> Result<ClosedPointConfig> {
    if !(1..=8).contains(&d) {
        return Err(Error::InvalidConfig(format!("normal-basis point of degree {d}")));
    }
    let nb = find_normal_basis(base, d)?;
    let f = nb.field();
    let a = nb.generator;
    let p = ProjPoint::new(f, [1, a, f.pow(a, 3)])?;
    let config = ClosedPointConfig::from_reps(base, &[p])?;
    if config.total_degree() != d {
        return Err(Error::Consistency(format!("normal element generates a point of degree {}", config.total_degree())));
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn partition_parsing() {
        let p: DegreePartition = "1^3,2".parse().unwrap();
        assert_eq!(p.parts(), &[1, 1, 1, 2]);
        assert_eq!(p, "2,1,1,1".parse().unwrap());
        assert!("1^9".parse::<DegreePartition>().is_err());
        assert!("0,1".parse::<DegreePartition>().is_err());
        assert_eq!(p.to_string(), "1,1,1,2");
        assert_eq!(DegreePartition::all_up_to(3).len(), 1 + 2 + 3);
    }

    #[test]
    fn six_points_exist_exactly_when_expected() {
        let six: DegreePartition = "1^6".parse().unwrap();
        for (q, exists) in [(2, false), (3, false), (4, true), (5, false), (7, true)] {
            let (p, n) = crate::gf::prime_power(q).unwrap();
            let f = make_field(p, n).unwrap();
            let r = prove_nonexistence(&f, &six, &SearchOptions::default()).unwrap();
            assert_eq!(r.is_found(), exists, "q={q}");
            assert_eq!(r.is_not_found(), !exists, "q={q}");
        }
    }

    #[test]
    fn random_search_is_deterministic() {
        let f = make_field(7, 1).unwrap();
        let part: DegreePartition = "1,1,1,2".parse().unwrap();
        let a = find_config(&f, &part, &SearchOptions::default()).unwrap();
        let b = find_config(&f, &part, &SearchOptions::default()).unwrap();
        assert!(a.is_found());
        assert_eq!(a, b);
    }
}
