//! Exact deterministic query complexity by exhaustive minimax, with and
//! without half of `k` revealed in advance.
//!
//! The adversary picks the member; the algorithm adaptively picks which `x`
//! to query next. A node of the search is the set of members still
//! consistent with everything observed, and depth is memoized per set.

use std::collections::HashMap;
use std::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FunctionFamily, OracleFunction};

/// Environment variable overriding the member-count bound.
pub const MAX_FAMILY_ENV: &str = "QSPEEDUP_MAX_FAMILY";
pub const DEFAULT_MAX_MEMBERS: usize = 64;
pub const MAX_ROWS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capacity {
    pub max_members: usize,
    pub max_rows: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Self { max_members: DEFAULT_MAX_MEMBERS, max_rows: MAX_ROWS }
    }
}

impl Capacity {
    /// Default bounds, with the member bound taken from
    /// `QSPEEDUP_MAX_FAMILY` when it is set to a positive integer.
    pub fn from_env() -> Self {
        let max_members = std::env::var(MAX_FAMILY_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|n: &usize| *n > 0)
            .unwrap_or(DEFAULT_MAX_MEMBERS);
        Self { max_members, ..Self::default() }
    }

    fn check(&self, family: &FunctionFamily) -> Result<()> {
        if family.len() > self.max_members || family.rows() > self.max_rows {
            return Err(Error::Capacity {
                family: family.name().to_string(),
                members: family.len(),
                rows: family.rows(),
                max_members: self.max_members,
                max_rows: self.max_rows,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfMode {
    /// Half of the bits of the `k` label.
    Bit,
    /// Half of the rows of the function table.
    Row,
}

impl HalfMode {
    /// Bits of the location for search families, table rows otherwise.
    pub fn default_for(family: &FunctionFamily) -> Self {
        match family.kind() {
            FamilyKind::Grover => HalfMode::Bit,
            _ => HalfMode::Row,
        }
    }
}

impl fmt::Display for HalfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfMode::Bit => "bit",
            HalfMode::Row => "row",
        })
    }
}

impl std::str::FromStr for HalfMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bit" => Ok(HalfMode::Bit),
            "row" => Ok(HalfMode::Row),
            _ => Err(format!("mode must be `bit` or `row`, got {s:?}")),
        }
    }
}

/// A revealed half of `k`: bit positions of the label, or table rows, with
/// the revealed values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdvancedInfo {
    pub mode: HalfMode,
    pub positions: Vec<usize>,
    pub values: Vec<Bits>,
}

impl AdvancedInfo {
    pub fn is_consistent(&self, f: &OracleFunction) -> bool {
        self.positions
            .iter()
            .zip(&self.values)
            .all(|(&p, v)| Self::read(self.mode, f, p) == *v)
    }

    fn read(mode: HalfMode, f: &OracleFunction, position: usize) -> Bits {
        match mode {
            HalfMode::Bit => Bits::new(f.k_label().bit(position) as u64, 1),
            HalfMode::Row => f.value(position),
        }
    }

    pub fn covers_row(&self, x: usize) -> bool {
        self.mode == HalfMode::Row && self.positions.contains(&x)
    }
}

impl fmt::Display for AdvancedInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .positions
            .iter()
            .zip(&self.values)
            .map(|(p, v)| match self.mode {
                HalfMode::Bit => format!("k{p}={v}"),
                HalfMode::Row => format!("f({p})={v}"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Adaptive query tree. Branches are keyed by the observed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(Bits),
    Query { x: usize, branches: Vec<(Bits, DecisionTree)> },
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { branches, .. } => {
                1 + branches.iter().map(|(_, t)| t.depth()).max().unwrap_or(0)
            }
        }
    }

    /// Runs the tree against a black box; `None` if an observed value has
    /// no branch.
    pub fn evaluate(&self, f: &OracleFunction) -> Option<Bits> {
        match self {
            DecisionTree::Leaf(label) => Some(*label),
            DecisionTree::Query { x, branches } => {
                let v = f.value(*x);
                branches.iter().find(|(b, _)| *b == v)?.1.evaluate(f)
            }
        }
    }

    /// The root query, if any.
    pub fn first_query(&self) -> Option<usize> {
        match self {
            DecisionTree::Leaf(_) => None,
            DecisionTree::Query { x, .. } => Some(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTreeResult {
    pub depth: usize,
    pub tree: DecisionTree,
}

/// Replays `tree` against every member in `members` and checks it outputs
/// `sigma(k)`.
pub fn verify_tree(tree: &DecisionTree, family: &FunctionFamily, members: &[usize]) -> bool {
    members
        .iter()
        .all(|&k| tree.evaluate(family.member(k)) == Some(family.solution(k)))
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct MemberSet(Vec<u64>);

impl MemberSet {
    fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &i in indices {
            words[i / 64] |= 1 << (i % 64);
        }
        Self(words)
    }
}

struct Solver<'a> {
    family: &'a FunctionFamily,
    memo: HashMap<MemberSet, usize>,
}

impl<'a> Solver<'a> {
    fn new(family: &'a FunctionFamily) -> Self {
        Self { family, memo: HashMap::new() }
    }

    fn set(&self, indices: &[usize]) -> MemberSet {
        MemberSet::from_indices(self.family.len(), indices)
    }

    fn solved(&self, members: &[usize]) -> bool {
        let first = self.family.solution(members[0]);
        members.iter().all(|&k| self.family.solution(k) == first)
    }

    /// Members grouped by the value `f_k(x)`, in increasing value order.
    fn split(&self, members: &[usize], x: usize) -> Vec<(Bits, Vec<usize>)> {
        let mut groups: Vec<(Bits, Vec<usize>)> = Vec::new();
        for &k in members {
            let v = self.family.value(k, x);
            match groups.iter_mut().find(|(g, _)| *g == v) {
                Some((_, ks)) => ks.push(k),
                None => groups.push((v, vec![k])),
            }
        }
        groups.sort_by_key(|(v, _)| *v);
        groups
    }

    fn depth(&mut self, members: &[usize]) -> Result<usize> {
        if self.solved(members) {
            return Ok(0);
        }
        let key = self.set(members);
        if let Some(&d) = self.memo.get(&key) {
            return Ok(d);
        }
        let mut best: Option<usize> = None;
        for x in 0..self.family.rows() {
            let groups = self.split(members, x);
            if groups.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for (_, g) in &groups {
                worst = worst.max(1 + self.depth(g)?);
                if best.is_some_and(|b| worst >= b) {
                    break;
                }
            }
            if best.map_or(true, |b| worst < b) {
                best = Some(worst);
            }
            if best == Some(1) {
                break;
            }
        }
        let d = match best {
            Some(d) => d,
            None => {
                let a = self.family.member(members[0]).k_label().to_string();
                let b = members
                    .iter()
                    .find(|&&k| self.family.solution(k) != self.family.solution(members[0]))
                    .map(|&k| self.family.member(k).k_label().to_string())
                    .unwrap_or_default();
                return Err(Error::Indistinguishable { a, b });
            }
        };
        self.memo.insert(key, d);
        Ok(d)
    }

    /// Witness tree realizing the memoized depth; the lowest optimal `x` is
    /// queried at each node.
    fn tree(&mut self, members: &[usize]) -> Result<DecisionTree> {
        if self.solved(members) {
            return Ok(DecisionTree::Leaf(self.family.solution(members[0])));
        }
        let target = self.depth(members)?;
        for x in 0..self.family.rows() {
            let groups = self.split(members, x);
            if groups.len() < 2 {
                continue;
            }
            let mut worst = 0;
            for (_, g) in &groups {
                worst = worst.max(1 + self.depth(g)?);
            }
            if worst == target {
                let branches = groups
                    .into_iter()
                    .map(|(v, g)| Ok((v, self.tree(&g)?)))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(DecisionTree::Query { x, branches });
            }
        }
        unreachable!("memoized depth has a realizing query")
    }
}

/// Minimum worst-case number of queries identifying `sigma(k)` for every
/// member, with a witness tree.
pub fn classical_query_complexity(family: &FunctionFamily) -> Result<DecisionTreeResult> {
    classical_query_complexity_with(family, Capacity::from_env())
}

pub fn classical_query_complexity_with(
    family: &FunctionFamily,
    capacity: Capacity,
) -> Result<DecisionTreeResult> {
    capacity.check(family)?;
    if family.is_empty() {
        return Err(Error::DegenerateProblem(family.name().to_string()));
    }
    let all: Vec<usize> = (0..family.len()).collect();
    let mut solver = Solver::new(family);
    let depth = solver.depth(&all)?;
    let tree = solver.tree(&all)?;
    Ok(DecisionTreeResult { depth, tree })
}

/// Every half consistent with at least one member, in a fixed order:
/// position sets lexicographically, then revealed values.
pub fn enumerate_halves(family: &FunctionFamily, mode: HalfMode) -> Vec<AdvancedInfo> {
    let size = match mode {
        HalfMode::Row => family.rows(),
        HalfMode::Bit => family.members().first().map_or(0, |m| m.k_label().width()),
    };
    let revealed = size.div_ceil(2);
    let mut halves = Vec::new();
    for positions in combinations(size, revealed) {
        let mut seen: Vec<Vec<Bits>> = family
            .members()
            .iter()
            .map(|f| positions.iter().map(|&p| AdvancedInfo::read(mode, f, p)).collect())
            .collect();
        seen.sort();
        seen.dedup();
        for values in seen {
            halves.push(AdvancedInfo { mode, positions: positions.clone(), values });
        }
    }
    halves
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HalfOutcome {
    /// The half already fixes the solution.
    Excluded,
    Solved(DecisionTreeResult),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvancedReport {
    pub mode: HalfMode,
    /// Worst case over the halves that do not already fix the solution.
    pub depth: usize,
    pub excluded: Vec<AdvancedInfo>,
    pub per_half: Vec<(AdvancedInfo, HalfOutcome)>,
}

impl AdvancedReport {
    /// Members consistent with `half`.
    pub fn consistent(family: &FunctionFamily, half: &AdvancedInfo) -> Vec<usize> {
        (0..family.len())
            .filter(|&k| half.is_consistent(family.member(k)))
            .collect()
    }
}

pub fn advanced_query_complexity(family: &FunctionFamily, mode: HalfMode) -> Result<AdvancedReport> {
    advanced_query_complexity_with(family, mode, Capacity::from_env())
}

pub fn advanced_query_complexity_with(
    family: &FunctionFamily,
    mode: HalfMode,
    capacity: Capacity,
) -> Result<AdvancedReport> {
    capacity.check(family)?;
    let mut solver = Solver::new(family);
    let mut per_half = Vec::new();
    let mut excluded = Vec::new();
    let mut depth = None;
    for half in enumerate_halves(family, mode) {
        let members = AdvancedReport::consistent(family, &half);
        if solver.solved(&members) {
            excluded.push(half.clone());
            per_half.push((half, HalfOutcome::Excluded));
            continue;
        }
        let d = solver.depth(&members)?;
        let tree = solver.tree(&members)?;
        depth = Some(depth.map_or(d, |best: usize| best.max(d)));
        per_half.push((half, HalfOutcome::Solved(DecisionTreeResult { depth: d, tree })));
    }
    let depth = depth.ok_or_else(|| Error::DegenerateProblem(family.name().to_string()))?;
    Ok(AdvancedReport { mode, depth, excluded, per_half })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The exhaustive count disagrees with a published figure.
    Flag,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Flag => "FLAG",
        })
    }
}

/// One row of the speedup table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleVerdict {
    pub family: String,
    pub problem: String,
    pub mode: HalfMode,
    pub classical_depth: usize,
    pub advanced_depth: usize,
    pub excluded_half_count: usize,
    pub quantum_queries: usize,
    pub verdict: Verdict,
}

impl RuleVerdict {
    pub const TSV_HEADER: &'static str =
        "family\tproblem\tclassical_depth\tadvanced_depth\texcluded_half_count\tquantum_queries\tverdict";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.family,
            self.problem,
            self.classical_depth,
            self.advanced_depth,
            self.excluded_half_count,
            self.quantum_queries,
            self.verdict
        )
    }
}

/// Short name of what `sigma` asks for.
pub fn problem_name(family: &FunctionFamily) -> &'static str {
    match family.kind() {
        FamilyKind::Deutsch | FamilyKind::DeutschJozsa => "balanced",
        FamilyKind::BernsteinVazirani => "hidden-string",
        FamilyKind::Simon => "period",
        FamilyKind::Grover => "location",
        FamilyKind::Minute => "parity",
        FamilyKind::Perm => "partition",
        FamilyKind::Custom => "custom",
    }
}

/// PASS iff the quantum query count equals the advanced-information depth.
pub fn check_fifty_percent_rule(
    family: &FunctionFamily,
    quantum_queries: usize,
    mode: HalfMode,
) -> Result<RuleVerdict> {
    let classical = classical_query_complexity(family)?;
    let advanced = advanced_query_complexity(family, mode)?;
    Ok(RuleVerdict {
        family: family.name().to_string(),
        problem: problem_name(family).to_string(),
        mode,
        classical_depth: classical.depth,
        advanced_depth: advanced.depth,
        excluded_half_count: advanced.excluded.len(),
        quantum_queries,
        verdict: if quantum_queries == advanced.depth { Verdict::Pass } else { Verdict::Fail },
    })
}
