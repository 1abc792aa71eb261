//! Finite black-box function families with their solution labelling.
//!
//! Every family is a list of members `f_k : {0,1}^x_bits -> {0,1}^v_bits`
//! sorted by their `k` label, plus the label `sigma(k)` the second player has
//! to find. The built-in catalog reproduces the tables the algorithms are
//! usually illustrated with; [`crate::format`] reads and writes the same data
//! as text.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::bits::{bits, Bits};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Deutsch,
    DeutschJozsa,
    BernsteinVazirani,
    Simon,
    Grover,
    Minute,
    Perm,
    Custom,
}

impl FamilyKind {
    /// Infers the structure from a family name such as `dj2` or `simon3`.
    pub fn from_name(name: &str) -> Self {
        match name.parse::<BuiltinFamily>() {
            Ok(b) => b.kind(),
            Err(_) => FamilyKind::Custom,
        }
    }

    /// Whether `k` is the concatenated table of the function.
    pub fn k_is_table(self) -> bool {
        !matches!(self, FamilyKind::Grover | FamilyKind::Custom)
    }
}

/// Structure declared for a single member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberMeta {
    /// Simon period `h`: `f(x) = f(y)` iff `x = y` or `x = y xor h`.
    Period(Bits),
    /// Bernstein-Vazirani hidden string `a`: `f(x) = a.x mod 2`.
    Hidden(Bits),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFunction {
    k_label: Bits,
    table: Vec<Bits>,
}

impl OracleFunction {
    pub fn new(k_label: Bits, table: Vec<Bits>) -> Self {
        Self { k_label, table }
    }

    /// Builds a member whose label is its own concatenated table.
    pub fn from_table(table: Vec<Bits>) -> Self {
        let k_label = table
            .iter()
            .copied()
            .reduce(Bits::concat)
            .unwrap_or_else(|| Bits::zeros(0));
        Self { k_label, table }
    }

    pub fn k_label(&self) -> Bits {
        self.k_label
    }

    pub fn table(&self) -> &[Bits] {
        &self.table
    }

    pub fn value(&self, x: usize) -> Bits {
        self.table[x]
    }

    fn concatenated(&self) -> Option<Bits> {
        let width: usize = self.table.iter().map(|b| b.width()).sum();
        (width <= crate::bits::MAX_WIDTH)
            .then(|| self.table.iter().copied().reduce(Bits::concat))
            .flatten()
    }

    fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    fn ones(&self) -> usize {
        self.table.iter().filter(|v| v.value() == 1).count()
    }
}

/// `(a, c)` with `f(x) = a.x xor c`, if the single-bit function is affine.
pub fn affine_part(table: &[Bits], x_bits: usize) -> Option<(Bits, bool)> {
    if table.len() != 1 << x_bits || table.iter().any(|v| v.width() != 1) {
        return None;
    }
    let c = table[0].value() == 1;
    let a = (0..x_bits).fold(0u64, |acc, i| {
        let unit = 1usize << (x_bits - 1 - i);
        (acc << 1) | u64::from((table[unit].value() == 1) != c)
    });
    let a = Bits::new(a, x_bits);
    Bits::all(x_bits)
        .all(|x| (table[x.index()].value() == 1) == (a.dot(x) != c))
        .then_some((a, c))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFamily {
    name: String,
    kind: FamilyKind,
    x_bits: usize,
    v_bits: usize,
    solution_bits: usize,
    members: Vec<OracleFunction>,
    solutions: Vec<Bits>,
    meta: Vec<Option<MemberMeta>>,
}

/// One member as handed to [`FunctionFamily::from_parts`].
#[derive(Clone, Debug, PartialEq)]
pub struct MemberSpec {
    pub function: OracleFunction,
    pub solution: Bits,
    pub meta: Option<MemberMeta>,
}

impl FunctionFamily {
    /// Assembles a family, sorting members by `k` label. Structural checks
    /// are left to [`validate_family`].
    pub fn from_parts(
        name: &str,
        kind: FamilyKind,
        x_bits: usize,
        v_bits: usize,
        solution_bits: usize,
        mut members: Vec<MemberSpec>,
    ) -> Self {
        members.sort_by_key(|m| m.function.k_label);
        let mut fam = Self {
            name: name.to_string(),
            kind,
            x_bits,
            v_bits,
            solution_bits,
            members: Vec::with_capacity(members.len()),
            solutions: Vec::with_capacity(members.len()),
            meta: Vec::with_capacity(members.len()),
        };
        for m in members {
            fam.members.push(m.function);
            fam.solutions.push(m.solution);
            fam.meta.push(m.meta);
        }
        fam
    }

    /// A validated family with no declared structure.
    pub fn custom(
        name: &str,
        x_bits: usize,
        v_bits: usize,
        members: Vec<(Bits, Vec<Bits>, Bits)>,
    ) -> Result<Self> {
        let solution_bits = members.first().map_or(0, |m| m.2.width());
        let specs = members
            .into_iter()
            .map(|(k, table, solution)| MemberSpec {
                function: OracleFunction::new(k, table),
                solution,
                meta: None,
            })
            .collect();
        let fam = Self::from_parts(name, FamilyKind::Custom, x_bits, v_bits, solution_bits, specs);
        match validate_family(&fam).into_iter().next() {
            None => Ok(fam),
            Some(v) => Err(Error::Parse { line: 0, message: v.to_string() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn x_bits(&self) -> usize {
        self.x_bits
    }

    pub fn v_bits(&self) -> usize {
        self.v_bits
    }

    pub fn solution_bits(&self) -> usize {
        self.solution_bits
    }

    pub fn rows(&self) -> usize {
        1 << self.x_bits
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[OracleFunction] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &OracleFunction {
        &self.members[k]
    }

    pub fn k_labels(&self) -> Vec<Bits> {
        self.members.iter().map(|m| m.k_label).collect()
    }

    pub fn k_index(&self, label: Bits) -> Option<usize> {
        self.members.iter().position(|m| m.k_label == label)
    }

    pub fn solution(&self, k: usize) -> Bits {
        self.solutions[k]
    }

    pub fn solutions(&self) -> &[Bits] {
        &self.solutions
    }

    pub fn meta(&self, k: usize) -> Option<MemberMeta> {
        self.meta[k]
    }

    pub fn value(&self, k: usize, x: usize) -> Bits {
        self.members[k].table[x]
    }

    /// Labels the final `X` readout is correlated with. For
    /// Deutsch-Jozsa families whose members are all affine this is the
    /// linear part `a` of `f(x) = a.x xor c`, which is all zeroes exactly for
    /// the constant members; everywhere else it is `sigma(k)`.
    pub fn readout_labels(&self) -> Vec<Bits> {
        if matches!(self.kind, FamilyKind::DeutschJozsa | FamilyKind::Deutsch) {
            let affine: Option<Vec<Bits>> = self
                .members
                .iter()
                .map(|m| affine_part(&m.table, self.x_bits).map(|(a, _)| a))
                .collect();
            if let Some(a) = affine {
                return a;
            }
        }
        self.solutions.clone()
    }

    /// Copy with one member's solution replaced; used to build invalid
    /// variants in tests and fixtures.
    pub fn with_solution(&self, k: usize, solution: Bits) -> Self {
        let mut f = self.clone();
        f.solutions[k] = solution;
        f
    }

    pub fn with_meta(&self, k: usize, meta: Option<MemberMeta>) -> Self {
        let mut f = self.clone();
        f.meta[k] = meta;
        f
    }

    pub fn with_table(&self, k: usize, table: Vec<Bits>) -> Self {
        let mut f = self.clone();
        f.members[k].table = table;
        f
    }

    pub fn with_solutions(&self, solutions: Vec<Bits>) -> Self {
        assert_eq!(solutions.len(), self.len());
        let mut f = self.clone();
        f.solution_bits = solutions.first().map_or(0, |s| s.width());
        f.solutions = solutions;
        f
    }

    pub(crate) fn member_specs(&self) -> impl Iterator<Item = (&OracleFunction, Bits, Option<MemberMeta>)> {
        self.members
            .iter()
            .zip(&self.solutions)
            .zip(&self.meta)
            .map(|((f, s), m)| (f, *s, *m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinFamily {
    Deutsch,
    Dj(usize),
    Bv(usize),
    Simon(usize),
    Grover(usize),
    Minute,
    Perm,
}

impl BuiltinFamily {
    pub fn kind(self) -> FamilyKind {
        match self {
            BuiltinFamily::Deutsch => FamilyKind::Deutsch,
            BuiltinFamily::Dj(_) => FamilyKind::DeutschJozsa,
            BuiltinFamily::Bv(_) => FamilyKind::BernsteinVazirani,
            BuiltinFamily::Simon(_) => FamilyKind::Simon,
            BuiltinFamily::Grover(_) => FamilyKind::Grover,
            BuiltinFamily::Minute => FamilyKind::Minute,
            BuiltinFamily::Perm => FamilyKind::Perm,
        }
    }

    /// The families the report covers, in report order.
    pub fn catalog() -> Vec<BuiltinFamily> {
        use BuiltinFamily::*;
        vec![
            Deutsch,
            Dj(2),
            Bv(2),
            Simon(2),
            Grover(2),
            Grover(3),
            Grover(4),
            Minute,
            Perm,
        ]
    }
}

impl fmt::Display for BuiltinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinFamily::Deutsch => f.write_str("deutsch"),
            BuiltinFamily::Dj(n) => write!(f, "dj{n}"),
            BuiltinFamily::Bv(n) => write!(f, "bv{n}"),
            BuiltinFamily::Simon(n) => write!(f, "simon{n}"),
            BuiltinFamily::Grover(n) => write!(f, "grover{n}"),
            BuiltinFamily::Minute => f.write_str("minute"),
            BuiltinFamily::Perm => f.write_str("perm"),
        }
    }
}

impl FromStr for BuiltinFamily {
    type Err = Error;

    /// Accepts `deutsch`, `minute`, `perm` and `dj2`, `dj(2)`, `grover4`, ...
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(s.to_string());
        match s {
            "deutsch" => return Ok(BuiltinFamily::Deutsch),
            "minute" => return Ok(BuiltinFamily::Minute),
            "perm" => return Ok(BuiltinFamily::Perm),
            _ => {}
        }
        let split = s.find(|c: char| !c.is_ascii_alphabetic()).ok_or_else(unknown)?;
        let (head, tail) = s.split_at(split);
        let digits = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(tail);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        match head {
            "dj" => Ok(BuiltinFamily::Dj(n)),
            "bv" => Ok(BuiltinFamily::Bv(n)),
            "simon" => Ok(BuiltinFamily::Simon(n)),
            "grover" => Ok(BuiltinFamily::Grover(n)),
            _ => Err(unknown()),
        }
    }
}

/// Partition of the 24 permutation functions by the `X` outcome their
/// conditional state lands on after one evaluation and Hadamard on `X`.
/// Frozen from [`crate::algorithms::derive_partitions`]; the unit tests there
/// re-derive it.
const PERM_PARTITIONS: [(&str, &str); 24] = [
    ("00011011", "11"),
    ("00011110", "01"),
    ("00100111", "11"),
    ("00101101", "01"),
    ("00110110", "10"),
    ("00111001", "10"),
    ("01001011", "01"),
    ("01001110", "11"),
    ("01100011", "10"),
    ("01101100", "10"),
    ("01110010", "11"),
    ("01111000", "01"),
    ("10000111", "01"),
    ("10001101", "11"),
    ("10010011", "10"),
    ("10011100", "10"),
    ("10110001", "11"),
    ("10110100", "01"),
    ("11000110", "10"),
    ("11001001", "10"),
    ("11010010", "01"),
    ("11011000", "11"),
    ("11100001", "01"),
    ("11100100", "11"),
];

fn size_error(b: BuiltinFamily, detail: &str) -> Error {
    Error::Size { family: b.to_string(), detail: detail.to_string() }
}

fn table_member(table: Vec<Bits>, solution: Bits, meta: Option<MemberMeta>) -> MemberSpec {
    MemberSpec { function: OracleFunction::from_table(table), solution, meta }
}

pub fn builtin(which: BuiltinFamily) -> Result<FunctionFamily> {
    let name = which.to_string();
    let kind = which.kind();
    let fam = match which {
        BuiltinFamily::Deutsch => {
            let members = Bits::all(2)
                .map(|k| {
                    let table = k.chunks(1);
                    let balanced = table[0] != table[1];
                    table_member(table, Bits::new(balanced as u64, 1), None)
                })
                .collect();
            FunctionFamily::from_parts(&name, kind, 1, 1, 1, members)
        }
        BuiltinFamily::Dj(n) => {
            if !(2..=3).contains(&n) {
                return Err(size_error(which, "dj is available for n = 2 and n = 3"));
            }
            let rows = 1usize << n;
            let members = Bits::all(rows)
                .filter_map(|k| {
                    let ones = k.count_ones() as usize;
                    let constant = ones == 0 || ones == rows;
                    (constant || 2 * ones == rows)
                        .then(|| table_member(k.chunks(1), Bits::new(!constant as u64, 1), None))
                })
                .collect();
            FunctionFamily::from_parts(&name, kind, n, 1, 1, members)
        }
        BuiltinFamily::Bv(n) => {
            if !(1..=4).contains(&n) {
                return Err(size_error(which, "bv is available for 1 <= n <= 4"));
            }
            let members = Bits::all(n)
                .map(|a| {
                    let table = Bits::all(n).map(|x| Bits::new(a.dot(x) as u64, 1)).collect();
                    table_member(table, a, Some(MemberMeta::Hidden(a)))
                })
                .collect();
            FunctionFamily::from_parts(&name, kind, n, 1, n, members)
        }
        BuiltinFamily::Simon(n) => {
            if !(2..=3).contains(&n) {
                return Err(size_error(which, "simon is available for n = 2 and n = 3"));
            }
            FunctionFamily::from_parts(&name, kind, n, n - 1, n, simon_members(n))
        }
        BuiltinFamily::Grover(n) => {
            if !(1..=4).contains(&n) {
                return Err(size_error(which, "grover is available for 1 <= n <= 4"));
            }
            let members = Bits::all(n)
                .map(|k| MemberSpec {
                    function: OracleFunction::new(
                        k,
                        Bits::all(n).map(|x| Bits::new((x == k) as u64, 1)).collect(),
                    ),
                    solution: k,
                    meta: None,
                })
                .collect();
            FunctionFamily::from_parts(&name, kind, n, 1, n, members)
        }
        BuiltinFamily::Minute => {
            let codomain = [bits("00"), bits("01"), bits("10")];
            let mut members = Vec::new();
            for a in codomain {
                for b in codomain {
                    let k = a.concat(b);
                    members.push(table_member(vec![a, b], Bits::new(k.parity() as u64, 1), None));
                }
            }
            FunctionFamily::from_parts(&name, kind, 1, 2, 1, members)
        }
        BuiltinFamily::Perm => {
            let partition: HashMap<Bits, Bits> =
                PERM_PARTITIONS.iter().map(|(k, p)| (bits(k), bits(p))).collect();
            let members = permutations(&Bits::all(2).collect::<Vec<_>>())
                .into_iter()
                .map(|table| {
                    let f = OracleFunction::from_table(table);
                    let solution = partition[&f.k_label];
                    MemberSpec { function: f, solution, meta: None }
                })
                .collect();
            FunctionFamily::from_parts(&name, kind, 2, 2, 2, members)
        }
    };
    Ok(fam)
}

pub fn builtin_by_name(name: &str) -> Result<FunctionFamily> {
    builtin(name.parse()?)
}

fn permutations(items: &[Bits]) -> Vec<Vec<Bits>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, *first);
            out.push(tail);
        }
    }
    out
}

/// All two-to-one functions `{0,1}^n -> {0,1}^(n-1)` with a nonzero period.
fn simon_members(n: usize) -> Vec<MemberSpec> {
    let values: Vec<Bits> = Bits::all(n - 1).collect();
    let mut members = Vec::new();
    for h in Bits::all(n).filter(|h| !h.is_zero()) {
        // coset representatives in increasing order
        let reps: Vec<Bits> = Bits::all(n).filter(|x| *x < x.xor(h)).collect();
        for assignment in permutations(&values) {
            let mut table = vec![Bits::zeros(n - 1); 1 << n];
            for (rep, value) in reps.iter().zip(&assignment) {
                table[rep.index()] = *value;
                table[rep.xor(h).index()] = *value;
            }
            members.push(table_member(table, h, Some(MemberMeta::Period(h))));
        }
    }
    members
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub member: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.member {
            Some(k) => write!(f, "k={k}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Every structural invariant the family breaks. Empty means valid.
pub fn validate_family(family: &FunctionFamily) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |member: Option<Bits>, message: String| {
        out.push(Violation { member: member.map(|k| k.to_string()), message });
    };
    if family.is_empty() {
        push(None, "family has no members".into());
        return out;
    }
    let rows = family.rows();
    let mut seen = BTreeSet::new();
    for (f, solution, meta) in family.member_specs() {
        let k = f.k_label;
        if !seen.insert(k) {
            push(Some(k), "duplicate k label".into());
        }
        if f.table.len() != rows {
            push(Some(k), format!("table has {} rows, expected {rows}", f.table.len()));
            continue;
        }
        if let Some(v) = f.table.iter().find(|v| v.width() != family.v_bits) {
            push(Some(k), format!("value {v} is not {} bits wide", family.v_bits));
            continue;
        }
        if solution.width() != family.solution_bits {
            push(Some(k), format!("solution {solution} is not {} bits wide", family.solution_bits));
        }
        if family.kind.k_is_table() && f.concatenated() != Some(k) {
            push(Some(k), "k label is not the concatenated table".into());
        }
        match family.kind {
            FamilyKind::Deutsch | FamilyKind::DeutschJozsa => {
                let ones = f.ones();
                if family.v_bits != 1 || !(f.is_constant() || 2 * ones == rows) {
                    push(Some(k), "neither constant nor balanced".into());
                } else if solution.value() != u64::from(!f.is_constant()) {
                    push(Some(k), "solution does not flag balanced functions".into());
                }
            }
            FamilyKind::Grover => {
                let ok = k.width() == family.x_bits
                    && f.table.iter().enumerate().all(|(x, v)| v.value() == u64::from(x == k.index()));
                if !ok {
                    push(Some(k), "not the Kronecker delta of its location".into());
                }
            }
            FamilyKind::Minute => {
                if solution.value() != u64::from(k.parity()) {
                    push(Some(k), "solution is not the parity of k".into());
                }
            }
            FamilyKind::Perm => {
                let distinct: BTreeSet<Bits> = f.table.iter().copied().collect();
                if distinct.len() != rows || family.v_bits != family.x_bits {
                    push(Some(k), "table is not a permutation".into());
                }
            }
            _ => {}
        }
        match meta {
            Some(MemberMeta::Period(h)) => {
                if h.width() != family.x_bits {
                    push(Some(k), format!("period {h} is not {} bits wide", family.x_bits));
                } else if h.is_zero() {
                    push(Some(k), "all zeroes period".into());
                } else if !is_two_to_one(f, h) {
                    push(Some(k), format!("not two-to-one with period {h}"));
                }
            }
            Some(MemberMeta::Hidden(a)) => {
                let linear = a.width() == family.x_bits
                    && family.v_bits == 1
                    && Bits::all(family.x_bits).all(|x| f.table[x.index()].value() == a.dot(x) as u64);
                if !linear {
                    push(Some(k), format!("not the linear function a.x for a={a}"));
                }
            }
            None => {
                if matches!(family.kind, FamilyKind::Simon | FamilyKind::BernsteinVazirani) {
                    push(Some(k), "missing structure metadata".into());
                }
            }
        }
    }
    if !family.is_empty() {
        let mut by_table: HashMap<&[Bits], (Bits, Bits)> = HashMap::new();
        for (f, solution, _) in family.member_specs() {
            if let Some((other, s)) = by_table.insert(&f.table, (f.k_label, solution)) {
                if s != solution {
                    push(Some(f.k_label), format!("same table as {other} with a different solution"));
                }
            }
        }
    }
    out
}

fn is_two_to_one(f: &OracleFunction, h: Bits) -> bool {
    let n = h.width();
    Bits::all(n).all(|x| {
        Bits::all(n).all(|y| {
            let same = f.table[x.index()] == f.table[y.index()];
            same == (x == y || x == y.xor(h))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: &FunctionFamily, k: &str) -> Vec<String> {
        let i = f.k_index(bits(k)).unwrap();
        f.member(i).table().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn deutsch_matches_its_table() {
        let f = builtin(BuiltinFamily::Deutsch).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(table(&f, "01"), ["0", "1"]);
        assert_eq!(f.solution(f.k_index(bits("01")).unwrap()), bits("1"));
        assert_eq!(f.solution(f.k_index(bits("11")).unwrap()), bits("0"));
    }

    #[test]
    fn dj2_has_two_constant_and_six_balanced() {
        let f = builtin(BuiltinFamily::Dj(2)).unwrap();
        let labels: Vec<String> = f.k_labels().iter().map(|k| k.to_string()).collect();
        assert_eq!(
            labels,
            ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]
        );
        let constant = f.solutions().iter().filter(|s| s.is_zero()).count();
        assert_eq!((constant, f.len() - constant), (2, 6));
        let dj3 = builtin(BuiltinFamily::Dj(3)).unwrap();
        assert_eq!(dj3.len(), 2 + 70);
    }

    #[test]
    fn simon2_matches_its_table() {
        let f = builtin(BuiltinFamily::Simon(2)).unwrap();
        assert_eq!(f.len(), 6);
        let expected = [
            ("0011", "01"),
            ("1100", "01"),
            ("0101", "10"),
            ("1010", "10"),
            ("0110", "11"),
            ("1001", "11"),
        ];
        for (k, h) in expected {
            let i = f.k_index(bits(k)).unwrap();
            assert_eq!(f.meta(i), Some(MemberMeta::Period(bits(h))));
            assert_eq!(f.solution(i), bits(h));
        }
        assert_eq!(builtin(BuiltinFamily::Simon(3)).unwrap().len(), 7 * 24);
    }

    #[test]
    fn grover_is_kronecker_delta() {
        let f = builtin(BuiltinFamily::Grover(2)).unwrap();
        assert_eq!(table(&f, "10"), ["0", "0", "1", "0"]);
    }

    #[test]
    fn minute_matches_its_table() {
        let f = builtin(BuiltinFamily::Minute).unwrap();
        let listed = ["0000", "0001", "0100", "0101", "0010", "1000", "1001", "0110", "1010"];
        let labels: BTreeSet<String> = f.k_labels().iter().map(|k| k.to_string()).collect();
        assert_eq!(labels, listed.iter().map(|s| s.to_string()).collect());
        assert_eq!(table(&f, "0110"), ["01", "10"]);
        assert_eq!(f.solution(f.k_index(bits("0101")).unwrap()), bits("0"));
        assert_eq!(f.solution(f.k_index(bits("0001")).unwrap()), bits("1"));
    }

    #[test]
    fn perm_has_24_members_and_three_blocks() {
        let f = builtin(BuiltinFamily::Perm).unwrap();
        assert_eq!(f.len(), 24);
        assert_eq!(table(&f, "00011110"), ["00", "01", "11", "10"]);
        for p in ["01", "10", "11"] {
            assert_eq!(f.solutions().iter().filter(|s| **s == bits(p)).count(), 8);
        }
    }

    #[test]
    fn builtins_validate_and_are_deterministic() {
        for b in BuiltinFamily::catalog()
            .into_iter()
            .chain([BuiltinFamily::Dj(3), BuiltinFamily::Simon(3), BuiltinFamily::Bv(3)])
        {
            let f = builtin(b).unwrap();
            assert_eq!(validate_family(&f), vec![], "{b}");
            assert_eq!(f, builtin(b).unwrap());
        }
    }

    #[test]
    fn unsupported_sizes() {
        for b in [BuiltinFamily::Dj(4), BuiltinFamily::Simon(4), BuiltinFamily::Grover(5)] {
            assert!(matches!(builtin(b), Err(Error::Size { .. })), "{b}");
        }
    }

    #[test]
    fn names_round_trip() {
        for b in BuiltinFamily::catalog() {
            assert_eq!(b.to_string().parse::<BuiltinFamily>().unwrap(), b);
        }
        assert_eq!("dj(2)".parse::<BuiltinFamily>().unwrap(), BuiltinFamily::Dj(2));
        assert!(matches!("nosuch".parse::<BuiltinFamily>(), Err(Error::UnknownFamily(_))));
        assert!(matches!("grover".parse::<BuiltinFamily>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn zero_period_is_a_violation() {
        let f = builtin(BuiltinFamily::Simon(2)).unwrap();
        let bad = f.with_meta(0, Some(MemberMeta::Period(bits("00"))));
        let v = validate_family(&bad);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].message, "all zeroes period");
    }

    #[test]
    fn unbalanced_dj_member_is_a_violation() {
        let f = builtin(BuiltinFamily::Dj(2)).unwrap();
        let bad = f.with_table(1, vec![bits("1"), bits("1"), bits("1"), bits("0")]);
        let messages: Vec<String> = validate_family(&bad).into_iter().map(|v| v.message).collect();
        assert!(messages.contains(&"neither constant nor balanced".to_string()), "{messages:?}");
    }

    #[test]
    fn broken_linearity_is_a_violation() {
        let f = builtin(BuiltinFamily::Bv(2)).unwrap();
        let bad = f.with_meta(0, Some(MemberMeta::Hidden(bits("11"))));
        assert!(validate_family(&bad)
            .iter()
            .any(|v| v.message.starts_with("not the linear function")));
    }

    #[test]
    fn affine_parts_of_dj2() {
        let f = builtin(BuiltinFamily::Dj(2)).unwrap();
        let labels = f.readout_labels();
        for (k, a) in [("0000", "00"), ("1111", "00"), ("0011", "10"), ("1100", "10"), ("0110", "11")] {
            assert_eq!(labels[f.k_index(bits(k)).unwrap()], bits(a), "{k}");
        }
        // dj3 contains non-affine balanced functions, so it falls back to sigma
        let dj3 = builtin(BuiltinFamily::Dj(3)).unwrap();
        assert_eq!(dj3.readout_labels(), dj3.solutions());
    }
}
