//! Scripted extended runs: prepare, evaluate, rotate `X`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::{builtin, BuiltinFamily, FamilyKind, FunctionFamily, MemberMeta};
use crate::gates::{basis_swap, grover_readout, hadamard};
use crate::gf2::{rank, solve_mod2};
use crate::readout::{conditional_x_states, default_label_map, synthesize_readout, verify_correlation, ReadoutUnitary};
use crate::state::{prepare_extended, Distribution, PhaseAssignment, RegisterLayout, StateVector, VPreparation, K, TOL, X};

/// Which rotation to apply to `X` after the evaluation.
#[derive(Clone, Debug)]
pub enum Readout {
    /// The fixed gate the algorithm is known by.
    Paper,
    /// Derived from the post-evaluation state.
    Synthesized,
    Custom(ReadoutUnitary),
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub family: String,
    pub steps: Vec<String>,
    pub states: Vec<(String, StateVector)>,
    pub quantum_queries: usize,
    pub correlated: bool,
    pub samples: Vec<Bits>,
    pub seed: Option<u64>,
    /// `P(X = target | K = k)` after each iteration, starting with none.
    pub probabilities: Vec<f64>,
}

impl RunReport {
    fn new(family: &str) -> Self {
        Self {
            family: family.to_string(),
            steps: Vec::new(),
            states: Vec::new(),
            quantum_queries: 0,
            correlated: false,
            samples: Vec::new(),
            seed: None,
            probabilities: Vec::new(),
        }
    }

    fn record(&mut self, step: &str, state: &StateVector) {
        self.steps.push(step.to_string());
        self.states.push((step.to_string(), state.clone()));
    }

    pub fn state(&self, step: &str) -> Option<&StateVector> {
        self.states.iter().find(|(s, _)| s == step).map(|(_, s)| s)
    }

    pub fn last_state(&self) -> &StateVector {
        &self.states.last().expect("at least one stage").1
    }
}

/// `V` preparation the textbook run uses: all zeroes for Simon, the
/// antisymmetric state everywhere else.
pub fn standard_vprep(family: &FunctionFamily) -> VPreparation {
    match family.kind() {
        FamilyKind::Simon => VPreparation::zeros(),
        _ => VPreparation::antisymmetric(),
    }
}

/// The textbook rotation on `X`: `H O H` for search, Hadamard otherwise.
pub fn paper_readout(family: &FunctionFamily) -> Result<ReadoutUnitary> {
    let matrix = match family.kind() {
        FamilyKind::Grover => grover_readout(family.x_bits()),
        FamilyKind::Custom => {
            return Err(Error::Separation(format!("{} has no fixed readout", family.name())))
        }
        _ => hadamard(family.x_bits()),
    };
    ReadoutUnitary::new(matrix, default_label_map(&family.readout_labels(), family.x_bits()))
}

/// Swap of `|01>` and `|10>` after Hadamard, reading `h` from one query
/// with antisymmetric `V`. Two-bit Simon only.
pub fn simon_swap_readout(family: &FunctionFamily) -> Result<ReadoutUnitary> {
    if family.kind() != FamilyKind::Simon || family.x_bits() != 2 {
        return Err(Error::Size {
            family: family.name().to_string(),
            detail: "the swap readout is defined for simon2 only".into(),
        });
    }
    ReadoutUnitary::new(
        basis_swap(4, 1, 2) * hadamard(2),
        default_label_map(&family.readout_labels(), 2),
    )
}

pub fn synthesized_readout(state: &StateVector, family: &FunctionFamily) -> Result<ReadoutUnitary> {
    let c = conditional_x_states(state, family)?;
    synthesize_readout(&c, &default_label_map(&family.readout_labels(), family.x_bits()))
}

fn initial_state(family: &FunctionFamily, vprep: &VPreparation) -> Result<StateVector> {
    let layout = Arc::new(RegisterLayout::for_family(family)?);
    prepare_extended(layout, vprep, &PhaseAssignment::uniform())
}

/// Prepare, one oracle call, readout. Stages are named `psi0`, `psi1`,
/// `psi2`.
pub fn run_extended(family: &FunctionFamily, vprep: &VPreparation, readout: Readout) -> Result<RunReport> {
    let mut report = RunReport::new(family.name());
    let psi0 = initial_state(family, vprep)?;
    report.record("psi0", &psi0);
    let psi1 = psi0.apply_oracle(family)?;
    report.quantum_queries += 1;
    report.record("psi1", &psi1);
    let u = match readout {
        Readout::Paper => paper_readout(family)?,
        Readout::Synthesized => synthesized_readout(&psi1, family)?,
        Readout::Custom(u) => u,
    };
    let psi2 = psi1.apply_on_register(X, &u.matrix)?;
    report.record("psi2", &psi2);
    report.correlated = verify_correlation(&psi1, &u, family);
    Ok(report)
}

/// One query with antisymmetric `V` and the swap readout.
pub fn run_simon_optimal() -> Result<RunReport> {
    let family = builtin(BuiltinFamily::Simon(2))?;
    let u = simon_swap_readout(&family)?;
    run_extended(&family, &VPreparation::antisymmetric(), Readout::Custom(u))
}

pub fn run_minute() -> Result<RunReport> {
    run_extended(&builtin(BuiltinFamily::Minute)?, &VPreparation::antisymmetric(), Readout::Paper)
}

/// Largest `t` with `(2t + 1) asin(2^(-n/2)) <= pi/2`.
pub fn grover_auto_iterations(n: usize) -> usize {
    let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
    (PI / (4.0 * theta)).floor() as usize
}

/// Mean over `k` of `P(X = label | K = k)`.
fn correlation_probability(state: &StateVector, family: &FunctionFamily) -> Result<f64> {
    let map = default_label_map(&family.readout_labels(), family.x_bits());
    let labels = family.readout_labels();
    let mut total = 0.0;
    for (k, label) in labels.iter().enumerate() {
        let d = state.conditional_distribution(K, k, X)?;
        total += d.probs()[map[label]];
    }
    Ok(total / labels.len() as f64)
}

pub fn grover_iterate(n: usize, iterations: Option<usize>) -> Result<RunReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::Size {
            family: format!("grover{n}"),
            detail: "iteration runs need 2 <= n <= 4".into(),
        });
    }
    let family = builtin(BuiltinFamily::Grover(n))?;
    let t = iterations.unwrap_or_else(|| grover_auto_iterations(n));
    let u = grover_readout(n);
    let mut report = RunReport::new(family.name());
    let mut psi = initial_state(&family, &VPreparation::antisymmetric())?;
    report.record("psi0", &psi);
    report.probabilities.push(correlation_probability(&psi, &family)?);
    for i in 1..=t {
        psi = psi.apply_oracle(&family)?;
        report.quantum_queries += 1;
        psi = psi.apply_on_register(X, &u)?;
        report.record(&format!("iteration{i}"), &psi);
        report.probabilities.push(correlation_probability(&psi, &family)?);
    }
    report.correlated = report.probabilities.last().is_some_and(|p| *p >= 1.0 - TOL);
    Ok(report)
}

fn sample<R: Rng>(dist: &Distribution, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let probs = dist.probs();
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimonRun {
    pub k_label: Bits,
    pub h: Bits,
    pub samples: Vec<Bits>,
    pub queries: usize,
    pub seed: u64,
}

pub const SIMON_MAX_ITERATIONS: usize = 1000;

/// Measures `K` once, then repeats the `X`, `V` part until `n - 1`
/// independent nonzero strings orthogonal to the period are seen.
pub fn simon_sample_loop(n: usize, seed: u64) -> Result<SimonRun> {
    let family = builtin(BuiltinFamily::Simon(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi0 = initial_state(&family, &VPreparation::zeros())?;
    let k = sample(&psi0.measure_distribution(K)?, &mut rng);
    let start = psi0.collapse(K, k)?;
    let h_gate = hadamard(n);
    let mut samples = Vec::new();
    let mut basis: Vec<Bits> = Vec::new();
    let mut queries = 0;
    while basis.len() < n - 1 {
        if queries == SIMON_MAX_ITERATIONS {
            return Err(Error::NonTermination(SIMON_MAX_ITERATIONS));
        }
        let psi = start.apply_oracle(&family)?.apply_on_register(X, &h_gate)?;
        queries += 1;
        let s = Bits::new(sample(&psi.measure_distribution(X)?, &mut rng) as u64, n);
        samples.push(s);
        let mut candidate = basis.clone();
        candidate.push(s);
        if !s.is_zero() && rank(&candidate) == candidate.len() {
            basis = candidate;
        }
    }
    Ok(SimonRun {
        k_label: family.member(k).k_label(),
        h: solve_mod2(&basis, n)?,
        samples,
        queries,
        seed,
    })
}

/// Groups members by the `X` outcome their conditional state is sharp on
/// after one evaluation with antisymmetric `V` and Hadamard on `X`.
pub fn derive_partitions(family: &FunctionFamily) -> Result<BTreeMap<Bits, Vec<usize>>> {
    let psi = initial_state(family, &VPreparation::antisymmetric())?
        .apply_oracle(family)?
        .apply_on_register(X, &hadamard(family.x_bits()))?;
    let mut blocks: BTreeMap<Bits, Vec<usize>> = BTreeMap::new();
    for k in 0..family.len() {
        let d = psi.conditional_distribution(K, k, X)?;
        let (x, p) = d
            .probs()
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
        if p < 1.0 - TOL {
            return Err(Error::ModelMismatch(format!(
                "k={} spreads over several X outcomes",
                family.member(k).k_label()
            )));
        }
        blocks.entry(Bits::new(x as u64, family.x_bits())).or_default().push(k);
    }
    let size = family.len() / 3;
    if blocks.len() != 3 || blocks.values().any(|b| b.len() != size) {
        let sizes: Vec<usize> = blocks.values().map(Vec::len).collect();
        return Err(Error::ModelMismatch(format!("expected 3 equal blocks, got sizes {sizes:?}")));
    }
    Ok(blocks)
}

/// The family with each member's solution set to its derived block.
pub fn freeze_partitions(family: &FunctionFamily) -> Result<FunctionFamily> {
    let blocks = derive_partitions(family)?;
    let mut solutions = vec![Bits::zeros(family.x_bits()); family.len()];
    for (label, ks) in &blocks {
        for &k in ks {
            solutions[k] = *label;
        }
    }
    Ok(family.with_solutions(solutions))
}

/// Rotation used for the backdating comparison: the fixed readout where
/// one exists, otherwise Hadamard.
fn backdating_gate(family: &FunctionFamily) -> crate::gates::CMatrix {
    paper_readout(family).map_or_else(|_| hadamard(family.x_bits()), |u| u.matrix)
}

/// Measuring `K` before or after the run gives the same `X` statistics.
pub fn backdating_check(family: &FunctionFamily) -> Result<bool> {
    let vprep = standard_vprep(family);
    let u = backdating_gate(family);
    let psi0 = initial_state(family, &vprep)?;
    let after = psi0.apply_oracle(family)?.apply_on_register(X, &u)?;
    for k in 0..family.len() {
        let late = after.conditional_distribution(K, k, X)?;
        let early = psi0
            .collapse(K, k)?
            .apply_oracle(family)?
            .apply_on_register(X, &u)?
            .measure_distribution(X)?;
        if late.max_abs_diff(&early) > TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Period metadata of member `k`, when the family carries it.
pub fn period(family: &FunctionFamily, k: usize) -> Option<Bits> {
    match family.meta(k) {
        Some(MemberMeta::Period(h)) => Some(h),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn single_query_runs_correlate() {
        for b in [BuiltinFamily::Deutsch, BuiltinFamily::Dj(2), BuiltinFamily::Bv(2), BuiltinFamily::Grover(2)] {
            let f = builtin(b).unwrap();
            for readout in [Readout::Paper, Readout::Synthesized] {
                let r = run_extended(&f, &VPreparation::antisymmetric(), readout).unwrap();
                assert!(r.correlated, "{b}");
                assert_eq!(r.quantum_queries, 1);
                for (_, s) in &r.states {
                    assert!(s.is_normalized());
                }
            }
        }
    }

    #[test]
    fn dj2_constants_read_all_zeroes() {
        let f = builtin(BuiltinFamily::Dj(2)).unwrap();
        let r = run_extended(&f, &VPreparation::antisymmetric(), Readout::Paper).unwrap();
        let psi2 = r.state("psi2").unwrap();
        for label in ["0000", "1111"] {
            let k = f.k_index(bits(label)).unwrap();
            assert!(psi2.conditional_distribution(K, k, X).unwrap().probs()[0] > 1.0 - TOL);
        }
    }

    #[test]
    fn standard_simon_is_not_a_one_shot() {
        let f = builtin(BuiltinFamily::Simon(2)).unwrap();
        let r = run_extended(&f, &VPreparation::zeros(), Readout::Paper).unwrap();
        assert!(!r.correlated);
        assert!(run_simon_optimal().unwrap().correlated);
    }

    #[test]
    fn minute_reads_parity() {
        let r = run_minute().unwrap();
        assert!(r.correlated);
        let f = builtin(BuiltinFamily::Minute).unwrap();
        assert_eq!(f.len(), 9);
        let psi2 = r.state("psi2").unwrap();
        for k in 0..f.len() {
            let parity = f.member(k).k_label().parity() as usize;
            assert!(psi2.conditional_distribution(K, k, X).unwrap().probs()[parity] > 1.0 - TOL);
        }
    }

    #[test]
    fn auto_iterations() {
        assert_eq!(grover_auto_iterations(2), 1);
        assert_eq!(grover_auto_iterations(3), 2);
        assert_eq!(grover_auto_iterations(4), 3);
    }

    #[test]
    fn grover_probabilities_follow_closed_form() {
        for n in 2..=4 {
            let r = grover_iterate(n, Some(grover_auto_iterations(n))).unwrap();
            let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
            for (t, p) in r.probabilities.iter().enumerate() {
                let expected = (((2 * t + 1) as f64) * theta).sin().powi(2);
                assert!((p - expected).abs() < 1e-9, "n={n} t={t}");
            }
            assert!(r.probabilities.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
        let r = grover_iterate(4, Some(0)).unwrap();
        assert!((r.probabilities[0] - 1.0 / 16.0).abs() < 1e-12);
        assert!(grover_iterate(2, None).unwrap().correlated);
    }

    #[test]
    fn simon_n2_samples() {
        for seed in 0..20 {
            let r = simon_sample_loop(2, seed).unwrap();
            let f = builtin(BuiltinFamily::Simon(2)).unwrap();
            let h = period(&f, f.k_index(r.k_label).unwrap()).unwrap();
            assert_eq!(r.h, h);
            for s in &r.samples {
                assert!(!s.dot(h));
            }
            if r.k_label == bits("0011") {
                assert!(r.samples.iter().all(|s| s.is_zero() || *s == bits("10")));
            }
        }
    }

    #[test]
    fn simon_is_reproducible() {
        assert_eq!(simon_sample_loop(3, 7).unwrap(), simon_sample_loop(3, 7).unwrap());
    }

    #[test]
    fn perm_partitions_match_the_frozen_table() {
        let f = builtin(BuiltinFamily::Perm).unwrap();
        let blocks = derive_partitions(&f).unwrap();
        assert_eq!(blocks.keys().map(|b| b.to_string()).collect::<Vec<_>>(), ["01", "10", "11"]);
        for (label, ks) in &blocks {
            assert_eq!(ks.len(), 8);
            for &k in ks {
                assert_eq!(f.solution(k), *label);
            }
        }
        assert_eq!(freeze_partitions(&f).unwrap(), f);
    }

    #[test]
    fn partitions_need_clean_blocks() {
        let f = builtin(BuiltinFamily::Grover(2)).unwrap();
        assert!(matches!(derive_partitions(&f), Err(Error::ModelMismatch(_))));
    }

    #[test]
    fn backdating_holds_for_builtins() {
        for b in BuiltinFamily::catalog() {
            assert!(backdating_check(&builtin(b).unwrap()).unwrap(), "{b}");
        }
    }
}
