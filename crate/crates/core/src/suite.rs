//! The end-to-end checks behind `report --all` and the acceptance tests.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{
    backdating_check, derive_partitions, grover_auto_iterations, grover_iterate, paper_readout, period,
    run_extended, run_minute, run_simon_optimal, simon_sample_loop, standard_vprep, Readout,
};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::{builtin, BuiltinFamily, FamilyKind, FunctionFamily, MemberSpec, OracleFunction};
use crate::gates::{grover_readout, hadamard, magnitude_distance, C64};
use crate::histories::{
    assign_phases, enumerate_histories, maximize_entanglement, shortcut_bundle, sum_histories, Measure,
    Parametrization, Stage,
};
use crate::query::{
    advanced_query_complexity, classical_query_complexity, problem_name, HalfMode, RuleVerdict, Verdict,
};
use crate::readout::{conditional_x_states, default_label_map, synthesize_readout, verify_correlation};
use crate::reference::reference_states;
use crate::state::{prepare_extended, PhaseAssignment, RegisterLayout, StateVector, VPreparation, K, TOL, X};

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:<2} {verdict}  {}: {}", self.id, self.title, self.detail)
    }
}

fn criterion(id: &'static str, title: &'static str, outcome: Result<(bool, String)>) -> Criterion {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion { id, title, passed, detail }
}

/// Classical, advanced and quantum counts stated for a family in the
/// literature; `None` where no figure is given.
pub fn published_counts(name: &str) -> Option<[Option<usize>; 3]> {
    match name {
        "deutsch" => Some([Some(2), Some(1), Some(1)]),
        "dj2" | "grover2" | "simon2" => Some([None, Some(1), Some(1)]),
        "perm" => Some([Some(3), Some(1), Some(1)]),
        _ => None,
    }
}

/// Oracle calls the quantum algorithm for `family` makes.
pub fn quantum_queries(family: &FunctionFamily) -> Result<usize> {
    let report = match family.kind() {
        FamilyKind::Grover => grover_iterate(family.x_bits(), None)?,
        FamilyKind::Simon if family.x_bits() == 2 => run_simon_optimal()?,
        FamilyKind::Minute => run_minute()?,
        FamilyKind::Perm => {
            derive_partitions(family)?;
            return Ok(1);
        }
        FamilyKind::Custom => run_extended(family, &standard_vprep(family), Readout::Synthesized)?,
        _ => run_extended(family, &standard_vprep(family), Readout::Paper)?,
    };
    Ok(report.quantum_queries)
}

pub fn speedup_row(family: &FunctionFamily, mode: HalfMode) -> Result<RuleVerdict> {
    let classical = classical_query_complexity(family)?;
    let advanced = advanced_query_complexity(family, mode)?;
    let quantum = quantum_queries(family)?;
    let computed = [classical.depth, advanced.depth, quantum];
    let contradicts = published_counts(family.name()).is_some_and(|fig| {
        fig.iter().zip(computed).any(|(f, c)| f.is_some_and(|f| f != c))
    });
    let verdict = if contradicts {
        Verdict::Flag
    } else if quantum == advanced.depth {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(RuleVerdict {
        family: family.name().to_string(),
        problem: problem_name(family).to_string(),
        mode,
        classical_depth: classical.depth,
        advanced_depth: advanced.depth,
        excluded_half_count: advanced.excluded.len(),
        quantum_queries: quantum,
        verdict,
    })
}

/// One row per catalog family, in catalog order.
pub fn speedup_table() -> Result<Vec<RuleVerdict>> {
    BuiltinFamily::catalog()
        .into_iter()
        .map(|b| {
            let f = builtin(b)?;
            speedup_row(&f, HalfMode::default_for(&f))
        })
        .collect()
}

pub fn check_equations() -> Criterion {
    criterion("1", "equation reproduction", (|| {
        let start = Instant::now();
        let mut worst = 1.0f64;
        let mut bad = Vec::new();
        for r in reference_states() {
            let f = builtin(r.family)?;
            let run = run_extended(&f, &standard_vprep(&f), Readout::Paper)?;
            let ov = run.state(r.stage).expect("stage recorded").overlap(&r.state()?)?;
            worst = worst.min(ov);
            if ov < 1.0 - TOL {
                bad.push(format!("{} {}", r.family, r.stage));
            }
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            bad.is_empty() && secs < 1.0,
            format!("min overlap {worst:.12}, {secs:.3}s, mismatches {bad:?}"),
        ))
    })())
}

pub fn check_rule_table() -> Criterion {
    criterion("2", "50% rule table", (|| {
        let expected = [
            ("deutsch", (2, 1, 1)),
            ("dj2", (3, 1, 1)),
            ("grover2", (3, 1, 1)),
            ("grover4", (15, 3, 3)),
            ("perm", (3, 1, 1)),
            ("minute", (2, 1, 1)),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, want) in expected {
            let f = crate::family::builtin_by_name(name)?;
            let row = speedup_row(&f, HalfMode::default_for(&f))?;
            let got = (row.classical_depth, row.advanced_depth, row.quantum_queries);
            ok &= got == want && row.verdict == Verdict::Pass;
            parts.push(format!("{name}={got:?}:{}", row.verdict));
        }
        Ok((ok, parts.join(" ")))
    })())
}

pub fn check_histories() -> Criterion {
    criterion("3", "histories", (|| {
        let f = builtin(BuiltinFamily::Deutsch)?;
        let vprep = VPreparation::antisymmetric();
        let bundle = assign_phases(&enumerate_histories(&f, HalfMode::Row)?, &vprep);
        let eq = reference_states()
            .into_iter()
            .find(|r| r.family == BuiltinFamily::Deutsch && r.stage == "psi1")
            .expect("deutsch psi1 reference")
            .state()?;
        let deutsch = sum_histories(&bundle, Stage::AfterEvaluation)?.overlap(&eq)?;
        let mut worst = 1.0f64;
        for b in BuiltinFamily::catalog() {
            let f = builtin(b)?;
            let vprep = standard_vprep(&f);
            let sum = sum_histories(&shortcut_bundle(&f, &vprep)?, Stage::AfterEvaluation)?;
            let layout = Arc::new(RegisterLayout::for_family(&f)?);
            let direct = prepare_extended(layout, &vprep, &PhaseAssignment::uniform())?.apply_oracle(&f)?;
            worst = worst.min(sum.overlap(&direct)?);
        }
        Ok((
            bundle.histories.len() == 16 && deutsch >= 1.0 - TOL && worst >= 1.0 - TOL,
            format!(
                "{} deutsch histories, overlap {deutsch:.12}; shortcut min overlap {worst:.12}",
                bundle.histories.len()
            ),
        ))
    })())
}

fn peak_check(measure: Measure) -> Result<(bool, String)> {
    let d = maximize_entanglement(
        &builtin(BuiltinFamily::Deutsch)?,
        Parametrization::SymmetricAntisymmetric,
        measure,
    )?;
    let s = maximize_entanglement(&builtin(BuiltinFamily::Simon(2))?, Parametrization::Computational, measure)?;
    Ok((
        (d.theta_deg - 90.0).abs() <= 0.5 && (s.theta_deg - 135.0).abs() <= 0.5,
        format!(
            "deutsch peak {:.4} deg ({:.6} bits), simon2 peak {:.4} deg ({:.6} bits)",
            d.theta_deg, d.value, s.theta_deg, s.value
        ),
    ))
}

/// K against the rest, von Neumann entropy.
pub fn check_entropy_peaks() -> Criterion {
    criterion("4", "entanglement maxima (K vs rest entropy)", peak_check(Measure::KRestEntropy))
}

/// K against X with V traced out, logarithmic negativity.
pub fn check_negativity_peaks() -> Criterion {
    criterion("4b", "entanglement maxima (K-X negativity)", peak_check(Measure::KxNegativity))
}

pub fn check_readout() -> Criterion {
    criterion("5", "readout synthesis", (|| {
        let synth = |b: BuiltinFamily| -> Result<(FunctionFamily, StateVector, crate::readout::ReadoutUnitary)> {
            let f = builtin(b)?;
            let layout = Arc::new(RegisterLayout::for_family(&f)?);
            let psi1 = prepare_extended(layout, &VPreparation::antisymmetric(), &PhaseAssignment::uniform())?
                .apply_oracle(&f)?;
            let c = conditional_x_states(&psi1, &f)?;
            let u = synthesize_readout(&c, &default_label_map(&f.readout_labels(), f.x_bits()))?;
            Ok((f, psi1, u))
        };
        let mut ok = true;
        let mut parts = Vec::new();
        for (b, target) in [
            (BuiltinFamily::Deutsch, hadamard(1)),
            (BuiltinFamily::Dj(2), hadamard(2)),
            (BuiltinFamily::Grover(2), grover_readout(2)),
        ] {
            let (_, _, u) = synth(b)?;
            let d = magnitude_distance(&u.matrix, &target);
            ok &= d < TOL;
            parts.push(format!("{b} dist {d:.1e}"));
        }
        for b in [BuiltinFamily::Deutsch, BuiltinFamily::Dj(2), BuiltinFamily::Bv(2), BuiltinFamily::Grover(2)] {
            let (f, psi1, u) = synth(b)?;
            let c = verify_correlation(&psi1, &u, &f);
            ok &= c;
            parts.push(format!("{b} correlated {c}"));
        }
        let g4 = synth(BuiltinFamily::Grover(4));
        let separated = matches!(g4, Err(Error::Separation(_)));
        ok &= separated;
        parts.push(format!("grover4 separation error {separated}"));
        Ok((ok, parts.join(", ")))
    })())
}

pub fn check_simon_loop() -> Criterion {
    criterion("6", "simon sampling loop", (|| {
        let f = builtin(BuiltinFamily::Simon(3))?;
        let mut matches = 0;
        let mut orthogonal = true;
        let mut queries = Vec::new();
        for seed in 0..100 {
            let run = simon_sample_loop(3, seed)?;
            let h = period(&f, f.k_index(run.k_label).expect("sampled member")).expect("period metadata");
            matches += usize::from(run.h == h);
            orthogonal &= run.samples.iter().all(|s| !s.dot(h));
            queries.push(run.queries);
        }
        queries.sort_unstable();
        let median = (queries[49] + queries[50]) as f64 / 2.0;
        Ok((
            matches == 100 && orthogonal && median <= 6.0,
            format!("{matches}/100 periods recovered, samples orthogonal {orthogonal}, median queries {median}"),
        ))
    })())
}

pub fn check_grover_amplification() -> Criterion {
    criterion("7", "grover amplification", (|| {
        let run = grover_iterate(4, Some(3))?;
        let p = *run.probabilities.last().expect("probabilities recorded");
        let expected = (7.0 * 0.25f64.asin()).sin().powi(2);
        Ok((
            (p - expected).abs() <= 0.002 && grover_auto_iterations(4) == 3,
            format!("P = {p:.6}, closed form {expected:.6}"),
        ))
    })())
}

/// A family of up to 8 distinct random tables on at most 3 input and 2
/// output bits.
pub fn random_family<R: Rng>(rng: &mut R) -> FunctionFamily {
    let x_bits = rng.gen_range(1..=3);
    let v_bits = rng.gen_range(1..=2);
    let distinct_tables = 1usize << ((1 << x_bits) * v_bits);
    let size = rng.gen_range(1..=distinct_tables.min(8));
    let mut members: Vec<MemberSpec> = Vec::new();
    while members.len() < size {
        let table: Vec<Bits> = (0..1usize << x_bits)
            .map(|_| Bits::new(rng.gen_range(0..1u64 << v_bits), v_bits))
            .collect();
        let function = OracleFunction::from_table(table);
        if members.iter().any(|m| m.function == function) {
            continue;
        }
        let solution = Bits::new(function.k_label().parity() as u64, 1);
        members.push(MemberSpec { function, solution, meta: None });
    }
    FunctionFamily::from_parts("random", FamilyKind::Custom, x_bits, v_bits, 1, members)
}

/// A normalized state with uniformly drawn real and imaginary parts.
pub fn random_state<R: Rng>(layout: Arc<RegisterLayout>, rng: &mut R) -> Result<StateVector> {
    let amps = (0..layout.total_dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(layout, amps)?.normalized().ok_or(Error::Cancellation)
}

fn phase_invariance(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for b in [
        BuiltinFamily::Deutsch,
        BuiltinFamily::Dj(2),
        BuiltinFamily::Grover(2),
        BuiltinFamily::Simon(2),
        BuiltinFamily::Minute,
        BuiltinFamily::Perm,
    ] {
        let f = builtin(b)?;
        let layout = Arc::new(RegisterLayout::for_family(&f)?);
        let u = paper_readout(&f)?.matrix;
        let vprep = standard_vprep(&f);
        let run = |phases: &PhaseAssignment| -> Result<StateVector> {
            prepare_extended(Arc::clone(&layout), &vprep, phases)?
                .apply_oracle(&f)?
                .apply_on_register(X, &u)
        };
        let base = run(&PhaseAssignment::uniform())?;
        for _ in 0..20 {
            let s = run(&PhaseAssignment::random(f.len(), rng))?;
            worst = worst.max(s.measure_distribution(K)?.max_abs_diff(&base.measure_distribution(K)?));
            for k in 0..f.len() {
                let a = s.conditional_distribution(K, k, X)?;
                worst = worst.max(a.max_abs_diff(&base.conditional_distribution(K, k, X)?));
            }
        }
    }
    Ok(worst)
}

fn oracle_fuzz(rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let (mut involution, mut norm) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let f = random_family(rng);
        let layout = Arc::new(RegisterLayout::for_family(&f)?);
        let s = random_state(layout, rng)?;
        let once = s.apply_oracle(&f)?;
        let twice = once.apply_oracle(&f)?;
        norm = norm.max((once.norm_sqr() - 1.0).abs());
        let d = s
            .amplitudes()
            .iter()
            .zip(twice.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        involution = involution.max(d);
    }
    Ok((involution, norm))
}

pub fn check_properties() -> Criterion {
    criterion("8", "property suites", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phase = phase_invariance(&mut rng)?;
        let mut backdated = true;
        for b in BuiltinFamily::catalog() {
            backdated &= backdating_check(&builtin(b)?)?;
        }
        let (involution, norm) = oracle_fuzz(&mut rng)?;
        Ok((
            phase <= TOL && backdated && involution <= 1e-12 && norm <= 1e-12,
            format!(
                "phase invariance max diff {phase:.1e}, backdating {backdated}, involution max diff {involution:.1e}, norm drift {norm:.1e}"
            ),
        ))
    })())
}

pub fn run_all() -> Vec<Criterion> {
    vec![
        check_equations(),
        check_rule_table(),
        check_histories(),
        check_entropy_peaks(),
        check_negativity_peaks(),
        check_readout(),
        check_simon_loop(),
        check_grover_amplification(),
        check_properties(),
    ]
}
