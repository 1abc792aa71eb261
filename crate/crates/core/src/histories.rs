//! Single-query classical histories with advanced information, and their
//! phased superposition.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::bits::Bits;
use crate::entanglement::{entanglement_entropy, log_negativity};
use crate::error::{Error, Result};
use crate::family::{FamilyKind, FunctionFamily};
use crate::gates::C64;
use crate::query::{advanced_query_complexity, AdvancedInfo, HalfMode, HalfOutcome};
use crate::state::{RegisterLayout, StateVector, VPreparation, K, X};

/// One sharp trajectory. `advanced` is `None` for shortcut histories,
/// which evaluate every `x` whether or not the algorithm needs it.
#[derive(Clone, Debug, PartialEq)]
pub struct History {
    pub advanced: Option<AdvancedInfo>,
    pub x: usize,
    pub value: Bits,
    pub v_initial: Bits,
    pub k_label: Bits,
    pub k_index: usize,
    pub phase: C64,
}

#[derive(Clone, Debug)]
pub struct HistoryBundle {
    pub histories: Vec<History>,
    pub layout: Arc<RegisterLayout>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Initial,
    AfterEvaluation,
}

/// Histories of the advanced-information algorithm in the order
/// half, result, `k`, `v`. Every history starts with phase 1.
pub fn enumerate_histories(family: &FunctionFamily, mode: HalfMode) -> Result<HistoryBundle> {
    let report = advanced_query_complexity(family, mode)?;
    if report.depth != 1 {
        return Err(Error::UnsupportedDepth { depth: report.depth });
    }
    let layout = Arc::new(RegisterLayout::for_family(family)?);
    let mut histories = Vec::new();
    for (half, outcome) in &report.per_half {
        let HalfOutcome::Solved(result) = outcome else { continue };
        let x = result.tree.first_query().expect("depth one tree queries once");
        let mut members: Vec<usize> = (0..family.len())
            .filter(|&k| half.is_consistent(family.member(k)))
            .collect();
        members.sort_by_key(|&k| (family.value(k, x), k));
        for k in members {
            for v in Bits::all(family.v_bits()) {
                histories.push(History {
                    advanced: Some(half.clone()),
                    x,
                    value: family.value(k, x),
                    v_initial: v,
                    k_label: family.member(k).k_label(),
                    k_index: k,
                    phase: C64::new(1.0, 0.0),
                });
            }
        }
    }
    Ok(HistoryBundle { histories, layout })
}

/// Sets each phase to the `vprep` amplitude of the history's initial `V`.
pub fn assign_phases(bundle: &HistoryBundle, vprep: &VPreparation) -> HistoryBundle {
    let histories = bundle
        .histories
        .iter()
        .map(|h| History { phase: vprep.amplitude(h.v_initial), ..h.clone() })
        .collect();
    HistoryBundle { histories, layout: Arc::clone(&bundle.layout) }
}

pub fn sum_histories(bundle: &HistoryBundle, stage: Stage) -> Result<StateVector> {
    let layout = &bundle.layout;
    let mut s = StateVector::zero(Arc::clone(layout));
    for h in &bundle.histories {
        let v = match stage {
            Stage::Initial => h.v_initial,
            Stage::AfterEvaluation => h.v_initial.xor(h.value),
        };
        let i = layout.index(h.k_index, h.x, v.index());
        s.amplitudes_mut()[i] += h.phase;
    }
    s.normalized().ok_or(Error::Cancellation)
}

/// Histories over every `(k, x, v)` triple with phases from `vprep`.
pub fn shortcut_bundle(family: &FunctionFamily, vprep: &VPreparation) -> Result<HistoryBundle> {
    let layout = Arc::new(RegisterLayout::for_family(family)?);
    let mut histories = Vec::with_capacity(layout.total_dim());
    for k in 0..family.len() {
        for x in 0..family.rows() {
            for v in Bits::all(family.v_bits()) {
                histories.push(History {
                    advanced: None,
                    x,
                    value: family.value(k, x),
                    v_initial: v,
                    k_label: family.member(k).k_label(),
                    k_index: k,
                    phase: vprep.amplitude(v),
                });
            }
        }
    }
    Ok(HistoryBundle { histories, layout })
}

fn format_phase(p: C64) -> String {
    if p.im.abs() < 1e-12 && (p.re.abs() - 1.0).abs() < 1e-12 {
        return if p.re > 0.0 { "+1".into() } else { "-1".into() };
    }
    format!("({:.6}, {:.6})", p.re, p.im)
}

fn format_ket(h: &History, v: Bits, x_bits: usize) -> String {
    format!("|{}>|{}>|{}>", h.k_label, Bits::new(h.x as u64, x_bits), v)
}

/// TSV with one line per history. Rows are numbered per (half, result)
/// and sub-numbered per initial `V`.
pub fn history_table(bundle: &HistoryBundle) -> String {
    let x_bits = bundle.layout.x_bits();
    let mut out = String::from("row\tadvanced\tquery\tresult\tk\tv_initial\tphase\tinitial\tafter\n");
    let mut row = 0;
    let mut sub = 0;
    let mut prev: Option<(Option<&AdvancedInfo>, usize)> = None;
    for h in &bundle.histories {
        let key = (h.advanced.as_ref(), h.k_index);
        if prev != Some(key) {
            row += 1;
            sub = 0;
            prev = Some(key);
        }
        sub += 1;
        let advanced = h.advanced.as_ref().map_or("-".to_string(), |a| a.to_string());
        let _ = writeln!(
            out,
            "#{row}.{sub}\t{advanced}\tf({})\t{}\t{}\t{}\t{}\t{}\t{}",
            h.x,
            h.value,
            h.k_label,
            h.v_initial,
            format_phase(h.phase),
            format_ket(h, h.v_initial, x_bits),
            format_ket(h, h.v_initial.xor(h.value), x_bits),
        );
    }
    out
}

/// How a unit-circle angle maps to a `V` preparation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parametrization {
    /// `cos t (|0>+|1>) + sin t (|0>-|1>)`.
    SymmetricAntisymmetric,
    /// `cos t |0> + sin t |1>`.
    Computational,
}

impl Parametrization {
    pub fn default_for(family: &FunctionFamily) -> Self {
        match family.kind() {
            FamilyKind::Simon => Parametrization::Computational,
            _ => Parametrization::SymmetricAntisymmetric,
        }
    }

    pub fn vprep(self, theta: f64) -> VPreparation {
        let (c, s) = (C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0));
        match self {
            Parametrization::SymmetricAntisymmetric => VPreparation::new(c, s),
            Parametrization::Computational => VPreparation::computational(c, s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Von Neumann entropy of `K` against `X` and `V` together.
    KRestEntropy,
    /// Logarithmic negativity between `K` and `X` with `V` traced out.
    KxNegativity,
}

/// Entanglement of the post-evaluation superposition of histories.
pub fn evaluation_entanglement(
    family: &FunctionFamily,
    vprep: &VPreparation,
    measure: Measure,
) -> Result<f64> {
    let s = sum_histories(&shortcut_bundle(family, vprep)?, Stage::AfterEvaluation)?;
    match measure {
        Measure::KRestEntropy => entanglement_entropy(&s, &[K]),
        Measure::KxNegativity => log_negativity(&s, &[K], &[X]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    /// In degrees, reduced to `[0, 180)`.
    pub theta_deg: f64,
    pub value: f64,
}

/// Maximizes `measure` over the unit circle: a 1 degree grid, then golden
/// section search on the bracketing interval.
pub fn maximize_entanglement(
    family: &FunctionFamily,
    param: Parametrization,
    measure: Measure,
) -> Result<Peak> {
    let f = |deg: f64| evaluation_entanglement(family, &param.vprep(deg.to_radians()), measure);
    let grid = (0..360).map(|d| f(d as f64)).collect::<Result<Vec<f64>>>()?;
    let (best, _) = grid
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv + 1e-12 { (i, v) } else { (bi, bv) });

    let (mut lo, mut hi) = (best as f64 - 1.0, best as f64 + 1.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while hi - lo > 1e-6 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d)?;
        }
    }
    let theta = (lo + hi) / 2.0;
    let value = f(theta)?.max(grid[best]);
    Ok(Peak { theta_deg: theta.rem_euclid(180.0), value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{builtin, BuiltinFamily};
    use crate::state::{prepare_extended, PhaseAssignment, TOL};

    fn fam(b: BuiltinFamily) -> FunctionFamily {
        builtin(b).unwrap()
    }

    #[test]
    fn deutsch_has_sixteen_histories() {
        let b = enumerate_histories(&fam(BuiltinFamily::Deutsch), HalfMode::Row).unwrap();
        assert_eq!(b.histories.len(), 16);
        let first = &b.histories[0];
        assert_eq!((first.k_label.to_string(), first.x, first.v_initial.to_string()), ("00".into(), 1, "0".into()));
        let b = assign_phases(&b, &VPreparation::antisymmetric());
        assert!((b.histories[0].phase - C64::new(1.0, 0.0)).norm() < TOL);
        assert!((b.histories[1].phase + C64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn dj2_histories_skip_mixed_halves() {
        let b = enumerate_histories(&fam(BuiltinFamily::Dj(2)), HalfMode::Row).unwrap();
        for h in &b.histories {
            let a = h.advanced.as_ref().unwrap();
            assert_eq!(a.values[0], a.values[1]);
            assert!(!a.positions.contains(&h.x));
        }
    }

    #[test]
    fn each_history_pins_one_member() {
        for bf in [BuiltinFamily::Deutsch, BuiltinFamily::Dj(2), BuiltinFamily::Grover(2), BuiltinFamily::Perm] {
            let f = fam(bf);
            let mode = HalfMode::default_for(&f);
            for h in enumerate_histories(&f, mode).unwrap().histories {
                let a = h.advanced.as_ref().unwrap();
                let consistent: Vec<usize> = (0..f.len())
                    .filter(|&k| a.is_consistent(f.member(k)) && f.value(k, h.x) == h.value)
                    .collect();
                assert_eq!(consistent, vec![h.k_index], "{bf}");
            }
        }
    }

    #[test]
    fn deep_families_are_rejected() {
        let r = enumerate_histories(&fam(BuiltinFamily::Grover(4)), HalfMode::Bit);
        assert!(matches!(r, Err(Error::UnsupportedDepth { depth: 3 })));
    }

    #[test]
    fn deutsch_sum_matches_oracle() {
        let f = fam(BuiltinFamily::Deutsch);
        let vprep = VPreparation::antisymmetric();
        let b = assign_phases(&enumerate_histories(&f, HalfMode::Row).unwrap(), &vprep);
        let psi0 = prepare_extended(Arc::clone(&b.layout), &vprep, &PhaseAssignment::uniform()).unwrap();
        let s0 = sum_histories(&b, Stage::Initial).unwrap();
        let s1 = sum_histories(&b, Stage::AfterEvaluation).unwrap();
        assert!(s0.equals_up_to_phase(&psi0, TOL).unwrap());
        assert!(s1.equals_up_to_phase(&psi0.apply_oracle(&f).unwrap(), TOL).unwrap());
    }

    #[test]
    fn shortcut_reproduces_the_oracle() {
        for bf in BuiltinFamily::catalog() {
            let f = fam(bf);
            for vprep in [VPreparation::antisymmetric(), VPreparation::zeros(), Parametrization::Computational.vprep(0.3)] {
                let b = shortcut_bundle(&f, &vprep).unwrap();
                let psi0 = prepare_extended(Arc::clone(&b.layout), &vprep, &PhaseAssignment::uniform()).unwrap();
                let s1 = sum_histories(&b, Stage::AfterEvaluation).unwrap();
                assert!(s1.equals_up_to_phase(&psi0.apply_oracle(&f).unwrap(), TOL).unwrap(), "{bf}");
            }
        }
    }

    #[test]
    fn vanishing_phases_cancel() {
        let f = fam(BuiltinFamily::Deutsch);
        let b = enumerate_histories(&f, HalfMode::Row).unwrap();
        let zero = VPreparation::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        let b = assign_phases(&b, &zero);
        assert_eq!(sum_histories(&b, Stage::Initial).unwrap_err(), Error::Cancellation);
    }

    #[test]
    fn symmetric_v_loses_the_computation() {
        let f = fam(BuiltinFamily::Deutsch);
        let e = evaluation_entanglement(&f, &VPreparation::symmetric(), Measure::KRestEntropy).unwrap();
        assert!(e.abs() < TOL);
    }

    #[test]
    fn negativity_peaks() {
        let p = maximize_entanglement(
            &fam(BuiltinFamily::Deutsch),
            Parametrization::SymmetricAntisymmetric,
            Measure::KxNegativity,
        )
        .unwrap();
        assert!((p.theta_deg - 90.0).abs() < 1e-3, "{p:?}");
        assert!((p.value - 1.0).abs() < 1e-6);
        let p = maximize_entanglement(&fam(BuiltinFamily::Simon(2)), Parametrization::Computational, Measure::KxNegativity)
            .unwrap();
        assert!((p.theta_deg - 135.0).abs() < 1e-3, "{p:?}");
        assert!((p.value - 3f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn entropy_peaks_off_the_antisymmetric_point() {
        // K spectrum is {(1+2t)/2, (1-2t)/4, (1-2t)/4} with t = cos(2 theta)/2,
        // so the entropy is largest where all three weights equal 1/3
        let p = maximize_entanglement(
            &fam(BuiltinFamily::Deutsch),
            Parametrization::SymmetricAntisymmetric,
            Measure::KRestEntropy,
        )
        .unwrap();
        let expected = 0.5 * (-1.0f64 / 3.0).acos().to_degrees();
        let mirrored = 180.0 - expected;
        assert!((p.theta_deg - expected).abs() < 1e-3 || (p.theta_deg - mirrored).abs() < 1e-3, "{p:?}");
        assert!((p.value - 3f64.log2()).abs() < 1e-6);
    }

    #[test]
    fn table_numbers_rows_and_subrows() {
        let f = fam(BuiltinFamily::Deutsch);
        let b = assign_phases(&enumerate_histories(&f, HalfMode::Row).unwrap(), &VPreparation::antisymmetric());
        let t = history_table(&b);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[1], "#1.1\tf(0)=0\tf(1)\t0\t00\t0\t+1\t|00>|1>|0>\t|00>|1>|0>");
        assert_eq!(lines[2], "#1.2\tf(0)=0\tf(1)\t0\t00\t1\t-1\t|00>|1>|1>\t|00>|1>|1>");
        assert!(lines[16].starts_with("#8.2\t"));
    }
}
