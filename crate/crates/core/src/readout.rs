//! Final `X` rotation turning K-X entanglement into readout correlation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DVector;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::gates::{unitarity_deviation, CMatrix, C64};
use crate::state::{StateVector, K, TOL, X};

pub type CVector = DVector<C64>;

/// A unitary on `X` and the basis index each readout label should land on.
#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutUnitary {
    pub matrix: CMatrix,
    pub label_map: BTreeMap<Bits, usize>,
}

impl ReadoutUnitary {
    pub fn new(matrix: CMatrix, label_map: BTreeMap<Bits, usize>) -> Result<Self> {
        let deviation = unitarity_deviation(&matrix);
        if deviation > TOL {
            return Err(Error::Unitarity { deviation });
        }
        Ok(Self { matrix, label_map })
    }

    /// Matrix rows at 6 decimals, then one `label -> x` line per label.
    pub fn render(&self, x_bits: usize) -> String {
        let mut out = String::new();
        for r in 0..self.matrix.nrows() {
            let cells: Vec<String> = (0..self.matrix.ncols())
                .map(|c| {
                    let z = self.matrix[(r, c)];
                    format!("({:.6}, {:.6})", clean(z.re), clean(z.im))
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        for (label, x) in &self.label_map {
            let _ = writeln!(out, "{label} -> {}", Bits::new(*x as u64, x_bits));
        }
        out
    }
}

/// Avoids printing `-0.000000`.
fn clean(v: f64) -> f64 {
    if v.abs() < 5e-7 {
        0.0
    } else {
        v
    }
}

/// Rotates `v` so its first non-negligible entry is real positive.
fn fix_phase(mut v: CVector) -> CVector {
    if let Some(z) = v.iter().find(|z| z.norm() > TOL).copied() {
        let phase = z.conj() / z.norm();
        v *= phase;
    }
    v
}

/// The `X` factor of one member's `X (x) V` block, or `None` for an empty
/// block.
fn x_factor(state: &StateVector, k: usize) -> Result<Option<CVector>> {
    let block = state.xv_block(k);
    let (best, norm) = (0..block.ncols())
        .map(|c| (c, block.column(c).norm()))
        .fold((0, 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
    if norm <= TOL {
        return Ok(None);
    }
    let x: CVector = block.column(best).into_owned() / C64::new(norm, 0.0);
    let residual = &block - &x * (x.adjoint() * &block);
    if residual.norm() > TOL * block.norm().max(1.0) {
        let label = state.layout().register(K)?.label(k).to_string();
        return Err(Error::Separation(format!("X and V are entangled for k={label}")));
    }
    Ok(Some(fix_phase(x)))
}

/// Normalized `X` state shared by all members carrying each readout label.
pub fn conditional_x_states(
    state: &StateVector,
    family: &FunctionFamily,
) -> Result<BTreeMap<Bits, CVector>> {
    conditional_x_states_for(state, family, &family.readout_labels())
}

pub fn conditional_x_states_for(
    state: &StateVector,
    family: &FunctionFamily,
    labels: &[Bits],
) -> Result<BTreeMap<Bits, CVector>> {
    let mut out: BTreeMap<Bits, (usize, CVector)> = BTreeMap::new();
    for (k, label) in labels.iter().enumerate() {
        let Some(x) = x_factor(state, k)? else { continue };
        match out.get(label) {
            Some((first, prev)) => {
                if (prev.dotc(&x).norm() - 1.0).abs() > TOL {
                    return Err(Error::LabelIncoherence {
                        label: label.to_string(),
                        a: family.member(*first).k_label().to_string(),
                        b: family.member(k).k_label().to_string(),
                    });
                }
            }
            None => {
                out.insert(*label, (k, x));
            }
        }
    }
    let out: BTreeMap<Bits, CVector> = out.into_iter().map(|(l, (_, x))| (l, x)).collect();
    check_orthogonal(&out)?;
    Ok(out)
}

fn check_orthogonal(conditionals: &BTreeMap<Bits, CVector>) -> Result<()> {
    let items: Vec<(&Bits, &CVector)> = conditionals.iter().collect();
    for (i, (la, a)) in items.iter().enumerate() {
        for (lb, b) in &items[i + 1..] {
            let ov = a.dotc(b).norm();
            if ov > TOL {
                return Err(Error::Separation(format!(
                    "X states for labels {la} and {lb} overlap by {ov:.6}; one evaluation cannot tell them apart"
                )));
            }
        }
    }
    Ok(())
}

/// Labels mapped to the basis string they spell when they are as wide as
/// `X` and distinct, otherwise numbered in order.
pub fn default_label_map(labels: &[Bits], x_bits: usize) -> BTreeMap<Bits, usize> {
    let mut distinct = labels.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.iter().all(|l| l.width() == x_bits) {
        distinct.into_iter().map(|l| (l, l.index())).collect()
    } else {
        distinct.into_iter().enumerate().map(|(i, l)| (l, i)).collect()
    }
}

/// Unitary `U` with `U c_L = |label_map(L)>` for every conditional `c_L`.
pub fn synthesize_readout(
    conditionals: &BTreeMap<Bits, CVector>,
    label_map: &BTreeMap<Bits, usize>,
) -> Result<ReadoutUnitary> {
    check_orthogonal(conditionals)?;
    let dim = conditionals
        .values()
        .next()
        .map(|c| c.len())
        .ok_or_else(|| Error::Separation("no conditional states".into()))?;
    let mut w = CMatrix::zeros(dim, dim);
    let mut filled = vec![false; dim];
    for (label, c) in conditionals {
        let &target = label_map
            .get(label)
            .ok_or_else(|| Error::Separation(format!("label {label} has no target")))?;
        if target >= dim || filled[target] {
            return Err(Error::Separation(format!("target {target} of label {label} is unusable")));
        }
        w.set_column(target, &fix_phase(c.normalize()));
        filled[target] = true;
    }
    let mut accepted: Vec<CVector> = (0..dim).filter(|&j| filled[j]).map(|j| w.column(j).into_owned()).collect();
    let mut free = (0..dim).filter(|&j| !filled[j]);
    for e in 0..dim {
        if accepted.len() == dim {
            break;
        }
        let mut v = CVector::zeros(dim);
        v[e] = C64::new(1.0, 0.0);
        for a in &accepted {
            let p = a.dotc(&v);
            v -= a * p;
        }
        let n = v.norm();
        if n <= 1e-6 {
            continue;
        }
        let v = fix_phase(v / C64::new(n, 0.0));
        w.set_column(free.next().expect("a free column per missing direction"), &v);
        accepted.push(v);
    }
    ReadoutUnitary::new(w.adjoint(), label_map.clone())
}

/// Applies the readout and checks that every `K` outcome leaves `X` sharp
/// on the target of its label.
pub fn verify_correlation(state: &StateVector, readout: &ReadoutUnitary, family: &FunctionFamily) -> bool {
    let Ok(rotated) = state.apply_on_register(X, &readout.matrix) else { return false };
    let Ok(marginal) = rotated.measure_distribution(K) else { return false };
    family.readout_labels().iter().enumerate().all(|(k, label)| {
        if marginal.probs()[k] <= TOL {
            return true;
        }
        let Some(&target) = readout.label_map.get(label) else { return false };
        match rotated.conditional_distribution(K, k, X) {
            Ok(d) => d.probs()[target] >= 1.0 - TOL,
            Err(_) => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{builtin, BuiltinFamily};
    use crate::gates::{basis_swap, grover_readout, hadamard, identity, magnitude_distance};
    use crate::state::{prepare_extended, PhaseAssignment, RegisterLayout, VPreparation};
    use std::sync::Arc;

    fn psi1(b: BuiltinFamily, vprep: VPreparation) -> (FunctionFamily, StateVector) {
        let f = builtin(b).unwrap();
        let l = Arc::new(RegisterLayout::for_family(&f).unwrap());
        let s = prepare_extended(l, &vprep, &PhaseAssignment::uniform()).unwrap();
        let s1 = s.apply_oracle(&f).unwrap();
        (f, s1)
    }

    fn synthesize(f: &FunctionFamily, s: &StateVector) -> Result<ReadoutUnitary> {
        let c = conditional_x_states(s, f)?;
        synthesize_readout(&c, &default_label_map(&f.readout_labels(), f.x_bits()))
    }

    #[test]
    fn deutsch_conditionals() {
        let (f, s) = psi1(BuiltinFamily::Deutsch, VPreparation::antisymmetric());
        let c = conditional_x_states(&s, &f).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let constant = &c[&Bits::new(0, 1)];
        let balanced = &c[&Bits::new(1, 1)];
        assert!((constant[0].re - r).abs() < TOL && (constant[1].re - r).abs() < TOL);
        assert!((balanced[0].re - r).abs() < TOL && (balanced[1].re + r).abs() < TOL);
    }

    #[test]
    fn deutsch_readout_is_hadamard() {
        let (f, s) = psi1(BuiltinFamily::Deutsch, VPreparation::antisymmetric());
        let u = synthesize(&f, &s).unwrap();
        assert!(magnitude_distance(&u.matrix, &hadamard(1)) < TOL);
        assert!(verify_correlation(&s, &u, &f));
        let unrotated = ReadoutUnitary::new(identity(2), u.label_map.clone()).unwrap();
        assert!(!verify_correlation(&s, &unrotated, &f));
    }

    #[test]
    fn grover2_readout_matches_reflection() {
        let (f, s) = psi1(BuiltinFamily::Grover(2), VPreparation::antisymmetric());
        let c = conditional_x_states(&s, &f).unwrap();
        let k00 = &c[&Bits::new(0, 2)];
        // (-|00> + |01> + |10> + |11>)/2 with the leading phase made positive
        assert!((k00[0].re - 0.5).abs() < TOL && (k00[1].re + 0.5).abs() < TOL);
        let u = synthesize(&f, &s).unwrap();
        assert!(magnitude_distance(&u.matrix, &grover_readout(2)) < TOL);
        // rows agree with H O H up to a sign each
        let g = grover_readout(2);
        for r in 0..4 {
            let s = if (u.matrix[(r, 0)] - g[(r, 0)]).norm() < TOL { 1.0 } else { -1.0 };
            for c in 0..4 {
                assert!((u.matrix[(r, c)] - g[(r, c)] * s).norm() < TOL);
            }
        }
        assert!(verify_correlation(&s, &u, &f));
    }

    #[test]
    fn dj2_and_bv2_readouts_are_hadamard() {
        for b in [BuiltinFamily::Dj(2), BuiltinFamily::Bv(2)] {
            let (f, s) = psi1(b, VPreparation::antisymmetric());
            let u = synthesize(&f, &s).unwrap();
            assert!(magnitude_distance(&u.matrix, &hadamard(2)) < TOL, "{b}");
            assert!(verify_correlation(&s, &u, &f), "{b}");
        }
    }

    #[test]
    fn grover4_single_query_cannot_separate() {
        let (f, s) = psi1(BuiltinFamily::Grover(4), VPreparation::antisymmetric());
        assert!(matches!(conditional_x_states(&s, &f), Err(Error::Separation(_))));
    }

    #[test]
    fn simon2_antisymmetric_variant() {
        let (f, s) = psi1(BuiltinFamily::Simon(2), VPreparation::antisymmetric());
        let u = synthesize(&f, &s).unwrap();
        let expected = basis_swap(4, 1, 2) * hadamard(2);
        assert!(magnitude_distance(&u.matrix, &expected) < TOL);
        assert!(verify_correlation(&s, &u, &f));
    }

    #[test]
    fn standard_simon_keeps_v_entangled() {
        let (f, s) = psi1(BuiltinFamily::Simon(2), VPreparation::zeros());
        assert!(matches!(conditional_x_states(&s, &f), Err(Error::Separation(_))));
    }

    #[test]
    fn basis_conditionals_give_identity() {
        let mut c = BTreeMap::new();
        let mut map = BTreeMap::new();
        for i in 0..4 {
            let mut v = CVector::zeros(4);
            v[i] = C64::new(1.0, 0.0);
            c.insert(Bits::new(i as u64, 2), v);
            map.insert(Bits::new(i as u64, 2), i);
        }
        let u = synthesize_readout(&c, &map).unwrap();
        assert!((u.matrix - identity(4)).norm() < TOL);
    }

    #[test]
    fn partial_conditionals_are_completed() {
        let (f, s) = psi1(BuiltinFamily::Deutsch, VPreparation::antisymmetric());
        let mut c = conditional_x_states(&s, &f).unwrap();
        c.remove(&Bits::new(1, 1));
        let u = synthesize_readout(&c, &default_label_map(&f.readout_labels(), 1)).unwrap();
        assert!(unitarity_deviation(&u.matrix) < TOL);
        assert!(magnitude_distance(&u.matrix, &hadamard(1)) < TOL);
    }

    #[test]
    fn dj3_labels_are_incoherent() {
        // dj3 balanced members are not all affine, so sigma is the label
        let (f, s) = psi1(BuiltinFamily::Dj(3), VPreparation::antisymmetric());
        assert!(matches!(conditional_x_states(&s, &f), Err(Error::LabelIncoherence { .. })));
    }
}
