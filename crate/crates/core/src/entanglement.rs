//! Entanglement diagnostics for pure states over `K`, `X`, `V`.

use crate::error::{Error, Result};
use crate::gates::CMatrix;
use crate::state::StateVector;

/// Schmidt weights below this are treated as zero.
const SCHMIDT_CUTOFF: f64 = 1e-12;

fn shannon_bits(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|p| *p > SCHMIDT_CUTOFF)
        .map(|p| -p * p.log2())
        .sum()
}

/// Squared Schmidt coefficients across the cut `partition | rest`.
pub fn schmidt_weights(state: &StateVector, partition: &[&str]) -> Result<Vec<f64>> {
    if !state.is_normalized() {
        return Err(Error::Normalization { norm_sqr: state.norm_sqr() });
    }
    let positions = state.partition_positions(partition)?;
    if positions.is_empty() || positions.len() == state.layout().registers().len() {
        return Err(Error::Partition(format!(
            "{partition:?} is not a nonempty proper subset of the registers"
        )));
    }
    let m = state.bipartite_matrix(partition)?;
    let mut w: Vec<f64> = m
        .singular_values()
        .iter()
        .map(|s| s * s)
        .collect();
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

/// Von Neumann entropy, in bits, of the reduced state on `partition`.
pub fn entanglement_entropy(state: &StateVector, partition: &[&str]) -> Result<f64> {
    Ok(shannon_bits(schmidt_weights(state, partition)?))
}

/// Reduced density matrix on `kept` (registers in layout order).
pub fn reduced_density(state: &StateVector, kept: &[&str]) -> Result<CMatrix> {
    let m = state.bipartite_matrix(kept)?;
    Ok(&m * m.adjoint())
}

/// Logarithmic negativity `log2 || rho^{T_b} ||_1` between register groups
/// `a` and `b`; registers in neither group are traced out. This is the
/// entanglement between `a` and `b` alone, so correlations either group
/// shares with a traced register do not count.
pub fn log_negativity(state: &StateVector, a: &[&str], b: &[&str]) -> Result<f64> {
    if !state.is_normalized() {
        return Err(Error::Normalization { norm_sqr: state.norm_sqr() });
    }
    let pa = state.partition_positions(a)?;
    let pb = state.partition_positions(b)?;
    if pa.is_empty() || pb.is_empty() || pa.iter().any(|p| pb.contains(p)) {
        return Err(Error::Partition("negativity needs two disjoint nonempty groups".into()));
    }
    let mut kept: Vec<usize> = pa.iter().chain(&pb).copied().collect();
    kept.sort_unstable();
    let regs = state.layout().registers();
    let names: Vec<&str> = kept.iter().map(|&p| regs[p].name.as_str()).collect();
    let rho = reduced_density(state, &names)?;
    let dims: Vec<usize> = kept.iter().map(|&p| regs[p].dim()).collect();
    let transpose_digit: Vec<bool> = kept.iter().map(|p| pb.contains(p)).collect();

    let digits = |mut i: usize| {
        let mut d = vec![0; dims.len()];
        for j in (0..dims.len()).rev() {
            d[j] = i % dims[j];
            i /= dims[j];
        }
        d
    };
    let compose = |d: &[usize]| d.iter().zip(&dims).fold(0, |acc, (x, n)| acc * n + x);
    let n = rho.nrows();
    let mut pt = CMatrix::zeros(n, n);
    for r in 0..n {
        let dr = digits(r);
        for c in 0..n {
            let dc = digits(c);
            let (mut r2, mut c2) = (dr.clone(), dc.clone());
            for j in 0..dims.len() {
                if transpose_digit[j] {
                    r2[j] = dc[j];
                    c2[j] = dr[j];
                }
            }
            pt[(compose(&r2), compose(&c2))] = rho[(r, c)];
        }
    }
    let trace_norm: f64 = pt.singular_values().iter().sum();
    Ok(trace_norm.max(1.0).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::TOL;
    use crate::family::{builtin, BuiltinFamily};
    use crate::state::{prepare_extended, PhaseAssignment, RegisterLayout, VPreparation, K, V, X};
    use std::sync::Arc;

    fn psi(b: BuiltinFamily, vprep: VPreparation) -> (StateVector, StateVector) {
        let f = builtin(b).unwrap();
        let l = Arc::new(RegisterLayout::for_family(&f).unwrap());
        let s0 = prepare_extended(l, &vprep, &PhaseAssignment::uniform()).unwrap();
        let s1 = s0.apply_oracle(&f).unwrap();
        (s0, s1)
    }

    #[test]
    fn product_state_has_no_entanglement() {
        let (s0, _) = psi(BuiltinFamily::Grover(2), VPreparation::antisymmetric());
        assert!(entanglement_entropy(&s0, &[K]).unwrap().abs() < TOL);
        assert!(log_negativity(&s0, &[K], &[X]).unwrap().abs() < TOL);
    }

    #[test]
    fn deutsch_after_evaluation_is_one_bit() {
        // K-conditional X states are (|0>+|1>) for k=00,11 and +-(|0>-|1>)
        // for k=01,10: two orthogonal classes of equal weight, so the
        // reduced K state has spectrum {1/2, 1/2} and entropy exactly 1.
        let (_, s1) = psi(BuiltinFamily::Deutsch, VPreparation::antisymmetric());
        assert!((entanglement_entropy(&s1, &[K]).unwrap() - 1.0).abs() < TOL);
        assert!((log_negativity(&s1, &[K], &[X]).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn complement_has_the_same_entropy() {
        let (_, s1) = psi(BuiltinFamily::Simon(2), VPreparation::zeros());
        let a = entanglement_entropy(&s1, &[K]).unwrap();
        let b = entanglement_entropy(&s1, &[X, V]).unwrap();
        assert!((a - b).abs() < TOL);
    }

    #[test]
    fn improper_partitions() {
        let (s0, _) = psi(BuiltinFamily::Deutsch, VPreparation::antisymmetric());
        assert!(matches!(entanglement_entropy(&s0, &[]), Err(Error::Partition(_))));
        assert!(matches!(entanglement_entropy(&s0, &[K, X, V]), Err(Error::Partition(_))));
        assert!(matches!(entanglement_entropy(&s0, &["W"]), Err(Error::Partition(_))));
        assert!(matches!(log_negativity(&s0, &[K], &[K]), Err(Error::Partition(_))));
    }
}
