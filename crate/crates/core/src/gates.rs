//! The handful of fixed matrices the algorithms need on register `X`.

use nalgebra::DMatrix;

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `H^{(x) bits}`; entry `(i, j)` is `(-1)^{i.j} / sqrt(2^bits)`.
pub fn hadamard(bits: usize) -> CMatrix {
    let dim = 1usize << bits;
    let scale = 1.0 / (dim as f64).sqrt();
    CMatrix::from_fn(dim, dim, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(sign * scale, 0.0)
    })
}

/// Diagonal sign flip of basis vector `marked`: the phase kickback of
/// computing `delta(marked, x)` into an antisymmetric result qubit.
pub fn phase_flip(dim: usize, marked: usize) -> CMatrix {
    let mut m = identity(dim);
    m[(marked, marked)] = C64::new(-1.0, 0.0);
    m
}

/// `H . O_{delta(0,x)} . H` on `bits` qubits.
pub fn grover_readout(bits: usize) -> CMatrix {
    let h = hadamard(bits);
    &h * phase_flip(1 << bits, 0) * &h
}

/// Exchanges basis vectors `a` and `b`.
pub fn basis_swap(dim: usize, a: usize, b: usize) -> CMatrix {
    let mut m = identity(dim);
    m.swap_columns(a, b);
    m
}

/// Largest entrywise deviation of `U^dagger U` from the identity.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let p = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest entrywise difference of magnitudes.
pub fn magnitude_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_gates_are_unitary() {
        for bits in 0..4 {
            assert!(unitarity_deviation(&hadamard(bits)) < 1e-12);
            assert!(unitarity_deviation(&grover_readout(bits.max(1))) < 1e-12);
        }
        assert!(unitarity_deviation(&basis_swap(4, 1, 2)) < 1e-12);
    }

    #[test]
    fn grover_readout_two_qubits() {
        // I - 2|s><s| with |s> uniform: 1/2 on the diagonal, -1/2 elsewhere.
        let u = grover_readout(2);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.5 } else { -0.5 };
                assert!((u[(i, j)].re - expected).abs() < 1e-12);
                assert!(u[(i, j)].im.abs() < 1e-12);
            }
        }
    }
}
