//! Dense state vectors over the oracle-choice register `K`, the query
//! register `X` and the result register `V`.
//!
//! Amplitudes are stored with `K` outermost and `V` innermost, so basis
//! vector `(k, x, v)` lives at `(k * dim_x + x) * dim_v + v`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::gates::{unitarity_deviation, CMatrix, C64};

/// Tolerance used for every equality of amplitudes and probabilities.
pub const TOL: f64 = 1e-9;

pub const K: &str = "K";
pub const X: &str = "X";
pub const V: &str = "V";

#[derive(Clone, Debug, PartialEq)]
pub struct Register {
    pub name: String,
    labels: Vec<String>,
}

impl Register {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn position_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Ordered registers `K`, `X`, `V`. `K` has one basis vector per family
/// member and is labelled by the members' `k` strings.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterLayout {
    registers: [Register; 3],
    x_bits: usize,
    v_bits: usize,
}

impl RegisterLayout {
    pub fn new(k_labels: &[Bits], x_bits: usize, v_bits: usize) -> Result<Self> {
        if k_labels.is_empty() {
            return Err(Error::Layout("register K needs at least one label".into()));
        }
        if x_bits > 16 || v_bits > 16 {
            return Err(Error::Layout(format!(
                "x_bits = {x_bits}, v_bits = {v_bits} exceed the dense-simulation range"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for k in k_labels {
            if !seen.insert(*k) {
                return Err(Error::Layout(format!("duplicate K label {k}")));
            }
        }
        let binary = |name: &str, width: usize| Register {
            name: name.to_string(),
            labels: Bits::all(width).map(|b| b.to_string()).collect(),
        };
        Ok(Self {
            registers: [
                Register {
                    name: K.to_string(),
                    labels: k_labels.iter().map(|k| k.to_string()).collect(),
                },
                binary(X, x_bits),
                binary(V, v_bits),
            ],
            x_bits,
            v_bits,
        })
    }

    pub fn for_family(family: &FunctionFamily) -> Result<Self> {
        Self::new(&family.k_labels(), family.x_bits(), family.v_bits())
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn x_bits(&self) -> usize {
        self.x_bits
    }

    pub fn v_bits(&self) -> usize {
        self.v_bits
    }

    pub fn k_dim(&self) -> usize {
        self.registers[0].dim()
    }

    pub fn x_dim(&self) -> usize {
        self.registers[1].dim()
    }

    pub fn v_dim(&self) -> usize {
        self.registers[2].dim()
    }

    pub fn total_dim(&self) -> usize {
        self.registers.iter().map(Register::dim).product()
    }

    pub fn index(&self, k: usize, x: usize, v: usize) -> usize {
        (k * self.x_dim() + x) * self.v_dim() + v
    }

    pub fn decompose(&self, index: usize) -> (usize, usize, usize) {
        let v = index % self.v_dim();
        let rest = index / self.v_dim();
        (rest / self.x_dim(), rest % self.x_dim(), v)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::Layout(format!("no register named {name:?}")))
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        Ok(&self.registers[self.position(name)?])
    }

    /// Number of basis states of the registers after `position`.
    fn stride(&self, position: usize) -> usize {
        self.registers[position + 1..].iter().map(Register::dim).product()
    }
}

/// Per-qubit preparation of `V` as `alpha (|0> + |1>) + beta (|0> - |1>)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VPreparation {
    pub alpha: C64,
    pub beta: C64,
}

impl VPreparation {
    pub fn new(alpha: C64, beta: C64) -> Self {
        Self { alpha, beta }
    }

    pub fn symmetric() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn antisymmetric() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    /// `c0 |0> + c1 |1>` per qubit.
    pub fn computational(c0: C64, c1: C64) -> Self {
        Self::new((c0 + c1) * 0.5, (c0 - c1) * 0.5)
    }

    /// Every `V` qubit in `|0>`.
    pub fn zeros() -> Self {
        Self::computational(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Unnormalized amplitudes of `|0>` and `|1>` for one qubit.
    pub fn qubit_amplitudes(&self) -> [C64; 2] {
        [self.alpha + self.beta, self.alpha - self.beta]
    }

    /// Unnormalized amplitude of the basis string `v` of a `width`-qubit
    /// register: the product of the per-qubit amplitudes.
    pub fn amplitude(&self, v: Bits) -> C64 {
        let [a0, a1] = self.qubit_amplitudes();
        (0..v.width()).fold(C64::new(1.0, 0.0), |acc, i| acc * if v.bit(i) { a1 } else { a0 })
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha.norm_sqr() + self.beta.norm_sqr() == 0.0
    }
}

/// Phases `e^{i delta_k}` attached to the `K` superposition.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseAssignment {
    phases: BTreeMap<usize, f64>,
}

impl PhaseAssignment {
    pub fn new(phases: BTreeMap<usize, f64>) -> Result<Self> {
        if let Some((k, a)) = phases.iter().find(|(_, a)| !a.is_finite()) {
            return Err(Error::Layout(format!("phase for k index {k} is not finite: {a}")));
        }
        Ok(Self {
            phases: phases.into_iter().map(|(k, a)| (k, a.rem_euclid(TAU))).collect(),
        })
    }

    pub fn uniform() -> Self {
        Self { phases: BTreeMap::new() }
    }

    pub fn random<R: Rng>(k_dim: usize, rng: &mut R) -> Self {
        Self {
            phases: (0..k_dim).map(|k| (k, rng.gen_range(0.0..TAU))).collect(),
        }
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.phases.get(&k).copied().unwrap_or(0.0)
    }
}

/// Marginal distribution of one register.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, label: &str) -> f64 {
        self.labels
            .iter()
            .position(|l| l == label)
            .map_or(0.0, |i| self.probs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.labels.iter().map(String::as_str).zip(self.probs.iter().copied())
    }

    /// Outcomes with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<&str> {
        self.iter().filter(|(_, p)| *p > tol).map(|(l, _)| l).collect()
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: Arc<RegisterLayout>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(layout: Arc<RegisterLayout>, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::Layout(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn zero(layout: Arc<RegisterLayout>) -> Self {
        let n = layout.total_dim();
        Self { layout, amplitudes: vec![C64::new(0.0, 0.0); n] }
    }

    /// The sharp state `|k>|x>|v>`.
    pub fn basis(layout: Arc<RegisterLayout>, k: usize, x: usize, v: usize) -> Self {
        let mut s = Self::zero(layout);
        let i = s.layout.index(k, x, v);
        s.amplitudes[i] = C64::new(1.0, 0.0);
        s
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> Arc<RegisterLayout> {
        Arc::clone(&self.layout)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, k: usize, x: usize, v: usize) -> C64 {
        self.amplitudes[self.layout.index(k, x, v)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        (n > 0.0).then(|| Self {
            layout: Arc::clone(&self.layout),
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            layout: Arc::clone(&self.layout),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Normalization { norm_sqr: self.norm_sqr() })
        }
    }

    fn require_same_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout == other.layout {
            Ok(())
        } else {
            Err(Error::Layout("states live on different layouts".into()))
        }
    }

    /// Moves every basis amplitude `(k, x, v)` to `(k, x, v xor f_k(x))`.
    pub fn apply_oracle(&self, family: &FunctionFamily) -> Result<Self> {
        let l = &*self.layout;
        if family.x_bits() != l.x_bits() || family.v_bits() != l.v_bits() {
            return Err(Error::Layout(format!(
                "family {} is ({}, {}) bits, layout is ({}, {})",
                family.name(),
                family.x_bits(),
                family.v_bits(),
                l.x_bits(),
                l.v_bits()
            )));
        }
        if family.len() != l.k_dim() {
            return Err(Error::Layout(format!(
                "family {} has {} members, K has dimension {}",
                family.name(),
                family.len(),
                l.k_dim()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        for (k, member) in family.members().iter().enumerate() {
            for x in 0..l.x_dim() {
                let fx = member.value(x).index();
                for v in 0..l.v_dim() {
                    out[l.index(k, x, v ^ fx)] = self.amplitudes[l.index(k, x, v)];
                }
            }
        }
        Ok(Self { layout: Arc::clone(&self.layout), amplitudes: out })
    }

    /// Applies `unitary` to one register, identity elsewhere.
    pub fn apply_on_register(&self, register: &str, unitary: &CMatrix) -> Result<Self> {
        let pos = self.layout.position(register)?;
        let dim = self.layout.registers()[pos].dim();
        if unitary.nrows() != dim || unitary.ncols() != dim {
            return Err(Error::Layout(format!(
                "{}x{} matrix on register {register} of dimension {dim}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let deviation = unitarity_deviation(unitary);
        if deviation > TOL {
            return Err(Error::Unitarity { deviation });
        }
        let stride = self.layout.stride(pos);
        let block = dim * stride;
        let mut out = vec![C64::new(0.0, 0.0); self.amplitudes.len()];
        let mut column = vec![C64::new(0.0, 0.0); dim];
        for base in (0..self.amplitudes.len()).step_by(block) {
            for inner in 0..stride {
                for (j, c) in column.iter_mut().enumerate() {
                    *c = self.amplitudes[base + j * stride + inner];
                }
                for i in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, c) in column.iter().enumerate() {
                        acc += unitary[(i, j)] * c;
                    }
                    out[base + i * stride + inner] = acc;
                }
            }
        }
        Ok(Self { layout: Arc::clone(&self.layout), amplitudes: out })
    }

    /// Born-rule marginal of one register.
    pub fn measure_distribution(&self, register: &str) -> Result<Distribution> {
        self.require_normalized()?;
        let pos = self.layout.position(register)?;
        let reg = &self.layout.registers()[pos];
        let stride = self.layout.stride(pos);
        let dim = reg.dim();
        let mut probs = vec![0.0; dim];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[(i / stride) % dim] += a.norm_sqr();
        }
        Ok(Distribution { labels: reg.labels.clone(), probs })
    }

    /// Projects onto basis vector `outcome` of `register` and renormalizes.
    pub fn collapse(&self, register: &str, outcome: usize) -> Result<Self> {
        let pos = self.layout.position(register)?;
        let reg = &self.layout.registers()[pos];
        let stride = self.layout.stride(pos);
        let dim = reg.dim();
        if outcome >= dim {
            return Err(Error::Layout(format!("outcome {outcome} out of range for {register}")));
        }
        let mut out = self.clone();
        for (i, a) in out.amplitudes.iter_mut().enumerate() {
            if (i / stride) % dim != outcome {
                *a = C64::new(0.0, 0.0);
            }
        }
        let p = out.norm_sqr();
        if p <= TOL * TOL {
            return Err(Error::ImpossibleOutcome {
                register: register.to_string(),
                outcome: reg.label(outcome).to_string(),
            });
        }
        Ok(out.normalized().expect("nonzero norm"))
    }

    pub fn collapse_label(&self, register: &str, label: &str) -> Result<Self> {
        let reg = self.layout.register(register)?;
        let outcome = reg
            .position_of(label)
            .ok_or_else(|| Error::Layout(format!("register {register} has no outcome {label:?}")))?;
        self.collapse(register, outcome)
    }

    /// Distribution of `target` given that `given` was measured as `outcome`.
    pub fn conditional_distribution(
        &self,
        given: &str,
        outcome: usize,
        target: &str,
    ) -> Result<Distribution> {
        self.collapse(given, outcome)?.measure_distribution(target)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.require_same_layout(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<a|b>|` after normalizing both.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        let ip = self.inner(other)?.norm();
        let n = (self.norm_sqr() * other.norm_sqr()).sqrt();
        Ok(if n == 0.0 { 0.0 } else { ip / n })
    }

    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool> {
        Ok(self.overlap(other)? >= 1.0 - tol)
    }

    /// The `dim_x x dim_v` block of amplitudes for one `k`.
    pub fn xv_block(&self, k: usize) -> CMatrix {
        let l = &*self.layout;
        CMatrix::from_fn(l.x_dim(), l.v_dim(), |x, v| self.amplitude(k, x, v))
    }

    /// Splits the amplitudes into a matrix with rows indexed by the given
    /// registers (in layout order) and columns by the remaining ones.
    pub fn bipartite_matrix(&self, rows: &[&str]) -> Result<CMatrix> {
        let positions = self.partition_positions(rows)?;
        let regs = self.layout.registers();
        let row_dim: usize = positions.iter().map(|&p| regs[p].dim()).product();
        let col_dim = self.layout.total_dim() / row_dim;
        let mut m = CMatrix::zeros(row_dim, col_dim);
        for (i, a) in self.amplitudes.iter().enumerate() {
            let (k, x, v) = self.layout.decompose(i);
            let digits = [k, x, v];
            let (mut r, mut c) = (0, 0);
            for (p, reg) in regs.iter().enumerate() {
                if positions.contains(&p) {
                    r = r * reg.dim() + digits[p];
                } else {
                    c = c * reg.dim() + digits[p];
                }
            }
            m[(r, c)] = *a;
        }
        Ok(m)
    }

    pub(crate) fn partition_positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut positions = Vec::new();
        for name in names {
            let p = self
                .layout
                .position(name)
                .map_err(|_| Error::Partition(format!("unknown register {name:?}")))?;
            if positions.contains(&p) {
                return Err(Error::Partition(format!("register {name} listed twice")));
            }
            positions.push(p);
        }
        positions.sort_unstable();
        Ok(positions)
    }
}

/// Builds the even-weighted product of `K` (carrying `kphases`) and `X`,
/// with each `V` qubit prepared per `vprep`.
pub fn prepare_extended(
    layout: Arc<RegisterLayout>,
    vprep: &VPreparation,
    kphases: &PhaseAssignment,
) -> Result<StateVector> {
    if vprep.is_degenerate() {
        return Err(Error::DegeneratePreparation);
    }
    let mut s = StateVector::zero(Arc::clone(&layout));
    let v_amps: Vec<C64> = Bits::all(layout.v_bits()).map(|v| vprep.amplitude(v)).collect();
    if v_amps.iter().all(|a| a.norm_sqr() == 0.0) {
        return Err(Error::DegeneratePreparation);
    }
    for k in 0..layout.k_dim() {
        let phase = C64::from_polar(1.0, kphases.angle(k));
        for x in 0..layout.x_dim() {
            for (v, va) in v_amps.iter().enumerate() {
                let i = layout.index(k, x, v);
                s.amplitudes[i] = phase * va;
            }
        }
    }
    Ok(s.normalized().expect("nonzero preparation"))
}

/// Free-function form of the global-phase-insensitive comparison.
pub fn states_equal_up_to_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    a.equals_up_to_phase(b, tol)
}
