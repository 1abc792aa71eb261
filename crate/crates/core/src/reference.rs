//! Hand-written textbook states for the single-query algorithms, used as
//! an independent check on the simulator.
//!
//! Each entry lists, per `k`, the signs of the `(x, v)` amplitudes in
//! basis order (`x` outer, `v` inner): `+`, `-` or `0`. States are
//! normalized after assembly.

use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::family::{builtin, BuiltinFamily};
use crate::gates::C64;
use crate::state::{RegisterLayout, StateVector};

pub struct ReferenceState {
    pub family: BuiltinFamily,
    /// `psi0`, `psi1` or `psi2`.
    pub stage: &'static str,
    pub terms: &'static [(&'static str, &'static str)],
}

const GROVER2_PSI0: &[(&str, &str)] = &[
    ("00", "+-+-+-+-"),
    ("01", "+-+-+-+-"),
    ("10", "+-+-+-+-"),
    ("11", "+-+-+-+-"),
];
const GROVER2_PSI1: &[(&str, &str)] = &[
    ("00", "-++-+-+-"),
    ("01", "+--++-+-"),
    ("10", "+-+--++-"),
    ("11", "+-+-+--+"),
];
const GROVER2_PSI2: &[(&str, &str)] = &[
    ("00", "+-000000"),
    ("01", "00+-0000"),
    ("10", "0000+-00"),
    ("11", "000000+-"),
];

const DEUTSCH_PSI0: &[(&str, &str)] = &[("00", "+-+-"), ("01", "+-+-"), ("10", "+-+-"), ("11", "+-+-")];
const DEUTSCH_PSI1: &[(&str, &str)] = &[("00", "+-+-"), ("11", "-+-+"), ("01", "+--+"), ("10", "-++-")];
const DEUTSCH_PSI2: &[(&str, &str)] = &[("00", "+-00"), ("11", "-+00"), ("01", "00+-"), ("10", "00-+")];

const DJ2_PSI0: &[(&str, &str)] = &[
    ("0000", "+-+-+-+-"),
    ("1111", "+-+-+-+-"),
    ("0011", "+-+-+-+-"),
    ("1100", "+-+-+-+-"),
    ("0101", "+-+-+-+-"),
    ("1010", "+-+-+-+-"),
    ("0110", "+-+-+-+-"),
    ("1001", "+-+-+-+-"),
];
const DJ2_PSI1: &[(&str, &str)] = &[
    ("0000", "+-+-+-+-"),
    ("1111", "-+-+-+-+"),
    ("0011", "+-+--+-+"),
    ("1100", "-+-++-+-"),
    ("0101", "+--++--+"),
    ("1010", "-++--++-"),
    ("0110", "+--+-++-"),
    ("1001", "-++-+--+"),
];
const DJ2_PSI2: &[(&str, &str)] = &[
    ("0000", "+-000000"),
    ("1111", "-+000000"),
    ("0011", "0000+-00"),
    ("1100", "0000-+00"),
    ("0101", "00+-0000"),
    ("1010", "00-+0000"),
    ("0110", "000000+-"),
    ("1001", "000000-+"),
];

const SIMON2_PSI0: &[(&str, &str)] = &[
    ("0011", "+0+0+0+0"),
    ("1100", "+0+0+0+0"),
    ("0101", "+0+0+0+0"),
    ("1010", "+0+0+0+0"),
    ("0110", "+0+0+0+0"),
    ("1001", "+0+0+0+0"),
];
// complement members carry the flipped V content
const SIMON2_PSI1: &[(&str, &str)] = &[
    ("0011", "+0+00+0+"),
    ("1100", "0+0++0+0"),
    ("0101", "+00++00+"),
    ("1010", "0++00++0"),
    ("0110", "+00+0++0"),
    ("1001", "0++0+00+"),
];
const SIMON2_PSI2: &[(&str, &str)] = &[
    ("0011", "++00+-00"),
    ("1100", "++00-+00"),
    ("0101", "+++-0000"),
    ("1010", "++-+0000"),
    ("0110", "++0000+-"),
    ("1001", "++0000-+"),
];

pub fn reference_states() -> Vec<ReferenceState> {
    use BuiltinFamily::*;
    let mut out = Vec::new();
    for (family, stages) in [
        (Grover(2), [GROVER2_PSI0, GROVER2_PSI1, GROVER2_PSI2]),
        (Deutsch, [DEUTSCH_PSI0, DEUTSCH_PSI1, DEUTSCH_PSI2]),
        (Dj(2), [DJ2_PSI0, DJ2_PSI1, DJ2_PSI2]),
        (Simon(2), [SIMON2_PSI0, SIMON2_PSI1, SIMON2_PSI2]),
    ] {
        for (stage, terms) in ["psi0", "psi1", "psi2"].into_iter().zip(stages) {
            out.push(ReferenceState { family, stage, terms });
        }
    }
    out
}

impl ReferenceState {
    pub fn state(&self) -> Result<StateVector> {
        let family = builtin(self.family)?;
        let layout = Arc::new(RegisterLayout::for_family(&family)?);
        let width = layout.x_dim() * layout.v_dim();
        let mut amps = vec![C64::new(0.0, 0.0); layout.total_dim()];
        for (k, signs) in self.terms {
            let k: Bits = k.parse()?;
            let ki = family
                .k_index(k)
                .ok_or_else(|| Error::Layout(format!("{} has no member {k}", self.family)))?;
            if signs.len() != width {
                return Err(Error::Layout(format!("term for {k} has {} signs, need {width}", signs.len())));
            }
            for (j, c) in signs.chars().enumerate() {
                let a = match c {
                    '+' => 1.0,
                    '-' => -1.0,
                    _ => 0.0,
                };
                amps[ki * width + j] = C64::new(a, 0.0);
            }
        }
        let s = StateVector::from_amplitudes(layout, amps)?;
        s.normalized().ok_or(Error::Cancellation)
    }
}
