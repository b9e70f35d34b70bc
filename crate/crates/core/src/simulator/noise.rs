//! Monte Carlo Pauli-noise simulation.
//!
//! Each shot evolves its own state-vector trajectory: after every gate, a
//! uniformly chosen non-identity Pauli is injected on the gate's qubits
//! with probability `p1` (1q gates) or `p2` (CNOT), then the trajectory is
//! measured once and readout bit-flips are applied. Trajectories are
//! independent, so shots run in parallel; each shot derives its RNG from
//! (seed, shot index), which makes histograms reproducible regardless of
//! thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::shift;
use crate::circuit::{Circuit, Gate};
use crate::simulator::{apply_gate, cumulative_weights, draw, Histogram};
use crate::{Error, Result};

/// Depolarizing-style stochastic Pauli noise plus readout flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Error probability per 1q gate.
    pub p1: f64,
    /// Error probability per CNOT.
    pub p2: f64,
    /// Per-qubit measurement bit-flip probability.
    pub readout_flip: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout_flip: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2), ("readout_flip", readout_flip)] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        Ok(Self {
            p1,
            p2,
            readout_flip,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            readout_flip: 0.0,
        }
    }
}

/// Run `shots` noisy trajectories of a lowered circuit starting from
/// |0...0> and return the aggregated measurement histogram over the data
/// qubits (ancillas are traced out by the measurement).
pub fn run_noisy(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    for g in circuit.gates() {
        if !(g.is_single_qubit() || matches!(g, Gate::Cnot { .. })) {
            return Err(Error::NotLowered(g.kind_name().to_string()));
        }
    }
    let total = circuit.total_width();
    crate::simulator::StateVector::check_cap(total)?;
    let a = circuit.ancillas();
    let outcomes: Vec<u64> = (0..shots)
        .into_par_iter()
        .map(|shot| trajectory(circuit, noise, seed, shot, total, a))
        .collect();
    Ok(Histogram::from_outcomes(circuit.width(), outcomes))
}

fn trajectory(
    circuit: &Circuit,
    noise: &NoiseModel,
    seed: u64,
    shot: u64,
    total: usize,
    ancillas: usize,
) -> u64 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(shot.wrapping_add(1));
    let mut amps = vec![Complex64::ZERO; 1 << total];
    amps[0] = Complex64::ONE;
    for gate in circuit.gates() {
        apply_gate(&mut amps, total, gate);
        match gate {
            Gate::Cnot { control, target } => {
                if noise.p2 > 0.0 && rng.random::<f64>() < noise.p2 {
                    // one of the 15 non-identity two-qubit Paulis
                    let idx = rng.random_range(1..16u8);
                    inject_pauli(&mut amps, total, *control, idx >> 2);
                    inject_pauli(&mut amps, total, *target, idx & 3);
                }
            }
            g if g.is_single_qubit() => {
                if noise.p1 > 0.0 && rng.random::<f64>() < noise.p1 {
                    let idx = rng.random_range(1..4u8);
                    inject_pauli(&mut amps, total, g.operands()[0], idx);
                }
            }
            _ => unreachable!("validated lowered circuit"),
        }
    }
    let cumulative = cumulative_weights(&amps);
    let totw = *cumulative.last().expect("non-empty");
    let r: f64 = rng.random::<f64>() * totw;
    let full = draw(&cumulative, r);
    // measure data qubits only
    let mut outcome = full >> ancillas;
    if noise.readout_flip > 0.0 {
        let width = total - ancillas;
        for q in 0..width {
            if rng.random::<f64>() < noise.readout_flip {
                outcome ^= 1 << shift(width, q);
            }
        }
    }
    outcome
}

// 0 = I, 1 = X, 2 = Y, 3 = Z
fn inject_pauli(amps: &mut [Complex64], n: usize, qubit: usize, pauli: u8) {
    let mask = 1usize << shift(n, qubit);
    match pauli {
        0 => {}
        1 => {
            for i in 0..amps.len() {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                }
            }
        }
        2 => {
            let i_pos = Complex64::new(0.0, 1.0);
            let i_neg = Complex64::new(0.0, -1.0);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let a0 = amps[i];
                    let a1 = amps[i | mask];
                    amps[i] = i_neg * a1;
                    amps[i | mask] = i_pos * a0;
                }
            }
        }
        3 => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = -*a;
                }
            }
        }
        _ => unreachable!(),
    }
}
