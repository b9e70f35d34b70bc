//! Dense state-vector simulation.
//!
//! [`run`] executes a circuit by matrix-vector gate application, appending
//! ancillas in |0> and stripping them afterwards. The `*_fast` methods on
//! [`StateVector`] apply oracles and block diffusions directly in amplitude
//! space, bypassing gates entirely — the workhorse for large-n checks.

mod noise;

pub use noise::{run_noisy, NoiseModel};

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{shift, BitString};
use crate::circuit::{Circuit, Gate};
use crate::{Error, Result};

/// Default cap on dense-simulation qubits; override with the
/// `LOCALSEARCH_MAX_QUBITS` environment variable.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Current simulator cap (env override or default).
pub fn max_qubits() -> usize {
    max_qubits_from(std::env::var("LOCALSEARCH_MAX_QUBITS").ok().as_deref())
}

fn max_qubits_from(raw: Option<&str>) -> usize {
    raw.and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0 && n <= 30)
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

/// 2^n complex amplitudes over n qubits. Qubit 0 is the index MSB.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub(crate) fn check_cap(n: usize) -> Result<()> {
        let cap = max_qubits();
        if n == 0 || n > cap {
            return Err(Error::QubitCapExceeded { requested: n, cap });
        }
        Ok(())
    }

    /// |0...0>
    pub fn zero(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Ok(Self { n, amps })
    }

    /// The uniform superposition of all 2^n basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        let a = Complex64::new((1.0 / (1u64 << n) as f64).sqrt(), 0.0);
        Ok(Self {
            n,
            amps: vec![a; 1 << n],
        })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                1u64 << n,
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, b: &BitString) -> Complex64 {
        self.amps[b.index() as usize]
    }

    pub fn probability(&self, b: &BitString) -> f64 {
        self.amps[b.index() as usize].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Flip the sign of each marked basis state (phase-oracle action).
    pub fn apply_oracle_fast(&mut self, targets: &[BitString]) -> Result<()> {
        if targets.is_empty() {
            return Err(Error::EmptyTargetSet);
        }
        for t in targets {
            if t.width() != self.n {
                return Err(Error::MalformedBitString(t.to_string(), self.n));
            }
        }
        for t in targets {
            self.amps[t.index() as usize] = -self.amps[t.index() as usize];
        }
        Ok(())
    }

    /// Inversion about the mean within every block of basis states sharing
    /// the assignment of all qubits outside `subset`.
    pub fn apply_local_diffusion_fast(&mut self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; self.n];
        for &q in subset {
            if q >= self.n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    width: self.n,
                });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        let sub_shifts: Vec<u32> = subset.iter().map(|&q| shift(self.n, q)).collect();
        let comp_shifts: Vec<u32> = (0..self.n)
            .filter(|q| !seen[*q])
            .map(|q| shift(self.n, q))
            .collect();
        let block = 1usize << sub_shifts.len();
        let inv_block = 1.0 / block as f64;
        let mut members = vec![0usize; block];
        for (j, slot) in members.iter_mut().enumerate() {
            let mut idx = 0usize;
            for (bit, &s) in sub_shifts.iter().enumerate() {
                if (j >> bit) & 1 == 1 {
                    idx |= 1 << s;
                }
            }
            *slot = idx;
        }
        for c in 0..(1usize << comp_shifts.len()) {
            let mut base = 0usize;
            for (bit, &s) in comp_shifts.iter().enumerate() {
                if (c >> bit) & 1 == 1 {
                    base |= 1 << s;
                }
            }
            let mut mean = Complex64::ZERO;
            for &m in &members {
                mean += self.amps[base | m];
            }
            mean *= 2.0 * inv_block;
            for &m in &members {
                let a = &mut self.amps[base | m];
                *a = mean - *a;
            }
        }
        Ok(())
    }

    /// Inversion about the global mean (diffusion over all qubits).
    pub fn apply_global_diffusion_fast(&mut self) -> Result<()> {
        let all: Vec<usize> = (0..self.n).collect();
        self.apply_local_diffusion_fast(&all)
    }

    /// Dump as a JSON array of [re, im] pairs.
    pub fn to_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&pairs).expect("state serializes")
    }
}

/// Execute `circuit` on `initial`. Ancillas are appended in |0>, must end
/// in |0> (within 1e-9 total weight) and are stripped from the output.
pub fn run(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    if initial.n != circuit.width() {
        return Err(Error::WidthMismatch {
            state: initial.n,
            circuit: circuit.width(),
        });
    }
    let a = circuit.ancillas();
    let total = circuit.width() + a;
    StateVector::check_cap(total)?;
    let mut amps = if a == 0 {
        initial.amps.clone()
    } else {
        let mut v = vec![Complex64::ZERO; 1 << total];
        for (i, &amp) in initial.amps.iter().enumerate() {
            v[i << a] = amp;
        }
        v
    };
    for gate in circuit.gates() {
        apply_gate(&mut amps, total, gate);
    }
    if a == 0 {
        return Ok(StateVector { n: total, amps });
    }
    let mask = (1usize << a) - 1;
    let mut residual = 0.0;
    let mut out = vec![Complex64::ZERO; 1 << circuit.width()];
    for (i, &amp) in amps.iter().enumerate() {
        if i & mask == 0 {
            out[i >> a] = amp;
        } else {
            residual += amp.norm_sqr();
        }
    }
    if residual > 1e-9 {
        return Err(Error::AncillaNotRestored(residual));
    }
    Ok(StateVector {
        n: circuit.width(),
        amps: out,
    })
}

pub(crate) fn apply_gate(amps: &mut [Complex64], n: usize, gate: &Gate) {
    match gate {
        Gate::H(q) => {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            for_pairs(amps, n, *q, |a0, a1| {
                let (x, y) = (*a0, *a1);
                *a0 = h * (x + y);
                *a1 = h * (x - y);
            });
        }
        Gate::X(q) => for_pairs(amps, n, *q, |a0, a1| std::mem::swap(a0, a1)),
        Gate::Z(q) => {
            let mask = 1usize << shift(n, *q);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = -*a;
                }
            }
        }
        Gate::T(q) => phase(amps, n, *q, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
        Gate::Tdg(q) => {
            phase(amps, n, *q, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4))
        }
        Gate::Cnot { control, target } => {
            let cm = 1usize << shift(n, *control);
            let tm = 1usize << shift(n, *target);
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Cz(a, b) => {
            let m = (1usize << shift(n, *a)) | (1usize << shift(n, *b));
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        Gate::Swap(a, b) => {
            let am = 1usize << shift(n, *a);
            let bm = 1usize << shift(n, *b);
            for i in 0..amps.len() {
                if i & am != 0 && i & bm == 0 {
                    amps.swap(i, (i & !am) | bm);
                }
            }
        }
        Gate::Mcx { controls, target } => {
            let cm: usize = controls.iter().map(|&q| 1usize << shift(n, q)).sum();
            let tm = 1usize << shift(n, *target);
            for i in 0..amps.len() {
                if i & cm == cm && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::Mcz { qubits } => {
            let m: usize = qubits.iter().map(|&q| 1usize << shift(n, q)).sum();
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        Gate::PhaseOracle { marked } => {
            // defined over the data register; ancillas (low bits) untouched
            let a = n - marked[0].width();
            for t in marked {
                let base = (t.index() as usize) << a;
                for i in base..base + (1 << a) {
                    amps[i] = -amps[i];
                }
            }
        }
    }
}

fn for_pairs(amps: &mut [Complex64], n: usize, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
    let mask = 1usize << shift(n, q);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let (lo, hi) = amps.split_at_mut(i | mask);
            f(&mut lo[i], &mut hi[0]);
        }
    }
}

fn phase(amps: &mut [Complex64], n: usize, q: usize, p: Complex64) {
    let mask = 1usize << shift(n, q);
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask != 0 {
            *a *= p;
        }
    }
}

/// Measurement counts over `shots` repetitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    width: usize,
    counts: BTreeMap<u64, u64>,
    shots: u64,
}

impl Histogram {
    pub(crate) fn from_outcomes(width: usize, outcomes: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        let mut shots = 0;
        for o in outcomes {
            *counts.entry(o).or_insert(0) += 1;
            shots += 1;
        }
        Self {
            width,
            counts,
            shots,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn count(&self, b: &BitString) -> u64 {
        self.counts.get(&b.index()).copied().unwrap_or(0)
    }

    /// (index, count) pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// `bitstring,count` rows under a `#shots=` header comment.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#shots={}", self.shots)?;
        writeln!(w, "bitstring,count")?;
        for (&idx, &cnt) in &self.counts {
            let b = BitString::new(self.width, idx).expect("histogram index in range");
            writeln!(w, "{b},{cnt}")?;
        }
        Ok(())
    }
}

impl Serialize for Histogram {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let counts: BTreeMap<String, u64> = self
            .counts
            .iter()
            .map(|(&i, &c)| {
                (
                    BitString::new(self.width, i).expect("in range").to_string(),
                    c,
                )
            })
            .collect();
        HistogramJson {
            width: self.width,
            shots: self.shots,
            counts,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Histogram {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = HistogramJson::deserialize(de)?;
        let mut counts = BTreeMap::new();
        for (s, c) in raw.counts {
            let b = BitString::parse(&s, raw.width).map_err(serde::de::Error::custom)?;
            counts.insert(b.index(), c);
        }
        Ok(Histogram {
            width: raw.width,
            counts,
            shots: raw.shots,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct HistogramJson {
    width: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

/// Draw `shots` i.i.d. samples from |a_i|^2. Deterministic for a fixed
/// seed (ChaCha12 keystream).
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let cumulative = cumulative_weights(&state.amps);
    let total = *cumulative.last().expect("non-empty state");
    let outcomes = (0..shots).map(|_| {
        let r: f64 = rng.random::<f64>() * total;
        draw(&cumulative, r)
    });
    Ok(Histogram::from_outcomes(state.n, outcomes))
}

pub(crate) fn cumulative_weights(amps: &[Complex64]) -> Vec<f64> {
    let mut acc = 0.0;
    amps.iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect()
}

pub(crate) fn draw(cumulative: &[f64], r: f64) -> u64 {
    cumulative.partition_point(|&c| c <= r) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_global_diffusion, build_oracle};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_wall_gives_uniform_state() {
        let mut c = Circuit::new(4);
        for q in 0..4 {
            c.push(Gate::H(q)).unwrap();
        }
        let out = run(&c, &StateVector::zero(4).unwrap()).unwrap();
        for a in out.amplitudes() {
            assert!((a.re - 0.25).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = StateVector::uniform(3).unwrap();
        let out = run(&Circuit::new(3), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn width_mismatch_rejected() {
        let s = StateVector::zero(3).unwrap();
        assert!(matches!(
            run(&Circuit::new(4), &s),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn oracle_flips_only_the_target_amplitude() {
        // uniform 4-qubit state, target 0001 -> index 1 negated
        let mut s = StateVector::uniform(4).unwrap();
        s.apply_oracle_fast(&[bs("0001")]).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let want = if i == 1 { -0.25 } else { 0.25 };
            assert!((a.re - want).abs() < 1e-12);
        }
        // and through the gate path
        let c = build_oracle(4, &[bs("0001")]).unwrap();
        let out = run(&c, &StateVector::uniform(4).unwrap()).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            let want = if i == 1 { -0.25 } else { 0.25 };
            assert!((a.re - want).abs() < 1e-12, "index {i}: {a}");
        }
    }

    #[test]
    fn global_diffusion_matches_inversion_about_mean() {
        // 2|psi><psi| - I applied to e0 on two qubits: (-1/2, 1/2, 1/2, 1/2)
        let c = build_global_diffusion(2).unwrap();
        let out = run(&c, &StateVector::zero(2).unwrap()).unwrap();
        // compare modulo global phase: fix sign by first nonzero entry
        let phase = out.amplitudes()[0] / Complex64::new(-0.5, 0.0);
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (a, &w) in out.amplitudes().iter().zip(&want) {
            let z = a / phase;
            assert!((z.re - w).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
        // uniform state is a +1 eigenvector (up to the same global phase)
        let u = StateVector::uniform(2).unwrap();
        let out = run(&c, &u).unwrap();
        let phase = out.amplitudes()[0] / u.amplitudes()[0];
        for (a, b) in out.amplitudes().iter().zip(u.amplitudes()) {
            assert!((a / phase - b).norm() < 1e-12);
        }
    }

    #[test]
    fn local_diffusion_fixes_uniform_blocks() {
        // uniform within every block -> unchanged
        let mut s = StateVector::uniform(4).unwrap();
        let before = s.clone();
        s.apply_local_diffusion_fast(&[2, 3]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn local_diffusion_over_all_qubits_is_global() {
        let mut a = StateVector::zero(3).unwrap();
        a.apply_local_diffusion_fast(&[0, 1, 2]).unwrap();
        let mut b = StateVector::zero(3).unwrap();
        b.apply_global_diffusion_fast().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_is_deterministic_and_counts_sum() {
        let s = StateVector::zero(1).unwrap();
        let h = sample(&s, 100, 7).unwrap();
        assert_eq!(h.count(&bs("0")), 100);
        assert_eq!(h.shots(), 100);
        let u = StateVector::uniform(3).unwrap();
        let h1 = sample(&u, 4096, 42).unwrap();
        let h2 = sample(&u, 4096, 42).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.iter().map(|(_, c)| c).sum::<u64>(), 4096);
        assert!(sample(&u, 0, 1).is_err());
    }

    #[test]
    fn uniform_two_qubit_counts_within_binomial_bounds() {
        let u = StateVector::uniform(2).unwrap();
        let h = sample(&u, 8192, 1).unwrap();
        // 5 sigma around 2048, sigma = sqrt(8192*0.25*0.75) ~ 39.2
        for idx in 0..4u64 {
            let c = h.count(&BitString::new(2, idx).unwrap()) as f64;
            assert!((c - 2048.0).abs() < 5.0 * 39.2, "outcome {idx}: {c}");
        }
    }

    #[test]
    fn histogram_csv_format() {
        let s = StateVector::zero(2).unwrap();
        let h = sample(&s, 5, 0).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "#shots=5\nbitstring,count\n00,5\n");
    }

    #[test]
    fn cap_respects_env_override_parsing() {
        assert_eq!(max_qubits_from(None), DEFAULT_MAX_QUBITS);
        assert_eq!(max_qubits_from(Some("12")), 12);
        assert_eq!(max_qubits_from(Some("junk")), DEFAULT_MAX_QUBITS);
        assert_eq!(max_qubits_from(Some("0")), DEFAULT_MAX_QUBITS);
        assert!(StateVector::zero(DEFAULT_MAX_QUBITS + 1).is_err());
    }
}
