//! Lowering to the basic gate set: 1q gates + CNOT.
//!
//! Multi-controlled X gates are decomposed with Toffoli networks whose
//! depth grows linearly in the control count:
//!
//! * `BorrowedAncillaLinear` (default) — one extra ancilla, which may hold
//!   arbitrary state ("dirty"); large gates are split in half and each half
//!   is built from a Toffoli ladder that borrows the other half's qubits.
//! * `VChain` — `controls - 2` clean ancillas, compute/uncompute ladder.
//! * `NoAncillaRecursive` — the borrowed construction using only idle data
//!   qubits; fails if a gate spans every qubit of the circuit.
//!
//! Every construction restores borrowed and allocated qubits exactly, so
//! the lowered circuit is unitarily equivalent on the data qubits.

use super::{Circuit, CostModel, Gate, McxScheme};
use crate::bits::BitString;
use crate::{Error, Result};

/// Lower `circuit` to 1q + CNOT gates using the scheme from `model`.
///
/// The circuit's declared ancilla budget must cover the scheme's needs (see
/// [`required_ancillas`]); the lowered circuit keeps the same width and
/// ancilla count and returns every ancilla to |0>.
pub fn lower(circuit: &Circuit, model: &CostModel) -> Result<Circuit> {
    let needed = required_ancillas(circuit, model.mcx_scheme);
    if circuit.ancillas() < needed {
        return Err(Error::InsufficientAncillas {
            needed,
            available: circuit.ancillas(),
        });
    }
    let mut out = Circuit::new(circuit.width()).with_ancillas(circuit.ancillas());
    let mut gates = Vec::new();
    for gate in circuit.gates() {
        lower_gate(gate, circuit, model.mcx_scheme, &mut gates)?;
    }
    for g in gates {
        out.push(g)?;
    }
    Ok(out)
}

/// Lower with an automatically sized ancilla budget.
pub fn lower_auto(circuit: &Circuit, model: &CostModel) -> Result<Circuit> {
    let needed = required_ancillas(circuit, model.mcx_scheme);
    let sized = circuit.clone().with_ancillas(circuit.ancillas().max(needed));
    lower(&sized, model)
}

/// Ancillas the scheme needs to lower every gate of `circuit`.
pub fn required_ancillas(circuit: &Circuit, scheme: McxScheme) -> usize {
    let mut max_controls = 0usize;
    for g in circuit.gates() {
        let c = match g {
            Gate::Mcx { controls, .. } => controls.len(),
            Gate::Mcz { qubits } => qubits.len() - 1,
            Gate::PhaseOracle { marked } => marked[0].width().saturating_sub(1),
            _ => 0,
        };
        max_controls = max_controls.max(c);
    }
    match scheme {
        McxScheme::BorrowedAncillaLinear => usize::from(max_controls >= 3),
        McxScheme::VChain => max_controls.saturating_sub(2),
        McxScheme::NoAncillaRecursive => 0,
    }
}

fn lower_gate(
    gate: &Gate,
    circuit: &Circuit,
    scheme: McxScheme,
    out: &mut Vec<Gate>,
) -> Result<()> {
    match gate {
        Gate::H(_) | Gate::X(_) | Gate::Z(_) | Gate::T(_) | Gate::Tdg(_) | Gate::Cnot { .. } => {
            out.push(gate.clone());
            Ok(())
        }
        Gate::Cz(a, b) => {
            out.push(Gate::H(*b));
            out.push(Gate::Cnot {
                control: *a,
                target: *b,
            });
            out.push(Gate::H(*b));
            Ok(())
        }
        Gate::Swap(a, b) => {
            out.push(Gate::Cnot {
                control: *a,
                target: *b,
            });
            out.push(Gate::Cnot {
                control: *b,
                target: *a,
            });
            out.push(Gate::Cnot {
                control: *a,
                target: *b,
            });
            Ok(())
        }
        Gate::Mcx { controls, target } => lower_mcx(controls, *target, circuit, scheme, out),
        Gate::Mcz { qubits } => {
            let (target, controls) = qubits.split_last().expect("validated: >= 2 qubits");
            out.push(Gate::H(*target));
            lower_mcx(controls, *target, circuit, scheme, out)?;
            out.push(Gate::H(*target));
            Ok(())
        }
        Gate::PhaseOracle { marked } => {
            let n = marked[0].width();
            for t in marked {
                let zeros: Vec<usize> = (0..n).filter(|&q| !t.qubit(q)).collect();
                for &q in &zeros {
                    out.push(Gate::X(q));
                }
                if n == 1 {
                    out.push(Gate::Z(0));
                } else {
                    let expanded = Gate::Mcz {
                        qubits: (0..n).collect(),
                    };
                    lower_gate(&expanded, circuit, scheme, out)?;
                }
                for &q in &zeros {
                    out.push(Gate::X(q));
                }
            }
            Ok(())
        }
    }
}

fn lower_mcx(
    controls: &[usize],
    target: usize,
    circuit: &Circuit,
    scheme: McxScheme,
    out: &mut Vec<Gate>,
) -> Result<()> {
    match controls.len() {
        0 => Err(Error::MissingControls),
        1 => {
            out.push(Gate::Cnot {
                control: controls[0],
                target,
            });
            Ok(())
        }
        2 => {
            toffoli(controls[0], controls[1], target, out);
            Ok(())
        }
        m => {
            let busy: Vec<bool> = {
                let mut b = vec![false; circuit.total_width()];
                for &q in controls {
                    b[q] = true;
                }
                b[target] = true;
                b
            };
            match scheme {
                McxScheme::VChain => {
                    // clean ancillas only
                    let clean: Vec<usize> = (circuit.width()..circuit.total_width())
                        .filter(|&q| !busy[q])
                        .collect();
                    if clean.len() < m - 2 {
                        return Err(Error::InsufficientAncillas {
                            needed: m - 2,
                            available: clean.len(),
                        });
                    }
                    v_chain(controls, target, &clean[..m - 2], out);
                    Ok(())
                }
                McxScheme::BorrowedAncillaLinear | McxScheme::NoAncillaRecursive => {
                    // dirty helpers: allocated ancillas first, then idle data qubits
                    let mut pool: Vec<usize> = (circuit.width()..circuit.total_width())
                        .filter(|&q| !busy[q])
                        .collect();
                    pool.extend((0..circuit.width()).filter(|&q| !busy[q]));
                    if pool.is_empty() {
                        return Err(Error::InsufficientAncillas {
                            needed: 1,
                            available: 0,
                        });
                    }
                    mcx_dirty(controls, target, &pool, out);
                    Ok(())
                }
            }
        }
    }
}

/// MCX with >= 3 controls using dirty helper qubits. With `m - 2` helpers
/// available the Toffoli ladder is used directly; otherwise the gate is
/// split in half through one helper, and each half borrows the other
/// half's qubits — the classic linear-depth construction.
fn mcx_dirty(controls: &[usize], target: usize, pool: &[usize], out: &mut Vec<Gate>) {
    let m = controls.len();
    debug_assert!(m >= 3 && !pool.is_empty());
    if pool.len() >= m - 2 {
        dirty_ladder(controls, target, &pool[..m - 2], out);
        return;
    }
    let borrow = pool[0];
    let c1 = m.div_ceil(2);
    let (half_a, half_b) = controls.split_at(c1);
    let mut b_with_borrow = half_b.to_vec();
    b_with_borrow.push(borrow);
    let mut pool_a: Vec<usize> = half_b.to_vec();
    pool_a.push(target);
    let pool_b = half_a.to_vec();
    // t ^= B·(borrow ^ A) ^ B·borrow = A·B; borrow restored by the repeat
    for _ in 0..2 {
        emit_sub_mcx(half_a, borrow, &pool_a, out);
        emit_sub_mcx(&b_with_borrow, target, &pool_b, out);
    }
}

fn emit_sub_mcx(controls: &[usize], target: usize, pool: &[usize], out: &mut Vec<Gate>) {
    match controls.len() {
        1 => out.push(Gate::Cnot {
            control: controls[0],
            target,
        }),
        2 => toffoli(controls[0], controls[1], target, out),
        m => {
            debug_assert!(pool.len() >= m - 2, "split halves always have enough dirty");
            dirty_ladder(controls, target, &pool[..m - 2], out);
        }
    }
}

/// Toffoli ladder on dirty helpers: 4(m-2) Toffolis, helpers restored.
fn dirty_ladder(controls: &[usize], target: usize, helpers: &[usize], out: &mut Vec<Gate>) {
    let m = controls.len();
    debug_assert!(m >= 3 && helpers.len() == m - 2);
    let mut pass = |out: &mut Vec<Gate>| {
        toffoli(controls[m - 1], helpers[m - 3], target, out);
        for i in (3..=m - 1).rev() {
            toffoli(controls[i - 1], helpers[i - 3], helpers[i - 2], out);
        }
        toffoli(controls[0], controls[1], helpers[0], out);
        for i in 3..=m - 1 {
            toffoli(controls[i - 1], helpers[i - 3], helpers[i - 2], out);
        }
    };
    pass(out);
    pass(out);
}

/// Compute/uncompute ladder on clean ancillas: 2(m-2)+1 Toffolis.
fn v_chain(controls: &[usize], target: usize, ancillas: &[usize], out: &mut Vec<Gate>) {
    let m = controls.len();
    debug_assert!(m >= 3 && ancillas.len() == m - 2);
    toffoli(controls[0], controls[1], ancillas[0], out);
    for i in 2..m - 1 {
        toffoli(controls[i], ancillas[i - 2], ancillas[i - 1], out);
    }
    toffoli(controls[m - 1], ancillas[m - 3], target, out);
    for i in (2..m - 1).rev() {
        toffoli(controls[i], ancillas[i - 2], ancillas[i - 1], out);
    }
    toffoli(controls[0], controls[1], ancillas[0], out);
}

/// Standard 6-CNOT Toffoli expansion.
fn toffoli(a: usize, b: usize, t: usize, out: &mut Vec<Gate>) {
    out.push(Gate::H(t));
    out.push(Gate::Cnot { control: b, target: t });
    out.push(Gate::Tdg(t));
    out.push(Gate::Cnot { control: a, target: t });
    out.push(Gate::T(t));
    out.push(Gate::Cnot { control: b, target: t });
    out.push(Gate::Tdg(t));
    out.push(Gate::Cnot { control: a, target: t });
    out.push(Gate::T(b));
    out.push(Gate::T(t));
    out.push(Gate::H(t));
    out.push(Gate::Cnot { control: a, target: b });
    out.push(Gate::T(a));
    out.push(Gate::Tdg(b));
    out.push(Gate::Cnot { control: a, target: b });
}

/// Expand PhaseOracle/MCZ/MCX-free gates that the noise simulator cannot
/// interpret; used by tests.
#[doc(hidden)]
pub fn toffoli_gates(a: usize, b: usize, t: usize) -> Vec<Gate> {
    let mut v = Vec::new();
    toffoli(a, b, t, &mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_oracle;

    #[test]
    fn single_control_mcx_is_one_cnot() {
        let mut c = Circuit::new(2);
        c.push(Gate::Mcx {
            controls: vec![0],
            target: 1,
        })
        .unwrap();
        let low = lower(&c, &CostModel::default()).unwrap();
        assert_eq!(
            low.gates(),
            &[Gate::Cnot {
                control: 0,
                target: 1
            }]
        );
    }

    #[test]
    fn toffoli_expands_to_six_cnots() {
        let mut c = Circuit::new(3);
        c.push(Gate::Mcx {
            controls: vec![0, 1],
            target: 2,
        })
        .unwrap();
        let low = lower(&c, &CostModel::default()).unwrap();
        assert_eq!(low.cnot_count(), 6);
        assert!(low.is_lowered());
    }

    #[test]
    fn insufficient_ancillas_is_an_error() {
        let t = BitString::parse("1111", 4).unwrap();
        let c = build_oracle(4, &[t]).unwrap(); // 3-control MCZ, no budget
        let err = lower(&c, &CostModel::default()).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientAncillas {
                needed: 1,
                available: 0
            }
        );
        let vchain = CostModel::default().with_scheme(McxScheme::VChain);
        let err = lower(&c, &vchain).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientAncillas {
                needed: 1,
                available: 0
            }
        );
    }

    #[test]
    fn auto_ancillas_sizes_by_scheme() {
        let t = BitString::parse("111111", 6).unwrap();
        let c = build_oracle(6, &[t]).unwrap(); // 5-control MCZ
        assert_eq!(
            required_ancillas(&c, McxScheme::BorrowedAncillaLinear),
            1
        );
        assert_eq!(required_ancillas(&c, McxScheme::VChain), 3);
        assert_eq!(required_ancillas(&c, McxScheme::NoAncillaRecursive), 0);
        let low = lower_auto(&c, &CostModel::default()).unwrap();
        assert!(low.is_lowered());
        assert_eq!(low.ancillas(), 1);
    }

    #[test]
    fn no_ancilla_scheme_needs_an_idle_qubit() {
        // local diffusion on 4 of 5 qubits leaves one idle data qubit
        let sub: Vec<usize> = (1..5).collect();
        let c = crate::circuit::build_local_diffusion(5, &sub).unwrap();
        let model = CostModel::default().with_scheme(McxScheme::NoAncillaRecursive);
        assert!(lower(&c, &model).is_ok());
        // spanning every qubit fails
        let t = BitString::parse("11111", 5).unwrap();
        let full = build_oracle(5, &[t]).unwrap();
        assert!(matches!(
            lower(&full, &model),
            Err(Error::InsufficientAncillas { .. })
        ));
    }
}
