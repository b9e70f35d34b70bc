//! Gate-level intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over `width` data qubits plus
//! `ancillas` extra qubits available to the lowering pass. The builders
//! here produce the three fragments every search algorithm is made of:
//! phase oracles, global diffusion and local diffusion. [`lower`] rewrites
//! a circuit into 1q gates + CNOT; [`Circuit::depth`] and
//! [`Circuit::cnot_count`] are the cost metrics.

mod cost;
mod lowering;

pub use cost::{CostModel, LinearCost, McxScheme};
pub use lowering::{lower, required_ancillas};

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::{Error, Result};

/// One gate of the IR. Controls come before targets in the operand order.
///
/// `T`/`Tdg` are not constructible from the JSON surface of search
/// algorithms; they exist because the standard 6-CNOT Toffoli expansion
/// produced by lowering needs them.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    T(usize),
    Tdg(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Swap(usize, usize),
    Mcx { controls: Vec<usize>, target: usize },
    Mcz { qubits: Vec<usize> },
    /// Diagonal operator: -1 on every marked basis state, +1 elsewhere.
    PhaseOracle { marked: Vec<BitString> },
}

impl Gate {
    /// Qubits the gate acts on, controls first.
    pub fn operands(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Cz(a, b) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::Mcx { controls, target } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::Mcz { qubits } => qubits.clone(),
            // A phase oracle touches every qubit of the register it marks.
            Gate::PhaseOracle { marked } => (0..marked[0].width()).collect(),
        }
    }

    pub fn is_single_qubit(&self) -> bool {
        matches!(
            self,
            Gate::H(_) | Gate::X(_) | Gate::Z(_) | Gate::T(_) | Gate::Tdg(_)
        )
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "Tdg",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Mcx { .. } => "MCX",
            Gate::Mcz { .. } => "MCZ",
            Gate::PhaseOracle { .. } => "PhaseOracle",
        }
    }

    fn validate(&self, total_width: usize) -> Result<()> {
        let ops = self.operands();
        for &q in &ops {
            if q >= total_width {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    width: total_width,
                });
            }
        }
        let mut seen = vec![false; total_width];
        for &q in &ops {
            if seen[q] {
                return Err(Error::DuplicateQubit(q));
            }
            seen[q] = true;
        }
        match self {
            Gate::Mcx { controls, .. } if controls.is_empty() => Err(Error::MissingControls),
            Gate::Mcz { qubits } if qubits.len() < 2 => Err(Error::MissingControls),
            Gate::PhaseOracle { marked } => {
                if marked.is_empty() {
                    return Err(Error::EmptyTargetSet);
                }
                let w = marked[0].width();
                if marked.iter().any(|b| b.width() != w) {
                    return Err(Error::MalformedBitString(
                        marked.iter().map(|b| b.to_string()).collect::<String>(),
                        w,
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Ordered list of gates over `width` data qubits; `ancillas` extra qubits
/// (indices `width..width+ancillas`) are available to lowering and must be
/// returned to |0>.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    ancillas: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            ancillas: 0,
            gates: Vec::new(),
        }
    }

    pub fn with_ancillas(mut self, ancillas: usize) -> Self {
        self.ancillas = ancillas;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas
    }

    pub fn total_width(&self) -> usize {
        self.width + self.ancillas
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.total_width())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// True when only 1q gates and CNOTs remain.
    pub fn is_lowered(&self) -> bool {
        self.gates
            .iter()
            .all(|g| g.is_single_qubit() || matches!(g, Gate::Cnot { .. }))
    }

    /// Number of CNOT gates. SWAPs are not expanded here; see
    /// [`crate::transpile::mapped_metrics`] for routed circuits.
    pub fn cnot_count(&self) -> u64 {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count() as u64
    }

    /// Circuit depth: length of the longest dependency chain, where gates on
    /// disjoint qubits sit in the same layer. 1q gates weigh `depth_1q`
    /// layers and CNOTs `depth_cnot` (both 1 by default); any other gate
    /// weighs one layer per gate.
    pub fn depth_weighted(&self, depth_1q: u64, depth_cnot: u64) -> u64 {
        let mut ready = vec![0u64; self.total_width()];
        let mut depth = 0;
        for g in &self.gates {
            let w = if g.is_single_qubit() {
                depth_1q
            } else if matches!(g, Gate::Cnot { .. }) {
                depth_cnot
            } else {
                1
            };
            let ops = g.operands();
            let start = ops.iter().map(|&q| ready[q]).max().unwrap_or(0);
            let end = start + w;
            for q in ops {
                ready[q] = end;
            }
            depth = depth.max(end);
        }
        depth
    }

    /// Depth with unit weight per 1q gate and per CNOT.
    pub fn depth(&self) -> u64 {
        self.depth_weighted(1, 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitJson::from(self)).expect("circuit serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let raw: CircuitJson =
            serde_json::from_str(json).map_err(|e| Error::MalformedCircuit(e.to_string()))?;
        raw.try_into()
    }
}

/// Oracle fragment: diagonal, -1 on each target basis state, +1 elsewhere.
///
/// Realized as one X-conjugated MCZ per target (the lowering pass expands
/// the MCZ); on one qubit with target `1` this is just Z.
pub fn build_oracle(n: usize, targets: &[BitString]) -> Result<Circuit> {
    if targets.is_empty() {
        return Err(Error::EmptyTargetSet);
    }
    for t in targets {
        if t.width() != n {
            return Err(Error::MalformedBitString(t.to_string(), n));
        }
    }
    let mut c = Circuit::new(n);
    for t in targets {
        let zeros: Vec<usize> = (0..n).filter(|&q| !t.qubit(q)).collect();
        for &q in &zeros {
            c.push(Gate::X(q))?;
        }
        if n == 1 {
            c.push(Gate::Z(0))?;
        } else {
            c.push(Gate::Mcz {
                qubits: (0..n).collect(),
            })?;
        }
        for &q in &zeros {
            c.push(Gate::X(q))?;
        }
    }
    Ok(c)
}

/// Global diffusion fragment: 2|psi><psi| - I up to global phase, |psi> the
/// uniform superposition.
pub fn build_global_diffusion(n: usize) -> Result<Circuit> {
    build_local_diffusion(n, &(0..n).collect::<Vec<_>>())
}

/// Local diffusion on `subset`: inversion about the mean within each block
/// of basis states sharing the assignment of all qubits outside `subset`.
pub fn build_local_diffusion(n: usize, subset: &[usize]) -> Result<Circuit> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut c = Circuit::new(n);
    let probe = Gate::Mcz {
        qubits: subset.to_vec(),
    };
    // validates range and duplicates even for the 1-qubit case
    for &q in subset {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, width: n });
        }
    }
    let mut seen = vec![false; n];
    for &q in subset {
        if seen[q] {
            return Err(Error::DuplicateQubit(q));
        }
        seen[q] = true;
    }
    for &q in subset {
        c.push(Gate::H(q))?;
        c.push(Gate::X(q))?;
    }
    if subset.len() == 1 {
        c.push(Gate::Z(subset[0]))?;
    } else {
        c.push(probe)?;
    }
    for &q in subset {
        c.push(Gate::X(q))?;
        c.push(Gate::H(q))?;
    }
    Ok(c)
}

// --- JSON surface -----------------------------------------------------------
//
// {"width": 4, "ancillas": 1, "gates": [{"kind": "MCZ", "operands": [0,1,2,3]},
//  {"kind": "PhaseOracle", "marked": ["1100"]}, ...]}

#[derive(Serialize, Deserialize)]
struct GateJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    operands: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    marked: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    width: usize,
    ancillas: usize,
    gates: Vec<GateJson>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| match g {
                Gate::PhaseOracle { marked } => GateJson {
                    kind: g.kind_name().to_string(),
                    operands: Vec::new(),
                    marked: marked.iter().map(|b| b.to_string()).collect(),
                },
                _ => GateJson {
                    kind: g.kind_name().to_string(),
                    operands: g.operands(),
                    marked: Vec::new(),
                },
            })
            .collect();
        CircuitJson {
            width: c.width,
            ancillas: c.ancillas,
            gates,
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(raw: CircuitJson) -> Result<Self> {
        let mut c = Circuit::new(raw.width).with_ancillas(raw.ancillas);
        for g in raw.gates {
            let ops = &g.operands;
            let need = |k: usize| -> Result<()> {
                if ops.len() != k {
                    Err(Error::MalformedCircuit(format!(
                        "{} expects {k} operand(s), got {}",
                        g.kind,
                        ops.len()
                    )))
                } else {
                    Ok(())
                }
            };
            let gate = match g.kind.as_str() {
                "H" => {
                    need(1)?;
                    Gate::H(ops[0])
                }
                "X" => {
                    need(1)?;
                    Gate::X(ops[0])
                }
                "Z" => {
                    need(1)?;
                    Gate::Z(ops[0])
                }
                "T" => {
                    need(1)?;
                    Gate::T(ops[0])
                }
                "Tdg" => {
                    need(1)?;
                    Gate::Tdg(ops[0])
                }
                "CNOT" => {
                    need(2)?;
                    Gate::Cnot {
                        control: ops[0],
                        target: ops[1],
                    }
                }
                "CZ" => {
                    need(2)?;
                    Gate::Cz(ops[0], ops[1])
                }
                "SWAP" => {
                    need(2)?;
                    Gate::Swap(ops[0], ops[1])
                }
                "MCX" => {
                    if ops.len() < 2 {
                        return Err(Error::MalformedCircuit("MCX needs >= 2 operands".into()));
                    }
                    Gate::Mcx {
                        controls: ops[..ops.len() - 1].to_vec(),
                        target: ops[ops.len() - 1],
                    }
                }
                "MCZ" => Gate::Mcz { qubits: ops.clone() },
                "PhaseOracle" => {
                    let marked = g
                        .marked
                        .iter()
                        .map(|s| s.parse())
                        .collect::<Result<Vec<BitString>>>()?;
                    Gate::PhaseOracle { marked }
                }
                other => {
                    return Err(Error::MalformedCircuit(format!("unknown gate kind `{other}`")))
                }
            };
            c.push(gate).map_err(|e| Error::MalformedCircuit(e.to_string()))?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_rejects_bad_inputs() {
        assert_eq!(build_oracle(4, &[]), Err(Error::EmptyTargetSet));
        let t3 = BitString::parse("110", 3).unwrap();
        assert!(matches!(
            build_oracle(4, &[t3]),
            Err(Error::MalformedBitString(..))
        ));
    }

    #[test]
    fn oracle_on_one_qubit_is_z() {
        let t = BitString::parse("1", 1).unwrap();
        let c = build_oracle(1, &[t]).unwrap();
        assert_eq!(c.gates(), &[Gate::Z(0)]);
    }

    #[test]
    fn local_diffusion_validates_subset() {
        assert_eq!(build_local_diffusion(4, &[]), Err(Error::EmptySubset));
        assert_eq!(
            build_local_diffusion(4, &[1, 1]),
            Err(Error::DuplicateQubit(1))
        );
        assert_eq!(
            build_local_diffusion(4, &[4]),
            Err(Error::QubitOutOfRange { index: 4, width: 4 })
        );
    }

    #[test]
    fn depth_parallelizes_disjoint_qubits() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::H(1)).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(Circuit::new(3).depth(), 0);
        assert_eq!(Circuit::new(3).cnot_count(), 0);
    }

    #[test]
    fn depth_chains_shared_qubits() {
        let mut c = Circuit::new(3);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        c.push(Gate::Cnot { control: 1, target: 2 }).unwrap();
        c.push(Gate::H(2)).unwrap();
        assert_eq!(c.depth(), 4);
        assert_eq!(c.cnot_count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let t = BitString::parse("1100", 4).unwrap();
        let mut c = build_oracle(4, &[t]).unwrap();
        c.push(Gate::PhaseOracle { marked: vec![t] }).unwrap();
        let json = c.to_json();
        let back = Circuit::from_json(&json).unwrap();
        assert_eq!(c, back);
        assert!(json.contains("\"kind\": \"MCZ\""));
        assert!(json.contains("\"1100\""));
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(Circuit::from_json("{").is_err());
        assert!(Circuit::from_json(r#"{"width":2,"ancillas":0,"gates":[{"kind":"Q","operands":[0]}]}"#).is_err());
        assert!(Circuit::from_json(r#"{"width":2,"ancillas":0,"gates":[{"kind":"H","operands":[5]}]}"#).is_err());
    }
}
