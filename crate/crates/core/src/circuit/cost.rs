//! Parameterized depth/CNOT cost model.
//!
//! Depth is counted in layers: one layer per 1q gate and per CNOT. The
//! oracle and diffusion cost functions are linear in width and act as
//! calibration knobs for the expected-depth analysis; the defaults are
//! calibrated once so that a 6-qubit global search iteration costs 126
//! layers (oracle 51 + diffusion 75) and a 4-qubit three-oracle-call
//! local-diffusion circuit is estimated at 33 CNOTs. They are a fitted
//! model of an optimizing compiler's output, not a derivation from the
//! lowering pass in this crate.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How multi-controlled X gates are decomposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McxScheme {
    /// One ancilla that may hold arbitrary state; Toffoli-ladder halves.
    BorrowedAncillaLinear,
    /// `controls - 2` clean ancillas, compute/uncompute chain.
    VChain,
    /// No allocated ancillas; borrows idle data qubits and fails when a
    /// gate spans the whole register.
    NoAncillaRecursive,
}

/// `value(n) = max(1, per_qubit * n + offset)` — cost values stay positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCost {
    pub per_qubit: i64,
    pub offset: i64,
}

impl LinearCost {
    pub fn new(per_qubit: i64, offset: i64) -> Result<Self> {
        if per_qubit < 0 {
            return Err(Error::InvalidParameter(
                "cost per_qubit must be non-negative".into(),
            ));
        }
        Ok(Self { per_qubit, offset })
    }

    pub fn value(&self, n: usize) -> u64 {
        (self.per_qubit * n as i64 + self.offset).max(1) as u64
    }
}

/// Depth/CNOT cost parameters for oracle and diffusion constructs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Layers per 1q gate in the depth metric.
    pub depth_1q: u64,
    /// Layers per CNOT in the depth metric.
    pub depth_cnot: u64,
    pub mcx_scheme: McxScheme,
    /// Depth of an n-qubit oracle call.
    pub oracle_depth: LinearCost,
    /// CNOTs of an n-qubit oracle call.
    pub oracle_cnots: LinearCost,
    /// Depth of a diffusion operator of the given width.
    pub diffusion_depth: LinearCost,
    /// CNOTs of a diffusion operator of the given width.
    pub diffusion_cnots: LinearCost,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            depth_1q: 1,
            depth_cnot: 1,
            mcx_scheme: McxScheme::BorrowedAncillaLinear,
            oracle_depth: LinearCost {
                per_qubit: 8,
                offset: 3,
            },
            oracle_cnots: LinearCost {
                per_qubit: 2,
                offset: 2,
            },
            diffusion_depth: LinearCost {
                per_qubit: 12,
                offset: 3,
            },
            diffusion_cnots: LinearCost {
                per_qubit: 2,
                offset: -3,
            },
        }
    }
}

impl CostModel {
    pub fn with_scheme(mut self, scheme: McxScheme) -> Self {
        self.mcx_scheme = scheme;
        self
    }

    /// Model depth of an oracle call on `n` qubits.
    pub fn oracle_depth(&self, n: usize) -> u64 {
        self.oracle_depth.value(n)
    }

    pub fn oracle_cnots(&self, n: usize) -> u64 {
        self.oracle_cnots.value(n)
    }

    /// Model depth of a diffusion operator over `width` qubits.
    pub fn diffusion_depth(&self, width: usize) -> u64 {
        self.diffusion_depth.value(width)
    }

    pub fn diffusion_cnots(&self, width: usize) -> u64 {
        self.diffusion_cnots.value(width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_calibration_anchors() {
        let m = CostModel::default();
        // one 6-qubit global iteration costs 126 layers
        assert_eq!(m.oracle_depth(6) + m.diffusion_depth(6), 126);
        // 4-qubit oracle estimate is 10 CNOTs, 2-qubit diffusion 1 CNOT
        assert_eq!(m.oracle_cnots(4), 10);
        assert_eq!(m.diffusion_cnots(2), 1);
    }

    #[test]
    fn cost_values_stay_positive() {
        let c = LinearCost::new(2, -3).unwrap();
        assert_eq!(c.value(1), 1);
        assert_eq!(c.value(2), 1);
        assert_eq!(c.value(5), 7);
        assert!(LinearCost::new(-1, 0).is_err());
    }
}
