//! Tseitin transformation and DIMACS I/O.
//!
//! Wire `w` becomes variable `w + 1`, so a satisfying assignment is exactly
//! the extended wire vector of an accepting input.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::circuit::{BooleanCircuit, Op};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing problem line")]
    MissingHeader,
    #[error("malformed line {0}")]
    Malformed(usize),
    #[error("literal {0} out of range")]
    Range(i32),
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
}

impl Cnf {
    /// Whether `assignment` (indexed by variable − 1) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| {
                c.iter()
                    .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
            })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for lit in c {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self, DimacsError> {
        let mut header = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| DimacsError::Malformed(idx + 1))?;
                if nums.len() != 2 || header.is_some() {
                    return Err(DimacsError::Malformed(idx + 1));
                }
                header = Some((nums[0], nums[1]));
                continue;
            }
            let (vars, _) = header.ok_or(DimacsError::MissingHeader)?;
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| DimacsError::Malformed(idx + 1))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(DimacsError::Range(lit));
                } else {
                    current.push(lit);
                }
            }
        }
        let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != declared {
            return Err(DimacsError::ClauseCount {
                declared,
                found: clauses.len(),
            });
        }
        Ok(Self { num_vars, clauses })
    }
}

/// One variable per wire, defining clauses per gate, and a unit clause on
/// the output.
pub fn tseitin(circuit: &BooleanCircuit) -> Cnf {
    let var = |w: usize| (w + 1) as i32;
    let mut clauses = Vec::with_capacity(3 * circuit.gates.len() + 1);
    for (g, gate) in circuit.gates.iter().enumerate() {
        let o = var(circuit.inputs + g);
        let a = var(gate.inputs[0]);
        match gate.op {
            Op::Not => {
                clauses.push(vec![o, a]);
                clauses.push(vec![-o, -a]);
            }
            Op::And => {
                let b = var(gate.inputs[1]);
                clauses.push(vec![-o, a]);
                clauses.push(vec![-o, b]);
                clauses.push(vec![o, -a, -b]);
            }
            Op::Or => {
                let b = var(gate.inputs[1]);
                clauses.push(vec![o, -a]);
                clauses.push(vec![o, -b]);
                clauses.push(vec![-o, a, b]);
            }
            Op::Xor => {
                let b = var(gate.inputs[1]);
                clauses.push(vec![-o, a, b]);
                clauses.push(vec![-o, -a, -b]);
                clauses.push(vec![o, -a, b]);
                clauses.push(vec![o, a, -b]);
            }
        }
    }
    clauses.push(vec![var(circuit.output)]);
    Cnf {
        num_vars: circuit.wire_count(),
        clauses,
    }
}

/// Clauses per gate kind plus the output unit clause.
pub fn expected_clause_count(circuit: &BooleanCircuit) -> usize {
    1 + circuit
        .gates
        .iter()
        .map(|g| match g.op {
            Op::Not => 2,
            Op::And | Op::Or => 3,
            Op::Xor => 4,
        })
        .sum::<usize>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::circuit::Builder;
    use proptest::prelude::*;

    fn sample_circuit() -> BooleanCircuit {
        let mut b = Builder::new(3);
        let (x, y, z) = (b.input(0), b.input(1), b.input(2));
        let a = b.and(x, y);
        let o = b.xor(a, z);
        let n = b.not(x);
        let r = b.or(o, n);
        b.finish(r)
    }

    #[test]
    fn clause_counts_and_dimacs_round_trip() {
        let c = sample_circuit();
        let cnf = tseitin(&c);
        assert_eq!(cnf.clauses.len(), expected_clause_count(&c));
        assert_eq!(cnf.clauses.len(), 3 + 4 + 2 + 3 + 1);
        assert_eq!(Cnf::from_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn dimacs_rejects_garbage() {
        assert_eq!(Cnf::from_dimacs("1 2 0\n"), Err(DimacsError::MissingHeader));
        assert_eq!(Cnf::from_dimacs("p cnf 2 1\n1 3 0\n"), Err(DimacsError::Range(3)));
        assert!(matches!(
            Cnf::from_dimacs("p cnf 2 2\n1 0\n"),
            Err(DimacsError::ClauseCount { .. })
        ));
    }

    proptest! {
        #[test]
        fn extension_satisfies_iff_output_true(m in 0u8..8) {
            let c = sample_circuit();
            let cnf = tseitin(&c);
            let inputs: Vec<bool> = (0..3).map(|i| (m >> i) & 1 == 1).collect();
            let wires = c.extend(&inputs);
            prop_assert_eq!(cnf.satisfied_by(&wires), c.eval(&inputs));
        }
    }
}
