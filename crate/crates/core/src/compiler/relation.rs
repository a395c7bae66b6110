//! `M'` instances as CNF relations for the CNF witness-encryption backend.

use super::mprime::{compile_mprime, CompileError, CompiledMPrime};
use super::sat::{solve, SatOutcome};
use super::tseitin::{tseitin, Cnf};
use crate::induced::{MPrimeInstance, MPrimeWitness};
use crate::we::Relation;

/// An `M'` instance together with its compiled circuit and CNF. The witness
/// is a full assignment to the CNF variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfRelation {
    source: MPrimeInstance,
    compiled: CompiledMPrime,
    cnf: Cnf,
}

impl CnfRelation {
    pub fn compile(source: &MPrimeInstance) -> Result<Self, CompileError> {
        let compiled = compile_mprime(source)?;
        let cnf = tseitin(&compiled.circuit);
        Ok(Self {
            source: source.clone(),
            compiled,
            cnf,
        })
    }

    pub fn source(&self) -> &MPrimeInstance {
        &self.source
    }

    pub fn compiled(&self) -> &CompiledMPrime {
        &self.compiled
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    /// Maps an `M'` witness to a CNF assignment. Satisfying witnesses map to
    /// satisfying assignments; `None` for witnesses with no encoding.
    pub fn lift_witness(&self, wit: &MPrimeWitness) -> Option<Vec<bool>> {
        let inputs = self.compiled.encode_witness(self.source.structure(), wit)?;
        Some(self.compiled.circuit.extend(&inputs))
    }

    /// Reads the `M'` witness back out of an assignment.
    pub fn project_witness(&self, assignment: &[bool]) -> MPrimeWitness {
        let inputs = &assignment[..self.compiled.layout.total()];
        self.compiled.decode_inputs(self.source.structure(), inputs)
    }
}

impl Relation for CnfRelation {
    type Witness = [bool];
    const IS_CNF: bool = true;

    fn encode(&self) -> Vec<u8> {
        self.source.encode()
    }

    fn decode(bytes: &[u8]) -> Option<Self> {
        let source = MPrimeInstance::decode(bytes)?;
        Self::compile(&source).ok()
    }

    fn holds(&self, witness: &[bool]) -> bool {
        self.cnf.satisfied_by(witness)
    }

    fn is_member(&self) -> Result<bool, String> {
        match solve(&self.cnf) {
            SatOutcome::Sat(_) => Ok(true),
            SatOutcome::Unsat => Ok(false),
            SatOutcome::Unknown => Err("solver gave up".into()),
        }
    }
}
