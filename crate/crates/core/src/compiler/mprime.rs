//! Compiles an `M'` instance into a single Boolean circuit.
//!
//! Input layout, in order: the seed bits of every opening (position-major,
//! then seed, then bit, least significant first), one presence flag per
//! position, then the inner-witness bits of the structure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::circuit::{BooleanCircuit, Builder, Sig, FALSE, TRUE};
use crate::commitments::Opening;
use crate::induced::{MPrimeInstance, MPrimeWitness};
use crate::prg::{word_mask, Expander, ToyParams};
use crate::structures::{edge_count, edge_endpoints, edge_party, AccessStructure, InnerWitness, Node};

/// Largest seed length the compiler accepts.
pub const COMPILE_MAX_SEED_BITS: usize = 8;
/// Largest party count the compiler accepts.
pub const COMPILE_MAX_PARTIES: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("compilation needs the toy expander")]
    Expander,
    #[error("k = {0} exceeds {COMPILE_MAX_SEED_BITS}")]
    SeedBits(usize),
    #[error("n = {0} exceeds {COMPILE_MAX_PARTIES}")]
    Parties(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputLayout {
    pub n: usize,
    pub value_bits: usize,
    pub k: usize,
    pub inner_bits: usize,
}

impl InputLayout {
    pub fn opening_bits(&self) -> usize {
        self.n * self.value_bits * self.k
    }

    pub fn seed_bit(&self, pos: usize, seed: usize, bit: usize) -> usize {
        (pos * self.value_bits + seed) * self.k + bit
    }

    pub fn flag(&self, pos: usize) -> usize {
        self.opening_bits() + pos
    }

    pub fn inner(&self, t: usize) -> usize {
        self.opening_bits() + self.n + t
    }

    pub fn total(&self) -> usize {
        self.opening_bits() + self.n + self.inner_bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledMPrime {
    pub layout: InputLayout,
    pub circuit: BooleanCircuit,
}

fn inner_bits(structure: &AccessStructure) -> usize {
    match structure {
        AccessStructure::Threshold { .. } => 0,
        AccessStructure::MonotoneCircuit(c) => c.witness_bits,
        AccessStructure::Hamiltonian { vertices } => vertices * vertices,
        AccessStructure::Matching { vertices } => edge_count(*vertices),
    }
}

fn toy_word(b: &mut Builder, p: &ToyParams, seed: &[Sig]) -> [Vec<Sig>; 3] {
    let mix = |b: &mut Builder, z: &[Sig]| {
        let z = b.xor_shift_right(z, p.shifts[0]);
        let z = b.mul_const(&z, p.mul1);
        let z = b.xor_shift_right(&z, p.shifts[1]);
        let z = b.mul_const(&z, p.mul2);
        b.xor_shift_right(&z, p.shifts[2])
    };
    let s1 = b.add_const(seed, p.increment);
    let s2 = b.add_const(&s1, p.increment);
    let s3 = b.add_const(&s2, p.increment);
    [mix(b, &s1), mix(b, &s2), mix(b, &s3)]
}

fn structure_gate(b: &mut Builder, layout: &InputLayout, structure: &AccessStructure, x: &[Sig]) -> Sig {
    let inner = |t: usize| Sig::Wire(layout.inner(t));
    match structure {
        AccessStructure::Threshold { k, .. } => {
            // at_least[j]: at least j of the parties seen so far are present.
            let mut at_least = vec![FALSE; k + 1];
            at_least[0] = TRUE;
            for &xi in x {
                for j in (1..=*k).rev() {
                    let step = b.and(at_least[j - 1], xi);
                    at_least[j] = b.or(at_least[j], step);
                }
            }
            at_least[*k]
        }
        AccessStructure::MonotoneCircuit(c) => {
            let mut vals: Vec<Sig> = Vec::with_capacity(c.nodes.len());
            for node in &c.nodes {
                let v = match *node {
                    Node::Party(p) => x[p - 1],
                    Node::Witness(j) => inner(j),
                    Node::NotWitness(j) => b.not(inner(j)),
                    Node::Const(v) => Sig::Const(v),
                    Node::And(l, r) => b.and(vals[l], vals[r]),
                    Node::Or(l, r) => b.or(vals[l], vals[r]),
                };
                vals.push(v);
            }
            *vals.last().expect("validated non-empty")
        }
        AccessStructure::Hamiltonian { vertices } => {
            let v = *vertices;
            if v < 3 {
                return FALSE;
            }
            let cell = |pos: usize, vert: usize| inner(pos * v + vert);
            let mut ok = TRUE;
            for i in 0..v {
                let row: Vec<Sig> = (0..v).map(|j| cell(i, j)).collect();
                let col: Vec<Sig> = (0..v).map(|j| cell(j, i)).collect();
                let r = b.exactly_one(&row);
                let c = b.exactly_one(&col);
                ok = b.and(ok, r);
                ok = b.and(ok, c);
            }
            for pos in 0..v {
                let next = (pos + 1) % v;
                for a in 0..v {
                    for c in 0..v {
                        if a == c {
                            continue;
                        }
                        let edge = x[edge_party(v, a + 1, c + 1).expect("distinct vertices") - 1];
                        let both = b.and(cell(pos, a), cell(next, c));
                        let not_both = b.not(both);
                        let fine = b.or(not_both, edge);
                        ok = b.and(ok, fine);
                    }
                }
            }
            ok
        }
        AccessStructure::Matching { vertices } => {
            let v = *vertices;
            let mut ok = TRUE;
            for (e, &present) in x.iter().enumerate().take(edge_count(v)) {
                let chosen = inner(e);
                let not_chosen = b.not(chosen);
                let fine = b.or(not_chosen, present);
                ok = b.and(ok, fine);
            }
            for u in 1..=v {
                let incident: Vec<Sig> = (1..=v)
                    .filter(|&w| w != u)
                    .map(|w| inner(edge_party(v, u, w).expect("distinct vertices") - 1))
                    .collect();
                let once = b.exactly_one(&incident);
                ok = b.and(ok, once);
            }
            ok
        }
    }
}

/// Builds the circuit deciding `M'` for this instance.
pub fn compile_mprime(inst: &MPrimeInstance) -> Result<CompiledMPrime, CompileError> {
    let crs = inst.crs();
    if crs.expander() != Expander::Toy {
        return Err(CompileError::Expander);
    }
    if crs.k() > COMPILE_MAX_SEED_BITS {
        return Err(CompileError::SeedBits(crs.k()));
    }
    if inst.n() > COMPILE_MAX_PARTIES {
        return Err(CompileError::Parties(inst.n()));
    }
    let layout = InputLayout {
        n: inst.n(),
        value_bits: crs.value_bits(),
        k: crs.k(),
        inner_bits: inner_bits(inst.structure()),
    };
    let params = ToyParams::new(layout.k);
    let mut b = Builder::new(layout.total());
    let mut x = Vec::with_capacity(layout.n);
    for pos in 0..layout.n {
        let value = pos + 1;
        let matches = b.section(format!("opening {value}"), false, |b| {
            let mut ok = TRUE;
            for j in 0..layout.value_bits {
                let seed: Vec<Sig> = (0..layout.k).map(|t| Sig::Wire(layout.seed_bit(pos, j, t))).collect();
                let words = toy_word(b, &params, &seed);
                let mut target = inst.commitments()[pos].block(crs, j);
                if (value >> j) & 1 == 1 {
                    target = target.xor(&crs.block(j));
                }
                for (i, bit) in target.iter().enumerate() {
                    let eq = b.eq_const(words[i / layout.k][i % layout.k], bit);
                    ok = b.and(ok, eq);
                }
            }
            let flag = Sig::Wire(layout.flag(pos));
            b.and(flag, ok)
        });
        x.push(matches);
    }
    let out = b.section("structure", true, |b| structure_gate(b, &layout, inst.structure(), &x));
    Ok(CompiledMPrime {
        layout,
        circuit: b.finish(out),
    })
}

impl CompiledMPrime {
    /// Circuit inputs for an `M'` witness. `None` when the inner witness does
    /// not fit the structure's encoding; such witnesses never verify.
    pub fn encode_witness(&self, structure: &AccessStructure, wit: &MPrimeWitness) -> Option<Vec<bool>> {
        let l = &self.layout;
        if wit.openings.len() != l.n {
            return None;
        }
        let mut bits = vec![false; l.total()];
        for (pos, op) in wit.openings.iter().enumerate() {
            let Some(op) = op else { continue };
            if op.seeds().len() != l.value_bits {
                continue;
            }
            bits[l.flag(pos)] = true;
            for (j, &seed) in op.seeds().iter().enumerate() {
                let seed = seed & word_mask(l.k);
                for t in 0..l.k {
                    bits[l.seed_bit(pos, j, t)] = (seed >> t) & 1 == 1;
                }
            }
        }
        match (structure, &wit.inner) {
            (AccessStructure::Threshold { .. }, InnerWitness::Empty) => {}
            (AccessStructure::MonotoneCircuit(c), InnerWitness::Bits(w)) => {
                if w.len() != c.witness_bits {
                    return None;
                }
                for (t, &bit) in w.iter().enumerate() {
                    bits[l.inner(t)] = bit;
                }
            }
            (AccessStructure::Hamiltonian { vertices }, InnerWitness::Cycle(cycle)) => {
                let v = *vertices;
                if cycle.len() != v || cycle.iter().any(|&u| u == 0 || u > v) {
                    return None;
                }
                for (pos, &u) in cycle.iter().enumerate() {
                    bits[l.inner(pos * v + u - 1)] = true;
                }
            }
            (AccessStructure::Matching { vertices }, InnerWitness::Matching(edges)) => {
                let v = *vertices;
                if edges.len() * 2 != v {
                    return None;
                }
                for &(a, c) in edges {
                    let e = edge_party(v, a, c)?;
                    if bits[l.inner(e - 1)] {
                        return None;
                    }
                    bits[l.inner(e - 1)] = true;
                }
            }
            _ => return None,
        }
        Some(bits)
    }

    /// The `M'` witness a circuit input vector stands for.
    pub fn decode_inputs(&self, structure: &AccessStructure, bits: &[bool]) -> MPrimeWitness {
        let l = &self.layout;
        let openings = (0..l.n)
            .map(|pos| {
                bits[l.flag(pos)].then(|| {
                    Opening::new(
                        (0..l.value_bits)
                            .map(|j| (0..l.k).fold(0u64, |acc, t| acc | (bits[l.seed_bit(pos, j, t)] as u64) << t))
                            .collect(),
                    )
                })
            })
            .collect();
        let inner_at = |t: usize| bits[l.inner(t)];
        let inner = match structure {
            AccessStructure::Threshold { .. } => InnerWitness::Empty,
            AccessStructure::MonotoneCircuit(c) => InnerWitness::Bits((0..c.witness_bits).map(inner_at).collect()),
            AccessStructure::Hamiltonian { vertices } => {
                let v = *vertices;
                InnerWitness::Cycle(
                    (0..v)
                        .map(|pos| {
                            let row: Vec<usize> = (0..v).filter(|&u| inner_at(pos * v + u)).collect();
                            if row.len() == 1 {
                                row[0] + 1
                            } else {
                                0
                            }
                        })
                        .collect(),
                )
            }
            AccessStructure::Matching { vertices } => InnerWitness::Matching(
                (0..edge_count(*vertices))
                    .filter(|&e| inner_at(e))
                    .map(|e| edge_endpoints(*vertices, e + 1).expect("edge slot in range"))
                    .collect(),
            ),
        };
        MPrimeWitness { openings, inner }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commitments::{crs_gen, Opening};
    use crate::induced::{assemble_witness, mprime_verify};
    use crate::structures::PartySet;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(structure: AccessStructure, k: usize, seed: u64) -> (MPrimeInstance, Vec<Opening>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = structure.n();
        let crs = crs_gen(n, k, Expander::Toy, &mut rng).unwrap();
        let openings: Vec<Opening> = (0..n).map(|_| Opening::random(&crs, &mut rng)).collect();
        (MPrimeInstance::honest(crs, &openings, structure).unwrap(), openings)
    }

    fn structures() -> Vec<AccessStructure> {
        vec![
            AccessStructure::threshold(4, 2),
            AccessStructure::hamiltonian(4),
            AccessStructure::matching(4),
            serde_json::from_str(
                r#"{"kind":"monotone-circuit","n":3,"payload":{"witness_bits":1,
                "nodes":[{"party":1},{"party":2},{"party":3},{"witness":0},{"not_witness":0},
                {"and":[0,3]},{"and":[1,4]},{"or":[5,6]},{"and":[7,2]}]}}"#,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn honest_witnesses_satisfy_the_circuit() {
        for (idx, s) in structures().into_iter().enumerate() {
            let (inst, openings) = instance(s.clone(), 6, idx as u64);
            let compiled = compile_mprime(&inst).unwrap();
            assert!(compiled.circuit.is_well_formed());
            let full = PartySet::full(s.n());
            let inner = s.find_witness(&full).unwrap().unwrap();
            let all: Vec<Option<Opening>> = openings.iter().cloned().map(Some).collect();
            let wit = assemble_witness(&full, &all, inner).unwrap();
            assert!(mprime_verify(&inst, &wit));
            let bits = compiled.encode_witness(&s, &wit).unwrap();
            assert!(compiled.circuit.eval(&bits), "{}", s.kind().name());
            assert_eq!(compiled.decode_inputs(&s, &bits), wit);
        }
    }

    #[test]
    fn splitmix_and_large_parameters_are_refused() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let crs = crs_gen(3, 8, Expander::SplitMix64, &mut rng).unwrap();
        let ops: Vec<Opening> = (0..3).map(|_| Opening::random(&crs, &mut rng)).collect();
        let inst = MPrimeInstance::honest(crs, &ops, AccessStructure::threshold(3, 2)).unwrap();
        assert_eq!(compile_mprime(&inst).unwrap_err(), CompileError::Expander);
        let (inst, _) = instance(AccessStructure::threshold(3, 2), 9, 2);
        assert_eq!(compile_mprime(&inst).unwrap_err(), CompileError::SeedBits(9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn circuit_agrees_with_relation(which in 0usize..4, seed in any::<u64>(), plant in any::<u64>()) {
            let s = structures().swap_remove(which);
            let (inst, openings) = instance(s.clone(), 4, which as u64);
            let compiled = compile_mprime(&inst).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bits: Vec<bool> = (0..compiled.layout.total()).map(|_| rng.gen()).collect();
            // Plant genuine openings on some positions so both outcomes occur.
            for (pos, op) in openings.iter().enumerate() {
                if (plant >> pos) & 1 == 1 {
                    bits[compiled.layout.flag(pos)] = true;
                    for (j, &sd) in op.seeds().iter().enumerate() {
                        for t in 0..4 {
                            bits[compiled.layout.seed_bit(pos, j, t)] = (sd >> t) & 1 == 1;
                        }
                    }
                }
            }
            let wit = compiled.decode_inputs(&s, &bits);
            prop_assert_eq!(compiled.circuit.eval(&bits), mprime_verify(&inst, &wit));
        }
    }
}
