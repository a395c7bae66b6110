//! Boolean circuits over AND/OR/NOT/XOR with a constant-folding builder.
//!
//! Wires `0..inputs` are the circuit inputs; gate `g` drives wire
//! `inputs + g`. Gates only reference lower-numbered wires.

use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    And,
    Or,
    Not,
    Xor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub op: Op,
    pub inputs: Vec<usize>,
}

/// A named range of gates, for debugging dumps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub gates: Range<usize>,
    /// Set for sections that are monotone in the party inputs.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanCircuit {
    pub inputs: usize,
    pub gates: Vec<Gate>,
    pub output: usize,
    pub sections: Vec<Section>,
}

impl BooleanCircuit {
    pub fn wire_count(&self) -> usize {
        self.inputs + self.gates.len()
    }

    /// Values of every wire for the given inputs. This is the witness
    /// extension used to turn circuit inputs into a full Tseitin assignment.
    pub fn extend(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.inputs, "input length");
        let mut wires = Vec::with_capacity(self.wire_count());
        wires.extend_from_slice(inputs);
        for g in &self.gates {
            let v = match g.op {
                Op::And => wires[g.inputs[0]] && wires[g.inputs[1]],
                Op::Or => wires[g.inputs[0]] || wires[g.inputs[1]],
                Op::Xor => wires[g.inputs[0]] ^ wires[g.inputs[1]],
                Op::Not => !wires[g.inputs[0]],
            };
            wires.push(v);
        }
        wires
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        self.extend(inputs)[self.output]
    }

    pub fn is_well_formed(&self) -> bool {
        self.output < self.wire_count()
            && self.gates.iter().enumerate().all(|(g, gate)| {
                let arity = if gate.op == Op::Not { 1 } else { 2 };
                gate.inputs.len() == arity && gate.inputs.iter().all(|&w| w < self.inputs + g)
            })
    }
}

/// A signal during construction: a folded constant or a wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sig {
    Const(bool),
    Wire(usize),
}

pub const FALSE: Sig = Sig::Const(false);
pub const TRUE: Sig = Sig::Const(true);

/// Builds circuits with constant folding and structural hashing.
#[derive(Debug)]
pub struct Builder {
    inputs: usize,
    gates: Vec<Gate>,
    cache: HashMap<(Op, usize, usize), usize>,
    sections: Vec<Section>,
}

impl Builder {
    pub fn new(inputs: usize) -> Self {
        Self {
            inputs,
            gates: Vec::new(),
            cache: HashMap::new(),
            sections: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> Sig {
        assert!(i < self.inputs);
        Sig::Wire(i)
    }

    /// Runs `f` and records the gates it adds as a named section.
    pub fn section<T>(&mut self, name: impl Into<String>, monotone: bool, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = self.gates.len();
        let out = f(self);
        let end = self.gates.len();
        if end > start {
            self.sections.push(Section {
                name: name.into(),
                gates: start..end,
                monotone,
            });
        }
        out
    }

    fn gate(&mut self, op: Op, a: usize, b: Option<usize>) -> Sig {
        let (a, b) = match (op, b) {
            (Op::Not, _) => (a, usize::MAX),
            (_, Some(b)) => (a.min(b), a.max(b)),
            _ => unreachable!(),
        };
        if let Some(&w) = self.cache.get(&(op, a, b)) {
            return Sig::Wire(w);
        }
        let inputs = if op == Op::Not { vec![a] } else { vec![a, b] };
        self.gates.push(Gate { op, inputs });
        let w = self.inputs + self.gates.len() - 1;
        self.cache.insert((op, a, b), w);
        Sig::Wire(w)
    }

    pub fn not(&mut self, a: Sig) -> Sig {
        match a {
            Sig::Const(c) => Sig::Const(!c),
            Sig::Wire(w) => {
                // not(not x) = x
                if w >= self.inputs {
                    let g = &self.gates[w - self.inputs];
                    if g.op == Op::Not {
                        return Sig::Wire(g.inputs[0]);
                    }
                }
                self.gate(Op::Not, w, None)
            }
        }
    }

    pub fn and(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (FALSE, _) | (_, FALSE) => FALSE,
            (TRUE, x) | (x, TRUE) => x,
            (Sig::Wire(x), Sig::Wire(y)) if x == y => a,
            (Sig::Wire(x), Sig::Wire(y)) => self.gate(Op::And, x, Some(y)),
        }
    }

    pub fn or(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (TRUE, _) | (_, TRUE) => TRUE,
            (FALSE, x) | (x, FALSE) => x,
            (Sig::Wire(x), Sig::Wire(y)) if x == y => a,
            (Sig::Wire(x), Sig::Wire(y)) => self.gate(Op::Or, x, Some(y)),
        }
    }

    pub fn xor(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Const(c), x) | (x, Sig::Const(c)) => {
                if c {
                    self.not(x)
                } else {
                    x
                }
            }
            (Sig::Wire(x), Sig::Wire(y)) if x == y => FALSE,
            (Sig::Wire(x), Sig::Wire(y)) => self.gate(Op::Xor, x, Some(y)),
        }
    }

    pub fn and_all(&mut self, sigs: impl IntoIterator<Item = Sig>) -> Sig {
        sigs.into_iter().fold(TRUE, |acc, s| self.and(acc, s))
    }

    pub fn or_all(&mut self, sigs: impl IntoIterator<Item = Sig>) -> Sig {
        sigs.into_iter().fold(FALSE, |acc, s| self.or(acc, s))
    }

    /// `a` equals the constant `bit`.
    pub fn eq_const(&mut self, a: Sig, bit: bool) -> Sig {
        if bit {
            a
        } else {
            self.not(a)
        }
    }

    /// True iff exactly one of `sigs` is true.
    pub fn exactly_one(&mut self, sigs: &[Sig]) -> Sig {
        let any = self.or_all(sigs.iter().copied());
        let mut none_twice = TRUE;
        for i in 0..sigs.len() {
            for j in i + 1..sigs.len() {
                let both = self.and(sigs[i], sigs[j]);
                let neither = self.not(both);
                none_twice = self.and(none_twice, neither);
            }
        }
        self.and(any, none_twice)
    }

    /// `a + b mod 2^k` over little-endian words of equal width.
    pub fn add(&mut self, a: &[Sig], b: &[Sig]) -> Vec<Sig> {
        assert_eq!(a.len(), b.len());
        let mut carry = FALSE;
        let mut out = Vec::with_capacity(a.len());
        for i in 0..a.len() {
            let t = self.xor(a[i], b[i]);
            out.push(self.xor(t, carry));
            if i + 1 < a.len() {
                let g = self.and(a[i], b[i]);
                let p = self.and(carry, t);
                carry = self.or(g, p);
            }
        }
        out
    }

    pub fn add_const(&mut self, a: &[Sig], c: u64) -> Vec<Sig> {
        let b: Vec<Sig> = (0..a.len()).map(|i| Sig::Const((c >> i) & 1 == 1)).collect();
        self.add(a, &b)
    }

    /// `a * c mod 2^k` by shift-and-add.
    pub fn mul_const(&mut self, a: &[Sig], c: u64) -> Vec<Sig> {
        let k = a.len();
        let mut acc = vec![FALSE; k];
        for s in 0..k {
            if (c >> s) & 1 == 1 {
                let shifted: Vec<Sig> = (0..k).map(|i| if i >= s { a[i - s] } else { FALSE }).collect();
                acc = self.add(&acc, &shifted);
            }
        }
        acc
    }

    /// `a XOR (a >> s)`.
    pub fn xor_shift_right(&mut self, a: &[Sig], s: usize) -> Vec<Sig> {
        (0..a.len())
            .map(|i| {
                let hi = if i + s < a.len() { a[i + s] } else { FALSE };
                self.xor(a[i], hi)
            })
            .collect()
    }

    /// Finishes the circuit. A constant output is materialized from input 0
    /// (or, with no inputs, cannot be represented and panics).
    pub fn finish(mut self, output: Sig) -> BooleanCircuit {
        let output = match output {
            Sig::Wire(w) => w,
            Sig::Const(c) => {
                assert!(self.inputs > 0, "constant circuit without inputs");
                let x = Sig::Wire(0);
                let nx = self.not(x);
                let s = if c { self.or(x, nx) } else { self.and(x, nx) };
                match s {
                    Sig::Wire(w) => w,
                    Sig::Const(_) => unreachable!(),
                }
            }
        };
        BooleanCircuit {
            inputs: self.inputs,
            gates: self.gates,
            output,
            sections: self.sections,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word_value(c: &BooleanCircuit, wires: &[bool], word: &[Sig]) -> u64 {
        let _ = c;
        word.iter().enumerate().fold(0, |acc, (i, s)| {
            let bit = match *s {
                Sig::Const(b) => b,
                Sig::Wire(w) => wires[w],
            };
            acc | (bit as u64) << i
        })
    }

    proptest! {
        #[test]
        fn arithmetic_matches_native(x in 0u64..256, y in 0u64..256, c in 0u64..256, s in 1usize..8) {
            let mut b = Builder::new(16);
            let a: Vec<Sig> = (0..8).map(|i| b.input(i)).collect();
            let bb: Vec<Sig> = (8..16).map(|i| b.input(i)).collect();
            let sum = b.add(&a, &bb);
            let prod = b.mul_const(&a, c);
            let shifted = b.xor_shift_right(&a, s);
            let plus = b.add_const(&a, c);
            let circuit = b.finish(TRUE);
            let inputs: Vec<bool> = (0..16).map(|i| if i < 8 { (x >> i) & 1 == 1 } else { (y >> (i - 8)) & 1 == 1 }).collect();
            let wires = circuit.extend(&inputs);
            prop_assert_eq!(word_value(&circuit, &wires, &sum), (x + y) & 0xff);
            prop_assert_eq!(word_value(&circuit, &wires, &prod), (x * c) & 0xff);
            prop_assert_eq!(word_value(&circuit, &wires, &shifted), x ^ (x >> s));
            prop_assert_eq!(word_value(&circuit, &wires, &plus), (x + c) & 0xff);
            prop_assert!(circuit.eval(&inputs));
            prop_assert!(circuit.is_well_formed());
        }
    }

    #[test]
    fn folding_and_exactly_one() {
        let mut b = Builder::new(3);
        let xs = [b.input(0), b.input(1), b.input(2)];
        assert_eq!(b.and(xs[0], FALSE), FALSE);
        assert_eq!(b.or(xs[0], FALSE), xs[0]);
        let n = b.not(xs[1]);
        assert_eq!(b.not(n), xs[1]);
        let e = b.exactly_one(&xs);
        let c = b.finish(e);
        for m in 0..8u32 {
            let inputs: Vec<bool> = (0..3).map(|i| (m >> i) & 1 == 1).collect();
            assert_eq!(c.eval(&inputs), m.count_ones() == 1);
        }
    }

    #[test]
    fn constant_outputs_are_materialized() {
        let c = Builder::new(2).finish(FALSE);
        assert!(!c.eval(&[true, false]) && !c.eval(&[false, false]));
        let c = Builder::new(1).finish(TRUE);
        assert!(c.eval(&[true]) && c.eval(&[false]));
    }
}
