//! Gate-level circuit IR.
//!
//! Signals are dense `u32` ids. Ids `0..input_count` are the primary inputs;
//! every later id is defined exactly once by a constant, a gate or an alias,
//! and may only read signals with smaller ids. Id order is therefore a
//! topological order, which is what evaluation and levelization walk.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

pub type SignalId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            _ => 2,
        }
    }

    pub fn is_two_input(self) -> bool {
        self.arity() == 2
    }

    /// Plaintext semantics. `b` is ignored for `Not`.
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
            GateKind::Xor => a ^ b,
            GateKind::Not => !a,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Not => "NOT",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(GateKind::And),
            "OR" => Ok(GateKind::Or),
            "XOR" => Ok(GateKind::Xor),
            "NOT" => Ok(GateKind::Not),
            _ => Err(Error::Domain(format!("unknown gate kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    /// One input for `Not`, two otherwise.
    pub inputs: Vec<SignalId>,
    pub output: SignalId,
}

/// Pure wiring: `to` carries the same value as `from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alias {
    pub from: SignalId,
    pub to: SignalId,
}

/// A signal tied to a fixed value (a trivially encrypted constant).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constant {
    pub signal: SignalId,
    pub value: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Node {
    Input,
    Const(bool),
    Gate(usize),
    Alias(SignalId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    input_count: u32,
    constants: Vec<Constant>,
    gates: Vec<Gate>,
    aliases: Vec<Alias>,
    outputs: Vec<SignalId>,
    nodes: Vec<Node>,
}

/// Size and depth. Depth counts 2-input gates only; `NOT` adds nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CircuitStats {
    pub two_input_gate_count: u64,
    pub not_count: u64,
    pub depth: u64,
}

impl Netlist {
    /// Assembles and validates a netlist from its parts.
    pub fn from_parts(
        input_count: u32,
        constants: Vec<Constant>,
        gates: Vec<Gate>,
        aliases: Vec<Alias>,
        outputs: Vec<SignalId>,
    ) -> Result<Self> {
        let total = input_count as usize + constants.len() + gates.len() + aliases.len();
        let mut nodes: Vec<Option<Node>> = vec![None; total];
        for slot in nodes.iter_mut().take(input_count as usize) {
            *slot = Some(Node::Input);
        }

        let mut define = |id: SignalId, node: Node| -> Result<()> {
            let slot = nodes.get_mut(id as usize).ok_or_else(|| {
                Error::Structure(format!("signal {id} outside dense range 0..{total}"))
            })?;
            if slot.is_some() {
                return Err(Error::Structure(format!(
                    "signal {id} assigned more than once"
                )));
            }
            *slot = Some(node);
            Ok(())
        };

        for c in &constants {
            define(c.signal, Node::Const(c.value))?;
        }
        let mut last_gate_output = None;
        for (idx, g) in gates.iter().enumerate() {
            if g.inputs.len() != g.kind.arity() {
                return Err(Error::Structure(format!(
                    "{} gate driving {} has {} inputs",
                    g.kind,
                    g.output,
                    g.inputs.len()
                )));
            }
            if let Some(&bad) = g.inputs.iter().find(|&&i| i >= g.output) {
                return Err(Error::Structure(format!(
                    "gate driving {} reads signal {bad} which is not defined before it",
                    g.output
                )));
            }
            if last_gate_output.is_some_and(|prev| prev >= g.output) {
                return Err(Error::Structure(format!(
                    "gate list not in topological order at signal {}",
                    g.output
                )));
            }
            last_gate_output = Some(g.output);
            define(g.output, Node::Gate(idx))?;
        }
        for a in &aliases {
            if a.from >= a.to {
                return Err(Error::Structure(format!(
                    "alias {} -> {} reads a signal that is not defined before it",
                    a.from, a.to
                )));
            }
            define(a.to, Node::Alias(a.from))?;
        }

        let nodes: Vec<Node> = nodes
            .into_iter()
            .enumerate()
            .map(|(id, n)| n.ok_or_else(|| Error::Structure(format!("signal {id} never assigned"))))
            .collect::<Result<_>>()?;

        if let Some(&bad) = outputs.iter().find(|&&o| o as usize >= total) {
            return Err(Error::Structure(format!(
                "output signal {bad} does not exist"
            )));
        }

        Ok(Self {
            input_count,
            constants,
            gates,
            aliases,
            outputs,
            nodes,
        })
    }

    pub fn input_count(&self) -> usize {
        self.input_count as usize
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn aliases(&self) -> &[Alias] {
        &self.aliases
    }

    pub fn outputs(&self) -> &[SignalId] {
        &self.outputs
    }

    pub fn signal_count(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Gate counts and longest 2-input-gate path, by levelization.
    pub fn stats(&self) -> CircuitStats {
        let mut level = vec![0u64; self.nodes.len()];
        let mut stats = CircuitStats::default();
        for (id, node) in self.nodes.iter().enumerate() {
            level[id] = match *node {
                Node::Input | Node::Const(_) => 0,
                Node::Alias(from) => level[from as usize],
                Node::Gate(g) => {
                    let gate = &self.gates[g];
                    let deepest = gate
                        .inputs
                        .iter()
                        .map(|&i| level[i as usize])
                        .max()
                        .unwrap_or(0);
                    if gate.kind.is_two_input() {
                        stats.two_input_gate_count += 1;
                        deepest + 1
                    } else {
                        stats.not_count += 1;
                        deepest
                    }
                }
            };
            stats.depth = stats.depth.max(level[id]);
        }
        stats
    }

    /// Plaintext evaluation.
    pub fn eval(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        if inputs.len() != self.input_count() {
            return Err(Error::InputCount {
                expected: self.input_count(),
                actual: inputs.len(),
            });
        }
        let mut values = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            values[id] = match *node {
                Node::Input => inputs[id],
                Node::Const(v) => v,
                Node::Alias(from) => values[from as usize],
                Node::Gate(g) => {
                    let gate = &self.gates[g];
                    let a = values[gate.inputs[0] as usize];
                    let b = gate.inputs.get(1).is_some_and(|&i| values[i as usize]);
                    gate.kind.apply(a, b)
                }
            };
        }
        Ok(self.outputs.iter().map(|&o| values[o as usize]).collect())
    }
}

/// Measures exact counts and depth of a netlist.
pub fn measure_stats(c: &Netlist) -> CircuitStats {
    c.stats()
}

/// Incremental construction. Every call allocates the next signal id, so
/// the result is valid by construction.
#[derive(Debug, Clone, Default)]
pub struct NetlistBuilder {
    input_count: u32,
    next: SignalId,
    constants: Vec<Constant>,
    gates: Vec<Gate>,
    aliases: Vec<Alias>,
    zero: Option<SignalId>,
}

impl NetlistBuilder {
    pub fn new(input_count: u32) -> Self {
        Self {
            input_count,
            next: input_count,
            ..Self::default()
        }
    }

    pub fn input(&self, index: u32) -> SignalId {
        assert!(index < self.input_count, "input {index} out of range");
        index
    }

    fn alloc(&mut self) -> SignalId {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn constant(&mut self, value: bool) -> SignalId {
        let signal = self.alloc();
        self.constants.push(Constant { signal, value });
        signal
    }

    /// Shared constant-false signal, created on first use.
    pub fn zero(&mut self) -> SignalId {
        match self.zero {
            Some(z) => z,
            None => {
                let z = self.constant(false);
                self.zero = Some(z);
                z
            }
        }
    }

    pub fn gate(&mut self, kind: GateKind, inputs: &[SignalId]) -> SignalId {
        assert_eq!(inputs.len(), kind.arity(), "{kind} arity");
        let output = self.alloc();
        self.gates.push(Gate {
            kind,
            inputs: inputs.to_vec(),
            output,
        });
        output
    }

    pub fn and(&mut self, a: SignalId, b: SignalId) -> SignalId {
        self.gate(GateKind::And, &[a, b])
    }

    pub fn or(&mut self, a: SignalId, b: SignalId) -> SignalId {
        self.gate(GateKind::Or, &[a, b])
    }

    pub fn xor(&mut self, a: SignalId, b: SignalId) -> SignalId {
        self.gate(GateKind::Xor, &[a, b])
    }

    pub fn not(&mut self, a: SignalId) -> SignalId {
        self.gate(GateKind::Not, &[a])
    }

    pub fn alias(&mut self, from: SignalId) -> SignalId {
        let to = self.alloc();
        self.aliases.push(Alias { from, to });
        to
    }

    /// 2 XOR + 2 AND + 1 OR. Returns `(sum, carry_out)`.
    pub fn full_adder(
        &mut self,
        a: SignalId,
        b: SignalId,
        carry_in: SignalId,
    ) -> (SignalId, SignalId) {
        let half = self.xor(a, b);
        let sum = self.xor(half, carry_in);
        let generate = self.and(a, b);
        let propagate = self.and(half, carry_in);
        let carry = self.or(generate, propagate);
        (sum, carry)
    }

    pub fn finish(self, outputs: Vec<SignalId>) -> Netlist {
        Netlist::from_parts(
            self.input_count,
            self.constants,
            self.gates,
            self.aliases,
            outputs,
        )
        .expect("builder produces valid netlists")
    }
}
