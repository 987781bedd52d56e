//! Circuit representation, the native `.stab` text format, and chunk validation.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

pub mod qasm;

pub use qasm::parse_qasm2_subset;

/// A gate from the Clifford+T+measurement instruction set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cx(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    Measure(usize),
    T(usize),
    Tdg(usize),
}

impl Gate {
    /// Lower-case mnemonic shared by the native format and diagnostics.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::Cx(..) => "cx",
            Gate::Cz(..) => "cz",
            Gate::Swap(..) => "swap",
            Gate::Measure(_) => "m",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
        }
    }

    /// Builds a gate from its mnemonic and operands, checking arity.
    pub fn from_mnemonic(name: &str, qubits: &[usize]) -> Result<Gate> {
        let one = |f: fn(usize) -> Gate| match qubits {
            [q] => Ok(f(*q)),
            _ => Err(Error::InvalidGate(format!(
                "{name} takes 1 qubit, got {}",
                qubits.len()
            ))),
        };
        let two = |f: fn(usize, usize) -> Gate| match qubits {
            [a, b] if a == b => Err(Error::InvalidGate(format!(
                "{name} needs distinct qubits, got {a} twice"
            ))),
            [a, b] => Ok(f(*a, *b)),
            _ => Err(Error::InvalidGate(format!(
                "{name} takes 2 qubits, got {}",
                qubits.len()
            ))),
        };
        match name {
            "h" => one(Gate::H),
            "s" => one(Gate::S),
            "sdg" => one(Gate::Sdg),
            "x" => one(Gate::X),
            "y" => one(Gate::Y),
            "z" => one(Gate::Z),
            "cx" => two(Gate::Cx),
            "cz" => two(Gate::Cz),
            "swap" => two(Gate::Swap),
            "m" => one(Gate::Measure),
            "t" => one(Gate::T),
            "tdg" => one(Gate::Tdg),
            _ => Err(Error::InvalidGate(format!("unknown mnemonic `{name}`"))),
        }
    }

    /// Operand qubits in declaration order.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::Measure(q)
            | Gate::T(q)
            | Gate::Tdg(q) => (q, None),
            Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::Measure(_))
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, Gate::T(_) | Gate::Tdg(_))
    }

    pub fn is_clifford(&self) -> bool {
        !self.is_measurement() && !self.is_t_like()
    }

    /// The inverse gate, for unitary gates.
    pub fn inverse(&self) -> Option<Gate> {
        Some(match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Measure(_) => return None,
            g => g,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// An ordered gate list over `n` qubits with optional chunk boundaries.
///
/// A chunk mark `k` means a new chunk starts at gate `k`. Marks are strictly
/// increasing, nonzero and smaller than the gate count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    chunk_marks: Vec<usize>,
    pending_mark: bool,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("circuit needs at least one qubit".into()));
        }
        Ok(Self {
            n,
            gates: Vec::new(),
            chunk_marks: Vec::new(),
            pending_mark: false,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn chunk_marks(&self) -> &[usize] {
        &self.chunk_marks
    }

    pub fn num_measurements(&self) -> usize {
        self.gates.iter().filter(|g| g.is_measurement()).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        if let Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) = gate {
            if a == b {
                return Err(Error::InvalidGate(format!(
                    "{} needs distinct qubits, got {a} twice",
                    gate.mnemonic()
                )));
            }
        }
        if self.pending_mark && !self.gates.is_empty() {
            self.chunk_marks.push(self.gates.len());
        }
        self.pending_mark = false;
        self.gates.push(gate);
        Ok(())
    }

    /// Starts a new chunk at the next pushed gate.
    pub fn mark_chunk(&mut self) {
        self.pending_mark = true;
    }

    /// Gate index ranges of the chunks, in order. A circuit without marks is one chunk.
    pub fn chunks(&self) -> Vec<Range<usize>> {
        let mut bounds = Vec::with_capacity(self.chunk_marks.len() + 2);
        bounds.push(0);
        bounds.extend_from_slice(&self.chunk_marks);
        bounds.push(self.gates.len());
        bounds.windows(2).map(|w| w[0]..w[1]).collect()
    }
}

/// Why a chunk cannot be executed gate-parallel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// The gate touches a qubit already used earlier in the chunk.
    Collision { qubit: usize },
    Measurement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkViolation {
    pub chunk: usize,
    pub gate_index: usize,
    pub kind: ViolationKind,
}

/// Every qubit collision and measurement found inside a chunk. Empty means
/// every chunk may run gate-parallel.
pub fn validate_chunks(c: &Circuit) -> Vec<ChunkViolation> {
    let mut out = Vec::new();
    let mut touched = vec![usize::MAX; c.n];
    for (chunk, range) in c.chunks().into_iter().enumerate() {
        for gate_index in range {
            let gate = &c.gates[gate_index];
            if gate.is_measurement() {
                out.push(ChunkViolation {
                    chunk,
                    gate_index,
                    kind: ViolationKind::Measurement,
                });
            }
            for q in gate.qubits() {
                if touched[q] == chunk {
                    out.push(ChunkViolation {
                        chunk,
                        gate_index,
                        kind: ViolationKind::Collision { qubit: q },
                    });
                }
                touched[q] = chunk;
            }
        }
    }
    out
}

/// Parses the native line-oriented format.
///
/// ```text
/// qubits 2
/// h 0        # comment
/// chunk
/// cx 0 1
/// m 0
/// ```
pub fn parse_native(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let mut tokens = body.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let args: Vec<&str> = tokens.collect();

        let Some(c) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(err("missing `qubits <n>` header".into()));
            }
            let n = match args.as_slice() {
                [n] => n
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid qubit count `{n}`")))?,
                _ => return Err(err("expected `qubits <n>`".into())),
            };
            circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
            continue;
        };

        match head {
            "qubits" => return Err(err("duplicate `qubits` header".into())),
            "chunk" if args.is_empty() => c.mark_chunk(),
            "chunk" => return Err(err("`chunk` takes no operands".into())),
            _ => {
                let qubits = args
                    .iter()
                    .map(|a| {
                        a.parse::<usize>()
                            .map_err(|_| err(format!("invalid qubit index `{a}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let gate = Gate::from_mnemonic(head, &qubits).map_err(|e| err(e.to_string()))?;
                c.push(gate).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    circuit.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `qubits <n>` header".into(),
    })
}

/// Writes the native format. Inverse of [`parse_native`].
pub fn emit_native(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n);
    let mut marks = c.chunk_marks.iter().peekable();
    for (i, g) in c.gates.iter().enumerate() {
        if marks.peek() == Some(&&i) {
            marks.next();
            out.push_str("chunk\n");
        }
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
