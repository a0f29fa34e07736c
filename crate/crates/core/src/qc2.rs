//! Quantum computing over Z2: registers of qubits/2, nonsingular gates,
//! line measurement, teleportation with one classical bit, and Parity SAT.
//!
//! Basis index `k` of an `n`-line register is the bitstring of `k` read
//! big-endian, so line 0 (Alice) is the most significant bit and the basis
//! runs `|0…0⟩, |0…1⟩, …, |1…1⟩`.

use std::fmt;

use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::prob::Probability;

/// Largest register the dense simulator accepts.
pub const MAX_LINES: usize = 12;

fn bitstring(index: usize, lines: usize) -> String {
    (0..lines)
        .map(|l| if (index >> (lines - 1 - l)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn parse_bitstring(text: &str) -> Result<usize> {
    if text.is_empty() || text.len() > MAX_LINES || !text.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Invalid(format!("`{text}` is not a basis bitstring")));
    }
    Ok(usize::from_str_radix(text, 2).expect("binary digits"))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Register {
    lines: usize,
    state: BitVec,
}

impl Register {
    pub fn new(lines: usize, state: BitVec) -> Result<Self> {
        if lines == 0 || lines > MAX_LINES {
            return Err(Error::OutOfRange(format!("{lines} lines")));
        }
        if state.len() != 1 << lines {
            return Err(Error::DimMismatch {
                expected: 1 << lines,
                found: state.len(),
            });
        }
        if state.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(Register { lines, state })
    }

    /// The basis ket named by a bitstring such as `"010"`.
    pub fn basis(bits: &str) -> Result<Self> {
        Register::ket(&[bits])
    }

    /// Sum of basis kets; repeated terms cancel.
    pub fn ket<S: AsRef<str>>(terms: &[S]) -> Result<Self> {
        let first = terms.first().ok_or(Error::ZeroState)?;
        let lines = first.as_ref().len();
        let mut state = BitVec::zeros(1 << lines.min(MAX_LINES));
        for t in terms {
            let t = t.as_ref();
            if t.len() != lines {
                return Err(Error::LengthMismatch {
                    left: lines,
                    right: t.len(),
                });
            }
            state.flip(parse_bitstring(t)?);
        }
        Register::new(lines, state)
    }

    pub fn zeros(lines: usize) -> Result<Self> {
        Register::basis(&"0".repeat(lines))
    }

    /// The one-line register `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: bool, beta: bool) -> Result<Self> {
        Register::new(1, BitVec::from_bools(&[alpha, beta]))
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn state(&self) -> &BitVec {
        &self.state
    }

    pub fn dim(&self) -> usize {
        1 << self.lines
    }

    pub fn support(&self) -> Vec<usize> {
        self.state.iter_ones().collect()
    }

    pub fn support_bitstrings(&self) -> Vec<String> {
        self.state.iter_ones().map(|k| bitstring(k, self.lines)).collect()
    }

    pub fn coefficients(&self) -> Vec<u8> {
        self.state.iter().map(u8::from).collect()
    }

    fn check_line(&self, line: usize) -> Result<()> {
        if line >= self.lines {
            return Err(Error::LineOutOfRange {
                line,
                lines: self.lines,
            });
        }
        Ok(())
    }

    fn bit_at(&self, index: usize, line: usize) -> u8 {
        ((index >> (self.lines - 1 - line)) & 1) as u8
    }

    /// Born probability that `line` reads `outcome`.
    pub fn line_probability(&self, line: usize, outcome: u8) -> Result<Probability> {
        self.check_line(line)?;
        let hits = self
            .state
            .iter_ones()
            .filter(|&k| self.bit_at(k, line) == outcome)
            .count();
        Probability::ratio(hits, self.state.count_ones())
    }

    /// Measures `line` with the given result, returning its probability and
    /// the collapsed register.
    pub fn measure_line_given(&self, line: usize, outcome: u8) -> Result<(Probability, Register)> {
        if outcome > 1 {
            return Err(Error::OutOfRange(format!("outcome {outcome}")));
        }
        let p = self.line_probability(line, outcome)?;
        if p.is_zero() {
            return Err(Error::ImpossibleOutcome(format!("line {line} = {outcome}")));
        }
        let kept = self.state.iter_ones().filter(|&k| self.bit_at(k, line) == outcome);
        let state = BitVec::from_indices(self.dim(), kept)?;
        Ok((p, Register::new(self.lines, state)?))
    }

    pub fn measure_line<R: Rng + ?Sized>(&self, line: usize, rng: &mut R) -> Result<(u8, Probability, Register)> {
        self.check_line(line)?;
        let support = self.support();
        let pick = support[rng.random_range(0..support.len())];
        let outcome = self.bit_at(pick, line);
        let (p, r) = self.measure_line_given(line, outcome)?;
        Ok((outcome, p, r))
    }

    /// The single-line state on `line`, provided every other line is already
    /// in a definite basis state.
    pub fn line_qubit(&self, line: usize) -> Result<Register> {
        self.check_line(line)?;
        let mask = 1usize << (self.lines - 1 - line);
        let mut rest = self.state.iter_ones().map(|k| k & !mask);
        let first = rest.next().expect("nonzero state");
        if rest.any(|k| k != first) {
            return Err(Error::Invalid(format!("line {line} is not separated from the other lines")));
        }
        let alpha = self.state.get(first);
        let beta = self.state.get(first | mask);
        Register::qubit(alpha, beta)
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.support_bitstrings().into_iter().map(|b| format!("|{b}⟩")).collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Register({self})")
    }
}

/// Serialized as the list of basis bitstrings with coefficient 1.
impl Serialize for Register {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.support_bitstrings();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for t in &terms {
            seq.serialize_element(t)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    name: String,
    matrix: Gf2Matrix,
    lines: usize,
}

impl Gate {
    pub fn new(name: impl Into<String>, matrix: Gf2Matrix) -> Result<Self> {
        if !matrix.is_nonsingular()? {
            return Err(Error::Singular);
        }
        let n = matrix.rows();
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Invalid(format!("gate size {n} is not 2^k")));
        }
        Ok(Gate {
            name: name.into(),
            lines: n.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Gate) -> Result<Gate> {
        Gate::new(format!("{}{}", self.name, other.name), self.matrix.mul(&other.matrix)?)
    }

    pub fn tensor(&self, other: &Gate) -> Gate {
        Gate::new(format!("{}⊗{}", self.name, other.name), self.matrix.kron(&other.matrix))
            .expect("tensor of nonsingular gates is nonsingular")
    }
}

pub const STANDARD_GATES: [&str; 8] = ["I", "X", "H0", "H1", "XH0", "XH1", "CNOT_A", "CNOT_B"];

pub fn standard_gate(name: &str) -> Result<Gate> {
    let rows: &[&[u8]] = match name {
        "I" => &[&[1, 0], &[0, 1]],
        "X" => &[&[0, 1], &[1, 0]],
        "H0" => &[&[1, 0], &[1, 1]],
        "H1" => &[&[1, 1], &[0, 1]],
        "XH0" => &[&[1, 1], &[1, 0]],
        "XH1" => &[&[0, 1], &[1, 1]],
        "CNOT_A" => &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        "CNOT_B" => &[&[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0]],
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Gate::new(name, Gf2Matrix::from_rows(rows)?)
}

/// Controlled negation on an `lines`-line register. `cnot(2, 0, 1)` is
/// `CNOT_A` and `cnot(2, 1, 0)` is `CNOT_B`.
pub fn cnot(lines: usize, control: usize, target: usize) -> Result<Gate> {
    for l in [control, target] {
        if l >= lines {
            return Err(Error::LineOutOfRange { line: l, lines });
        }
    }
    if control == target || lines > MAX_LINES {
        return Err(Error::Invalid("control and target must be distinct lines".into()));
    }
    let n = 1usize << lines;
    let (cm, tm) = (1 << (lines - 1 - control), 1 << (lines - 1 - target));
    let mut m = Gf2Matrix::zeros(n, n);
    for j in 0..n {
        let i = if j & cm != 0 { j ^ tm } else { j };
        m.set(i, j, true);
    }
    Gate::new(format!("CNOT({control}→{target})"), m)
}

/// Where a gate acts: every line, or the `width` lines starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineSpan {
    All,
    Range { start: usize, width: usize },
}

impl LineSpan {
    pub fn line(start: usize) -> Self {
        LineSpan::Range { start, width: 1 }
    }
}

pub fn apply(g: &Gate, r: &Register, at: LineSpan) -> Result<Register> {
    let (start, width) = match at {
        LineSpan::All => (0, r.lines),
        LineSpan::Range { start, width } => (start, width),
    };
    if start + width > r.lines {
        return Err(Error::LineOutOfRange {
            line: start + width - 1,
            lines: r.lines,
        });
    }
    if g.lines != width {
        return Err(Error::SizeMismatch {
            gate: g.lines,
            available: width,
        });
    }
    let after = r.lines - start - width;
    let m = Gf2Matrix::identity(1 << start)
        .kron(&g.matrix)
        .kron(&Gf2Matrix::identity(1 << after));
    Register::new(r.lines, m.apply(&r.state)?)
}

/// Every state of the teleportation protocol, with the classical bit `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TeleportTrace {
    pub input: Register,
    pub phi0: Register,
    pub phi1: Register,
    pub phi2: Register,
    pub measured: u8,
    pub probability: Probability,
    pub collapsed: Register,
    pub bob_received: Register,
    pub bob_final: Register,
    pub success: bool,
}

fn teleport_with(
    alpha: bool,
    beta: bool,
    measure: impl FnOnce(&Register) -> Result<(u8, Probability, Register)>,
) -> Result<TeleportTrace> {
    let input = Register::qubit(alpha, beta)?;
    let phi0 = Register::new(2, BitVec::from_bools(&[alpha, false, beta, false]))?;
    let h0 = standard_gate("H0")?;
    let phi1 = apply(&h0, &phi0, LineSpan::line(1))?;
    let phi2 = apply(&standard_gate("CNOT_B")?, &phi1, LineSpan::All)?;
    let (measured, probability, collapsed) = measure(&phi2)?;
    let bob_received = collapsed.line_qubit(1)?;
    let bob_final = if measured == 1 {
        apply(&standard_gate("X")?, &bob_received, LineSpan::All)?
    } else {
        bob_received.clone()
    };
    Ok(TeleportTrace {
        success: bob_final == input,
        input,
        phi0,
        phi1,
        phi2,
        measured,
        probability,
        collapsed,
        bob_received,
        bob_final,
    })
}

/// Teleports `α|0⟩ + β|1⟩` from Alice (line 0) to Bob (line 1).
pub fn teleport<R: Rng + ?Sized>(alpha: bool, beta: bool, rng: &mut R) -> Result<TeleportTrace> {
    teleport_with(alpha, beta, |phi2| phi2.measure_line(0, rng))
}

/// Teleportation along the branch where Alice reads `outcome`.
pub fn teleport_given(alpha: bool, beta: bool, outcome: u8) -> Result<TeleportTrace> {
    teleport_with(alpha, beta, |phi2| {
        let (p, r) = phi2.measure_line_given(0, outcome)?;
        Ok((outcome, p, r))
    })
}

/// `f: Z2^n → Z2` stored as its truth table in input order `0…0` to `1…1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    table: BitVec,
}

impl BooleanFunction {
    pub fn new(arity: usize, table: BitVec) -> Result<Self> {
        if arity == 0 || arity > MAX_LINES {
            return Err(Error::WrongArity {
                expected: 1,
                found: arity,
            });
        }
        if table.len() != 1 << arity {
            return Err(Error::DimMismatch {
                expected: 1 << arity,
                found: table.len(),
            });
        }
        Ok(BooleanFunction { arity, table })
    }

    /// Parses a table such as `"1101"` (arity 2: f(00)=1, f(01)=1, f(10)=0, f(11)=1).
    pub fn from_bits(text: &str) -> Result<Self> {
        let n = text.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Invalid(format!("truth table length {n} is not 2^n with n ≥ 1")));
        }
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Invalid(format!("truth table `{text}` must be binary"))),
            })
            .collect::<Result<Vec<_>>>()?;
        BooleanFunction::new(n.trailing_zeros() as usize, BitVec::from_bools(&bits))
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        let bits: Vec<bool> = (0..1usize << arity.min(MAX_LINES)).map(f).collect();
        BooleanFunction::new(arity, BitVec::from_bools(&bits))
    }

    /// All `2^(2^n)` functions of the given arity, ordered by table value.
    pub fn all(arity: usize) -> impl Iterator<Item = BooleanFunction> {
        assert!((1..=5).contains(&arity), "arity out of enumerable range");
        let len = 1usize << arity;
        (0u64..1 << len).map(move |x| BooleanFunction {
            arity,
            table: BitVec::from_u64(len, x),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &BitVec {
        &self.table
    }

    /// `f` at the input whose bitstring is `x`.
    pub fn value(&self, x: usize) -> u8 {
        u8::from(self.table.get(x))
    }

    /// XOR of every table entry, computed classically.
    pub fn parity(&self) -> u8 {
        (self.table.count_ones() % 2) as u8
    }

    pub fn ones(&self) -> usize {
        self.table.count_ones()
    }

    pub fn table_string(&self) -> String {
        self.table.to_string()
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table_string())
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({})", self.table_string())
    }
}

/// Number of register lines `E_f` spans: one per prefix of length `n − 1`.
pub fn ef_lines(arity: usize) -> usize {
    1 << (arity - 1)
}

/// `X^{f(p,1)} H_{f(p,0)}` for the prefix `p`.
fn ef_factor(f: &BooleanFunction, prefix: usize) -> Gate {
    let h = if f.value(prefix << 1) == 1 { "H1" } else { "H0" };
    let g = standard_gate(h).expect("standard gate");
    if f.value((prefix << 1) | 1) == 1 {
        standard_gate("X").expect("standard gate").then_after(&g).expect("2×2 product")
    } else {
        g
    }
}

/// The function evaluation gate: the Kronecker product of one 2×2 factor per
/// prefix, prefixes in increasing order.
pub fn ef_gate(f: &BooleanFunction) -> Gate {
    let m = (0..ef_lines(f.arity))
        .map(|p| ef_factor(f, p).matrix)
        .reduce(|acc, m| acc.kron(&m))
        .expect("at least one prefix");
    Gate::new(format!("E_f[{}]", f.table_string()), m).expect("factors are nonsingular")
}

/// One gate application within an algorithm run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateStep {
    pub gate: String,
    pub lines: String,
    pub state: Register,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParitySatResult {
    pub table: String,
    pub arity: usize,
    pub lines: usize,
    pub steps: Vec<GateStep>,
    /// Register right before measurement.
    pub pre_measure: Register,
    pub measured_ket: String,
    /// Parity of `f(p, ·)` for each prefix `p`; 1 is odd.
    pub slice_parities: Vec<u8>,
    /// Slice parities spelled with `E` and `O`.
    pub slice_label: String,
    pub parity: u8,
    pub ef_applications: usize,
}

pub fn parity_sat(f: &BooleanFunction) -> Result<ParitySatResult> {
    let m = ef_lines(f.arity);
    let h0 = standard_gate("H0")?;
    let mut plan: Vec<(Gate, LineSpan)> = (0..m).map(|l| (h0.clone(), LineSpan::line(l))).collect();
    plan.push((ef_gate(f), LineSpan::All));

    let mut reg = Register::zeros(m)?;
    let mut steps = Vec::new();
    let mut ef_applications = 0;
    for (g, span) in &plan {
        reg = apply(g, &reg, *span)?;
        if g.name().starts_with("E_f") {
            ef_applications += 1;
        }
        let lines = match span {
            LineSpan::All => "all".to_string(),
            LineSpan::Range { start, width } => (*start..start + width)
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(","),
        };
        steps.push(GateStep {
            gate: g.name().to_string(),
            lines,
            state: reg.clone(),
        });
    }
    let support = reg.support();
    if support.len() != 1 {
        return Err(Error::Invalid(format!(
            "expected a single basis ket after E_f, found {}",
            reg
        )));
    }
    let measured_ket = bitstring(support[0], m);
    let slice_parities: Vec<u8> = measured_ket.bytes().map(|b| b - b'0').collect();
    let slice_label = slice_parities.iter().map(|&b| if b == 1 { 'O' } else { 'E' }).collect();
    let parity = slice_parities.iter().fold(0, |a, b| a ^ b);
    Ok(ParitySatResult {
        table: f.table_string(),
        arity: f.arity,
        lines: m,
        steps,
        pre_measure: reg,
        measured_ket,
        slice_parities,
        slice_label,
        parity,
        ef_applications,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeutschAnswer {
    Balanced,
    Constant,
}

pub fn deutsch(f: &BooleanFunction) -> Result<DeutschAnswer> {
    if f.arity != 1 {
        return Err(Error::WrongArity {
            expected: 1,
            found: f.arity,
        });
    }
    Ok(if parity_sat(f)?.parity == 1 {
        DeutschAnswer::Balanced
    } else {
        DeutschAnswer::Constant
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Satisfiability {
    Satisfiable,
    Unsatisfiable,
}

/// Decides satisfiability under the promise of at most one satisfying input.
/// The promise is not checked.
pub fn unambiguous_sat(f: &BooleanFunction) -> Result<Satisfiability> {
    Ok(if parity_sat(f)?.parity == 1 {
        Satisfiability::Satisfiable
    } else {
        Satisfiability::Unsatisfiable
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[u8]]) -> Gf2Matrix {
        Gf2Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn gate_library() {
        assert_eq!(*standard_gate("H0").unwrap().matrix(), m(&[&[1, 0], &[1, 1]]));
        assert_eq!(standard_gate("H9"), Err(Error::UnknownGate("H9".into())));
        assert_eq!(cnot(2, 0, 1).unwrap().matrix(), standard_gate("CNOT_A").unwrap().matrix());
        assert_eq!(cnot(2, 1, 0).unwrap().matrix(), standard_gate("CNOT_B").unwrap().matrix());
        // the six one-line gates are all nonsingular 2×2 matrices
        let mut found: Vec<Gf2Matrix> = Vec::new();
        for x in 0u8..16 {
            let mm = m(&[&[x & 1, (x >> 1) & 1], &[(x >> 2) & 1, (x >> 3) & 1]]);
            if mm.is_nonsingular().unwrap() {
                found.push(mm);
            }
        }
        let mut lib: Vec<Gf2Matrix> = STANDARD_GATES[..6]
            .iter()
            .map(|n| standard_gate(n).unwrap().matrix().clone())
            .collect();
        let key = |g: &Gf2Matrix| g.to_rows();
        found.sort_by_key(key);
        lib.sort_by_key(key);
        assert_eq!(found, lib);
        let xh1 = standard_gate("X").unwrap().then_after(&standard_gate("H1").unwrap()).unwrap();
        assert_eq!(xh1.matrix(), standard_gate("XH1").unwrap().matrix());
        assert_eq!(Gate::new("Z", m(&[&[1, 1], &[1, 1]])), Err(Error::Singular));
    }

    #[test]
    fn apply_on_lines() {
        // α = β = 1: α|00⟩ + β|10⟩
        let phi0 = Register::ket(&["00", "10"]).unwrap();
        let phi1 = apply(&standard_gate("H0").unwrap(), &phi0, LineSpan::line(1)).unwrap();
        assert_eq!(phi1.coefficients(), [1, 1, 1, 1]);
        let phi0 = Register::basis("10").unwrap();
        let phi1 = apply(&standard_gate("H0").unwrap(), &phi0, LineSpan::line(1)).unwrap();
        assert_eq!(phi1.coefficients(), [0, 0, 1, 1]);
        let phi2 = apply(&standard_gate("CNOT_B").unwrap(), &phi1, LineSpan::All).unwrap();
        assert_eq!(phi2.coefficients(), [0, 1, 1, 0]);
        let id = standard_gate("I").unwrap();
        assert_eq!(apply(&id, &phi2, LineSpan::line(0)).unwrap(), phi2);
        assert_eq!(
            apply(&standard_gate("CNOT_A").unwrap(), &Register::basis("0").unwrap(), LineSpan::All),
            Err(Error::SizeMismatch { gate: 2, available: 1 })
        );
        assert!(matches!(
            apply(&id, &phi2, LineSpan::line(2)),
            Err(Error::LineOutOfRange { .. })
        ));
    }

    #[test]
    fn line_measurement() {
        let phi2 = Register::ket(&["00", "01", "10", "11"]).unwrap();
        let (p, r) = phi2.measure_line_given(0, 0).unwrap();
        assert_eq!(p, Probability::ratio(1, 2).unwrap());
        assert_eq!(r.line_qubit(1).unwrap().coefficients(), [1, 1]);
        let b = Register::basis("01").unwrap();
        let (p, r) = b.measure_line_given(1, 1).unwrap();
        assert_eq!((p, r), (Probability::one(), b.clone()));
        assert!(matches!(b.measure_line_given(1, 0), Err(Error::ImpossibleOutcome(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (o, _, r) = b.measure_line(0, &mut rng).unwrap();
        assert_eq!((o, r), (0, b));
        assert!(Register::ket(&["00", "11"]).unwrap().line_qubit(1).is_err());
    }

    #[test]
    fn teleportation_all_cases() {
        for (alpha, beta) in [(true, false), (false, true), (true, true)] {
            for outcome in 0..2 {
                let t = teleport_given(alpha, beta, outcome).unwrap();
                let (a, b) = (u8::from(alpha), u8::from(beta));
                assert_eq!(t.phi1.coefficients(), [a, a, b, b]);
                assert_eq!(t.phi2.coefficients(), [a, b, b, a]);
                assert!(t.success, "{alpha} {beta} {outcome}");
                let expect_received = if outcome == 0 { [a, b] } else { [b, a] };
                assert_eq!(t.bob_received.coefficients(), expect_received);
                assert_eq!(t.probability, Probability::ratio(1, 2).unwrap());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(teleport(true, true, &mut rng).unwrap().success);
        assert_eq!(teleport_given(false, false, 0), Err(Error::ZeroState));
    }

    #[test]
    fn ef_examples() {
        let fx = BooleanFunction::from_bits("10").unwrap();
        assert_eq!(*ef_gate(&fx).matrix(), m(&[&[1, 1], &[0, 1]]));
        let zero = BooleanFunction::from_bits("00").unwrap();
        assert_eq!(*ef_gate(&zero).matrix(), m(&[&[1, 0], &[1, 1]]));
        let imp = BooleanFunction::from_bits("1101").unwrap();
        let expect = m(&[&[0, 1], &[1, 1]]).kron(&m(&[&[1, 1], &[1, 0]]));
        assert_eq!(*ef_gate(&imp).matrix(), expect);
    }

    #[test]
    fn implication_parity() {
        let r = parity_sat(&BooleanFunction::from_bits("1101").unwrap()).unwrap();
        // f(0,·) = (1,1) is even and f(1,·) = (0,1) is odd
        assert_eq!(r.measured_ket, "01");
        assert_eq!(r.slice_label, "EO");
        assert_eq!(r.parity, 1);
        assert_eq!(r.ef_applications, 1);
    }

    #[test]
    fn unary_result_vector() {
        for f in BooleanFunction::all(1) {
            let s = f.value(0) ^ f.value(1);
            let r = parity_sat(&f).unwrap();
            assert_eq!(r.pre_measure.coefficients(), [s ^ 1, s]);
            let classical = if f.value(0) == f.value(1) {
                DeutschAnswer::Constant
            } else {
                DeutschAnswer::Balanced
            };
            assert_eq!(deutsch(&f).unwrap(), classical);
        }
        let two = BooleanFunction::from_bits("0110").unwrap();
        assert_eq!(deutsch(&two), Err(Error::WrongArity { expected: 1, found: 2 }));
    }

    #[test]
    fn binary_row_sums_closed_form() {
        for f in BooleanFunction::all(2) {
            let v = |x| f.value(x);
            let (s0, s1) = (v(0) ^ v(1), v(2) ^ v(3));
            let closed = [(s0 ^ 1) & (s1 ^ 1), (s0 ^ 1) & s1, s0 & (s1 ^ 1), s0 & s1];
            let g = ef_gate(&f);
            let row_sums: Vec<u8> = (0..4).map(|i| (g.matrix().row(i).count_ones() % 2) as u8).collect();
            assert_eq!(row_sums, closed);
            assert_eq!(parity_sat(&f).unwrap().pre_measure.coefficients(), closed);
        }
    }

    #[test]
    fn parity_matches_oracle_exhaustively() {
        for n in 1..=3 {
            for f in BooleanFunction::all(n) {
                let r = parity_sat(&f).unwrap();
                assert_eq!(r.parity, f.parity(), "{f}");
                assert_eq!(r.ef_applications, 1);
                assert_eq!(r.pre_measure.support().len(), 1);
                for (p, &sp) in r.slice_parities.iter().enumerate() {
                    assert_eq!(sp, f.value(p << 1) ^ f.value((p << 1) | 1));
                }
                if f.ones() <= 1 {
                    let expect = if f.ones() == 1 {
                        Satisfiability::Satisfiable
                    } else {
                        Satisfiability::Unsatisfiable
                    };
                    assert_eq!(unambiguous_sat(&f).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn register_display_and_json() {
        let r = Register::ket(&["00", "11", "00", "10"]).unwrap();
        assert_eq!(r.to_string(), "|10⟩+|11⟩");
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"["10","11"]"#);
        assert_eq!(Register::ket(&["01", "01"]), Err(Error::ZeroState));
    }
}
