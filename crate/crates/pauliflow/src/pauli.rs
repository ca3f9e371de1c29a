//! Signed Pauli strings over named qubits, Pauli rotations, and the
//! reordering rules used to move Clifford rotations past other rotations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::angle::Angle;
use crate::circuit::Gate;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Product `self * other` as `(i^k, letter)`.
    pub fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        let letter = Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit());
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (k, letter)
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Phase `i^k` with `k` in `0..4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn sign(negative: bool) -> Self {
        if negative {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

/// A tensor product of single-qubit Paulis over named qubits, times a phase
/// in `{1, i, -1, -i}`. Qubits absent from the map carry the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SignedPauliString {
    phase: Phase,
    letters: BTreeMap<String, Pauli>,
}

impl SignedPauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: impl Into<String>, p: Pauli) -> Self {
        Self::from_letters([(qubit.into(), p)])
    }

    pub fn from_letters<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = (S, Pauli)>,
        S: Into<String>,
    {
        let mut out = Self::identity();
        for (q, p) in letters {
            out.set(q.into(), p);
        }
        out
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// `Some(true)` for a `-1` phase, `Some(false)` for `+1`, `None` if imaginary.
    pub fn is_negative(&self) -> Option<bool> {
        match self.phase.0 {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn get(&self, qubit: &str) -> Pauli {
        self.letters.get(qubit).copied().unwrap_or(Pauli::I)
    }

    pub fn set(&mut self, qubit: String, p: Pauli) {
        if p == Pauli::I {
            self.letters.remove(&qubit);
        } else {
            self.letters.insert(qubit, p);
        }
    }

    /// Non-identity positions in qubit order.
    pub fn letters(&self) -> impl Iterator<Item = (&str, Pauli)> {
        self.letters.iter().map(|(q, p)| (q.as_str(), *p))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.letters.keys().map(String::as_str)
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn scaled(&self, phase: Phase) -> Self {
        let mut out = self.clone();
        out.phase = out.phase.times(phase);
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(Phase::MINUS_ONE)
    }

    /// The same letters with phase `+1`.
    pub fn unsigned(&self) -> Self {
        let mut out = self.clone();
        out.phase = Phase::ONE;
        out
    }

    /// Phase-exact product `self * other`.
    pub fn multiply(&self, other: &SignedPauliString) -> SignedPauliString {
        let mut phase = self.phase.times(other.phase);
        let mut letters = self.letters.clone();
        for (q, &b) in &other.letters {
            let a = letters.get(q).copied().unwrap_or(Pauli::I);
            let (k, c) = a.product(b);
            phase = phase.times(Phase(k));
            if c == Pauli::I {
                letters.remove(q);
            } else {
                letters.insert(q.clone(), c);
            }
        }
        SignedPauliString { phase, letters }
    }

    pub fn commutes(&self, other: &SignedPauliString) -> bool {
        let (small, large) = if self.letters.len() <= other.letters.len() {
            (self, other)
        } else {
            (other, self)
        };
        let clashes = small
            .letters
            .iter()
            .filter(|(q, p)| p.anticommutes(large.get(q)))
            .count();
        clashes % 2 == 0
    }

    /// Keep only the given qubits.
    pub fn restricted<'a>(&self, qubits: impl IntoIterator<Item = &'a str>) -> Self {
        let mut out = SignedPauliString::identity().with_phase(self.phase);
        for q in qubits {
            out.set(q.to_string(), self.get(q));
        }
        out
    }

    /// Positional rendering such as `-Y1Z2` for the qubit order given.
    pub fn positional(&self, order: &[String]) -> String {
        let mut s = phase_prefix(self.phase).to_string();
        for (k, q) in order.iter().enumerate() {
            s.push(self.get(q).symbol());
            s.push_str(&(k + 1).to_string());
        }
        if order.is_empty() {
            s.push('I');
        }
        s
    }
}

fn phase_prefix(p: Phase) -> &'static str {
    match p.0 {
        0 => "",
        1 => "i",
        2 => "-",
        _ => "-i",
    }
}

impl fmt::Display for SignedPauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(phase_prefix(self.phase))?;
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        for (q, p) in &self.letters {
            write!(f, "{}({})", p.symbol(), q)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SignedPauliString {
    type Err = Error;

    /// Parses `-iX(a)Z(o1)`, `+Y(q)`, `I` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidString(s.to_string());
        let mut rest = s.trim();
        let mut k = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            k = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            k += 1;
        }
        let mut out = SignedPauliString::identity().with_phase(Phase(k));
        if rest == "I" {
            return Ok(out);
        }
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let mut chars = rest.chars();
            let p = chars.next().and_then(Pauli::from_symbol).ok_or_else(bad)?;
            let r = chars.as_str().strip_prefix('(').ok_or_else(bad)?;
            let close = r.find(')').ok_or_else(bad)?;
            let q = &r[..close];
            if q.is_empty() || out.letters.contains_key(q) {
                return Err(bad());
            }
            out.set(q.to_string(), p);
            rest = &r[close + 1..];
        }
        Ok(out)
    }
}

/// The operator `exp(i * angle/2 * string)` for a Hermitian string.
#[derive(Clone)]
pub struct Rotation {
    pub string: SignedPauliString,
    pub angle: Angle,
}

impl Rotation {
    pub fn new(string: SignedPauliString, angle: Angle) -> Result<Self> {
        if !string.is_hermitian() {
            return Err(Error::InvalidString(format!("{string} is not Hermitian")));
        }
        Ok(Rotation { string, angle })
    }

    /// Sign moved into the angle: `(+P, theta)`.
    pub fn canonical(&self) -> (SignedPauliString, Angle) {
        if self.string.is_negative() == Some(true) {
            (self.string.negated(), -self.angle)
        } else {
            (self.string.clone(), self.angle)
        }
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { string: self.string.clone(), angle: -self.angle }
    }

    pub fn is_identity(&self) -> bool {
        self.angle.is_zero() || self.string.is_identity_up_to_phase()
    }
}

impl PartialEq for Rotation {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for Rotation {}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.string, self.angle)
    }
}

/// Conjugate `b` by the Clifford rotation `U = exp(i theta/2 A)`: returns
/// `U b U^dagger`, so that `U b = (U b U^dagger) U`.
pub fn reorder_push(rot: &Rotation, b: &SignedPauliString) -> Result<SignedPauliString> {
    let k = rot
        .angle
        .quarter_index()
        .ok_or_else(|| Error::NonClifford(rot.angle.to_string()))?;
    if rot.string.commutes(b) {
        return Ok(b.clone());
    }
    // Anticommuting: U b U^dagger = exp(i theta A) b.
    Ok(match k {
        0 => b.clone(),
        1 => rot.string.multiply(b).scaled(Phase::I),
        2 => b.negated(),
        _ => rot.string.multiply(b).scaled(Phase::MINUS_I),
    })
}

/// Multiply a rotation's axis by a commuting stabilizer.
pub fn product_rotation(rot: &Rotation, stab: &SignedPauliString) -> Result<Rotation> {
    if !rot.string.commutes(stab) {
        return Err(Error::Anticommuting(rot.string.to_string(), stab.to_string()));
    }
    Rotation::new(rot.string.multiply(stab), rot.angle)
}

fn z(q: &str) -> SignedPauliString {
    SignedPauliString::single(q, Pauli::Z)
}

fn x(q: &str) -> SignedPauliString {
    SignedPauliString::single(q, Pauli::X)
}

fn rot(s: SignedPauliString, quarter_turns: i64) -> Rotation {
    Rotation { string: s, angle: Angle::quarter_turns(quarter_turns) }
}

/// Decompose a gate into Pauli rotations (time order, first applied first)
/// whose product equals the gate up to global phase.
pub fn gate_to_exponentials(gate: &Gate) -> Result<Vec<Rotation>> {
    let eighth = |s: SignedPauliString, negative: bool| Rotation {
        string: s,
        angle: if negative { -Angle::quarter_pi() } else { Angle::quarter_pi() },
    };
    Ok(match gate {
        Gate::CX(c, t) => vec![rot(z(c).multiply(&x(t)), -1), rot(z(c), 1), rot(x(t), 1)],
        Gate::CZ(c, t) => vec![rot(z(c).multiply(&z(t)), -1), rot(z(c), 1), rot(z(t), 1)],
        Gate::RZ(q, a) => vec![Rotation { string: z(q), angle: -*a }],
        Gate::RX(q, a) => vec![Rotation { string: x(q), angle: -*a }],
        Gate::H(q) => vec![rot(z(q), -1), rot(x(q), -1), rot(z(q), -1)],
        Gate::S(q) => vec![rot(z(q), -1)],
        Gate::Sdg(q) => vec![rot(z(q), 1)],
        Gate::X(q) => vec![rot(x(q), 2)],
        Gate::Z(q) => vec![rot(z(q), 2)],
        Gate::CCX(a, b, t) => vec![
            eighth(z(a).multiply(&z(b)).multiply(&x(t)), true),
            eighth(z(a).multiply(&z(b)), false),
            eighth(z(a).multiply(&x(t)), false),
            eighth(z(b).multiply(&x(t)), false),
            eighth(z(a), true),
            eighth(z(b), true),
            eighth(x(t), true),
        ],
        Gate::Exp(r) => vec![r.clone()],
        Gate::Init0(q) => {
            return Err(Error::Precondition(format!("INIT0({q}) is not a unitary gate")))
        }
    })
}

/// Conjugate a string by a Clifford gate: `G s G^dagger`.
pub fn conjugate_by_gate(gate: &Gate, s: &SignedPauliString) -> Result<SignedPauliString> {
    let mut out = s.clone();
    for r in gate_to_exponentials(gate)? {
        out = reorder_push(&r, &out)?;
    }
    Ok(out)
}
