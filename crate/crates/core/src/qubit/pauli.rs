use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::StateVector;
use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self · other = i^k · result`, returned as `(k, result)`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// Signed tensor product of single-qubit Paulis; letter `i` acts on qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, negative: bool) -> Self {
        Self { letters, negative }
    }

    pub fn identity(width: usize) -> Self {
        Self::new(vec![Pauli::I; width], false)
    }

    pub fn width(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Sets the letter on qubit `q`.
    pub fn with(mut self, q: usize, p: Pauli) -> Self {
        self.letters[q] = p;
        self
    }

    fn mask(&self, pred: impl Fn(Pauli) -> bool) -> u64 {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| pred(p))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Qubits flipped by the string (X or Y).
    pub fn x_mask(&self) -> u64 {
        self.mask(|p| matches!(p, Pauli::X | Pauli::Y))
    }

    /// Qubits picking up a sign (Z or Y).
    pub fn z_mask(&self) -> u64 {
        self.mask(|p| matches!(p, Pauli::Z | Pauli::Y))
    }

    /// Product `self · other`. Fails when the strings anticommute, since the
    /// product then carries a phase of `±i` and is not Hermitian.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.width() != other.width() {
            return Err(Error::invalid("Pauli strings of different widths"));
        }
        let mut power = if self.negative != other.negative { 2u8 } else { 0 };
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                power = (power + k) % 4;
                p
            })
            .collect();
        match power {
            0 => Ok(PauliString::new(letters, false)),
            2 => Ok(PauliString::new(letters, true)),
            _ => Err(Error::invalid(format!("{self} and {other} anticommute"))),
        }
    }

    /// Phase of `P|b⟩ = phase(b)·|b ⊕ x_mask⟩`.
    pub(crate) fn phase_on(&self, b: u64) -> C64 {
        let ny = self.letters.iter().filter(|&&p| p == Pauli::Y).count();
        let mut phase = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][ny % 4];
        if self.negative ^ ((b & self.z_mask()).count_ones() % 2 == 1) {
            phase = -phase;
        }
        phase
    }
}

/// `⟨ψ|P|ψ⟩`.
pub fn pauli_expectation(psi: &StateVector, p: &PauliString) -> Result<f64> {
    if psi.width() != p.width() {
        return Err(Error::invalid(format!("{}-qubit Pauli on a {}-qubit state", p.width(), psi.width())));
    }
    let amps = psi.amplitudes();
    let x = p.x_mask() as usize;
    let z = p.z_mask();
    let base = p.phase_on(0);
    let value: C64 = amps
        .iter()
        .enumerate()
        .map(|(b, a)| {
            let s = if (b as u64 & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            amps[b ^ x].conj() * a * s
        })
        .sum();
    Ok((base * value).re)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::invalid(format!("not a Pauli letter: {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(PauliString::new(letters, negative))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
