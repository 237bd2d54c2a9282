//! Pauli strings with phases and the local-assignment search over stabilizer
//! specifications.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, CMatrix, Real};
use crate::tensor::{kron_all, party_label};
use crate::witness::pauli_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_letter(ch: char) -> Result<Self> {
        Ok(match ch {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            other => return Err(Error::InvalidPauli(format!("unknown Pauli letter `{other}`"))),
        })
    }

    /// `self · other = i^k · result`.
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// `i^phase · σ_1 ⊗ … ⊗ σ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase: u8,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters, phase: 0 }
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Exponent `k` of the prefactor `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The letters without the phase.
    pub fn word(&self) -> String {
        self.letters.iter().map(|p| p.letter()).collect()
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.len() != other.len() {
            return Err(Error::InvalidPauli(format!("cannot multiply `{self}` and `{other}`")));
        }
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                phase += k;
                p
            })
            .collect();
        Ok(PauliString { letters, phase: phase % 4 })
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// `±1` if the phase is real.
    pub fn real_sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn matrix<R: Real>(&self) -> CMatrix<R> {
        let factors: Vec<CMatrix<R>> =
            self.letters.iter().map(|p| pauli_matrix::<R>(p.letter()).expect("valid letter")).collect();
        let pre = match self.phase {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        };
        kron_all(&factors) * pre
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// `XYY`, `-XXX`, `iZ`, `-iXY`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        if rest.is_empty() {
            return Err(Error::InvalidPauli("empty Pauli string".into()));
        }
        let letters = rest.chars().map(Pauli::from_letter).collect::<Result<Vec<_>>>()?;
        let phase = (if neg { 2 } else { 0 } + if imag { 1 } else { 0 }) % 4;
        Ok(Self { letters, phase })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{pre}{}", self.word())
    }
}

/// Commuting Pauli generators with target eigenvalues, plus elements of the
/// generated group whose targets follow from the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerSpec {
    generators: Vec<(PauliString, i8)>,
    derived: Vec<(PauliString, i8)>,
}

fn check_target(t: i8) -> Result<()> {
    if t == 1 || t == -1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("target eigenvalue must be +1 or -1, got {t}")))
    }
}

impl StabilizerSpec {
    pub fn new(generators: Vec<(PauliString, i8)>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParameter("stabilizer spec needs a generator".into()));
        };
        let n = first.0.len();
        for (i, (g, t)) in generators.iter().enumerate() {
            check_target(*t)?;
            if g.len() != n {
                return Err(Error::InvalidPauli(format!("`{g}` has {} letters, expected {n}", g.len())));
            }
            if g.phase != 0 {
                return Err(Error::InvalidPauli(format!("generator `{g}` must carry no phase; put the sign in the target")));
            }
            for (h, _) in &generators[..i] {
                if !g.commutes(h) {
                    return Err(Error::InvalidParameter(format!("generators `{h}` and `{g}` do not commute")));
                }
            }
        }
        Ok(Self { generators, derived: Vec::new() })
    }

    /// Adds the product of the listed generators with its implied target.
    pub fn derive(mut self, indices: &[usize]) -> Result<Self> {
        let n = self.n_qubits();
        let mut prod = PauliString::new(vec![Pauli::I; n]);
        let mut target = 1i8;
        for &i in indices {
            let (g, t) = self
                .generators
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("no generator {i}")))?;
            prod = prod.mul(g)?;
            target *= t;
        }
        let Some(sign) = prod.real_sign() else {
            return Err(Error::InvalidParameter(format!("product `{prod}` has a non-real phase")));
        };
        // P·ψ = target·ψ with P = sign·W, so W·ψ = sign·target·ψ.
        self.derived.push((PauliString::new(prod.letters), sign * target));
        Ok(self)
    }

    /// Adds a derived element with an explicitly chosen target.
    pub fn with_derived(mut self, pauli: PauliString, target: i8) -> Result<Self> {
        check_target(target)?;
        if pauli.len() != self.n_qubits() || pauli.phase != 0 {
            return Err(Error::InvalidPauli(format!("derived element `{pauli}` does not fit the spec")));
        }
        self.derived.push((pauli, target));
        Ok(self)
    }

    /// `XYY, YXY, YYX` at `+1`, with `XXX` at `−1` derived from their product.
    pub fn ghz() -> Self {
        let gens = ["XYY", "YXY", "YYX"].iter().map(|s| (s.parse().expect("valid"), 1)).collect();
        Self::new(gens).expect("commuting").derive(&[0, 1, 2]).expect("real product")
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].0.len()
    }

    pub fn generators(&self) -> &[(PauliString, i8)] {
        &self.generators
    }

    pub fn derived(&self) -> &[(PauliString, i8)] {
        &self.derived
    }

    pub fn elements(&self) -> impl Iterator<Item = &(PauliString, i8)> {
        self.generators.iter().chain(&self.derived)
    }

    /// Local symbols `(party, letter)` in order of first appearance.
    pub fn symbols(&self) -> Vec<(usize, Pauli)> {
        let mut out: Vec<(usize, Pauli)> = Vec::new();
        for (p, _) in self.elements() {
            for (q, &l) in p.letters.iter().enumerate() {
                if l != Pauli::I && !out.contains(&(q, l)) {
                    out.push((q, l));
                }
            }
        }
        out
    }
}

pub fn symbol_name(party: usize, letter: Pauli) -> String {
    format!("{}{}", letter.letter(), party_label(party))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhvOutcome {
    /// A consistent `±1` value for each local symbol, if one exists.
    pub assignment: Option<BTreeMap<String, i8>>,
    pub symbols: Vec<String>,
    pub assignments_checked: usize,
    pub total_assignments: usize,
}

pub const MAX_SYMBOLS: usize = 16;

/// Exhaustive search for local values `f(party, letter) = ±1` such that
/// `Π_q f(q, W_q)` equals the target of every spec element `W`.
pub fn lhv_assignment_search(spec: &StabilizerSpec) -> Result<LhvOutcome> {
    let symbols = spec.symbols();
    if symbols.len() > MAX_SYMBOLS {
        return Err(Error::SymbolBudget { symbols: symbols.len(), max: MAX_SYMBOLS });
    }
    let rows: Vec<(Vec<usize>, i8)> = spec
        .elements()
        .map(|(p, t)| {
            let idx = p
                .letters
                .iter()
                .enumerate()
                .filter(|(_, &l)| l != Pauli::I)
                .map(|(q, &l)| symbols.iter().position(|s| *s == (q, l)).expect("collected"))
                .collect();
            (idx, *t)
        })
        .collect();
    let names: Vec<String> = symbols.iter().map(|&(q, l)| symbol_name(q, l)).collect();
    let total = 1usize << symbols.len();
    let value = |mask: usize, s: usize| if (mask >> s) & 1 == 1 { -1i8 } else { 1 };
    for mask in 0..total {
        let ok = rows.iter().all(|(idx, t)| idx.iter().map(|&s| value(mask, s)).product::<i8>() == *t);
        if ok {
            let assignment = names.iter().enumerate().map(|(s, n)| (n.clone(), value(mask, s))).collect();
            return Ok(LhvOutcome {
                assignment: Some(assignment),
                symbols: names,
                assignments_checked: mask + 1,
                total_assignments: total,
            });
        }
    }
    Ok(LhvOutcome { assignment: None, symbols: names, assignments_checked: total, total_assignments: total })
}
