use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordered subsystem dimensions of a tensor-product space.
///
/// Party 0 is the most significant digit of a flat basis index, so
/// `|i_0 i_1 … i_{k-1}⟩` sits at `Σ i_p · stride_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem required".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("subsystem dimension {d} < 2")));
        }
        dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| {
            Error::InvalidDims("total dimension overflows".into())
        })?;
        Ok(Self(dims))
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn n_parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for p in (0..self.0.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * self.0[p + 1];
        }
        strides
    }

    /// Per-party digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for p in (0..self.0.len()).rev() {
            out[p] = index % self.0[p];
            index /= self.0[p];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.0).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Dimensions of the listed parties, in the listed order.
    pub fn select(&self, parties: &[usize]) -> Result<Dims> {
        let mut out = Vec::with_capacity(parties.len());
        for &p in parties {
            out.push(*self.0.get(p).ok_or_else(|| {
                Error::InvalidDims(format!("party {p} out of range for {} parties", self.0.len()))
            })?);
        }
        Dims::new(out)
    }

    pub fn product_of(&self, parties: &[usize]) -> usize {
        parties.iter().map(|&p| self.0[p]).product()
    }

    pub fn check_total(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::DimensionMismatch { expected: self.total(), found: n });
        }
        Ok(())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Letter used for party `p` in cut labels (`A`, `B`, …).
pub fn party_label(p: usize) -> char {
    (b'A' + p as u8) as char
}

fn party_index(c: char) -> Option<usize> {
    c.is_ascii_uppercase().then(|| (c as u8 - b'A') as usize)
}

/// A cut of `n_parties` parties into two nonempty complementary sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n_parties: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_parties: usize, side_a: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n_parties > 26 {
            return Err(Error::InvalidCut("at most 26 parties are supported".into()));
        }
        let mut a: Vec<usize> = side_a.into_iter().collect();
        a.sort_unstable();
        a.dedup();
        if a.is_empty() || a.len() >= n_parties {
            return Err(Error::InvalidCut(format!(
                "side A must be a nonempty proper subset of {n_parties} parties"
            )));
        }
        if let Some(&p) = a.iter().find(|&&p| p >= n_parties) {
            return Err(Error::InvalidCut(format!("party {p} out of range")));
        }
        let b = (0..n_parties).filter(|p| !a.contains(p)).collect();
        Ok(Self { n_parties, side_a: a, side_b: b })
    }

    /// The `A|B` cut of a two-party system.
    pub fn two_party() -> Self {
        Self::new(2, [0]).expect("valid")
    }

    /// Parses labels like `A|BC` (party `A` is index 0).
    pub fn parse(label: &str, n_parties: usize) -> Result<Self> {
        let (lhs, rhs) = label
            .split_once('|')
            .ok_or_else(|| Error::InvalidCut(format!("`{label}` has no `|`")))?;
        let decode = |s: &str| -> Result<Vec<usize>> {
            s.trim()
                .chars()
                .map(|c| {
                    party_index(c)
                        .filter(|&p| p < n_parties)
                        .ok_or_else(|| Error::InvalidCut(format!("unknown party `{c}` in `{label}`")))
                })
                .collect()
        };
        let a = decode(lhs)?;
        let mut b = decode(rhs)?;
        let cut = Self::new(n_parties, a.iter().copied())?;
        b.sort_unstable();
        if b != cut.side_b || a.len() != cut.side_a.len() {
            return Err(Error::InvalidCut(format!(
                "`{label}` must list every party exactly once"
            )));
        }
        Ok(cut)
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// Side A followed by side B; the party order used for bipartite views.
    pub fn ordering(&self) -> Vec<usize> {
        self.side_a.iter().chain(&self.side_b).copied().collect()
    }

    /// Same cut with the sides swapped.
    pub fn swapped(&self) -> Self {
        Self { n_parties: self.n_parties, side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }

    /// Representative whose side A contains party 0.
    pub fn canonical(&self) -> Self {
        if self.side_a.contains(&0) {
            self.clone()
        } else {
            self.swapped()
        }
    }

    /// Whether `i` and `j` end up on different sides.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.side_a.contains(&i) != self.side_a.contains(&j)
    }

    pub fn label(&self) -> String {
        let a: String = self.side_a.iter().map(|&p| party_label(p)).collect();
        let b: String = self.side_b.iter().map(|&p| party_label(p)).collect();
        format!("{a}|{b}")
    }

    /// Local dimensions `(d_A, d_B)` for a layout.
    pub fn local_dims(&self, dims: &Dims) -> Result<(usize, usize)> {
        if dims.n_parties() != self.n_parties {
            return Err(Error::InvalidCut(format!(
                "cut over {} parties applied to a {}-party layout",
                self.n_parties,
                dims.n_parties()
            )));
        }
        Ok((dims.product_of(&self.side_a), dims.product_of(&self.side_b)))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Bipartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}
