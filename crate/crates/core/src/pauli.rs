//! Binary symplectic Pauli strings.
//!
//! A Pauli string on `n` qubits is stored as two packed bit vectors, `x` and
//! `z`, plus a sign bit. Qubit `j` lives in bit `j % 64` of word `j / 64`.
//! Commutation between two strings reduces to word-wise AND/XOR followed by a
//! popcount, which is the primitive every other module is built on.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Number of 64-bit words needed to hold `n` bits.
#[inline]
pub const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A single-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(x, z)` encoding.
    pub const fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub const fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A signed Pauli string `(-1)^r P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`.
///
/// Padding bits in the trailing word are always zero, so whole-word
/// comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: bool,
}

impl PauliString {
    /// The identity on `n` qubits with a `+` sign.
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            sign: false,
        }
    }

    /// `pauli` acting on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(q, pauli);
        p
    }

    pub fn from_paulis(paulis: &[Pauli], sign: bool) -> Self {
        let mut p = Self::identity(paulis.len());
        for (q, &op) in paulis.iter().enumerate() {
            p.set(q, op);
        }
        p.sign = sign;
        p
    }

    /// Builds a string from raw packed words. Padding bits are cleared.
    pub fn from_words(n: usize, mut x: Vec<u64>, mut z: Vec<u64>, sign: bool) -> Result<Self> {
        let w = words_for(n);
        if x.len() != w || z.len() != w {
            return Err(Error::DimensionMismatch {
                expected: w,
                found: x.len().max(z.len()),
            });
        }
        if let Some(mask) = tail_mask(n) {
            x[w - 1] &= mask;
            z[w - 1] &= mask;
        }
        Ok(Self { n, x, z, sign })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    #[inline]
    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// `true` means the overall sign is `-1`.
    #[inline]
    pub fn sign(&self) -> bool {
        self.sign
    }

    pub fn set_sign(&mut self, sign: bool) {
        self.sign = sign;
    }

    pub fn with_sign(mut self, sign: bool) -> Self {
        self.sign = sign;
        self
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, pauli: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = pauli.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | (u64::from(xb) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | (u64::from(zb) << b);
    }

    pub fn paulis(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|q| self.get(q))
    }

    /// Equality of the `(x, z)` bits, ignoring the sign.
    pub fn same_axis(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of non-identity positions. The sign is ignored.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Group-wise commutation: the number of anticommuting positions is even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(commute_words(&self.x, &self.z, &other.x, &other.z))
    }

    /// Qubit-wise commutation: every position commutes on its own.
    pub fn qubitwise_commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .all(|((x1, z1), (x2, z2))| (x1 & z2) ^ (x2 & z1) == 0))
    }

    /// Full product `self · other`, returned with its `i`-exponent mod 4.
    ///
    /// The exponent includes both signs. For commuting operands it is always
    /// 0 or 2.
    pub fn product(&self, other: &Self) -> Result<(PauliString, u8)> {
        self.check_dims(other)?;
        let sum = 2 * i64::from(self.sign)
            + 2 * i64::from(other.sign)
            + phase_sum(&self.x, &self.z, &other.x, &other.z);
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        Ok((
            PauliString {
                n: self.n,
                x,
                z,
                sign: false,
            },
            sum.rem_euclid(4) as u8,
        ))
    }
}

/// Mask for the valid bits of the last word, or `None` when `n` is a multiple of 64.
pub(crate) fn tail_mask(n: usize) -> Option<u64> {
    match n % 64 {
        0 => None,
        r => Some((1u64 << r) - 1),
    }
}

/// `true` when the packed operands commute group-wise.
#[inline]
pub(crate) fn commute_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u32;
    for i in 0..x1.len() {
        acc ^= ((x1[i] & z2[i]) ^ (x2[i] & z1[i])).count_ones();
    }
    acc & 1 == 0
}

/// Sum over qubits of the `i`-exponent picked up by the product `left · right`.
///
/// Per position this is the `g` function of the CHP rowsum: `+1` for
/// `XY`, `YZ`, `ZX`, `-1` for the reversed pairs, `0` otherwise.
#[inline]
pub(crate) fn phase_sum(lx: &[u64], lz: &[u64], rx: &[u64], rz: &[u64]) -> i64 {
    let mut plus = 0i64;
    let mut minus = 0i64;
    for w in 0..lx.len() {
        let (x1, z1, x2, z2) = (lx[w], lz[w], rx[w], rz[w]);
        let y1 = x1 & z1;
        let xo1 = x1 & !z1;
        let zo1 = z1 & !x1;
        let y2 = x2 & z2;
        let xo2 = x2 & !z2;
        let zo2 = z2 & !x2;
        plus += ((y1 & zo2) | (xo1 & y2) | (zo1 & xo2)).count_ones() as i64;
        minus += ((y1 & xo2) | (xo1 & zo2) | (zo1 & y2)).count_ones() as i64;
    }
    plus - minus
}

/// Anticommutation indicator of `p` against every row: bit `i` is set when
/// `p` and `rows[i]` anticommute group-wise.
///
/// The rows are swept one word column at a time, accumulating partial
/// symplectic products, so each pass touches the same word of every row.
pub fn commutation_vector(p: &PauliString, rows: &[PauliString]) -> Result<Vec<bool>> {
    if let Some(bad) = rows.iter().find(|r| r.n != p.n) {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            found: bad.n,
        });
    }
    let mut acc = vec![0u64; rows.len()];
    for w in 0..words_for(p.n) {
        let (xp, zp) = (p.x[w], p.z[w]);
        for (a, row) in acc.iter_mut().zip(rows) {
            *a ^= (xp & row.z[w]) ^ (zp & row.x[w]);
        }
    }
    Ok(acc.into_iter().map(|a| a.count_ones() & 1 == 1).collect())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign { "-" } else { "+" })?;
        for p in self.paulis() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut chars = text.chars().peekable();
        let mut sign = false;
        let mut offset = 0;
        match chars.peek() {
            Some('+') => {
                chars.next();
                offset = 1;
            }
            Some('-') | Some('−') => {
                chars.next();
                sign = true;
                offset = 1;
            }
            _ => {}
        }
        let mut paulis = Vec::new();
        for (i, c) in chars.enumerate() {
            let p = Pauli::from_symbol(c).ok_or(Error::PauliParse {
                position: offset + i + 1,
                symbol: c,
            })?;
            paulis.push(p);
        }
        if paulis.is_empty() {
            return Err(Error::EmptyPauli);
        }
        Ok(Self::from_paulis(&paulis, sign))
    }
}

/// Parses a Pauli string; shorthand for [`str::parse`].
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    text.parse()
}
