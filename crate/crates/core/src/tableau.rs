//! CHP stabilizer/destabilizer tableau.
//!
//! Rows `0..n` are stabilizers, rows `n..2n` destabilizers, and row `2n` is
//! a scratch row used by deterministic measurement. Rows are stored
//! row-major as packed `x` and `z` words plus one sign byte per row, so a
//! contiguous range of rows can be handed to a worker as a [`RowsMut`] block.

use std::fmt::Write as _;
use std::ops::Range;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::Rng;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pauli::{commute_words, phase_sum, words_for, Pauli, PauliString};

/// Result of a single-qubit Z measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasResult {
    pub outcome: bool,
    pub deterministic: bool,
}

/// A growable row-major matrix of signed Pauli rows on `n` qubits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PauliRows {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<u8>,
}

impl PauliRows {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            words: words_for(n),
            x: Vec::new(),
            z: Vec::new(),
            r: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn push(&mut self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        self.x.extend_from_slice(p.x_words());
        self.z.extend_from_slice(p.z_words());
        self.r.push(u8::from(p.sign()));
        Ok(())
    }

    pub fn row(&self, i: usize) -> PauliString {
        let span = i * self.words..(i + 1) * self.words;
        PauliString::from_words(
            self.n,
            self.x[span.clone()].to_vec(),
            self.z[span].to_vec(),
            self.r[i] == 1,
        )
        .expect("row width matches")
    }

    pub fn set_row(&mut self, i: usize, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let span = i * self.words..(i + 1) * self.words;
        self.x[span.clone()].copy_from_slice(p.x_words());
        self.z[span].copy_from_slice(p.z_words());
        self.r[i] = u8::from(p.sign());
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = PauliString> + '_ {
        (0..self.len()).map(|i| self.row(i))
    }

    #[inline]
    pub fn x_bit(&self, i: usize, q: usize) -> bool {
        self.x[i * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, i: usize, q: usize) -> bool {
        self.z[i * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn sign(&self, i: usize) -> bool {
        self.r[i] == 1
    }

    pub fn as_rows_mut(&mut self) -> RowsMut<'_> {
        RowsMut {
            start: 0,
            words: self.words,
            x: &mut self.x,
            z: &mut self.z,
            r: &mut self.r,
        }
    }

    fn allocated_bits(&self) -> usize {
        (self.x.capacity() + self.z.capacity()) * 64 + self.r.capacity() * 8
    }
}

/// A mutable view of a contiguous block of rows.
///
/// Blocks produced by [`RowsMut::split_at`] are disjoint, so Clifford updates
/// can run on them concurrently.
pub struct RowsMut<'a> {
    start: usize,
    words: usize,
    x: &'a mut [u64],
    z: &'a mut [u64],
    r: &'a mut [u8],
}

impl<'a> RowsMut<'a> {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Global index of the first row in this block.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn split_at(self, mid: usize) -> (RowsMut<'a>, RowsMut<'a>) {
        let (xa, xb) = self.x.split_at_mut(mid * self.words);
        let (za, zb) = self.z.split_at_mut(mid * self.words);
        let (ra, rb) = self.r.split_at_mut(mid);
        (
            RowsMut {
                start: self.start,
                words: self.words,
                x: xa,
                z: za,
                r: ra,
            },
            RowsMut {
                start: self.start + mid,
                words: self.words,
                x: xb,
                z: zb,
                r: rb,
            },
        )
    }

    /// Splits into at most `parts` contiguous blocks of near-equal size.
    pub fn split_even(self, parts: usize) -> Vec<RowsMut<'a>> {
        let parts = parts.max(1).min(self.len().max(1));
        let base = self.len() / parts;
        let extra = self.len() % parts;
        let mut out = Vec::with_capacity(parts);
        let mut rest = self;
        for k in 0..parts - 1 {
            let take = base + usize::from(k < extra);
            let (head, tail) = rest.split_at(take);
            out.push(head);
            rest = tail;
        }
        out.push(rest);
        out
    }

    #[inline]
    fn bit(words: &[u64], stride: usize, row: usize, q: usize) -> u64 {
        words[row * stride + q / 64] >> (q % 64) & 1
    }

    pub fn h(&mut self, q: usize) {
        let (w, b) = (q / 64, q % 64);
        for row in 0..self.r.len() {
            let i = row * self.words + w;
            let (xv, zv) = (self.x[i] >> b & 1, self.z[i] >> b & 1);
            self.r[row] ^= (xv & zv) as u8;
            let t = (xv ^ zv) << b;
            self.x[i] ^= t;
            self.z[i] ^= t;
        }
    }

    pub fn s(&mut self, q: usize) {
        let (w, b) = (q / 64, q % 64);
        for row in 0..self.r.len() {
            let i = row * self.words + w;
            let (xv, zv) = (self.x[i] >> b & 1, self.z[i] >> b & 1);
            self.r[row] ^= (xv & zv) as u8;
            self.z[i] ^= xv << b;
        }
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        let (wc, bc, wt, bt) = (c / 64, c % 64, t / 64, t % 64);
        for row in 0..self.r.len() {
            let base = row * self.words;
            let xc = self.x[base + wc] >> bc & 1;
            let zc = self.z[base + wc] >> bc & 1;
            let xt = self.x[base + wt] >> bt & 1;
            let zt = self.z[base + wt] >> bt & 1;
            self.r[row] ^= (xc & zt & (xt ^ zc ^ 1)) as u8;
            self.x[base + wt] ^= xc << bt;
            self.z[base + wc] ^= zt << bc;
        }
    }

    /// Conjugates every row by a Clifford gate, expanding derived gates into
    /// `H`, `S` and `CX`.
    pub fn apply_clifford(&mut self, gate: Gate) -> Result<()> {
        match gate {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::Sdg(q) => {
                self.s(q);
                self.s(q);
                self.s(q);
            }
            Gate::Z(q) => {
                self.s(q);
                self.s(q);
            }
            Gate::X(q) => {
                self.h(q);
                self.s(q);
                self.s(q);
                self.h(q);
            }
            Gate::Y(q) => {
                self.h(q);
                self.s(q);
                self.s(q);
                self.h(q);
                self.s(q);
                self.s(q);
            }
            Gate::Cx(c, t) => self.cx(c, t),
            Gate::Cz(a, b) => {
                self.h(b);
                self.cx(a, b);
                self.h(b);
            }
            Gate::Swap(a, b) => {
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
            Gate::T(_) | Gate::Tdg(_) | Gate::Measure(_) => {
                return Err(Error::Unsupported(gate.to_string()))
            }
        }
        Ok(())
    }

    /// Smallest global row index below `limit` whose `x` bit at `q` is set.
    pub fn first_x(&self, q: usize, limit: usize) -> Option<usize> {
        (0..self.r.len())
            .take_while(|&row| self.start + row < limit)
            .find(|&row| Self::bit(self.x, self.words, row, q) == 1)
            .map(|row| self.start + row)
    }

    /// Left-multiplies by `src` every row in `rows` (global indices) that has
    /// its `x` bit at `q` set, except rows listed in `skip`.
    ///
    /// Returns `false` if any product picked up an imaginary phase.
    pub fn rowsum_from(&mut self, src: &PauliString, q: usize, rows: Range<usize>, skip: [usize; 2]) -> bool {
        let mut ok = true;
        let sx = src.x_words();
        let sz = src.z_words();
        let sr = i64::from(src.sign());
        for row in 0..self.r.len() {
            let global = self.start + row;
            if !rows.contains(&global) || skip.contains(&global) {
                continue;
            }
            if Self::bit(self.x, self.words, row, q) == 0 {
                continue;
            }
            let span = row * self.words..(row + 1) * self.words;
            let sum = 2 * i64::from(self.r[row])
                + 2 * sr
                + phase_sum(sx, sz, &self.x[span.clone()], &self.z[span.clone()]);
            match sum.rem_euclid(4) {
                0 => self.r[row] = 0,
                2 => self.r[row] = 1,
                _ => ok = false,
            }
            for (d, s) in self.x[span.clone()].iter_mut().zip(sx) {
                *d ^= s;
            }
            for (d, s) in self.z[span].iter_mut().zip(sz) {
                *d ^= s;
            }
        }
        ok
    }
}

/// Strategy for running row-block work.
///
/// `for_each_block` must return only after every block has been processed,
/// which is the synchronization point between gates.
pub trait RowExecutor {
    fn for_each_block<F>(&self, rows: RowsMut<'_>, f: F)
    where
        F: Fn(RowsMut<'_>) + Sync + Send;

    /// Sums `f` over a partition of `0..words`.
    fn sum_over_words<F>(&self, words: usize, f: F) -> i64
    where
        F: Fn(Range<usize>) -> i64 + Sync + Send;
}

/// Runs everything inline on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl RowExecutor for Sequential {
    fn for_each_block<F>(&self, rows: RowsMut<'_>, f: F)
    where
        F: Fn(RowsMut<'_>) + Sync + Send,
    {
        f(rows)
    }

    fn sum_over_words<F>(&self, words: usize, f: F) -> i64
    where
        F: Fn(Range<usize>) -> i64 + Sync + Send,
    {
        f(0..words)
    }
}

/// The CHP tableau for an `n`-qubit stabilizer state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tableau {
    n: usize,
    rows: PauliRows,
}

impl Tableau {
    /// The `|0…0⟩` state: stabilizers `Z_q`, destabilizers `X_q`.
    pub fn new_identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("tableau needs at least one qubit".into()));
        }
        let words = words_for(n);
        let rows = 2 * n + 1;
        let mut t = PauliRows {
            n,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![0; rows],
        };
        for q in 0..n {
            t.z[q * words + q / 64] |= 1 << (q % 64);
            t.x[(n + q) * words + q / 64] |= 1 << (q % 64);
        }
        Ok(Self { n, rows: t })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.rows.row(i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        self.rows.row(self.n + i)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.rows.row(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|i| self.rows.row(i)).collect()
    }

    /// Row `i` in `0..=2n`, scratch row included.
    pub fn row(&self, i: usize) -> PauliString {
        self.rows.row(i)
    }

    pub fn set_row(&mut self, i: usize, p: &PauliString) -> Result<()> {
        if i >= 2 * self.n {
            return Err(Error::InvalidSize(format!("row {i} is not a tableau row")));
        }
        self.rows.set_row(i, p)
    }

    /// Bits the CHP layout needs: `(2n+1)` rows of `2n` bits plus signs.
    pub fn logical_bits(&self) -> usize {
        (2 * self.n + 1) * (2 * self.n + 1)
    }

    /// Bits actually allocated for row storage, including word padding.
    pub fn allocated_bits(&self) -> usize {
        self.rows.allocated_bits()
    }

    pub(crate) fn rows_mut(&mut self) -> RowsMut<'_> {
        self.rows.as_rows_mut()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        Ok(())
    }

    pub(crate) fn check_gate(&self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        if let Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) = gate {
            if a == b {
                return Err(Error::InvalidGate(format!("{gate}: qubits must differ")));
            }
        }
        Ok(())
    }

    pub fn apply_h(&mut self, q: usize) -> Result<()> {
        self.apply_gate(Gate::H(q))
    }

    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        self.apply_gate(Gate::S(q))
    }

    pub fn apply_cx(&mut self, c: usize, t: usize) -> Result<()> {
        self.apply_gate(Gate::Cx(c, t))
    }

    /// Applies a Clifford gate. `T`, `T†` and measurements are rejected.
    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        self.apply_gate_with(gate, &Sequential)
    }

    pub fn apply_gate_with<E: RowExecutor>(&mut self, gate: Gate, exec: &E) -> Result<()> {
        self.check_gate(gate)?;
        if !gate.is_clifford() {
            return Err(Error::Unsupported(gate.to_string()));
        }
        exec.for_each_block(self.rows_mut(), |mut block| {
            block.apply_clifford(gate).expect("clifford checked above");
        });
        Ok(())
    }

    /// Applies several Clifford gates that touch pairwise disjoint qubits
    /// with a single pass over the rows.
    pub fn apply_layer_with<E: RowExecutor>(&mut self, gates: &[Gate], exec: &E) -> Result<()> {
        for &g in gates {
            self.check_gate(g)?;
            if !g.is_clifford() {
                return Err(Error::Unsupported(g.to_string()));
            }
        }
        exec.for_each_block(self.rows_mut(), |mut block| {
            for &g in gates {
                block.apply_clifford(g).expect("clifford checked above");
            }
        });
        Ok(())
    }

    /// Row `h` becomes `row_i · row_h` with the real sign tracked mod 4.
    /// Row `i` is unchanged.
    pub fn rowsum(&mut self, h: usize, i: usize) -> Result<()> {
        let last = 2 * self.n;
        if h == i || h > last || i > last {
            return Err(Error::Invariant(format!("rowsum({h}, {i}) out of contract")));
        }
        let src = self.rows.row(i);
        let w = self.rows.words;
        let span = h * w..(h + 1) * w;
        let sum = 2 * i64::from(self.rows.r[h])
            + 2 * i64::from(src.sign())
            + phase_sum(
                src.x_words(),
                src.z_words(),
                &self.rows.x[span.clone()],
                &self.rows.z[span.clone()],
            );
        self.finish_rowsum(h, &src, sum)
    }

    fn finish_rowsum(&mut self, h: usize, src: &PauliString, sum: i64) -> Result<()> {
        self.rows.r[h] = match sum.rem_euclid(4) {
            0 => 0,
            2 => 1,
            odd => {
                return Err(Error::Invariant(format!(
                    "rowsum into row {h} produced phase i^{odd}"
                )))
            }
        };
        let w = self.rows.words;
        let span = h * w..(h + 1) * w;
        for (d, s) in self.rows.x[span.clone()].iter_mut().zip(src.x_words()) {
            *d ^= s;
        }
        for (d, s) in self.rows.z[span].iter_mut().zip(src.z_words()) {
            *d ^= s;
        }
        Ok(())
    }

    /// Measures qubit `q` in the Z basis. `rng` is consulted only when the
    /// outcome is random.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<MeasResult> {
        self.measure_z_with(q, rng, &Sequential)
    }

    pub fn measure_z_with<R: Rng + ?Sized, E: RowExecutor>(
        &mut self,
        q: usize,
        rng: &mut R,
        exec: &E,
    ) -> Result<MeasResult> {
        self.check_qubit(q)?;
        let n = self.n;

        // Pivot: first stabilizer anticommuting with Z_q.
        let pivot = AtomicUsize::new(usize::MAX);
        exec.for_each_block(self.rows_mut(), |block| {
            if let Some(p) = block.first_x(q, n) {
                pivot.fetch_min(p, Ordering::Relaxed);
            }
        });
        let pivot = pivot.into_inner();

        if pivot != usize::MAX {
            let src = self.rows.row(pivot);
            let ok = AtomicBool::new(true);
            // Row p+n is overwritten below, so it is skipped.
            exec.for_each_block(self.rows_mut(), |mut block| {
                if !block.rowsum_from(&src, q, 0..2 * n, [pivot, pivot + n]) {
                    ok.store(false, Ordering::Relaxed);
                }
            });
            if !ok.into_inner() {
                return Err(Error::Invariant(
                    "random-branch rowsum produced an imaginary phase".into(),
                ));
            }
            self.rows.set_row(pivot + n, &src)?;
            let outcome: bool = rng.gen();
            let proj = PauliString::single(n, q, Pauli::Z).with_sign(outcome);
            self.rows.set_row(pivot, &proj)?;
            return Ok(MeasResult {
                outcome,
                deterministic: false,
            });
        }

        let scratch = 2 * n;
        let w = self.rows.words;
        for j in n..2 * n {
            if !self.rows.x_bit(j, q) {
                continue;
            }
            let src = self.rows.row(j - n);
            let (sx, sz) = (src.x_words(), src.z_words());
            let (hx, hz) = (
                &self.rows.x[scratch * w..(scratch + 1) * w],
                &self.rows.z[scratch * w..(scratch + 1) * w],
            );
            let phase = exec.sum_over_words(w, |span| {
                phase_sum(&sx[span.clone()], &sz[span.clone()], &hx[span.clone()], &hz[span])
            });
            let sum = 2 * i64::from(self.rows.r[scratch]) + 2 * i64::from(src.sign()) + phase;
            self.finish_rowsum(scratch, &src, sum)?;
        }
        let outcome = self.rows.sign(scratch);
        self.rows
            .set_row(scratch, &PauliString::identity(n))
            .expect("scratch width");
        Ok(MeasResult {
            outcome,
            deterministic: true,
        })
    }

    /// Checks every structural invariant of the tableau.
    pub fn audit(&self) -> Result<()> {
        let n = self.n;
        let w = self.rows.words;
        let scratch = 2 * n;
        if self.rows.r[scratch] != 0
            || self.rows.x[scratch * w..].iter().any(|&v| v != 0)
            || self.rows.z[scratch * w..].iter().any(|&v| v != 0)
        {
            return Err(Error::Invariant("scratch row not zero".into()));
        }
        let xs = |i: usize| &self.rows.x[i * w..(i + 1) * w];
        let zs = |i: usize| &self.rows.z[i * w..(i + 1) * w];
        for i in 0..n {
            for j in 0..n {
                if i < j && !commute_words(xs(i), zs(i), xs(j), zs(j)) {
                    return Err(Error::Invariant(format!("stabilizers {i} and {j} anticommute")));
                }
                let commutes = commute_words(xs(n + i), zs(n + i), xs(j), zs(j));
                if commutes == (i == j) {
                    return Err(Error::Invariant(format!(
                        "destabilizer {i} has wrong commutation with stabilizer {j}"
                    )));
                }
            }
        }
        // GF(2) rank of the 2n rows in (x|z) form.
        let mut mat: Vec<Vec<u64>> = (0..2 * n)
            .map(|i| xs(i).iter().chain(zs(i)).copied().collect())
            .collect();
        let mut rank = 0;
        for col in 0..2 * n {
            let (cw, cb) = if col < n {
                (col / 64, col % 64)
            } else {
                (w + (col - n) / 64, (col - n) % 64)
            };
            let Some(p) = (rank..mat.len()).find(|&r| mat[r][cw] >> cb & 1 == 1) else {
                continue;
            };
            mat.swap(rank, p);
            let pivot = mat[rank].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r != rank && row[cw] >> cb & 1 == 1 {
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        if rank != 2 * n {
            return Err(Error::Invariant(format!("rows have GF(2) rank {rank}, expected {}", 2 * n)));
        }
        Ok(())
    }

    /// Text dump: `S<i>: <signed pauli>` then `D<i>: ...`, one row per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let _ = writeln!(out, "S{i}: {}", self.stabilizer(i));
        }
        for i in 0..self.n {
            let _ = writeln!(out, "D{i}: {}", self.destabilizer(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::mock::StepRng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Tableau whose stabilizer row 0 is `row`, for checking single-row conjugation.
    fn with_row(row: &str) -> Tableau {
        let row = p(row);
        let mut t = Tableau::new_identity(row.num_qubits()).unwrap();
        t.set_row(0, &row).unwrap();
        t
    }

    #[test]
    fn identity_layout() {
        let t = Tableau::new_identity(1).unwrap();
        assert_eq!(t.stabilizer(0), p("Z"));
        assert_eq!(t.destabilizer(0), p("X"));
        let t = Tableau::new_identity(3).unwrap();
        assert_eq!(t.stabilizers(), vec![p("ZII"), p("IZI"), p("IIZ")]);
        assert_eq!(t.destabilizers(), vec![p("XII"), p("IXI"), p("IIX")]);
        t.audit().unwrap();
        assert!(Tableau::new_identity(0).is_err());
    }

    #[test]
    fn hadamard_rules() {
        let mut t = with_row("Z");
        t.apply_h(0).unwrap();
        assert_eq!(t.stabilizer(0), p("+X"));
        let mut t = with_row("Y");
        t.apply_h(0).unwrap();
        assert_eq!(t.stabilizer(0), p("-Y"));
        let mut t = Tableau::new_identity(2).unwrap();
        t.apply_cx(0, 1).unwrap();
        let before = t.clone();
        t.apply_h(1).unwrap();
        t.apply_h(1).unwrap();
        assert_eq!(t, before);
        assert!(t.apply_h(2).is_err());
    }

    #[test]
    fn phase_rules() {
        let mut t = with_row("X");
        t.apply_s(0).unwrap();
        assert_eq!(t.stabilizer(0), p("+Y"));
        let mut t = with_row("Y");
        t.apply_s(0).unwrap();
        assert_eq!(t.stabilizer(0), p("-X"));
        let mut t = with_row("Z");
        t.apply_s(0).unwrap();
        assert_eq!(t.stabilizer(0), p("+Z"));
    }

    #[test]
    fn cnot_rules() {
        let mut t = with_row("XI");
        t.apply_cx(0, 1).unwrap();
        assert_eq!(t.stabilizer(0), p("+XX"));
        let mut t = with_row("IZ");
        t.apply_cx(0, 1).unwrap();
        assert_eq!(t.stabilizer(0), p("+ZZ"));
        let mut t = with_row("YY");
        t.apply_cx(0, 1).unwrap();
        assert_eq!(t.stabilizer(0), p("-XZ"));
        let mut t = Tableau::new_identity(2).unwrap();
        assert!(matches!(t.apply_cx(1, 1), Err(Error::InvalidGate(_))));
        assert!(t.apply_cx(0, 2).is_err());
    }

    #[test]
    fn rowsum_examples() {
        let mut t = with_row("ZZ");
        t.set_row(1, &p("ZZ")).unwrap();
        t.rowsum(0, 1).unwrap();
        assert_eq!(t.row(0), p("+II"));
        assert_eq!(t.row(1), p("+ZZ"));

        let mut t = with_row("YY");
        t.set_row(1, &p("XX")).unwrap();
        t.rowsum(0, 1).unwrap();
        assert_eq!(t.row(0), p("-ZZ"));

        let mut t = with_row("-XI");
        t.set_row(1, &p("IZ")).unwrap();
        t.rowsum(0, 1).unwrap();
        assert_eq!(t.row(0), p("-XZ"));

        let mut t = with_row("X");
        t.set_row(1, &p("Z")).unwrap();
        assert!(matches!(t.rowsum(0, 1), Err(Error::Invariant(_))));
        assert!(t.rowsum(0, 0).is_err());
        assert!(t.rowsum(0, 3).is_err());
    }

    #[test]
    fn measure_zero_state() {
        let mut t = Tableau::new_identity(1).unwrap();
        let m = t.measure_z(0, &mut StepRng::new(0, 0)).unwrap();
        assert_eq!(
            m,
            MeasResult {
                outcome: false,
                deterministic: true
            }
        );
        t.audit().unwrap();
    }

    #[test]
    fn measure_plus_state() {
        for seed in 0..8 {
            let mut t = Tableau::new_identity(1).unwrap();
            t.apply_h(0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = t.measure_z(0, &mut rng).unwrap();
            assert!(!m.deterministic);
            assert_eq!(t.stabilizer(0), PauliString::single(1, 0, Pauli::Z).with_sign(m.outcome));
            t.audit().unwrap();
            let again = t.measure_z(0, &mut rng).unwrap();
            assert_eq!(again, MeasResult { outcome: m.outcome, deterministic: true });
        }
    }

    #[test]
    fn bell_correlation() {
        for seed in 0..16 {
            let mut t = Tableau::new_identity(2).unwrap();
            t.apply_h(0).unwrap();
            t.apply_cx(0, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = t.measure_z(0, &mut rng).unwrap();
            let b = t.measure_z(1, &mut rng).unwrap();
            assert!(!a.deterministic && b.deterministic);
            assert_eq!(a.outcome, b.outcome);
            t.audit().unwrap();
        }
    }

    #[test]
    fn derived_gates() {
        let mut t = Tableau::new_identity(1).unwrap();
        t.apply_gate(Gate::X(0)).unwrap();
        assert_eq!(t.stabilizer(0), p("-Z"));

        let mut t = with_row("XI");
        t.set_row(1, &p("IZ")).unwrap();
        t.apply_gate(Gate::Swap(0, 1)).unwrap();
        assert_eq!((t.row(0), t.row(1)), (p("+IX"), p("+ZI")));

        let mut t = Tableau::new_identity(1).unwrap();
        assert!(matches!(t.apply_gate(Gate::T(0)), Err(Error::Unsupported(_))));
        assert!(matches!(t.apply_gate(Gate::Measure(0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gate_then_inverse_restores() {
        let mut t = Tableau::new_identity(3).unwrap();
        for g in [Gate::H(0), Gate::Cx(0, 1), Gate::S(2), Gate::Cx(2, 0)] {
            t.apply_gate(g).unwrap();
        }
        let start = t.clone();
        let gates = [
            Gate::H(1),
            Gate::S(0),
            Gate::Sdg(2),
            Gate::X(1),
            Gate::Y(2),
            Gate::Z(0),
            Gate::Cx(1, 2),
            Gate::Cz(0, 2),
            Gate::Swap(1, 0),
        ];
        for g in gates {
            t.apply_gate(g).unwrap();
            t.audit().unwrap();
        }
        for g in gates.iter().rev() {
            t.apply_gate(g.inverse().unwrap()).unwrap();
        }
        assert_eq!(t, start);
    }

    #[test]
    fn dump_format() {
        let mut t = Tableau::new_identity(2).unwrap();
        t.apply_h(0).unwrap();
        t.apply_cx(0, 1).unwrap();
        assert_eq!(t.dump(), "S0: +XX\nS1: +ZZ\nD0: +ZI\nD1: +IX\n");
    }

    #[test]
    fn storage_bound() {
        for n in [1, 2, 63, 64, 65, 200] {
            let t = Tableau::new_identity(n).unwrap();
            assert!(t.logical_bits() <= 2 * (4 * n * n + n));
        }
        let t = Tableau::new_identity(256).unwrap();
        assert!(t.allocated_bits() <= 2 * (4 * 256 * 256 + 256));
    }
}
