//! Dense statevector reference simulator.
//!
//! Basis index bit `q` holds qubit `q`. Rotations follow the convention
//! `R(P, θ) = exp(-iθP) = cos θ·I - i sin θ·P`, with `P` carrying its sign.
//! Global phases are never compared; every cross-check uses probabilities or
//! expectation values.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Largest register the oracle accepts.
pub const MAX_QUBITS: usize = 12;

const PRUNE: f64 = 1e-14;

/// Outcome distribution keyed by a bit pattern: bit `i` is outcome `i`.
pub type Distribution = BTreeMap<u64, f64>;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// `|0…0⟩` on `n ≤ 12` qubits.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidSize(format!(
                "oracle supports 1..={MAX_QUBITS} qubits, got {n}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        Ok(())
    }

    fn check_pauli(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        Ok(())
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn phase(&mut self, q: usize, ph: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= ph;
            }
        }
    }

    /// Applies a unitary gate. Measurements are rejected; use
    /// [`DenseState::project_z`].
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = FRAC_1_SQRT_2;
        match gate {
            Gate::H(q) => self.apply_1q(q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
            Gate::S(q) => self.phase(q, c(0.0, 1.0)),
            Gate::Sdg(q) => self.phase(q, c(0.0, -1.0)),
            Gate::Z(q) => self.phase(q, c(-1.0, 0.0)),
            Gate::T(q) => self.phase(q, c(h, h)),
            Gate::Tdg(q) => self.phase(q, c(h, -h)),
            Gate::X(q) => self.apply_1q(q, [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Y(q) => self.apply_1q(q, [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
            Gate::Cx(ctl, t) => {
                let (bc, bt) = (1usize << ctl, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & bc != 0 && i & bt == 0 {
                        self.amps.swap(i, i | bt);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amps.swap(i, (i & !ba) | bb);
                    }
                }
            }
            Gate::Measure(_) => return Err(Error::Unsupported("m in DenseState::apply".into())),
        }
        Ok(())
    }

    /// `P|ψ⟩` for a signed Pauli string.
    pub fn pauli_image(&self, p: &PauliString) -> Result<Vec<Complex64>> {
        self.check_pauli(p)?;
        let xm = p.x_words().first().copied().unwrap_or(0) as usize;
        let zm = p.z_words().first().copied().unwrap_or(0) as usize;
        // Y = iXZ, so the string is i^{|x∧z|} X^x Z^z.
        let mut base = match (xm & zm).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if p.sign() {
            base = -base;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let s = if (b & zm).count_ones() % 2 == 1 { -base } else { base };
            out[b ^ xm] = s * a;
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩`, which is real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        let img = self.pauli_image(p)?;
        Ok(self
            .amps
            .iter()
            .zip(&img)
            .map(|(a, b)| (a.conj() * b).re)
            .sum())
    }

    /// `|ψ⟩ ← exp(-i·angle·P)|ψ⟩`.
    pub fn pauli_rotation(&mut self, p: &PauliString, angle: f64) -> Result<()> {
        let img = self.pauli_image(p)?;
        let (c, s) = (angle.cos(), angle.sin());
        let minus_i_sin = Complex64::new(0.0, -s);
        for (a, pa) in self.amps.iter_mut().zip(img) {
            *a = *a * c + minus_i_sin * pa;
        }
        Ok(())
    }

    /// Projects onto the `(-1)^outcome` eigenspace of `P` and renormalizes.
    /// Returns the probability of that outcome; the state is left unchanged
    /// when it is (numerically) zero.
    pub fn project_pauli(&mut self, p: &PauliString, outcome: bool) -> Result<f64> {
        let img = self.pauli_image(p)?;
        let sign = if outcome { -1.0 } else { 1.0 };
        let projected: Vec<Complex64> = self
            .amps
            .iter()
            .zip(img)
            .map(|(a, pa)| (a + pa * sign) * 0.5)
            .collect();
        let prob: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if prob > PRUNE {
            let scale = 1.0 / prob.sqrt();
            self.amps = projected.into_iter().map(|a| a * scale).collect();
        }
        Ok(prob)
    }

    /// Probability that measuring qubit `q` in Z yields `outcome`.
    pub fn prob_z(&self, q: usize, outcome: bool) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Z-basis projection of qubit `q`; returns the outcome's probability.
    pub fn project_z(&mut self, q: usize, outcome: bool) -> Result<f64> {
        let prob = self.prob_z(q, outcome)?;
        if prob > PRUNE {
            let bit = 1usize << q;
            let scale = 1.0 / prob.sqrt();
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a = if (i & bit != 0) == outcome {
                    *a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        Ok(prob)
    }

    /// Computational-basis distribution; bit `q` of the key is qubit `q`.
    pub fn z_distribution(&self) -> Distribution {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| (i as u64, a.norm_sqr()))
            .filter(|&(_, p)| p > PRUNE)
            .collect()
    }

    /// Exact joint distribution of commuting Pauli observables; bit `i` of
    /// the key is `1` when row `i` reads eigenvalue `-1`.
    pub fn measure_pauli_distribution(&self, rows: &[PauliString]) -> Result<Distribution> {
        for (i, a) in rows.iter().enumerate() {
            self.check_pauli(a)?;
            for b in &rows[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::Input(format!("observables {a} and {b} do not commute")));
                }
            }
        }
        let mut out = Distribution::new();
        self.branch(rows, 0, 0, 1.0, &mut out)?;
        Ok(out)
    }

    fn branch(&self, rows: &[PauliString], depth: usize, key: u64, weight: f64, out: &mut Distribution) -> Result<()> {
        let Some(p) = rows.get(depth) else {
            *out.entry(key).or_default() += weight;
            return Ok(());
        };
        for outcome in [false, true] {
            let mut next = self.clone();
            let prob = next.project_pauli(p, outcome)?;
            if prob * weight > PRUNE {
                let key = key | (u64::from(outcome) << depth);
                next.branch(rows, depth + 1, key, weight * prob, out)?;
            }
        }
        Ok(())
    }
}

/// Exact distribution of the measurement record of `c` started from
/// `|0…0⟩`, keyed by the outcome bitstring in measurement order.
pub fn record_distribution(c: &Circuit) -> Result<BTreeMap<String, f64>> {
    fn walk(
        c: &Circuit,
        from: usize,
        mut state: DenseState,
        prefix: String,
        weight: f64,
        out: &mut BTreeMap<String, f64>,
    ) -> Result<()> {
        for (i, &g) in c.gates().iter().enumerate().skip(from) {
            if let Gate::Measure(q) = g {
                for outcome in [false, true] {
                    let mut next = state.clone();
                    let prob = next.project_z(q, outcome)?;
                    if prob * weight > PRUNE {
                        let mut key = prefix.clone();
                        key.push(if outcome { '1' } else { '0' });
                        walk(c, i + 1, next, key, weight * prob, out)?;
                    }
                }
                return Ok(());
            }
            state.apply(g)?;
        }
        *out.entry(prefix).or_default() += weight;
        Ok(())
    }
    let mut out = BTreeMap::new();
    walk(c, 0, DenseState::new(c.num_qubits())?, String::new(), 1.0, &mut out)?;
    Ok(out)
}

/// Total-variation distance between two distributions.
pub fn tv_distance<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = DenseState::new(1).unwrap();
        s.apply(Gate::H(0)).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], h) && close(s.amplitudes()[1], h));
    }

    #[test]
    fn t_on_one() {
        let mut s = DenseState::new(1).unwrap();
        s.apply(Gate::X(0)).unwrap();
        s.apply(Gate::T(0)).unwrap();
        assert!(close(s.amplitudes()[1], Complex64::from_polar(1.0, PI / 4.0)));
    }

    #[test]
    fn norm_preserved() {
        let mut s = DenseState::new(4).unwrap();
        let gates = [
            Gate::H(0),
            Gate::T(1),
            Gate::Cx(0, 2),
            Gate::S(3),
            Gate::Y(2),
            Gate::Swap(1, 3),
            Gate::Cz(0, 1),
            Gate::H(1),
            Gate::Tdg(2),
            Gate::Sdg(0),
        ];
        for k in 0..1000 {
            s.apply(gates[k % gates.len()]).unwrap();
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        assert!(DenseState::new(13).is_err());
        assert!(s.apply(Gate::H(4)).is_err());
    }

    #[test]
    fn rotations() {
        let mut s = DenseState::new(1).unwrap();
        s.apply(Gate::X(0)).unwrap();
        let before = s.amplitudes().to_vec();
        s.pauli_rotation(&p("Z"), 0.0).unwrap();
        assert_eq!(s.amplitudes(), &before[..]);
        // exp(-iπ/8 Z)|1⟩ = e^{iπ/8}|1⟩
        s.pauli_rotation(&p("Z"), PI / 8.0).unwrap();
        assert!(close(s.amplitudes()[1], Complex64::from_polar(1.0, PI / 8.0)));

        let mut a = DenseState::new(2).unwrap();
        a.apply(Gate::H(0)).unwrap();
        let mut b = a.clone();
        a.pauli_rotation(&p("YZ"), PI / 8.0).unwrap();
        a.pauli_rotation(&p("YZ"), PI / 8.0).unwrap();
        b.pauli_rotation(&p("YZ"), PI / 4.0).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn pauli_distributions() {
        let zero = DenseState::new(1).unwrap();
        let d = zero.measure_pauli_distribution(&[p("Z")]).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[&0] - 1.0).abs() < 1e-12);

        let mut bell = DenseState::new(2).unwrap();
        bell.apply(Gate::H(0)).unwrap();
        bell.apply(Gate::Cx(0, 1)).unwrap();
        let d = bell.measure_pauli_distribution(&[p("ZI"), p("IZ")]).unwrap();
        assert!((d[&0b00] - 0.5).abs() < 1e-12 && (d[&0b11] - 0.5).abs() < 1e-12);
        assert_eq!(d.len(), 2);
        let d = bell.measure_pauli_distribution(&[p("XX"), p("ZZ")]).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[&0] - 1.0).abs() < 1e-12);
        assert!(bell.measure_pauli_distribution(&[p("XI"), p("ZI")]).is_err());
    }

    #[test]
    fn z_distributions() {
        let s = DenseState::new(3).unwrap();
        assert_eq!(s.z_distribution().len(), 1);
        let mut u = DenseState::new(3).unwrap();
        for q in 0..3 {
            u.apply(Gate::H(q)).unwrap();
        }
        let d = u.z_distribution();
        assert_eq!(d.len(), 8);
        assert!(d.values().all(|&v| (v - 0.125).abs() < 1e-12));
        let mut g = DenseState::new(3).unwrap();
        g.apply(Gate::H(0)).unwrap();
        g.apply(Gate::Cx(0, 1)).unwrap();
        g.apply(Gate::Cx(1, 2)).unwrap();
        let d = g.z_distribution();
        assert!((d[&0] - 0.5).abs() < 1e-12 && (d[&7] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cx_conjugates_yy_to_minus_xz() {
        // Check CX·(Y⊗Y)·CX = -X⊗Z on every basis state.
        for b in 0..4 {
            let mut lhs = DenseState::new(2).unwrap();
            lhs.amps = vec![Complex64::new(0.0, 0.0); 4];
            lhs.amps[b] = Complex64::new(1.0, 0.0);
            let mut rhs = lhs.clone();
            lhs.apply(Gate::Cx(0, 1)).unwrap();
            lhs.amps = lhs.pauli_image(&p("YY")).unwrap();
            lhs.apply(Gate::Cx(0, 1)).unwrap();
            rhs.amps = rhs.pauli_image(&p("-XZ")).unwrap();
            for (x, y) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
                assert!(close(*x, *y));
            }
        }
    }

    #[test]
    fn record_distribution_bell() {
        let c = crate::circuit::parse_native("qubits 2\nh 0\ncx 0 1\nm 0\nm 1").unwrap();
        let d = record_distribution(&c).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d["00"] - 0.5).abs() < 1e-12 && (d["11"] - 0.5).abs() < 1e-12);
    }
}
