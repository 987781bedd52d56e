//! Greedy grouping of weighted Pauli terms into simultaneously measurable sets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupingMode {
    /// Qubit-wise commutation.
    Qwc,
    /// Full (group-wise) commutation.
    Gc,
}

impl GroupingMode {
    pub fn compatible(self, a: &PauliString, b: &PauliString) -> bool {
        match self {
            GroupingMode::Qwc => a.qubitwise_commutes(b).expect("uniform lengths"),
            GroupingMode::Gc => a.commutes(b).expect("uniform lengths"),
        }
    }
}

impl FromStr for GroupingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qwc" => Ok(GroupingMode::Qwc),
            "gc" => Ok(GroupingMode::Gc),
            _ => Err(Error::Input(format!("unknown grouping mode `{s}` (expected qwc or gc)"))),
        }
    }
}

impl fmt::Display for GroupingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupingMode::Qwc => "qwc",
            GroupingMode::Gc => "gc",
        })
    }
}

/// A Hamiltonian term. The Pauli string always has a `+` sign; any sign is
/// folded into the coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauli {
    pub coeff: f64,
    pub pauli: PauliString,
}

impl WeightedPauli {
    pub fn new(coeff: f64, pauli: PauliString) -> Self {
        let coeff = if pauli.sign() { -coeff } else { coeff };
        Self {
            coeff,
            pauli: pauli.with_sign(false),
        }
    }

    pub fn weight(&self) -> f64 {
        self.coeff.abs()
    }
}

/// Parses `<coeff> <pauli>` lines; `#` starts a comment. Repeated strings are
/// merged and terms whose coefficients cancel are dropped.
pub fn parse_hamiltonian(text: &str) -> Result<Vec<WeightedPauli>> {
    let mut terms: Vec<WeightedPauli> = Vec::new();
    let mut scale: Vec<f64> = Vec::new();
    let mut index: HashMap<PauliString, usize> = HashMap::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let mut parts = body.split_whitespace();
        let (Some(c), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `<coeff> <pauli>`, got `{body}`")));
        };
        let coeff: f64 = c
            .parse()
            .map_err(|_| err(format!("invalid coefficient `{c}`")))?;
        if !coeff.is_finite() {
            return Err(err(format!("non-finite coefficient `{c}`")));
        }
        let pauli: PauliString = p.parse().map_err(|e: Error| err(e.to_string()))?;
        match width {
            None => width = Some(pauli.num_qubits()),
            Some(w) if w != pauli.num_qubits() => {
                return Err(err(format!(
                    "Pauli `{p}` has {} qubits, earlier terms have {w}",
                    pauli.num_qubits()
                )))
            }
            _ => {}
        }
        let term = WeightedPauli::new(coeff, pauli);
        match index.get(&term.pauli) {
            Some(&i) => {
                terms[i].coeff += term.coeff;
                scale[i] = scale[i].max(term.coeff.abs());
            }
            None => {
                index.insert(term.pauli.clone(), terms.len());
                scale.push(term.coeff.abs());
                terms.push(term);
            }
        }
    }
    Ok(terms
        .into_iter()
        .zip(scale)
        .filter(|(t, s)| t.coeff.abs() > 1e-12 * s)
        .map(|(t, _)| t)
        .collect())
}

/// Terms partitioned into groups whose members pairwise satisfy the mode's
/// commutation predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedHamiltonian {
    pub mode: GroupingMode,
    pub groups: Vec<Vec<WeightedPauli>>,
}

fn heaviest_first(a: &(usize, &WeightedPauli), b: &(usize, &WeightedPauli)) -> Ordering {
    b.1.weight()
        .total_cmp(&a.1.weight())
        .then_with(|| a.1.pauli.to_string().cmp(&b.1.pauli.to_string()))
        .then_with(|| a.0.cmp(&b.0))
}

/// First-fit greedy grouping in order of decreasing `|coeff|`.
///
/// Ties are broken by the Pauli text, then input order.
pub fn group_greedy(terms: &[WeightedPauli], mode: GroupingMode) -> Result<GroupedHamiltonian> {
    let Some(first) = terms.first() else {
        return Err(Error::Input("cannot group an empty term list".into()));
    };
    let n = first.pauli.num_qubits();
    if let Some(bad) = terms.iter().find(|t| t.pauli.num_qubits() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.pauli.num_qubits(),
        });
    }
    let mut order: Vec<(usize, &WeightedPauli)> = terms.iter().enumerate().collect();
    order.sort_by(heaviest_first);

    let mut groups: Vec<Vec<WeightedPauli>> = Vec::new();
    for (_, term) in order {
        match groups
            .iter_mut()
            .find(|g| g.iter().all(|m| mode.compatible(&m.pauli, &term.pauli)))
        {
            Some(g) => g.push(term.clone()),
            None => groups.push(vec![term.clone()]),
        }
    }
    Ok(GroupedHamiltonian { mode, groups })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupingViolation {
    pub group: usize,
    pub first: usize,
    pub second: usize,
}

/// Every intra-group pair that fails the mode's predicate.
pub fn verify_grouping(g: &GroupedHamiltonian) -> Vec<GroupingViolation> {
    let mut out = Vec::new();
    for (k, group) in g.groups.iter().enumerate() {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let (a, b) = (&group[i].pauli, &group[j].pauli);
                let ok = a.num_qubits() == b.num_qubits() && g.mode.compatible(a, b);
                if !ok {
                    out.push(GroupingViolation {
                        group: k,
                        first: i,
                        second: j,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupStats {
    pub mode: GroupingMode,
    pub terms: usize,
    pub groups: usize,
    pub largest_group: usize,
    /// Sum over groups of the largest `|coeff|` in the group.
    pub max_weight_sum: f64,
    /// QWC only: single-qubit basis changes needed, one per X or Y column of
    /// each group's representative.
    pub basis_rotations: Option<usize>,
}

/// The single-qubit Pauli each column of a QWC group is measured in.
pub fn qwc_representative(group: &[WeightedPauli]) -> Option<PauliString> {
    let n = group.first()?.pauli.num_qubits();
    let mut rep = PauliString::identity(n);
    for t in group {
        for (q, p) in t.pauli.paulis().enumerate() {
            if p != Pauli::I {
                rep.set(q, p);
            }
        }
    }
    Some(rep)
}

pub fn group_stats(g: &GroupedHamiltonian) -> GroupStats {
    let basis_rotations = (g.mode == GroupingMode::Qwc).then(|| {
        g.groups
            .iter()
            .filter_map(|grp| qwc_representative(grp))
            .map(|rep| rep.paulis().filter(|p| matches!(p, Pauli::X | Pauli::Y)).count())
            .sum()
    });
    GroupStats {
        mode: g.mode,
        terms: g.groups.iter().map(Vec::len).sum(),
        groups: g.groups.len(),
        largest_group: g.groups.iter().map(Vec::len).max().unwrap_or(0),
        max_weight_sum: g
            .groups
            .iter()
            .map(|grp| grp.iter().map(WeightedPauli::weight).fold(0.0, f64::max))
            .sum(),
        basis_rotations,
    }
}

/// `GROUP k` headers followed by `<coeff> <pauli>` member lines.
pub fn emit_groups(g: &GroupedHamiltonian) -> String {
    let mut out = String::new();
    for (k, group) in g.groups.iter().enumerate() {
        let _ = writeln!(out, "GROUP {k}");
        for t in group {
            let _ = writeln!(out, "{} {}", t.coeff, t.pauli);
        }
    }
    out
}
