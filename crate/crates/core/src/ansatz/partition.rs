use std::fmt;

use crate::error::{Error, Result};

/// Ordered disjoint grouping of qubits `0..n_qubits` into parties.
///
/// Text form: parties separated by `|`, indices by `,`; `global` expands to
/// all singletons. `0,1,4,5|2,3,6,7` is two four-qubit parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parties: Vec<Vec<usize>>,
    n_qubits: usize,
}

impl Partition {
    pub fn new(parties: Vec<Vec<usize>>, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Partition(
                "partition needs at least one qubit".into(),
            ));
        }
        let mut seen = vec![false; n_qubits];
        for party in &parties {
            if party.is_empty() {
                return Err(Error::Partition("empty party".into()));
            }
            for &q in party {
                if q >= n_qubits {
                    return Err(Error::Partition(format!(
                        "qubit {q} out of range for {n_qubits} qubits"
                    )));
                }
                if std::mem::replace(&mut seen[q], true) {
                    return Err(Error::Partition(format!("qubit {q} appears twice")));
                }
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("qubit {q} is not in any party")));
        }
        Ok(Partition { parties, n_qubits })
    }

    /// All singletons.
    pub fn global(n_qubits: usize) -> Result<Self> {
        Self::new((0..n_qubits).map(|q| vec![q]).collect(), n_qubits)
    }

    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("global") {
            return Self::global(n_qubits);
        }
        let mut parties = Vec::new();
        for chunk in text.split('|') {
            let mut party = Vec::new();
            for tok in chunk.split(',') {
                let tok = tok.trim();
                let q = tok
                    .parse::<usize>()
                    .map_err(|_| Error::Partition(format!("bad qubit index `{tok}`")))?;
                party.push(q);
            }
            parties.push(party);
        }
        Self::new(parties, n_qubits)
    }

    pub fn parties(&self) -> &[Vec<usize>] {
        &self.parties
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    /// Intra-party chain bonds, `Σ (m_i - 1)`.
    pub fn bond_count(&self) -> usize {
        self.parties.iter().map(|p| p.len() - 1).sum()
    }

    pub fn is_global(&self) -> bool {
        self.parties.iter().all(|p| p.len() == 1)
    }

    /// Party qubit lists concatenated.
    pub fn qubit_order(&self) -> Vec<usize> {
        self.parties.iter().flatten().copied().collect()
    }

    /// Merges party `j` into party `i` by appending its qubit list; the merged
    /// chain keeps both internal orders and joins them with one new bond.
    pub fn merge(&self, i: usize, j: usize) -> Result<Self> {
        let m = self.parties.len();
        if i >= m || j >= m || i == j {
            return Err(Error::InvalidArgument(format!(
                "cannot merge parties {i} and {j} of {m}"
            )));
        }
        let mut parties = self.parties.clone();
        let moved = parties[j].clone();
        parties[i].extend(moved);
        parties.remove(j);
        Self::new(parties, self.n_qubits)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, party) in self.parties.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (i, q) in party.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{q}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = Partition::parse("0,1|2,3", 4).unwrap();
        assert_eq!(p.parties(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(p.bond_count(), 2);
        let g = Partition::parse("global", 3).unwrap();
        assert_eq!(g.parties(), &[vec![0], vec![1], vec![2]]);
        assert!(g.is_global());
        let err = Partition::parse("0,1|1,2", 3).unwrap_err().to_string();
        assert!(err.contains("qubit 1 appears twice"), "{err}");
    }

    #[test]
    fn parse_errors_name_the_index() {
        let err = Partition::parse("0|2", 3).unwrap_err().to_string();
        assert!(err.contains("qubit 1"), "{err}");
        let err = Partition::parse("0,1|2,7", 4).unwrap_err().to_string();
        assert!(err.contains("qubit 7"), "{err}");
        assert!(Partition::parse("0,,1", 2).is_err());
        assert!(Partition::parse("0|x", 2).is_err());
    }

    #[test]
    fn display_round_trips() {
        let p = Partition::parse(" 0,1,4,5 | 2,3,6,7 ", 8).unwrap();
        assert_eq!(p.to_string(), "0,1,4,5|2,3,6,7");
        assert_eq!(Partition::parse(&p.to_string(), 8).unwrap(), p);
    }

    #[test]
    fn merge_appends_chain() {
        let p = Partition::parse("0|2,1|3", 4).unwrap();
        let m = p.merge(0, 1).unwrap();
        assert_eq!(m.parties(), &[vec![0, 2, 1], vec![3]]);
        assert!(p.merge(1, 1).is_err());
    }
}
