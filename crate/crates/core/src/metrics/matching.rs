//! Guess sets `G ⊆ Y × Z` and their adjudicated subsets `C ⊆ G`.

use std::collections::HashMap;

use crate::dataset::{Dataset, Record};
use crate::geometry::{hamming_unchecked, minimizers_by, nearest_all, EncodedMatrix, GeometryError, Kernel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    PairGuess,
    PairCorrect,
    /// Pair plus a companion neighbour, e.g. a real record's nearest other real record.
    TripleRealSynth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub real: usize,
    pub synth: usize,
    pub distance: f64,
    /// Index and distance of the third member of a triple.
    pub companion: Option<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchSet {
    pub kind: MatchKind,
    pub real_rows: usize,
    /// Sorted by (real, synth).
    pub entries: Vec<Match>,
}

impl MatchSet {
    fn new(kind: MatchKind, real_rows: usize, mut entries: Vec<Match>) -> Self {
        entries.sort_by_key(|m| (m.real, m.synth));
        MatchSet {
            kind,
            real_rows,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of matches per real row.
    pub fn counts_per_real(&self) -> Vec<usize> {
        let mut counts = vec![0; self.real_rows];
        for m in &self.entries {
            counts[m.real] += 1;
        }
        counts
    }

    pub fn is_subset_of(&self, other: &MatchSet) -> bool {
        self.entries.iter().all(|m| {
            other
                .entries
                .binary_search_by_key(&(m.real, m.synth), |o| (o.real, o.synth))
                .is_ok()
        })
    }
}

/// Exact key matches.
pub fn zcap_guesses(y: &Dataset, z: &Dataset, keys: &[usize]) -> MatchSet {
    let mut by_key: HashMap<Record, Vec<usize>> = HashMap::new();
    for (j, r) in z.records().iter().enumerate() {
        by_key.entry(r.project(keys)).or_default().push(j);
    }
    let mut entries = Vec::new();
    for (i, r) in y.records().iter().enumerate() {
        if let Some(js) = by_key.get(&r.project(keys)) {
            entries.extend(js.iter().map(|&j| Match {
                real: i,
                synth: j,
                distance: 0.0,
                companion: None,
            }));
        }
    }
    MatchSet::new(MatchKind::PairGuess, y.len(), entries)
}

/// Every synthetic record at minimal Hamming distance on the keys.
pub fn gcap_guesses(y: &Dataset, z: &Dataset, keys: &[usize]) -> MatchSet {
    let zk: Vec<Record> = z.records().iter().map(|r| r.project(keys)).collect();
    let mut entries = Vec::new();
    for (i, r) in y.records().iter().enumerate() {
        let yk = r.project(keys);
        if let Some((set, d)) = minimizers_by(0..zk.len(), |j| hamming_unchecked(&yk, &zk[j])) {
            entries.extend(set.into_iter().map(|j| Match {
                real: i,
                synth: j,
                distance: d as f64,
                companion: None,
            }));
        }
    }
    MatchSet::new(MatchKind::PairGuess, y.len(), entries)
}

/// Single Euclidean nearest neighbour on encoded keys.
pub fn air_guesses<T: Scalar>(
    y_keys: &EncodedMatrix<T>,
    z_keys: &EncodedMatrix<T>,
) -> Result<MatchSet, GeometryError> {
    let nn = nearest_all(y_keys, z_keys, false, Kernel::Euclidean)?;
    let entries = nn
        .into_iter()
        .enumerate()
        .map(|(i, n)| Match {
            real: i,
            synth: n.index,
            distance: n.distance.as_f64(),
            companion: None,
        })
        .collect();
    Ok(MatchSet::new(MatchKind::PairGuess, y_keys.rows(), entries))
}

/// Keeps the guesses whose records satisfy `correct`.
pub fn adjudicate<F>(guesses: &MatchSet, y: &Dataset, z: &Dataset, correct: F) -> MatchSet
where
    F: Fn(&Record, &Record) -> bool,
{
    let entries = guesses
        .entries
        .iter()
        .filter(|m| correct(y.record(m.real), z.record(m.synth)))
        .copied()
        .collect();
    MatchSet::new(MatchKind::PairCorrect, guesses.real_rows, entries)
}

/// Each real row with its nearest synthetic row.
pub fn cvp_matches<T: Scalar>(y: &EncodedMatrix<T>, z: &EncodedMatrix<T>) -> Result<MatchSet, GeometryError> {
    let nn = nearest_all(y, z, false, Kernel::Euclidean)?;
    let entries = nn
        .into_iter()
        .enumerate()
        .map(|(i, n)| Match {
            real: i,
            synth: n.index,
            distance: n.distance.as_f64(),
            companion: None,
        })
        .collect();
    Ok(MatchSet::new(MatchKind::PairCorrect, y.rows(), entries))
}

/// Each real row with its nearest synthetic row and, as companion, its
/// nearest other real row.
pub(crate) fn auth_triples<T: Scalar>(y: &EncodedMatrix<T>, z: &EncodedMatrix<T>) -> Result<MatchSet, GeometryError> {
    let syn = nearest_all(y, z, false, Kernel::Euclidean)?;
    let real = nearest_all(y, y, true, Kernel::Euclidean)?;
    let entries = syn
        .into_iter()
        .zip(real)
        .enumerate()
        .map(|(i, (s, r))| Match {
            real: i,
            synth: s.index,
            distance: s.distance.as_f64(),
            companion: Some((r.index, r.distance.as_f64())),
        })
        .collect();
    Ok(MatchSet::new(MatchKind::TripleRealSynth, y.rows(), entries))
}
