use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use synth_audit::MetricId;

use crate::generate::random_instance;
use crate::reference::reference_score;

/// Largest accepted absolute difference between the two implementations.
pub const TOLERANCE: f64 = 1e-9;

/// Metrics with a brute-force reference.
pub const COMPARED: [MetricId; 15] = [
    MetricId::Zcap,
    MetricId::Gcap,
    MetricId::Air,
    MetricId::Crp,
    MetricId::Cvp,
    MetricId::Dvp,
    MetricId::Auth,
    MetricId::Identifiability,
    MetricId::Nsnd,
    MetricId::Nndr,
    MetricId::Dcr,
    MetricId::Mdcr,
    MetricId::Nnaa,
    MetricId::HiddenRate,
    MetricId::HittingRate,
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricStat {
    /// Trials where both sides produced a score.
    pub compared: usize,
    /// Trials where the reference declares the metric out of scope.
    pub skipped: usize,
    /// One side scored while the other failed.
    pub disagreements: usize,
    pub max_deviation: f64,
    /// Trial index of the largest deviation.
    pub worst_trial: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub trials: usize,
    pub max_n: usize,
    pub seed: u64,
    pub metrics: BTreeMap<MetricId, MetricStat>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.metrics
            .values()
            .all(|s| s.disagreements == 0 && s.max_deviation <= TOLERANCE)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "oracle: {} trials, max n {}, seed {}",
            self.trials, self.max_n, self.seed
        )?;
        for (id, s) in &self.metrics {
            let ok = s.disagreements == 0 && s.max_deviation <= TOLERANCE;
            writeln!(
                f,
                "{:<16} {} compared={:<4} skipped={:<4} disagreements={} max_dev={:.3e}",
                id.as_str(),
                if ok { "PASS" } else { "FAIL" },
                s.compared,
                s.skipped,
                s.disagreements,
                s.max_deviation
            )?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Scores `trials` random instances with both implementations.
pub fn run(trials: usize, max_n: usize, seed: u64) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut metrics: BTreeMap<MetricId, MetricStat> =
        COMPARED.iter().map(|&id| (id, MetricStat::default())).collect();
    for t in 0..trials {
        let inst = random_instance(&mut rng, max_n);
        for id in COMPARED {
            let stat = metrics.get_mut(&id).expect("registered");
            let expected = reference_score(id, &inst.y, &inst.z, &inst.config);
            let actual = id.compute(&inst.y, &inst.z, &inst.config);
            match (expected, actual) {
                (Some(e), Ok(a)) => {
                    stat.compared += 1;
                    let d = (e - a.normalized_score).abs();
                    if !(d <= stat.max_deviation) {
                        stat.max_deviation = d;
                        stat.worst_trial = Some(t);
                    }
                }
                (None, Err(_)) => stat.skipped += 1,
                (None, Ok(_)) if id == MetricId::Nnaa => stat.skipped += 1,
                _ => stat.disagreements += 1,
            }
        }
    }
    OracleReport {
        trials,
        max_n,
        seed,
        metrics,
    }
}
