//! Serializable run reports.
//!
//! A report bundles everything a falsification or propagation run consumed
//! — condition, coloring, dimension, seed, budgets — together with what it
//! produced, so that a saved JSON file can be parsed back and replayed to
//! the identical result. Exact scalars travel as `"p/q"` strings and floats
//! as round-trip decimals, so nothing is lost in the round trip.

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::engine::{
    falsify, propagate, Budgets, FiniteConfig, Outcome, Propagation, QCondition, SphereVerdict,
    ViolationCert,
};
use crate::error::EngineError;
use crate::scalar::Mode;

/// The record of one falsification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub condition: QCondition,
    pub coloring: Coloring,
    pub dimension: usize,
    /// Arithmetic mode of the search; sampled spheres are always float.
    pub mode: Mode,
    pub seed: u64,
    pub budgets: Budgets,
    pub verdicts: Vec<SphereVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ViolationCert>,
}

impl Report {
    /// Runs [`falsify`] and records both inputs and outputs.
    pub fn run(
        condition: QCondition,
        coloring: Coloring,
        dimension: usize,
        budgets: Budgets,
        seed: u64,
    ) -> Result<Self, EngineError> {
        let out = falsify(&condition, &coloring, dimension, &budgets, seed)?;
        Ok(Report {
            condition,
            coloring,
            dimension,
            mode: Mode::Float,
            seed,
            budgets,
            verdicts: out.verdicts,
            certificate: out.certificate,
        })
    }

    /// Re-runs the recorded configuration; the result must match this
    /// report verdict for verdict.
    pub fn replay(&self) -> Result<Report, EngineError> {
        Report::run(
            self.condition.clone(),
            self.coloring.clone(),
            self.dimension,
            self.budgets,
            self.seed,
        )
    }

    pub fn violated(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for v in &self.verdicts {
            match v.outcome {
                Outcome::HoldsVacuously => s.vacuous += 1,
                Outcome::HoldsWithWitnesses { .. } => s.with_witnesses += 1,
                Outcome::Violated { .. } => s.violated += 1,
                Outcome::Inconclusive { .. } => s.inconclusive += 1,
            }
        }
        s
    }
}

/// Verdict tallies for quick human consumption.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub vacuous: usize,
    pub with_witnesses: usize,
    pub inconclusive: usize,
    pub violated: usize,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "spheres checked: {} (vacuous {}, witnessed {}, inconclusive {}, violated {})",
            self.vacuous + self.with_witnesses + self.inconclusive + self.violated,
            self.vacuous,
            self.with_witnesses,
            self.inconclusive,
            self.violated,
        )
    }
}

/// The record of one propagation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub condition: QCondition,
    pub config: FiniteConfig,
    pub propagation: Propagation,
}

impl PropagationReport {
    pub fn run(condition: QCondition, config: FiniteConfig) -> Result<Self, EngineError> {
        let propagation = propagate(&config, &condition)?;
        Ok(PropagationReport {
            condition,
            config,
            propagation,
        })
    }

    pub fn contradictory(&self) -> bool {
        self.propagation.contradictory()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::AdmissibleValues;
    use crate::engine::{CenterSet, ColorSpace};
    use crate::point::Point;
    use crate::property::Property;

    fn strip_condition() -> QCondition {
        QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::Regular { m: 2 },
            centers: CenterSet::All,
            radii: AdmissibleValues::interval(0.1, 2.0),
            epsilon: None,
        }
    }

    #[test]
    fn reports_round_trip_through_json() {
        let budgets = Budgets {
            spheres: 8,
            witnesses: 4,
        };
        let report =
            Report::run(strip_condition(), Coloring::Strip { n: 2 }, 2, budgets, 5).unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(!report.violated());
        assert!(json.contains(r#""seed": 5"#));
    }

    #[test]
    fn replay_reproduces_identical_verdicts() {
        let budgets = Budgets {
            spheres: 6,
            witnesses: 4,
        };
        let report =
            Report::run(strip_condition(), Coloring::Strip { n: 2 }, 2, budgets, 77).unwrap();
        let again = report.replay().unwrap();
        assert_eq!(again, report);
    }

    #[test]
    fn summaries_tally_every_verdict() {
        let budgets = Budgets {
            spheres: 10,
            witnesses: 4,
        };
        let report = Report::run(
            strip_condition(),
            Coloring::Constant { color: 0 },
            2,
            budgets,
            9,
        )
        .unwrap();
        let s = report.summary();
        assert_eq!(s.with_witnesses, 10);
        assert_eq!(s.violated, 0);
        assert!(s.to_string().contains("spheres checked: 10"));
    }

    #[test]
    fn propagation_reports_serialize_with_exact_coordinates() {
        let cfg = FiniteConfig::new(vec![
            (Point::ints(&[0, 0]), Some(1)),
            (
                Point::new(vec![
                    crate::scalar::Scalar::ratio(6, 5),
                    crate::scalar::Scalar::int(0),
                ])
                .unwrap(),
                Some(1),
            ),
            (
                Point::new(vec![
                    crate::scalar::Scalar::ratio(3, 5),
                    crate::scalar::Scalar::ratio(4, 5),
                ])
                .unwrap(),
                None,
            ),
        ])
        .unwrap();
        let cond = QCondition {
            colors: ColorSpace::AllIntegers,
            property: Property::Cardinality { y: 2 },
            centers: CenterSet::All,
            radii: AdmissibleValues::finite_ints(&[1]),
            epsilon: None,
        };
        let report = PropagationReport::run(cond, cfg).unwrap();
        assert!(!report.contradictory());
        assert_eq!(report.propagation.colors[2], Some(1));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains(r#""6/5""#));
        let back: PropagationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
