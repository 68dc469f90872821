use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Vacuous,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Vacuous => "vacuous",
        })
    }
}

/// One input artifact behind a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub domain: String,
    #[serde(rename = "B")]
    pub field: Option<f64>,
    pub resolution: Option<usize>,
    pub method: String,
}

impl Provenance {
    pub fn new(
        domain: impl Into<String>,
        field: Option<f64>,
        resolution: Option<usize>,
        method: impl Into<String>,
    ) -> Self {
        Self {
            domain: domain.into(),
            field,
            resolution,
            method: method.into(),
        }
    }

    pub fn analytic(method: impl Into<String>) -> Self {
        Self::new("none", None, None, method)
    }
}

/// A checked inequality `lhs ≥ rhs`.
///
/// `margin = lhs − rhs`; the status is `pass` exactly when
/// `margin ≥ −tolerance`, unless the check was flagged vacuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// The inequality being checked, in words.
    pub reference: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    pub provenance: Vec<Provenance>,
    /// Auxiliary quantities (fitted constants, intermediate values).
    pub extras: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        reference: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        provenance: Vec<Provenance>,
    ) -> Self {
        assert!(
            !provenance.is_empty(),
            "a report needs at least one provenance entry"
        );
        let margin = lhs - rhs;
        let status = if margin >= -tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.into(),
            reference: reference.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            status,
            provenance,
            extras: BTreeMap::new(),
        }
    }

    /// Marks the check as carrying no information at this resolution.
    pub fn into_vacuous(mut self) -> Self {
        self.status = CheckStatus::Vacuous;
        self
    }

    pub fn with_extra(mut self, key: impl Into<String>, value: f64) -> Self {
        self.extras.insert(key.into(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    /// Re-derives the status from the stored numbers.
    pub fn recomputed_status(&self) -> CheckStatus {
        if self.status == CheckStatus::Vacuous {
            CheckStatus::Vacuous
        } else if self.lhs - self.rhs >= -self.tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_margin_and_tolerance() {
        let p = vec![Provenance::analytic("test")];
        assert_eq!(
            BoundReport::new("a", "", 1.0, 0.5, 0.0, p.clone()).status,
            CheckStatus::Pass
        );
        assert_eq!(
            BoundReport::new("b", "", 1.0, 1.05, 0.1, p.clone()).status,
            CheckStatus::Pass
        );
        assert_eq!(
            BoundReport::new("c", "", 1.0, 1.2, 0.1, p.clone()).status,
            CheckStatus::Fail
        );
        let v = BoundReport::new("d", "", 0.0, 1.0, 0.0, p).into_vacuous();
        assert!(v.passed());
        assert_eq!(v.recomputed_status(), CheckStatus::Vacuous);
    }

    #[test]
    fn json_round_trip() {
        let r = BoundReport::new(
            "x",
            "y",
            2.0,
            1.0,
            0.0,
            vec![Provenance::new("disk", Some(10.0), Some(256), "fd")],
        )
        .with_extra("k", 3.0);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"B\":10.0"));
        assert_eq!(serde_json::from_str::<BoundReport>(&s).unwrap(), r);
    }
}
