//! Check records and the versioned suite report.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// Number of standard errors allowed by statistical checks.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for one-sided checks, `3σ − |lhs − rhs|` for two-sided ones.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// `lhs ≤ rhs · (1 + rel_slack)`.
    pub fn upper(name: impl Into<String>, lhs: f64, rhs: f64, rel_slack: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            sigma: None,
            pass: lhs <= rhs + rel_slack * rhs.abs(),
        }
    }

    /// `|lhs − rhs| ≤ tol · max(1, |rhs|)`.
    pub fn close(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let allowed = tol * rhs.abs().max(1.0);
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin: allowed - (lhs - rhs).abs(),
            sigma: None,
            pass: (lhs - rhs).abs() <= allowed,
        }
    }

    /// `lhs − rhs ≤ 3σ`, where `σ` is the standard error of the difference.
    pub fn statistical_upper(name: impl Into<String>, lhs: f64, rhs: f64, sigma: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            sigma: Some(sigma),
            pass: lhs - rhs <= SIGMAS * sigma,
        }
    }

    /// `|lhs − rhs| ≤ 3σ`.
    pub fn statistical_equal(name: impl Into<String>, lhs: f64, rhs: f64, sigma: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin: SIGMAS * sigma - (lhs - rhs).abs(),
            sigma: Some(sigma),
            pass: (lhs - rhs).abs() <= SIGMAS * sigma,
        }
    }

    /// A boolean condition with the measured value in `lhs` and the bound in `rhs`.
    pub fn flag(name: impl Into<String>, lhs: f64, rhs: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            sigma: None,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub suite: String,
    pub config: Value,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, config: Value) -> Self {
        Self {
            schema: SCHEMA,
            tool: "bsq",
            version: env!("CARGO_PKG_VERSION"),
            suite: suite.into(),
            config,
            pass: true,
            checks: Vec::new(),
            details: Value::Null,
            wall_time_seconds: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check: `suite,name,lhs,rhs,margin,sigma,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,lhs,rhs,margin,sigma,pass\n");
        for c in &self.checks {
            let sigma = c.sigma.map(|s| format!("{s:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{:.16e},{},{}\n",
                self.suite, c.name, c.lhs, c.rhs, c.margin, sigma, c.pass
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_pass_is_conjunction() {
        let mut r = SuiteReport::new("demo", serde_json::json!({"seed": 1}));
        r.push(Check::upper("a", 1.0, 2.0, 0.0));
        assert!(r.pass);
        r.push(Check::statistical_equal("b", 1.0, 2.0, 0.1));
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["config"]["seed"], 1);
        assert_eq!(r.to_csv().lines().count(), 3);
    }

    #[test]
    fn statistical_checks_use_three_sigma() {
        assert!(Check::statistical_upper("x", 1.29, 1.0, 0.1).pass);
        assert!(!Check::statistical_upper("x", 1.31, 1.0, 0.1).pass);
        assert!(Check::statistical_equal("x", 0.71, 1.0, 0.1).pass);
    }
}
