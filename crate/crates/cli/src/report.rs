//! Machine-readable report records. All exact integers travel as decimal
//! strings; floats are printed to 10 significant digits with method tags.

use serde::{Deserialize, Serialize};

use dyndeg::profile::{DegreeProfile, DegreeValue};

/// 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (9 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ValueOut {
    /// Decimal integer string for exact values, 10-significant-digit float
    /// otherwise.
    pub value: String,
    /// `exact-integer`, `eigenvalue-exact` or `sequence-estimate`.
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl ValueOut {
    pub fn from_degree(v: &DegreeValue, eigen: bool) -> Self {
        match v {
            DegreeValue::ExactInt(i) => ValueOut {
                value: i.to_string(),
                method: "exact-integer".into(),
                tol: None,
            },
            DegreeValue::Algebraic(x) => ValueOut {
                value: sig10(*x),
                method: if eigen {
                    "eigenvalue-exact".into()
                } else {
                    "algebraic".into()
                },
                tol: None,
            },
            DegreeValue::Estimated { value, tol } => ValueOut {
                value: sig10(*value),
                method: "sequence-estimate".into(),
                tol: Some(*tol),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProfileOut {
    pub label: String,
    pub values: Vec<ValueOut>,
}

impl ProfileOut {
    pub fn new(label: &str, profile: &DegreeProfile) -> Self {
        let eigen = profile.char_poly().is_some();
        Self {
            label: label.to_string(),
            values: profile
                .values()
                .iter()
                .map(|v| ValueOut::from_degree(v, eigen))
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(|v| v.value.clone()).collect();
        let methods: Vec<&str> = self.values.iter().map(|v| v.method.as_str()).collect();
        let tag = if methods.iter().all(|m| *m == methods[0]) {
            methods[0].to_string()
        } else if methods.contains(&"sequence-estimate") {
            "mixed, includes sequence-estimate".to_string()
        } else {
            "eigenvalue-exact".to_string()
        };
        format!("{} = [{}] ({})", self.label, vals.join(", "), tag)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct D1Out {
    pub estimate: String,
    pub upper_bound: String,
    pub upper_bound_at: usize,
    pub tol: f64,
    pub method: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DegreesOut {
    pub system: String,
    pub profiles: Vec<ProfileOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<D1Out>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ColumnOut {
    pub label: String,
    /// Exact integers as decimal strings; no precision loss.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SequenceOut {
    pub p: usize,
    pub n: usize,
    pub columns: Vec<ColumnOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TheoremEntryOut {
    pub p: usize,
    pub verdict: String,
    pub witness: usize,
    pub tied_witnesses: Vec<usize>,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckOut {
    pub name: String,
    /// `pass` or `fail`; vacuous implications report `pass` with a note.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub theorem_entries: Vec<TheoremEntryOut>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub gaps: Vec<f64>,
}

impl CheckOut {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportOut {
    /// The original description file, verbatim, so a report can be
    /// re-verified from itself.
    pub input: String,
    pub kind: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceOut>,
    pub checks: Vec<CheckOut>,
    pub overall: String,
}
