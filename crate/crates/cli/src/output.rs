use cfsem::{format_rational, Exact, ExactSem, ExactTable, Probability};
use serde_json::{json, Value as Json};

use cfsem::scalar::format_significant;

/// Result of one command: a verdict plus the text and JSON renderings.
pub struct Outcome {
    pub pass: bool,
    pub text: Vec<String>,
    pub json: Json,
    /// Printed verbatim instead of either rendering.
    pub raw: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub precision: usize,
}

impl Style {
    /// `1/2 (0.500000000000)`
    pub fn prob(&self, p: &Exact) -> String {
        format!("{} ({})", format_rational(p), self.float(p))
    }

    pub fn float(&self, p: &Exact) -> String {
        format_significant(p.to_f64(), self.precision)
    }

    pub fn prob_json(&self, p: &Exact) -> Json {
        json!({ "exact": format_rational(p), "float": self.float(p) })
    }

    /// One line per row: `Y=1: 9/10 (0.900000000000)`.
    pub fn table_lines(&self, t: &ExactTable) -> Vec<String> {
        t.labelled_rows()
            .into_iter()
            .map(|(cells, p)| format!("{}: {}", cells_text(&cells), self.prob(&p)))
            .collect()
    }

    pub fn table_json(&self, t: &ExactTable) -> Json {
        let rows: Vec<Json> = t
            .labelled_rows()
            .into_iter()
            .map(|(cells, p)| {
                let values: serde_json::Map<String, Json> =
                    cells.into_iter().map(|(name, value)| (name, Json::String(value))).collect();
                json!({ "values": values, "p": self.prob_json(&p) })
            })
            .collect();
        let variables: Vec<&str> = t.scope().iter().map(|&v| t.vars()[v].name.as_str()).collect();
        json!({ "variables": variables, "rows": rows })
    }
}

pub fn cells_text(cells: &[(String, String)]) -> String {
    cells
        .iter()
        .map(|(name, value)| format!("{name}={value}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `U_L=0, U_A=1, U_Y=0`
pub fn disturbance_text(m: &ExactSem, u: &[usize]) -> String {
    u.iter()
        .enumerate()
        .map(|(v, &x)| format!("U_{}={}", m.dag().label(v), m.disturbances().supports()[v][x]))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
