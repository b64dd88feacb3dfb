//! Report entries and their JSON-lines / CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// A computed or expected quantity. `Oracle` marks an expected value
/// supplied by an independent computation named in the entry inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Real(f64),
    Complex { re: f64, im: f64 },
    Oracle,
    Missing,
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match *self {
            Quantity::Real(v) => s.serialize_f64(v),
            Quantity::Complex { re, im } => {
                let mut st = s.serialize_struct("Complex", 2)?;
                st.serialize_field("re", &re)?;
                st.serialize_field("im", &im)?;
                st.end()
            }
            Quantity::Oracle => s.serialize_str("oracle"),
            Quantity::Missing => s.serialize_none(),
        }
    }
}

impl Quantity {
    fn cell(&self) -> String {
        match self {
            Quantity::Real(v) => format!("{v:e}"),
            Quantity::Complex { re, im } => format!("{re:e}{im:+e}i"),
            Quantity::Oracle => "oracle".into(),
            Quantity::Missing => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub check_id: String,
    pub inputs: BTreeMap<String, Value>,
    pub computed: Quantity,
    pub expected: Quantity,
    pub tol: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn write_json<W: Write>(entries: &[ReportEntry], mut w: W) -> std::io::Result<()> {
    for e in entries {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_csv<W: Write>(entries: &[ReportEntry], w: W) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "check_id",
        "inputs",
        "computed",
        "expected",
        "tol",
        "pass",
        "runtime_ms",
        "error",
    ])?;
    for e in entries {
        let inputs = serde_json::to_string(&e.inputs)?;
        out.write_record([
            e.check_id.as_str(),
            inputs.as_str(),
            &e.computed.cell(),
            &e.expected.cell(),
            &format!("{:e}", e.tol),
            if e.pass { "true" } else { "false" },
            &e.runtime_ms.to_string(),
            e.error.as_deref().unwrap_or(""),
        ])?;
    }
    out.flush()
}
