//! JSON bundle files and reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bundle::BundleData;
use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_rat, rational_rank, IntMatrix, RatMatrix};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// On-disk form of a bundle. `M` entries are rational strings such as
/// `"3"` or `"-1/2"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub s: usize,
    /// Declared number of rows of `M`; checked against its rank.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<String>>,
    #[serde(rename = "D")]
    pub diagram: Vec<Vec<i64>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl BundleFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn from_bundle(b: &BundleData, label: Option<String>) -> Self {
        let m = b.m().to_rows().iter().map(|r| r.iter().map(format_rat).collect()).collect();
        let diagram = b
            .diagram()
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| i64::try_from(v).expect("diagram entries fit in i64"))
                    .collect()
            })
            .collect();
        Self {
            label,
            n: b.n(),
            s: b.s(),
            d: Some(b.d()),
            m,
            diagram,
        }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Validates against the declared shape. `text` is used to place
    /// rational parse errors.
    pub fn to_bundle_in(&self, text: Option<&str>) -> Result<BundleData> {
        let locate = |raw: &str, e: Error| match (text, e) {
            (Some(t), Error::Parse { message, .. }) => {
                let needle = format!("\"{raw}\"");
                Error::parse_at(t, t.find(&needle).map_or(0, |p| p + 1), message)
            }
            (_, e) => e,
        };
        let mut rows = Vec::with_capacity(self.m.len());
        for r in &self.m {
            let mut row = Vec::with_capacity(r.len());
            for v in r {
                row.push(parse_rat(v).map_err(|e| locate(v, e))?);
            }
            rows.push(row);
        }
        let m = RatMatrix::from_rows(&rows)?;
        let diagram = IntMatrix::from_i64_rows(&self.diagram)?;
        if diagram.rows() != self.n {
            return Err(Error::InvalidInput(format!(
                "declared n = {} but D has {} rows",
                self.n,
                diagram.rows()
            )));
        }
        if m.cols() != self.s {
            return Err(Error::InvalidInput(format!(
                "declared s = {} but M has {} columns",
                self.s,
                m.cols()
            )));
        }
        if let Some(d) = self.d {
            let rank = rational_rank(&m);
            if rank != d {
                return Err(Error::InvalidInput(format!("declared d = {d} but M has rank {rank}")));
            }
        }
        BundleData::new(m, diagram)
    }

    pub fn to_bundle(&self) -> Result<BundleData> {
        self.to_bundle_in(None)
    }
}

pub fn load_bundle(text: &str) -> Result<(BundleFile, BundleData)> {
    let file = BundleFile::parse(text)?;
    let b = file.to_bundle_in(Some(text))?;
    Ok((file, b))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_hash: String,
    pub results: serde_json::Value,
    /// Wall-clock milliseconds per phase; the only nondeterministic field.
    pub timings: BTreeMap<String, u128>,
    pub version: String,
}

impl Report {
    /// `inputs` should hold everything that determines `results`,
    /// including caps.
    pub fn new(command: &str, inputs: &serde_json::Value, results: serde_json::Value) -> Self {
        let key = serde_json::to_vec(&serde_json::json!({ "command": command, "inputs": inputs }))
            .expect("serializable");
        Self {
            command: command.to_string(),
            inputs_hash: sha256_hex(&key),
            results,
            timings: BTreeMap::new(),
            version: VERSION.to_string(),
        }
    }

    pub fn timing(mut self, phase: &str, ms: u128) -> Self {
        self.timings.insert(phase.to_string(), ms);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{example_three_rays, make_bundle, BundleKind};

    #[test]
    fn canonical_round_trip() {
        for (b, label) in [
            (example_three_rays(), Some("three rays".to_string())),
            (make_bundle(&BundleKind::Tangent(3)).unwrap(), None),
        ] {
            let text = BundleFile::from_bundle(&b, label).to_canonical();
            let (file, back) = load_bundle(&text).unwrap();
            assert_eq!(back, b);
            assert_eq!(file.to_canonical(), text);
        }
    }

    #[test]
    fn rationals_survive() {
        let text = r#"{"n": 1, "s": 2, "M": [["-1/2", "6/4"]], "D": [[0, 1]]}"#;
        let (file, b) = load_bundle(text).unwrap();
        assert_eq!(file.d, None);
        let again = BundleFile::from_bundle(&b, None);
        assert_eq!(again.m, vec![vec!["-1/2".to_string(), "3/2".to_string()]]);
    }

    #[test]
    fn errors_carry_positions() {
        let text = "{\n  \"n\": 1,\n  \"s\": 2,\n  \"M\": [[\"1/0\", \"1\"]],\n  \"D\": [[0, 1]]\n}";
        match load_bundle(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 11)),
            other => panic!("{other:?}"),
        }
        match load_bundle("{\n  \"n\": 1,\n  \"s\" 2\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let rank = r#"{"n": 1, "s": 3, "d": 2, "M": [["1","1","1"],["2","2","2"]], "D": [[0,0,1]]}"#;
        assert!(matches!(load_bundle(rank), Err(Error::InvalidInput(_))));
        let shape = r#"{"n": 2, "s": 2, "M": [["1","1"]], "D": [[0,1]]}"#;
        assert!(matches!(load_bundle(shape), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn reports_hash_inputs_only() {
        let inputs = serde_json::json!({"n": 2});
        let a = Report::new("x", &inputs, serde_json::json!(1)).timing("run", 5);
        let b = Report::new("x", &inputs, serde_json::json!(1)).timing("run", 9);
        assert_eq!(a.inputs_hash, b.inputs_hash);
        assert_eq!(a.results, b.results);
        assert_ne!(a.inputs_hash, Report::new("y", &inputs, serde_json::json!(1)).inputs_hash);
        assert_eq!(a.inputs_hash.len(), 64);
    }
}
