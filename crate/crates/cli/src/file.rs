//! The `ef1reform/1` instance file: a JSON object with a mandatory version.

use std::fmt::Write as _;
use std::path::Path;

use ef1reform::generators::SourceProblem;
use ef1reform::model::Instance;
use ef1reform::{Allocation, SizeVector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const VERSION: &str = "ef1reform/1";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    /// One row per agent.
    #[serde(default)]
    pub utilities: Option<Vec<Vec<u64>>>,
    /// One list of good indices per agent.
    #[serde(default)]
    pub allocation: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub size_vector: Option<Vec<usize>>,
    #[serde(default)]
    pub source: Option<SourceProblem>,
    /// Reduction that produced the instance.
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub budget_k: Option<u64>,
}

/// A parsed and validated instance file.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub instance: Instance<u64>,
    pub allocation: Option<Allocation>,
    pub size_vector: Option<SizeVector>,
}

fn field(path: &Path, name: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Field {
        path: path.to_path_buf(),
        field: name.into(),
        msg: msg.into(),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| {
        let good = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = good.len() - good.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1) + 1;
        CliError::Syntax {
            path: path.to_path_buf(),
            line,
            column,
            msg: "invalid UTF-8".into(),
        }
    })
}

/// Parses the container and checks the version, without requiring an
/// instance.
pub fn parse_file(path: &Path, text: &str) -> Result<InstanceFile> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e
            .to_string()
            .split(" at line ")
            .next()
            .unwrap_or_default()
            .to_string(),
    })?;
    if file.version != VERSION {
        return Err(field(
            path,
            "version",
            format!(
                "unsupported version `{}`, expected `{VERSION}`",
                file.version
            ),
        ));
    }
    Ok(file)
}

impl InstanceFile {
    pub fn load(&self, path: &Path) -> Result<Loaded> {
        let need = |name: &str| field(path, name, "missing");
        let n = self.n.ok_or_else(|| need("n"))?;
        let m = self.m.ok_or_else(|| need("m"))?;
        let rows = self.utilities.as_ref().ok_or_else(|| need("utilities"))?;
        if rows.len() != n {
            return Err(field(
                path,
                "utilities",
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(field(
                path,
                format!("utilities[{i}]"),
                format!("expected {m} entries, found {}", row.len()),
            ));
        }
        let instance =
            Instance::new(rows.clone()).map_err(|e| field(path, "utilities", e.to_string()))?;
        let allocation = match &self.allocation {
            None => None,
            Some(b) => {
                if b.len() != n {
                    return Err(field(
                        path,
                        "allocation",
                        format!("expected {n} bundles, found {}", b.len()),
                    ));
                }
                let a = Allocation::new(b.clone(), m)
                    .map_err(|e| field(path, "allocation", e.to_string()))?;
                Some(a)
            }
        };
        let size_vector = match &self.size_vector {
            None => None,
            Some(s) => {
                let sv = SizeVector(s.clone());
                sv.check_for(&instance)
                    .map_err(|e| field(path, "size_vector", e.to_string()))?;
                if let Some(a) = &allocation {
                    if a.size_vector() != sv {
                        return Err(field(
                            path,
                            "size_vector",
                            format!("{sv} disagrees with the allocation's {}", a.size_vector()),
                        ));
                    }
                }
                Some(sv)
            }
        };
        Ok(Loaded {
            instance,
            allocation,
            size_vector,
        })
    }

    /// Canonical serialization: fixed key order, one utility row per line,
    /// LF endings.
    pub fn to_canonical(&self) -> String {
        fn json<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("plain data serializes")
        }
        fn list<T: Serialize>(v: &[T]) -> String {
            let items: Vec<String> = v.iter().map(json).collect();
            format!("[{}]", items.join(", "))
        }
        let mut fields = vec![format!("  \"version\": {}", json(&self.version))];
        if let Some(n) = self.n {
            fields.push(format!("  \"n\": {n}"));
        }
        if let Some(m) = self.m {
            fields.push(format!("  \"m\": {m}"));
        }
        if let Some(rows) = &self.utilities {
            let body: Vec<String> = rows.iter().map(|r| format!("    {}", list(r))).collect();
            fields.push(format!("  \"utilities\": [\n{}\n  ]", body.join(",\n")));
        }
        if let Some(b) = &self.allocation {
            let items: Vec<String> = b.iter().map(|x| list(x)).collect();
            fields.push(format!("  \"allocation\": [{}]", items.join(", ")));
        }
        if let Some(s) = &self.size_vector {
            fields.push(format!("  \"size_vector\": {}", list(s)));
        }
        if let Some(src) = &self.source {
            fields.push(format!("  \"source\": {}", json(src)));
        }
        if let Some(t) = &self.target {
            fields.push(format!("  \"target\": {}", json(t)));
        }
        if let Some(k) = self.budget_k {
            fields.push(format!("  \"budget_k\": {k}"));
        }
        let mut out = String::from("{\n");
        let _ = write!(out, "{}\n}}\n", fields.join(",\n"));
        out
    }

    pub fn from_parts(
        instance: &Instance<u64>,
        allocation: Option<&Allocation>,
        size_vector: Option<&SizeVector>,
    ) -> Self {
        InstanceFile {
            version: VERSION.into(),
            n: Some(instance.num_agents()),
            m: Some(instance.num_goods()),
            utilities: Some(instance.rows().map(<[u64]>::to_vec).collect()),
            allocation: allocation.map(|a| a.bundles().to_vec()),
            size_vector: size_vector.map(|s| s.0.clone()),
            ..Default::default()
        }
    }
}

/// Reads, parses and validates an instance file.
pub fn load_instance(path: &Path) -> Result<Loaded> {
    let text = read_text(path)?;
    parse_file(path, &text)?.load(path)
}
