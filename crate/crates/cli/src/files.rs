//! Algebra and certificate files: a JSON document with a fixed layout,
//! written canonically so equal content gives equal bytes (and hashes).
//! The grammar is described in `docs/file-formats.md`.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use cartan_core::isomorphism::IsoCertificate;
use cartan_core::{AlgebraDescriptor, LieAlgebra, Matrix, Prime};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::source::parse_descriptor;

pub const FORMAT_VERSION: u32 = 1;

/// Rejection of a file, with the location that caused it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FileError {
    /// Not well-formed JSON or a field of the wrong type.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-typed field with an unacceptable value.
    Field { field: String, message: String },
    /// The structure constants break the Jacobi identity.
    Jacobi {
        triple: (usize, usize, usize),
        violations: u64,
    },
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Syntax {
                line,
                column,
                message,
            } => write!(f, "line {line}, column {column}: {message}"),
            FileError::Field { field, message } => write!(f, "field `{field}`: {message}"),
            FileError::Jacobi { triple, violations } => write!(
                f,
                "Jacobi identity fails on basis triple {triple:?} ({violations} failing triples in total)"
            ),
        }
    }
}

impl std::error::Error for FileError {}

fn syntax(e: serde_json::Error) -> FileError {
    FileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn field(name: impl Into<String>, message: impl Into<String>) -> FileError {
    FileError::Field {
        field: name.into(),
        message: message.into(),
    }
}

/// The contents of an algebra file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub format_version: u32,
    pub p: u8,
    pub dim: usize,
    pub labels: Vec<String>,
    /// `[i, j, k, c]`: `c` is the coefficient of `e_k` in `[e_i, e_j]`,
    /// `i < j`, `c != 0`, sorted by `(i, j, k)`.
    pub brackets: Vec<[usize; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    format_version: u64,
    p: u64,
    dim: u64,
    labels: Vec<String>,
    brackets: Vec<[u64; 4]>,
}

impl AlgebraFile {
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        let mut brackets: Vec<[usize; 4]> = l
            .structure_constants()
            .into_iter()
            .map(|(i, j, k, c)| [i, j, k, c as usize])
            .collect();
        brackets.sort_unstable();
        AlgebraFile {
            format_version: FORMAT_VERSION,
            p: l.prime().get(),
            dim: l.dim(),
            labels: l.labels().to_vec(),
            brackets,
        }
    }

    /// Canonical text: fixed key order, one bracket entry per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"format_version\": {},", self.format_version);
        let _ = writeln!(s, "  \"p\": {},", self.p);
        let _ = writeln!(s, "  \"dim\": {},", self.dim);
        let labels = serde_json::to_string(&self.labels).expect("strings serialise");
        let _ = writeln!(s, "  \"labels\": {labels},");
        if self.brackets.is_empty() {
            s.push_str("  \"brackets\": []\n");
        } else {
            s.push_str("  \"brackets\": [\n");
            for (n, [i, j, k, c]) in self.brackets.iter().enumerate() {
                let sep = if n + 1 < self.brackets.len() { "," } else { "" };
                let _ = writeln!(s, "    [{i}, {j}, {k}, {c}]{sep}");
            }
            s.push_str("  ]\n");
        }
        s.push_str("}\n");
        s
    }

    /// Lowercase hex SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        sha256_hex(self.to_text().as_bytes())
    }

    /// Parses and checks everything except the Jacobi identity.
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawAlgebra = serde_json::from_str(text).map_err(syntax)?;
        if raw.format_version != FORMAT_VERSION as u64 {
            return Err(field(
                "format_version",
                format!(
                    "unsupported version {} (expected {FORMAT_VERSION})",
                    raw.format_version
                ),
            ));
        }
        let p = checked_prime(raw.p)?;
        let dim = raw.dim as usize;
        if raw.labels.len() != dim {
            return Err(field(
                "labels",
                format!("{} labels for dim {dim}", raw.labels.len()),
            ));
        }
        let mut seen = HashSet::new();
        for (n, l) in raw.labels.iter().enumerate() {
            if !seen.insert(l.as_str()) {
                return Err(field(
                    format!("labels[{n}]"),
                    format!("duplicate label {l:?}"),
                ));
            }
        }
        let mut keys = HashSet::new();
        let mut brackets = Vec::with_capacity(raw.brackets.len());
        for (n, &[i, j, k, c]) in raw.brackets.iter().enumerate() {
            let at = format!("brackets[{n}]");
            if i >= j {
                return Err(field(at, format!("needs i < j, got i = {i}, j = {j}")));
            }
            if j >= raw.dim || k >= raw.dim {
                return Err(field(
                    at,
                    format!("index out of range for dim {dim}: ({i}, {j}, {k})"),
                ));
            }
            if c == 0 || c >= p.get() as u64 {
                return Err(field(
                    at,
                    format!("coefficient {c} is not a nonzero residue mod {}", p.get()),
                ));
            }
            if !keys.insert((i, j, k)) {
                return Err(field(at, format!("duplicate entry ({i}, {j}, {k})")));
            }
            brackets.push([i as usize, j as usize, k as usize, c as usize]);
        }
        brackets.sort_unstable();
        Ok(AlgebraFile {
            format_version: FORMAT_VERSION,
            p: p.get(),
            dim,
            labels: raw.labels,
            brackets,
        })
    }

    /// Builds the algebra; rejects Jacobi violations.
    pub fn to_algebra(&self) -> Result<LieAlgebra, FileError> {
        let p = checked_prime(self.p.into())?;
        let l = LieAlgebra::from_entries(
            p,
            self.labels.clone(),
            self.brackets.iter().map(|&[i, j, k, c]| (i, j, k, c as u8)),
        )
        .map_err(|e| field("brackets", e.to_string()))?;
        let report = l.validate();
        if let Some(v) = report.violations.first() {
            return Err(FileError::Jacobi {
                triple: v.triple,
                violations: report.violation_count,
            });
        }
        Ok(l)
    }
}

fn checked_prime(p: u64) -> Result<Prime, FileError> {
    u8::try_from(p)
        .ok()
        .and_then(|q| Prime::new(q).ok())
        .ok_or_else(|| field("p", format!("{p} is not a supported prime")))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Reads an algebra file; the result has passed validation.
pub fn import_algebra(text: &str) -> Result<(LieAlgebra, String), FileError> {
    let file = AlgebraFile::parse(text)?;
    let l = file.to_algebra()?;
    Ok((l, file.hash()))
}

pub fn export_algebra(l: &LieAlgebra) -> String {
    AlgebraFile::from_algebra(l).to_text()
}

/// The contents of a certificate file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub format_version: u32,
    pub p: u8,
    pub source: String,
    pub target: String,
    pub seed: u64,
    pub budget: usize,
    /// Row `r`, column `c`: coefficient of target `e_r` in the image of
    /// source `e_c`.
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    format_version: u64,
    p: u64,
    source: String,
    target: String,
    seed: u64,
    budget: u64,
    matrix: Vec<Vec<u64>>,
}

impl CertificateFile {
    pub fn from_certificate(c: &IsoCertificate) -> Self {
        CertificateFile {
            format_version: FORMAT_VERSION,
            p: c.matrix.prime().get(),
            source: c.source.to_string(),
            target: c.target.to_string(),
            seed: c.seed,
            budget: c.budget,
            matrix: c.matrix.rows().iter().map(|r| r.to_residues()).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"format_version\": {},", self.format_version);
        let _ = writeln!(s, "  \"p\": {},", self.p);
        let quote = |x: &str| serde_json::to_string(x).expect("strings serialise");
        let _ = writeln!(s, "  \"source\": {},", quote(&self.source));
        let _ = writeln!(s, "  \"target\": {},", quote(&self.target));
        let _ = writeln!(s, "  \"seed\": {},", self.seed);
        let _ = writeln!(s, "  \"budget\": {},", self.budget);
        if self.matrix.is_empty() {
            s.push_str("  \"matrix\": []\n");
        } else {
            s.push_str("  \"matrix\": [\n");
            for (n, row) in self.matrix.iter().enumerate() {
                let sep = if n + 1 < self.matrix.len() { "," } else { "" };
                let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                let _ = writeln!(s, "    [{}]{sep}", cells.join(", "));
            }
            s.push_str("  ]\n");
        }
        s.push_str("}\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawCertificate = serde_json::from_str(text).map_err(syntax)?;
        if raw.format_version != FORMAT_VERSION as u64 {
            return Err(field(
                "format_version",
                format!(
                    "unsupported version {} (expected {FORMAT_VERSION})",
                    raw.format_version
                ),
            ));
        }
        let p = checked_prime(raw.p)?;
        let n = raw.matrix.len();
        let mut matrix = Vec::with_capacity(n);
        for (r, row) in raw.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(field(
                    format!("matrix[{r}]"),
                    format!("{} entries in a {n} x {n} matrix", row.len()),
                ));
            }
            let mut out = Vec::with_capacity(n);
            for (c, &x) in row.iter().enumerate() {
                if x >= p.get() as u64 {
                    return Err(field(
                        format!("matrix[{r}][{c}]"),
                        format!("{x} is not a residue mod {}", p.get()),
                    ));
                }
                out.push(x as u8);
            }
            matrix.push(out);
        }
        Ok(CertificateFile {
            format_version: FORMAT_VERSION,
            p: p.get(),
            source: raw.source,
            target: raw.target,
            seed: raw.seed,
            budget: raw.budget as usize,
            matrix,
        })
    }

    pub fn prime(&self) -> Prime {
        Prime::new(self.p).expect("checked on parse")
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_residues(self.prime(), self.matrix.len(), &self.matrix)
    }

    pub fn to_certificate(&self) -> IsoCertificate {
        IsoCertificate {
            source: parse_descriptor(&self.source, self.prime()),
            target: parse_descriptor(&self.target, self.prime()),
            matrix: self.matrix(),
            seed: self.seed,
            budget: self.budget,
        }
    }
}

/// Descriptor of an imported file, by hash.
pub fn hash_descriptor(hash: &str) -> AlgebraDescriptor {
    AlgebraDescriptor::Hash(hash.to_string())
}
