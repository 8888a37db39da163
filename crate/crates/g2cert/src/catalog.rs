// SPDX-License-Identifier: MIT OR Apache-2.0
//! Loading and cross-checking the plain-text databases.
//!
//! Each database file starts with a `# sha256=<hex>` line holding the digest
//! of everything after that line. Records are one per line with
//! `|`-separated fields; other lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use g2cert_core::exterior::Form;
use g2cert_core::g2::G2Certificate;
use g2cert_core::lie_ce::{LieError, NilpotentLieAlgebra};
use g2cert_core::parse::{parse_form, parse_form_with, parse_structure, ParseError, StructureSpec};
use g2cert_core::scalar::{format_rat, parse_rat, Rat, Ring};
use sha2::{Digest, Sha256};

/// Name of the algebra database file.
pub const ALGEBRAS_FILE: &str = "algebras.db";
/// Name of the certificate database file.
pub const CERTIFICATES_FILE: &str = "certificates.db";
/// Name of the pinned obstruction database file.
pub const OBSTRUCTIONS_FILE: &str = "obstructions.db";

/// Errors raised while loading or querying the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogError {
    /// A file could not be read.
    Io(String),
    /// The checksum header is missing or does not match.
    Checksum {
        /// File name.
        file: String,
        /// Digest found in the header, if any.
        stored: Option<String>,
        /// Digest of the file body.
        computed: String,
    },
    /// A line does not follow the record format.
    Parse {
        /// File name.
        file: String,
        /// 1-based line number.
        line: usize,
        /// Description.
        message: String,
    },
    /// No record with this name.
    NotFound(String),
    /// Stored and computed data disagree.
    Consistency(String),
    /// The parameter lies outside the family's admissible range.
    RegimeViolation {
        /// Family name.
        name: String,
        /// Offending value.
        value: String,
        /// Constraint text.
        constraint: String,
    },
    /// A parameter was given for a fixed algebra or omitted for a family.
    Parameter(String),
    /// The instantiated structure equations are not a Lie algebra.
    Jacobi(String),
    /// No isomorphism invariant is known for this family.
    UnknownFamily(String),
    /// The invariant is undefined at this parameter.
    Domain(String),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::Io(m) => write!(f, "i/o error: {m}"),
            CatalogError::Checksum { file, stored, computed } => match stored {
                Some(s) => write!(f, "{file}: checksum {s} does not match contents ({computed})"),
                None => write!(f, "{file}: missing '# sha256=' header (contents hash to {computed})"),
            },
            CatalogError::Parse { file, line, message } => write!(f, "{file}:{line}: {message}"),
            CatalogError::NotFound(n) => write!(f, "no algebra named {n:?} in the catalog"),
            CatalogError::Consistency(m) => write!(f, "catalog inconsistency: {m}"),
            CatalogError::RegimeViolation { name, value, constraint } => {
                write!(f, "{name}: parameter {value} violates constraint {constraint}")
            }
            CatalogError::Parameter(m) => f.write_str(m),
            CatalogError::Jacobi(m) => write!(f, "not a Lie algebra: {m}"),
            CatalogError::UnknownFamily(n) => write!(f, "no isomorphism invariant known for {n}"),
            CatalogError::Domain(m) => write!(f, "invariant undefined: {m}"),
        }
    }
}

impl std::error::Error for CatalogError {}

/// Obstruction method tags used in the databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Contraction by a central vector.
    Contraction,
    /// Ideal generated by two closed covectors.
    Ideal,
    /// Positivity of λ on a subspace of closed 3-forms.
    Lambda,
}

impl Method {
    /// Database tag.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Contraction => "contraction",
            Method::Ideal => "ideal",
            Method::Lambda => "lambda",
        }
    }

    /// Parses a database tag.
    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "contraction" => Some(Method::Contraction),
            "ideal" => Some(Method::Ideal),
            "lambda" => Some(Method::Lambda),
            _ => None,
        }
    }
}

/// What the tables claim about an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// A purely coclosed certificate is listed.
    Pure,
    /// Coclosed structures exist but purely coclosed ones are excluded by a
    /// cited result.
    CoclosedOnlyExternal,
    /// No coclosed structure, shown by the given method.
    NoCoclosed(Method),
    /// No coclosed structure, by a cited result.
    NoCoclosedExternal,
}

impl Status {
    /// Database tag, e.g. `no-coclosed,method=ideal`.
    pub fn tag(self) -> String {
        match self {
            Status::Pure => "pure".into(),
            Status::CoclosedOnlyExternal => "coclosed-only-external".into(),
            Status::NoCoclosed(m) => format!("no-coclosed,method={}", m.tag()),
            Status::NoCoclosedExternal => "no-coclosed-external".into(),
        }
    }

    /// Short tag without the method.
    pub fn kind(self) -> &'static str {
        match self {
            Status::Pure => "pure",
            Status::CoclosedOnlyExternal => "coclosed-only-external",
            Status::NoCoclosed(_) => "no-coclosed",
            Status::NoCoclosedExternal => "no-coclosed-external",
        }
    }
}

/// One comparison of the parameter with a rational bound.
#[derive(Debug, Clone, PartialEq)]
enum Atom {
    True,
    Lt(Rat),
    Gt(Rat),
    Eq(Rat),
    Ne(Rat),
}

impl Atom {
    fn holds(&self, v: &Rat) -> bool {
        match self {
            Atom::True => true,
            Atom::Lt(b) => v < b,
            Atom::Gt(b) => v > b,
            Atom::Eq(b) => v == b,
            Atom::Ne(b) => v != b,
        }
    }
}

/// A conjunction of comparisons such as `L!=0,L!=1` or `-2<L<0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    text: String,
    atoms: Vec<Atom>,
}

impl Regime {
    /// Parses the regime grammar: comma-separated `true`, `L<a`, `L>a`,
    /// `L=a`, `L!=a` or `a<L<b`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut atoms = Vec::new();
        for part in text.split(',').map(str::trim) {
            let bound = |s: &str| parse_rat(s.trim()).ok_or_else(|| format!("bad bound {s:?} in regime {text:?}"));
            if part == "true" {
                atoms.push(Atom::True);
            } else if let Some(r) = part.strip_prefix("L!=") {
                atoms.push(Atom::Ne(bound(r)?));
            } else if let Some(r) = part.strip_prefix("L<") {
                atoms.push(Atom::Lt(bound(r)?));
            } else if let Some(r) = part.strip_prefix("L>") {
                atoms.push(Atom::Gt(bound(r)?));
            } else if let Some(r) = part.strip_prefix("L=") {
                atoms.push(Atom::Eq(bound(r)?));
            } else if let Some((lo, hi)) = part.split_once("<L<") {
                atoms.push(Atom::Gt(bound(lo)?));
                atoms.push(Atom::Lt(bound(hi)?));
            } else {
                return Err(format!("unrecognized regime {part:?}"));
            }
        }
        Ok(Regime { text: text.to_string(), atoms })
    }

    /// Whether `v` satisfies every comparison.
    pub fn contains(&self, v: &Rat) -> bool {
        self.atoms.iter().all(|a| a.holds(v))
    }

    /// The source text.
    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Parameter data of a one-parameter family.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    /// Admissible parameter range.
    pub constraint: Regime,
    /// Sample values, grouped as written in the database.
    pub samples: Vec<Vec<Rat>>,
}

impl Family {
    /// All sample values in database order.
    pub fn all_samples(&self) -> Vec<Rat> {
        self.samples.iter().flatten().cloned().collect()
    }
}

/// A catalog entry for one algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraRecord {
    /// Table name such as `37B` or `n7`.
    pub name: String,
    /// Nilpotency step as stated in the tables.
    pub step: usize,
    /// Whether the algebra is decomposable.
    pub decomposable: bool,
    /// Structure equations as written.
    pub structure_text: String,
    /// Parsed structure equations.
    pub structure: StructureSpec,
    /// Center basis vectors stated in the tables.
    pub center: Vec<usize>,
    /// Claimed status.
    pub status: Status,
    /// Family data, if the equations depend on `L`.
    pub family: Option<Family>,
    /// Parameter values of a pure family that are obstructed instead.
    pub obstructed: Vec<(Rat, Method)>,
    /// 1-based line in the database.
    pub line: usize,
}

impl AlgebraRecord {
    /// The algebra at parameter `param` (ignored for fixed algebras).
    pub fn algebra(&self, param: Option<&Rat>) -> Result<NilpotentLieAlgebra, CatalogError> {
        let label = match param {
            Some(p) if self.family.is_some() => format!("{}({})", self.name, format_rat(p)),
            _ => self.name.clone(),
        };
        NilpotentLieAlgebra::from_spec(&label, &self.structure, param).map_err(|e| match e {
            LieError::JacobiViolation { .. } => CatalogError::Jacobi(format!("{label}: {e}")),
            other => CatalogError::Consistency(format!("{label}: {other}")),
        })
    }

    /// Whether the structure equations depend on a parameter.
    pub fn is_family(&self) -> bool {
        self.family.is_some()
    }

    /// The group the tables list this algebra under: `decomposable`,
    /// `2-step`, `3-step` or `4-step`.
    pub fn group(&self) -> String {
        if self.decomposable {
            "decomposable".into()
        } else {
            format!("{}-step", self.step)
        }
    }
}

/// A row of a certificate table.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRecord {
    /// Algebra name.
    pub name: String,
    /// Parameter regime for family rows.
    pub regime: Option<Regime>,
    /// `ω` as written.
    pub omega: String,
    /// `ψ₋` as written.
    pub psi: String,
    /// `η` as written.
    pub eta: String,
    /// Explicit central vector index.
    pub x: Option<usize>,
    /// Expected `ψ₊` in ambient labels.
    pub expect_psiplus: Option<String>,
    /// Expected metric rows.
    pub expect_metric: Option<Vec<Vec<Rat>>>,
    /// 1-based line in the database.
    pub line: usize,
}

impl CertificateRecord {
    /// Row label such as `1357N@L<-2`.
    pub fn label(&self) -> String {
        match &self.regime {
            Some(r) => format!("{}@{}", self.name, r.text()),
            None => self.name.clone(),
        }
    }

    /// The certificate at parameter `param`.
    pub fn instantiate(&self, n: usize, param: Option<&Rat>) -> Result<G2Certificate, ParseError> {
        Ok(G2Certificate {
            omega: parse_form_with(&self.omega, n, param)?,
            psi_minus: parse_form_with(&self.psi, n, param)?,
            eta: parse_form_with(&self.eta, n, param)?,
            x: self.x,
        })
    }
}

/// A pinned obstruction certificate line.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnedObstruction {
    /// Algebra name.
    pub name: String,
    /// Parameter value for family members.
    pub param: Option<Rat>,
    /// Method.
    pub method: Method,
    /// Remaining `key=value` fields in file order.
    pub fields: Vec<(String, String)>,
    /// 1-based line in the database.
    pub line: usize,
}

impl PinnedObstruction {
    /// Value of a field.
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// The database line.
    pub fn to_line(&self) -> String {
        let mut out = self.name.clone();
        if let Some(p) = &self.param {
            out.push_str(&format!(" | param={}", format_rat(p)));
        }
        out.push_str(&format!(" | method={}", self.method.tag()));
        for (k, v) in &self.fields {
            out.push_str(&format!(" | {k}={v}"));
        }
        out
    }
}

/// The loaded databases.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    /// Algebra records in file order.
    pub algebras: Vec<AlgebraRecord>,
    /// Certificate rows in file order.
    pub certificates: Vec<CertificateRecord>,
    /// Pinned obstruction certificates in file order.
    pub obstructions: Vec<PinnedObstruction>,
}

/// Hex SHA-256 of a string.
pub fn sha256_hex(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Prefixes `body` with its checksum header.
pub fn seal(body: &str) -> String {
    format!("# sha256={}\n{}", sha256_hex(body), body)
}

/// Splits off and verifies the checksum header.
pub fn verify_checksum<'a>(file: &str, text: &'a str) -> Result<&'a str, CatalogError> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let computed = sha256_hex(body);
    match first.trim().strip_prefix("# sha256=") {
        Some(stored) if stored == computed => Ok(body),
        Some(stored) => Err(CatalogError::Checksum { file: file.into(), stored: Some(stored.into()), computed }),
        None => Err(CatalogError::Checksum { file: file.into(), stored: None, computed: sha256_hex(text) }),
    }
}

/// Default database directory: `$G2CERT_DB`, else the `db` directory shipped
/// with the crate.
pub fn default_db_dir() -> PathBuf {
    match std::env::var_os("G2CERT_DB") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("db"),
    }
}

struct Line<'a> {
    number: usize,
    head: &'a str,
    fields: BTreeMap<&'a str, &'a str>,
}

fn records<'a>(file: &str, body: &'a str) -> Result<Vec<Line<'a>>, CatalogError> {
    let mut out = Vec::new();
    for (i, raw) in body.lines().enumerate() {
        let number = i + 2;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('|').map(str::trim);
        let head = parts.next().unwrap_or_default();
        let mut fields = BTreeMap::new();
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| CatalogError::Parse {
                file: file.into(),
                line: number,
                message: format!("field {p:?} is not key=value"),
            })?;
            if fields.insert(k.trim(), v.trim()).is_some() {
                return Err(CatalogError::Parse { file: file.into(), line: number, message: format!("duplicate field {k}") });
            }
        }
        out.push(Line { number, head, fields });
    }
    Ok(out)
}

fn perr(file: &str, line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse { file: file.into(), line, message: message.into() }
}

fn need<'a>(file: &str, l: &Line<'a>, key: &str) -> Result<&'a str, CatalogError> {
    l.fields.get(key).copied().ok_or_else(|| perr(file, l.number, format!("missing field {key}")))
}

fn parse_index(s: &str) -> Option<usize> {
    s.strip_prefix('e').unwrap_or(s).parse().ok()
}

fn parse_status(s: &str) -> Option<Status> {
    let (kind, method) = match s.split_once(",method=") {
        Some((k, m)) => (k, Some(Method::from_tag(m)?)),
        None => (s, None),
    };
    match (kind, method) {
        ("pure", None) => Some(Status::Pure),
        ("coclosed-only-external", None) => Some(Status::CoclosedOnlyExternal),
        ("no-coclosed", Some(m)) => Some(Status::NoCoclosed(m)),
        ("no-coclosed-external", None) => Some(Status::NoCoclosedExternal),
        _ => None,
    }
}

fn parse_algebras(file: &str, body: &str) -> Result<Vec<AlgebraRecord>, CatalogError> {
    let mut out = Vec::new();
    for l in records(file, body)? {
        let f = |k| need(file, &l, k);
        let step = f("step")?.parse().map_err(|_| perr(file, l.number, "bad step"))?;
        let decomposable = match f("dec")? {
            "0" => false,
            "1" => true,
            other => return Err(perr(file, l.number, format!("bad dec flag {other}"))),
        };
        let structure_text = f("eq")?.to_string();
        let structure = parse_structure(&structure_text).map_err(|e| perr(file, l.number, format!("structure: {e}")))?;
        let center = f("center")?
            .split(',')
            .map(|s| parse_index(s.trim()).ok_or_else(|| perr(file, l.number, format!("bad center entry {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let status = parse_status(f("status")?).ok_or_else(|| perr(file, l.number, "bad status"))?;
        let family = match l.fields.get("param") {
            None => None,
            Some(&"L") => {
                let constraint = Regime::parse(f("constraint")?).map_err(|m| perr(file, l.number, m))?;
                let samples = f("samples")?
                    .split(';')
                    .map(|grp| {
                        grp.split(',')
                            .map(|s| parse_rat(s.trim()).ok_or_else(|| perr(file, l.number, format!("bad sample {s:?}"))))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Family { constraint, samples })
            }
            Some(p) => return Err(perr(file, l.number, format!("unsupported parameter name {p}"))),
        };
        let obstructed = match l.fields.get("obstructed") {
            None => Vec::new(),
            Some(v) => {
                let (val, m) = v.split_once(",method=").ok_or_else(|| perr(file, l.number, "bad obstructed field"))?;
                let val = parse_rat(val).ok_or_else(|| perr(file, l.number, "bad obstructed value"))?;
                let m = Method::from_tag(m).ok_or_else(|| perr(file, l.number, "bad obstructed method"))?;
                vec![(val, m)]
            }
        };
        out.push(AlgebraRecord {
            name: l.head.to_string(),
            step,
            decomposable,
            structure_text,
            structure,
            center,
            status,
            family,
            obstructed,
            line: l.number,
        });
    }
    Ok(out)
}

fn parse_certificates(file: &str, body: &str) -> Result<Vec<CertificateRecord>, CatalogError> {
    let mut out = Vec::new();
    for l in records(file, body)? {
        let (name, regime) = match l.head.split_once('@') {
            Some((n, r)) => (n.to_string(), Some(Regime::parse(r).map_err(|m| perr(file, l.number, m))?)),
            None => (l.head.to_string(), None),
        };
        let x = match l.fields.get("X") {
            Some(s) => Some(parse_index(s).ok_or_else(|| perr(file, l.number, "bad X"))?),
            None => None,
        };
        let expect_metric = match l.fields.get("expect_metric") {
            Some(s) => Some(
                s.split(';')
                    .map(|row| {
                        row.split(',').map(|c| parse_rat(c.trim()).ok_or_else(|| perr(file, l.number, "bad metric entry"))).collect()
                    })
                    .collect::<Result<Vec<Vec<Rat>>, _>>()?,
            ),
            None => None,
        };
        out.push(CertificateRecord {
            name,
            regime,
            omega: need(file, &l, "omega")?.to_string(),
            psi: need(file, &l, "psi")?.to_string(),
            eta: need(file, &l, "eta")?.to_string(),
            x,
            expect_psiplus: l.fields.get("expect_psiplus").map(|s| s.to_string()),
            expect_metric,
            line: l.number,
        });
    }
    Ok(out)
}

fn parse_obstructions(file: &str, body: &str) -> Result<Vec<PinnedObstruction>, CatalogError> {
    let mut out = Vec::new();
    for (i, raw) in body.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut p = parse_obstruction_line(line).map_err(|m| perr(file, i + 2, m))?;
        p.line = i + 2;
        out.push(p);
    }
    Ok(out)
}

/// Parses one `obstructions.db` line.
pub fn parse_obstruction_line(line: &str) -> Result<PinnedObstruction, String> {
    let mut parts = line.split('|').map(str::trim);
    let name = parts.next().unwrap_or_default().to_string();
    let (mut method, mut param, mut fields) = (None, None, Vec::new());
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| format!("field {p:?} is not key=value"))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "method" => method = Some(Method::from_tag(v).ok_or_else(|| format!("bad method {v:?}"))?),
            "param" => param = Some(parse_rat(v).ok_or_else(|| format!("bad param {v:?}"))?),
            _ => fields.push((k.to_string(), v.to_string())),
        }
    }
    let method = method.ok_or("missing field method")?;
    Ok(PinnedObstruction { name: normalize_name(&name), param, method, fields, line: 0 })
}

fn read(dir: &Path, file: &str) -> Result<String, CatalogError> {
    let path = dir.join(file);
    fs::read_to_string(&path).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))
}

impl Catalog {
    /// Loads and checks the databases in `dir`.
    ///
    /// `obstructions.db` is optional; the other two files are required.
    pub fn load(dir: &Path) -> Result<Self, CatalogError> {
        let alg_text = read(dir, ALGEBRAS_FILE)?;
        let cert_text = read(dir, CERTIFICATES_FILE)?;
        let mut cat = Catalog::from_texts(&alg_text, &cert_text)?;
        if dir.join(OBSTRUCTIONS_FILE).exists() {
            let text = read(dir, OBSTRUCTIONS_FILE)?;
            let body = verify_checksum(OBSTRUCTIONS_FILE, &text)?;
            cat.obstructions = parse_obstructions(OBSTRUCTIONS_FILE, body)?;
            for o in &cat.obstructions {
                cat.lookup(&o.name)?;
            }
        }
        Ok(cat)
    }

    /// Loads the default database directory.
    pub fn load_default() -> Result<Self, CatalogError> {
        Self::load(&default_db_dir())
    }

    /// Builds the catalog from sealed file contents and runs the
    /// consistency checks.
    pub fn from_texts(algebras: &str, certificates: &str) -> Result<Self, CatalogError> {
        let a = verify_checksum(ALGEBRAS_FILE, algebras)?;
        let c = verify_checksum(CERTIFICATES_FILE, certificates)?;
        let cat = Catalog {
            algebras: parse_algebras(ALGEBRAS_FILE, a)?,
            certificates: parse_certificates(CERTIFICATES_FILE, c)?,
            obstructions: Vec::new(),
        };
        cat.check()?;
        Ok(cat)
    }

    /// Looks up an algebra by name; subscript digits are accepted.
    pub fn lookup(&self, name: &str) -> Result<&AlgebraRecord, CatalogError> {
        let key = normalize_name(name);
        self.algebras.iter().find(|r| r.name == key).ok_or(CatalogError::NotFound(name.to_string()))
    }

    /// Certificate rows of an algebra, in file order.
    pub fn certificates_for(&self, name: &str) -> Vec<&CertificateRecord> {
        self.certificates.iter().filter(|c| c.name == name).collect()
    }

    /// The certificate row covering parameter `param`.
    pub fn certificate_at(&self, name: &str, param: Option<&Rat>) -> Option<&CertificateRecord> {
        self.certificates_for(name).into_iter().find(|c| match (&c.regime, param) {
            (Some(r), Some(p)) => r.contains(p),
            (None, _) => true,
            (Some(_), None) => false,
        })
    }

    /// Pinned obstruction certificates for an algebra and parameter.
    pub fn pinned(&self, name: &str, param: Option<&Rat>) -> Vec<&PinnedObstruction> {
        self.obstructions.iter().filter(|o| o.name == name && o.param.as_ref() == param).collect()
    }

    /// The algebra `name` at `param`, checking the family constraint.
    pub fn instantiate(&self, name: &str, param: Option<&Rat>) -> Result<NilpotentLieAlgebra, CatalogError> {
        let rec = self.lookup(name)?;
        match (&rec.family, param) {
            (None, Some(_)) => Err(CatalogError::Parameter(format!("{} has no parameter", rec.name))),
            (Some(_), None) => Err(CatalogError::Parameter(format!("{} is a family; give --param", rec.name))),
            (Some(f), Some(p)) if !f.constraint.contains(p) => Err(CatalogError::RegimeViolation {
                name: rec.name.clone(),
                value: format_rat(p),
                constraint: f.constraint.text().to_string(),
            }),
            _ => rec.algebra(param),
        }
    }

    /// Parameter values at which a record is evaluated: its samples, or a
    /// single `None` for fixed algebras.
    pub fn sample_points(rec: &AlgebraRecord) -> Vec<Option<Rat>> {
        match &rec.family {
            Some(f) => f.all_samples().into_iter().map(Some).collect(),
            None => vec![None],
        }
    }

    fn check(&self) -> Result<(), CatalogError> {
        let mut seen = std::collections::BTreeSet::new();
        for rec in &self.algebras {
            if !seen.insert(rec.name.as_str()) {
                return Err(CatalogError::Consistency(format!("duplicate record {}", rec.name)));
            }
            if rec.structure.dim() != 7 {
                return Err(CatalogError::Consistency(format!("{}: {} generators", rec.name, rec.structure.dim())));
            }
            if rec.structure.uses_param() != rec.family.is_some() {
                return Err(CatalogError::Consistency(format!("{}: parameter usage does not match the param field", rec.name)));
            }
            let mut points = Self::sample_points(rec);
            points.extend(rec.obstructed.iter().map(|(v, _)| Some(v.clone())));
            for p in &points {
                if let (Some(f), Some(v)) = (&rec.family, p) {
                    if !f.constraint.contains(v) {
                        return Err(CatalogError::Consistency(format!(
                            "{}: sample {} violates {}",
                            rec.name,
                            format_rat(v),
                            f.constraint.text()
                        )));
                    }
                }
                let g = rec.algebra(p.as_ref())?;
                self.check_invariants(rec, &g)?;
            }
            let certs = self.certificates_for(&rec.name);
            match rec.status {
                Status::Pure if certs.is_empty() => {
                    return Err(CatalogError::Consistency(format!("{}: status pure but no certificate", rec.name)));
                }
                Status::Pure => {}
                _ if !certs.is_empty() => {
                    return Err(CatalogError::Consistency(format!("{}: certificate listed for status {}", rec.name, rec.status.tag())));
                }
                _ => {}
            }
            for c in &certs {
                if c.regime.is_some() && rec.family.is_none() {
                    return Err(CatalogError::Consistency(format!("{}: regime rows on a fixed algebra", c.label())));
                }
            }
            for p in Self::sample_points(rec) {
                let covering: Vec<_> = certs
                    .iter()
                    .filter(|c| match (&c.regime, &p) {
                        (Some(r), Some(v)) => r.contains(v),
                        (None, _) => true,
                        (Some(_), None) => false,
                    })
                    .collect();
                if rec.status == Status::Pure && covering.len() != 1 {
                    let at = p.as_ref().map(format_rat).unwrap_or_default();
                    return Err(CatalogError::Consistency(format!(
                        "{}: {} certificate rows cover parameter {at}",
                        rec.name,
                        covering.len()
                    )));
                }
                if let Some(c) = covering.first() {
                    c.instantiate(7, p.as_ref()).map_err(|e| CatalogError::Parse {
                        file: CERTIFICATES_FILE.into(),
                        line: c.line,
                        message: format!("{e}"),
                    })?;
                }
            }
            if let Some(f) = &rec.family {
                for c in &certs {
                    if let Some(r) = &c.regime {
                        if !f.all_samples().iter().any(|v| r.contains(v)) {
                            return Err(CatalogError::Consistency(format!("{}: regime has no sample", c.label())));
                        }
                    }
                }
            }
        }
        for c in &self.certificates {
            if !seen.contains(c.name.as_str()) {
                return Err(CatalogError::Consistency(format!("certificate for unknown algebra {}", c.name)));
            }
        }
        Ok(())
    }

    fn check_invariants(&self, rec: &AlgebraRecord, g: &NilpotentLieAlgebra) -> Result<(), CatalogError> {
        let step = g.nilpotency_step();
        if step != rec.step {
            return Err(CatalogError::Consistency(format!("{}: stated step {} but computed {}", g.name(), rec.step, step)));
        }
        let center = g.central_basis_vectors();
        if let Some(missing) = rec.center.iter().find(|i| !center.contains(i)) {
            return Err(CatalogError::Consistency(format!("{}: stated center vector e{} is not central", g.name(), missing)));
        }
        if g.center().len() != rec.center.len() {
            return Err(CatalogError::Consistency(format!(
                "{}: stated center has dimension {} but computed {}",
                g.name(),
                rec.center.len(),
                g.center().len()
            )));
        }
        Ok(())
    }

    /// Records in a group (`decomposable`, `2-step`, …).
    pub fn group(&self, group: &str) -> Vec<&AlgebraRecord> {
        self.algebras.iter().filter(|r| r.group() == group).collect()
    }
}

/// Maps subscript digits to ASCII, e.g. `147E₁` to `147E1`.
pub fn normalize_name(name: &str) -> String {
    name.trim()
        .chars()
        .map(|c| match c {
            '₀'..='₉' => char::from(b'0' + (c as u32 - '₀' as u32) as u8),
            _ => c,
        })
        .collect()
}

/// The isomorphism invariant of a one-parameter family.
///
/// `147E`: `(1−λ+λ²)³ / (λ²(λ−1)²)`. `1357QRS1`: `λ + 1/λ`. Two parameter
/// values give isomorphic algebras exactly when the invariants agree.
pub fn family_invariant(name: &str, lambda: &Rat) -> Result<Rat, CatalogError> {
    let one = Rat::one();
    match normalize_name(name).as_str() {
        "147E" => {
            let den = lambda * lambda * (lambda - &one) * (lambda - &one);
            if den.is_zero() {
                return Err(CatalogError::Domain(format!("147E at {}", format_rat(lambda))));
            }
            let base = &one - lambda + lambda * lambda;
            Ok(&base * &base * &base / den)
        }
        "1357QRS1" => {
            if lambda.is_zero() {
                return Err(CatalogError::Domain("1357QRS1 at 0".into()));
            }
            Ok(lambda + one / lambda)
        }
        other => Err(CatalogError::UnknownFamily(other.to_string())),
    }
}

/// Whether two parameter values of a family give isomorphic algebras.
pub fn isomorphic_parameters(name: &str, a: &Rat, b: &Rat) -> Result<bool, CatalogError> {
    Ok(family_invariant(name, a)? == family_invariant(name, b)?)
}

/// Parses a comma-separated list of monomials such as `e13,e15`.
pub fn parse_monomials(s: &str, n: usize) -> Result<Vec<Form<Rat>>, ParseError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_form(t.trim(), n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use g2cert_core::scalar::frac;

    #[test]
    fn regimes() {
        let r = Regime::parse("-2<L<0").unwrap();
        assert!(r.contains(&frac(-1, 2)));
        assert!(!r.contains(&Rat::from_i64(-2)));
        let r = Regime::parse("L!=0,L!=1").unwrap();
        assert!(!r.contains(&Rat::from_i64(1)));
        assert!(r.contains(&Rat::from_i64(2)));
        assert!(Regime::parse("true").unwrap().contains(&Rat::from_i64(-7)));
        assert!(Regime::parse("L~1").is_err());
    }

    #[test]
    fn invariants() {
        let two = Rat::from_i64(2);
        assert_eq!(family_invariant("147E", &two).unwrap(), frac(27, 4));
        assert!(isomorphic_parameters("147E", &two, &Rat::from_i64(-1)).unwrap());
        assert!(isomorphic_parameters("1357QRS₁", &two, &frac(1, 2)).unwrap());
        assert!(!isomorphic_parameters("1357QRS1", &two, &Rat::from_i64(3)).unwrap());
        assert!(matches!(family_invariant("147E", &Rat::one()), Err(CatalogError::Domain(_))));
        assert!(matches!(family_invariant("37B", &two), Err(CatalogError::UnknownFamily(_))));
    }

    #[test]
    fn checksum_roundtrip() {
        let sealed = seal("a\nb\n");
        assert_eq!(verify_checksum("x", &sealed).unwrap(), "a\nb\n");
        let tampered = sealed.replace("a\n", "c\n");
        assert!(matches!(verify_checksum("x", &tampered), Err(CatalogError::Checksum { .. })));
        assert!(matches!(verify_checksum("x", "a\n"), Err(CatalogError::Checksum { stored: None, .. })));
    }
}
