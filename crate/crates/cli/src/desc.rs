//! System descriptions: one structured text file (TOML key-value tree)
//! per system. Exact integers may be written as decimal strings to avoid
//! any 64-bit truncation.

use num_bigint::BigInt;

use dyndeg::fibered::{FactorMap, FiberedSystem, ProductSystem, SkewSystem, TriangularSystem};
use dyndeg::matrix::IntMatrix;
use dyndeg::monomial::ExponentMatrix;
use dyndeg::parser::parse_component_list;
use dyndeg::ratmap::ProjectiveRationalMap;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Monomial,
    Rational,
    Product,
    Skew,
    MonomialTriangular,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Monomial => "monomial",
            Kind::Rational => "rational",
            Kind::Product => "product",
            Kind::Skew => "skew",
            Kind::MonomialTriangular => "monomial-triangular",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum FactorDesc {
    Monomial { matrix: ExponentMatrix },
    Rational { map: ProjectiveRationalMap },
}

impl FactorDesc {
    pub fn build(&self) -> FactorMap {
        match self {
            FactorDesc::Monomial { matrix } => FactorMap::Monomial(matrix.clone()),
            FactorDesc::Rational { map } => FactorMap::Rational(map.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FactorDesc::Monomial { matrix } => matrix.size(),
            FactorDesc::Rational { map } => map.dimension(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Payload {
    Monomial {
        matrix: ExponentMatrix,
        conjugator: Option<IntMatrix>,
    },
    Rational {
        map: ProjectiveRationalMap,
        conjugator: Option<IntMatrix>,
    },
    Product {
        base: FactorDesc,
        fiber: FactorDesc,
    },
    Skew {
        base: FactorDesc,
        fiber_dim: usize,
        family: Vec<dyndeg::mpoly::MPoly>,
        base_point: Option<Vec<BigInt>>,
    },
    Triangular {
        matrix: ExponentMatrix,
        split: usize,
    },
}

#[derive(Debug, Clone)]
pub struct SystemDescription {
    pub kind: Kind,
    pub payload: Payload,
    pub options: Options,
    pub source: String,
}

impl SystemDescription {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: toml::Value = text
            .parse()
            .map_err(|e| CliError::Input(format!("TOML parse error: {e}")))?;
        let table = value
            .as_table()
            .ok_or_else(|| CliError::Input("description must be a table".into()))?;
        let kind_name = get_str(table, "kind")?;
        let options = parse_options(table)?;
        let (kind, payload) = match kind_name.as_str() {
            "monomial" => {
                let k = get_usize(table, "k")?;
                let matrix = exponent_matrix(table, "matrix", k)?;
                let conjugator = optional_matrix(table, "conjugator", k)?;
                (Kind::Monomial, Payload::Monomial { matrix, conjugator })
            }
            "rational" => {
                let k = get_usize(table, "k")?;
                let map = rational_map(table, k)?;
                let conjugator = optional_matrix(table, "conjugator", k + 1)?;
                (Kind::Rational, Payload::Rational { map, conjugator })
            }
            "monomial-triangular" => {
                let k = get_usize(table, "k")?;
                let l = get_usize(table, "l")?;
                if l == 0 || l >= k {
                    return Err(CliError::Input(format!(
                        "base split l = {l} must satisfy 1 <= l < k = {k}"
                    )));
                }
                let matrix = exponent_matrix(table, "matrix", k)?;
                (
                    Kind::MonomialTriangular,
                    Payload::Triangular { matrix, split: l },
                )
            }
            "product" => {
                let base = factor(table, "base")?;
                let fiber = factor(table, "fiber")?;
                (Kind::Product, Payload::Product { base, fiber })
            }
            "skew" => {
                let base = factor(table, "base")?;
                let l = base.dim();
                let m = get_usize(table, "m")?;
                if m == 0 {
                    return Err(CliError::Input("fiber dimension m must be >= 1".into()));
                }
                let family_text = get_str(table, "fiber_family")?;
                let nvars = (l + 1) + (m + 1);
                let family = parse_component_list(&family_text, nvars)
                    .map_err(|e| CliError::Input(format!("fiber_family: {e}")))?;
                let base_point = match table.get("base_point") {
                    None => None,
                    Some(v) => Some(int_vector(v, l + 1, "base_point")?),
                };
                (
                    Kind::Skew,
                    Payload::Skew {
                        base,
                        fiber_dim: m,
                        family,
                        base_point,
                    },
                )
            }
            other => {
                return Err(CliError::Input(format!(
                    "unknown kind \"{other}\": expected monomial | rational | product | skew | monomial-triangular"
                )))
            }
        };
        Ok(Self {
            kind,
            payload,
            options,
            source: text.to_string(),
        })
    }

    /// Builds the fibered realization for kinds that have one.
    pub fn fibered_system(&self) -> Result<FiberedSystem, CliError> {
        match &self.payload {
            Payload::Product { base, fiber } => Ok(FiberedSystem::Product(
                ProductSystem::new(base.build(), fiber.build()).map_err(CliError::from)?,
            )),
            Payload::Skew {
                base,
                fiber_dim,
                family,
                ..
            } => Ok(FiberedSystem::Skew(
                SkewSystem::new(base.build(), *fiber_dim, family.clone())
                    .map_err(CliError::from)?,
            )),
            Payload::Triangular { matrix, split } => Ok(FiberedSystem::MonomialTriangular(
                TriangularSystem::new(matrix.clone(), *split).map_err(CliError::from)?,
            )),
            _ => Err(CliError::Unsupported(format!(
                "kind \"{}\" has no fibration",
                self.kind.name()
            ))),
        }
    }
}

fn parse_options(table: &toml::Table) -> Result<Options, CliError> {
    let mut options = Options::default();
    let Some(value) = table.get("options") else {
        return Ok(options);
    };
    let opt = value
        .as_table()
        .ok_or_else(|| CliError::Input("options must be a table".into()))?;
    if let Some(v) = opt.get("n") {
        options.n = Some(as_usize(v, "options.n")?);
    }
    if let Some(v) = opt.get("p") {
        options.p = Some(as_usize(v, "options.p")?);
    }
    if let Some(v) = opt.get("seed") {
        let raw = v
            .as_integer()
            .ok_or_else(|| CliError::Input("options.seed must be an integer".into()))?;
        options.seed = Some(raw as u64);
    }
    if let Some(v) = opt.get("tolerance") {
        options.tolerance = Some(
            v.as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .ok_or_else(|| CliError::Input("options.tolerance must be a number".into()))?,
        );
    }
    Ok(options)
}

fn factor(table: &toml::Table, key: &str) -> Result<FactorDesc, CliError> {
    let sub = table
        .get(key)
        .and_then(|v| v.as_table())
        .ok_or_else(|| CliError::Input(format!("missing [{key}] table")))?;
    let kind = get_str(sub, "kind")?;
    let k = get_usize(sub, "k")?;
    match kind.as_str() {
        "monomial" => Ok(FactorDesc::Monomial {
            matrix: exponent_matrix(sub, "matrix", k)?,
        }),
        "rational" => Ok(FactorDesc::Rational {
            map: rational_map(sub, k)?,
        }),
        other => Err(CliError::Input(format!(
            "factor kind \"{other}\" must be monomial or rational"
        ))),
    }
}

fn rational_map(table: &toml::Table, k: usize) -> Result<ProjectiveRationalMap, CliError> {
    let text = match table.get("map") {
        Some(toml::Value::String(s)) => s.clone(),
        Some(toml::Value::Array(parts)) => {
            let strs: Result<Vec<&str>, CliError> = parts
                .iter()
                .map(|p| {
                    p.as_str()
                        .ok_or_else(|| CliError::Input("map array entries must be strings".into()))
                })
                .collect();
            strs?.join(", ")
        }
        _ => return Err(CliError::Input("missing map = \"...\"".into())),
    };
    ProjectiveRationalMap::parse(&text, k).map_err(CliError::from)
}

fn exponent_matrix(table: &toml::Table, key: &str, k: usize) -> Result<ExponentMatrix, CliError> {
    let m = int_matrix(
        table
            .get(key)
            .ok_or_else(|| CliError::Input(format!("missing {key}")))?,
        k,
        key,
    )?;
    ExponentMatrix::new(m).map_err(CliError::from)
}

fn optional_matrix(
    table: &toml::Table,
    key: &str,
    size: usize,
) -> Result<Option<IntMatrix>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(v) => Ok(Some(int_matrix(v, size, key)?)),
    }
}

fn int_matrix(value: &toml::Value, size: usize, what: &str) -> Result<IntMatrix, CliError> {
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::Input(format!("{what} must be an array of rows")))?;
    if rows.len() != size {
        return Err(CliError::Input(format!(
            "{what} must be {size} x {size}, got {} rows",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(size);
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| CliError::Input(format!("{what} row {i} must be an array")))?;
        if entries.len() != size {
            return Err(CliError::Input(format!(
                "{what} row {i} must have {size} entries"
            )));
        }
        let mut r = Vec::with_capacity(size);
        for (j, e) in entries.iter().enumerate() {
            r.push(big_int(e, &format!("{what}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    IntMatrix::from_rows(out).map_err(CliError::from)
}

fn int_vector(value: &toml::Value, len: usize, what: &str) -> Result<Vec<BigInt>, CliError> {
    let entries = value
        .as_array()
        .ok_or_else(|| CliError::Input(format!("{what} must be an array")))?;
    if entries.len() != len {
        return Err(CliError::Input(format!(
            "{what} must have {len} entries, got {}",
            entries.len()
        )));
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| big_int(e, &format!("{what}[{i}]")))
        .collect()
}

/// Integers may be TOML integers or decimal strings (for values beyond
/// the 64-bit range).
fn big_int(value: &toml::Value, what: &str) -> Result<BigInt, CliError> {
    match value {
        toml::Value::Integer(i) => Ok(BigInt::from(*i)),
        toml::Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| CliError::Input(format!("{what}: \"{s}\" is not a decimal integer"))),
        _ => Err(CliError::Input(format!(
            "{what} must be an integer or a decimal string"
        ))),
    }
}

fn get_str(table: &toml::Table, key: &str) -> Result<String, CliError> {
    table
        .get(key)
        .and_then(|v| v.as_str())
        .map(str::to_string)
        .ok_or_else(|| CliError::Input(format!("missing {key} = \"...\"")))
}

fn get_usize(table: &toml::Table, key: &str) -> Result<usize, CliError> {
    as_usize(
        table
            .get(key)
            .ok_or_else(|| CliError::Input(format!("missing {key}")))?,
        key,
    )
}

fn as_usize(value: &toml::Value, what: &str) -> Result<usize, CliError> {
    value
        .as_integer()
        .filter(|v| *v >= 0)
        .map(|v| v as usize)
        .ok_or_else(|| CliError::Input(format!("{what} must be a nonnegative integer")))
}
