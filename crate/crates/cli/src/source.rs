//! Resolves `<name|file>` arguments to a scheme and parameters.

use std::path::Path;

use lts_core::schemes::catalog::{FULL_TOLERANCE, SHORT_TOLERANCE};
use lts_core::schemes::{catalog, lookup, CatalogEntry, SchemeDocument};
use lts_core::{Family, ParamAssignment, Rational, Scheme};

use crate::CliError;

/// Optional filters used to pick a catalog entry from a short name such as
/// `leapfrog` or `yoshida`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Filter {
    pub n: Option<usize>,
    pub order: Option<u32>,
    pub family: Option<Family>,
    pub m: Option<usize>,
}

impl Filter {
    pub fn accepts(&self, e: &CatalogEntry) -> bool {
        self.n.is_none_or(|n| e.n == n)
            && self.order.is_none_or(|p| e.p == p)
            && self.family.is_none_or(|f| e.family == f)
            && self.m.is_none_or(|m| e.m == m)
    }
}

pub struct Source {
    pub label: String,
    pub scheme: Scheme,
    pub params: ParamAssignment<Rational>,
    /// Order stated by the catalog entry or the file.
    pub order: Option<u32>,
    pub tolerance: f64,
    pub entry: Option<&'static CatalogEntry>,
}

impl Source {
    pub fn order_or(&self, requested: Option<u32>) -> Result<u32, CliError> {
        requested
            .or(self.order)
            .ok_or_else(|| CliError::Usage(format!("{}: no order known, pass --order", self.label)))
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.params.to_f64().values().to_vec()
    }
}

/// Catalog entries matching `name` exactly or by its trailing tag.
pub fn matches(name: &str, filter: &Filter) -> Vec<&'static CatalogEntry> {
    if let Ok(e) = lookup(name) {
        return vec![e];
    }
    let suffix = format!("-{name}");
    catalog()
        .iter()
        .filter(|e| e.key.ends_with(&suffix) && filter.accepts(e))
        .collect()
}

fn is_short(value: &str) -> bool {
    if value.contains('/') {
        return false;
    }
    let digits: String = value.chars().filter(|c| c.is_ascii_digit()).collect();
    value.contains('.') && digits.trim_start_matches('0').len() < 17
}

pub fn resolve(arg: &str, filter: &Filter) -> Result<Source, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        let doc =
            SchemeDocument::from_toml(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        let scheme = doc.scheme()?;
        let params = doc.params(&scheme)?;
        let tolerance = if doc.params.values().any(|v| is_short(v)) {
            SHORT_TOLERANCE
        } else {
            FULL_TOLERANCE
        };
        return Ok(Source {
            label: arg.to_string(),
            scheme,
            params,
            order: doc.order,
            tolerance,
            entry: None,
        });
    }
    let found = matches(arg, filter);
    let entry = match found.as_slice() {
        [e] => *e,
        [] => {
            return Err(CliError::Usage(format!(
                "`{arg}` is neither a file nor a catalog name (see `lts list`)"
            )))
        }
        many => {
            let keys: Vec<&str> = many.iter().map(|e| e.key).collect();
            return Err(CliError::Usage(format!(
                "`{arg}` is ambiguous: {}; narrow it with --n, --order, --family or --m",
                keys.join(", ")
            )));
        }
    };
    Ok(Source {
        label: entry.key.to_string(),
        scheme: entry.scheme()?,
        params: entry.params()?,
        order: Some(entry.p),
        tolerance: entry.tolerance(),
        entry: Some(entry),
    })
}
