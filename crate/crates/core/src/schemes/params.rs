use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::template::{Chart, Family, Scheme};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Where a parameter assignment came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Catalog(String),
    Optimized { seed: u64, detail: String },
    Recursive(String),
    Manual,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Catalog(k) => write!(f, "catalog:{k}"),
            Provenance::Optimized { seed, detail } => write!(f, "optimized(seed={seed}) {detail}"),
            Provenance::Recursive(k) => write!(f, "recursive:{k}"),
            Provenance::Manual => f.write_str("manual"),
        }
    }
}

/// Values for every slot of a scheme. Dependent slots always equal their
/// closures evaluated at the free slots.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamAssignment<S> {
    values: Vec<S>,
    provenance: Provenance,
}

impl<S: Scalar> ParamAssignment<S> {
    pub fn from_free(scheme: &Scheme, free: &[S], provenance: Provenance) -> Result<Self> {
        Ok(ParamAssignment {
            values: scheme.resolve(free)?,
            provenance,
        })
    }

    /// Takes values by slot name. Every free slot must be given; values given
    /// for dependent slots are ignored and re-solved from the closures.
    pub fn from_named<'a>(
        scheme: &Scheme,
        named: impl IntoIterator<Item = (&'a str, S)>,
        provenance: Provenance,
    ) -> Result<Self> {
        let mut given: Vec<Option<S>> = vec![None; scheme.nu()];
        for (name, v) in named {
            let i = scheme.slot_index(name).ok_or_else(|| {
                Error::InvalidParams(format!("{} has no slot `{name}`", scheme.name()))
            })?;
            given[i] = Some(v);
        }
        let mut free = Vec::new();
        for i in scheme.free_slots() {
            match given[i].take() {
                Some(v) => free.push(v),
                None => {
                    return Err(Error::InvalidParams(format!(
                        "missing free slot `{}`",
                        scheme.slots()[i].name
                    )))
                }
            }
        }
        Self::from_free(scheme, &free, provenance)
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, scheme: &Scheme, name: &str) -> Option<&S> {
        scheme.slot_index(name).map(|i| &self.values[i])
    }

    pub fn free_values(&self, scheme: &Scheme) -> Vec<S> {
        scheme
            .free_slots()
            .into_iter()
            .map(|i| self.values[i].clone())
            .collect()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn check_len(&self, scheme: &Scheme) -> Result<()> {
        if self.values.len() != scheme.nu() {
            return Err(Error::InvalidParams(format!(
                "{} has {} slots, assignment has {}",
                scheme.name(),
                scheme.nu(),
                self.values.len()
            )));
        }
        Ok(())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ParamAssignment<T> {
        ParamAssignment {
            values: self.values.iter().map(f).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

impl ParamAssignment<Rational> {
    pub fn to_f64(&self) -> ParamAssignment<f64> {
        self.map(|x| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN))
    }
}

/// Text form of a scheme plus parameters:
///
/// ```toml
/// n = 2
/// family = "S"
/// m = 5
/// ordering = "A<B"
/// order = 2
///
/// [params]
/// a1 = "0.21132486540518711774542560974902127217619912436494"
/// ```
///
/// Values are decimal strings or `num/den` rationals; dependent slots may be
/// omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeDocument {
    pub n: usize,
    pub family: String,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

impl SchemeDocument {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scheme documents always serialize")
    }

    /// Writes free slot values with `digits` decimals.
    pub fn new(scheme: &Scheme, params: &ParamAssignment<Rational>, digits: usize) -> Self {
        let names = scheme.slot_names();
        let params = scheme
            .free_slots()
            .into_iter()
            .map(|i| (names[i].clone(), render_value(&params.values()[i], digits)))
            .collect();
        SchemeDocument {
            n: scheme.n(),
            family: scheme.family().to_string(),
            m: scheme.m(),
            chart: (scheme.chart() != Chart::Standard).then(|| scheme.chart().to_string()),
            ordering: None,
            order: None,
            params,
        }
    }

    pub fn scheme(&self) -> Result<Scheme> {
        let family: Family = self.family.parse()?;
        let chart = match &self.chart {
            Some(c) => c.parse()?,
            None => Chart::Standard,
        };
        Scheme::build_with_chart(self.n, family, self.m, chart)
    }

    pub fn params(&self, scheme: &Scheme) -> Result<ParamAssignment<Rational>> {
        let mut named = Vec::with_capacity(self.params.len());
        for (k, v) in &self.params {
            named.push((k.as_str(), parse_rational(v)?));
        }
        ParamAssignment::from_named(scheme, named, Provenance::Manual)
    }
}

fn render_value(x: &Rational, digits: usize) -> String {
    if x.is_integer() {
        return crate::scalar::fraction_string(x);
    }
    if let Some(places) = decimal_places(x) {
        return format_rational(x, places);
    }
    if x.denom().bits() < 64 {
        crate::scalar::fraction_string(x)
    } else {
        format_rational(x, digits)
    }
}

/// Digits after the point when `x` is a finite decimal.
fn decimal_places(x: &Rational) -> Option<usize> {
    let mut d = x.denom().clone();
    let (two, five) = (num_bigint::BigInt::from(2), num_bigint::BigInt::from(5));
    let (mut a, mut b) = (0, 0);
    while (&d % &two).bits() == 0 {
        d /= &two;
        a += 1;
    }
    while (&d % &five).bits() == 0 {
        d /= &five;
        b += 1;
    }
    (d == num_bigint::BigInt::from(1)).then_some(a.max(b))
}
