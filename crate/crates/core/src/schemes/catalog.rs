//! Named coefficient sets from the literature and from earlier optimizations.
//!
//! Closed forms are stored as their expression text together with a
//! 50-digit decimal; everything else verbatim as printed.

use super::params::{ParamAssignment, Provenance};
use super::recursive::{suzuki_weights, yoshida_weights};
use super::template::{Chart, Family, Scheme};
use crate::error::{Error, Result};
use crate::hall::parse_ordering;
use crate::scalar::{parse_rational, Rational};

#[derive(Clone, Copy, Debug)]
pub enum Value {
    /// A decimal or `num/den` literal.
    Lit(&'static str),
    /// A closed form and its 50-digit evaluation.
    Closed {
        expr: &'static str,
        value: &'static str,
    },
}

impl Value {
    pub fn text(&self) -> &'static str {
        match self {
            Value::Lit(s) => s,
            Value::Closed { value, .. } => value,
        }
    }

    /// Decimal literals with fewer than 17 significant digits.
    pub fn is_short(&self) -> bool {
        match self {
            Value::Lit(s) if !s.contains('/') => {
                let digits = s.trim_start_matches('-').replace('.', "");
                digits.trim_start_matches('0').len() < 17
            }
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Source {
    Values(&'static [(&'static str, Value)]),
    /// Triple-jump recursion at level q.
    Yoshida(u32),
    /// Five-fold recursion at level q.
    Suzuki(u32),
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub title: &'static str,
    pub n: usize,
    pub family: Family,
    pub m: usize,
    pub chart: Chart,
    pub p: u32,
    pub source: Source,
    pub claimed_epsilon: Option<f64>,
    /// Orderings reported as attaining the minimum; `None` when unspecified.
    pub claimed_orderings: Option<&'static [&'static str]>,
}

pub const FULL_TOLERANCE: f64 = 1e-10;
pub const SHORT_TOLERANCE: f64 = 1e-6;

impl CatalogEntry {
    pub fn scheme(&self) -> Result<Scheme> {
        Scheme::build_with_chart(self.n, self.family, self.m, self.chart)
    }

    pub fn params(&self) -> Result<ParamAssignment<Rational>> {
        let scheme = self.scheme()?;
        let prov = Provenance::Catalog(self.key.to_string());
        match self.source {
            Source::Values(vals) => {
                let mut named = Vec::with_capacity(vals.len());
                for (name, v) in vals {
                    named.push((*name, parse_rational(v.text())?));
                }
                ParamAssignment::from_named(&scheme, named, prov)
            }
            Source::Yoshida(q) | Source::Suzuki(q) => {
                let w = if matches!(self.source, Source::Yoshida(_)) {
                    yoshida_weights(q)
                } else {
                    suzuki_weights(q)
                };
                let free: Vec<Rational> = scheme
                    .free_slots()
                    .into_iter()
                    .map(|i| w[i].clone())
                    .collect();
                ParamAssignment::from_free(&scheme, &free, prov)
            }
        }
    }

    pub fn params_f64(&self) -> Result<ParamAssignment<f64>> {
        Ok(self.params()?.to_f64())
    }

    pub fn has_short_values(&self) -> bool {
        match self.source {
            Source::Values(vals) => vals.iter().any(|(_, v)| v.is_short()),
            _ => false,
        }
    }

    /// Float order-verification tolerance for this entry.
    pub fn tolerance(&self) -> f64 {
        if self.has_short_values() {
            SHORT_TOLERANCE
        } else {
            FULL_TOLERANCE
        }
    }

    pub fn claimed_ordering_vecs(&self) -> Option<Vec<Vec<usize>>> {
        let alpha = crate::free_algebra::Alphabet::unit(self.n);
        self.claimed_orderings.map(|list| {
            list.iter()
                .map(|s| parse_ordering(&alpha, s).expect("catalog orderings are valid"))
                .collect()
        })
    }
}

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn lookup(key: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.key == key)
        .ok_or_else(|| Error::UnknownCatalogEntry(key.to_string()))
}

use Value::{Closed, Lit};

const AB: &[&str] = &["AB"];
const BA: &[&str] = &["BA"];
const ABC: &[&str] = &["ABC"];
const A_FIRST: &[&str] = &["ABC", "ACB"];
const A_NOT_FIRST: &[&str] = &["BAC", "BCA", "CAB", "CBA"];

const SQRT3_A: Value = Closed {
    expr: "(3-sqrt(3))/6",
    value: "0.21132486540518711774542560974902127217619912436494",
};
const SQRT3_B: Value = Closed {
    expr: "(3+sqrt(3))/6",
    value: "0.78867513459481288225457439025097872782380087563506",
};
const SL11_ANALYTIC_W1: Value = Closed {
    expr: "((278-6*sqrt(2145))^(1/3)+(278+6*sqrt(2145))^(1/3)-4)/18",
    value: "0.26160060887008714495923574353674648431974946615344",
};
const SL_W1_CUBE: Value = Closed {
    expr: "(4+2^(4/3)+2^(2/3))/12",
    value: "0.67560359597982881702384390448573041346099968810857",
};
const SL_W2_CUBE: Value = Closed {
    expr: "-(1+2^(1/3))^2/6",
    value: "-0.85120719195965763404768780897146082692199937621714",
};

macro_rules! entry {
    ($key:expr, $title:expr, $n:expr, $fam:ident, $m:expr, $p:expr, $src:expr, $eps:expr, $ord:expr) => {
        entry!($key, $title, $n, $fam, $m, Standard, $p, $src, $eps, $ord)
    };
    ($key:expr, $title:expr, $n:expr, $fam:ident, $m:expr, $chart:ident, $p:expr, $src:expr, $eps:expr, $ord:expr) => {
        CatalogEntry {
            key: $key,
            title: $title,
            n: $n,
            family: Family::$fam,
            m: $m,
            chart: Chart::$chart,
            p: $p,
            source: $src,
            claimed_epsilon: $eps,
            claimed_orderings: $ord,
        }
    };
}

static CATALOG: &[CatalogEntry] =
    &[
        // n = 2, p = 2
        entry!(
            "n2-p2-sl-m3-leapfrog",
            "Leapfrog (Verlet)",
            2,
            SL,
            3,
            2,
            Source::Values(&[]),
            Some(0.28125),
            None
        ),
        entry!(
            "n2-p2-s-m5-mclachlan",
            "McLachlan, second order",
            2,
            S,
            5,
            2,
            Source::Values(&[(
                "a1",
                Closed {
                    expr: "(y^2+6y-2)/(12y), y=(2*sqrt(326)-36)^(1/3)",
                    value: "0.19318332750378357396289976502683403564812072494941",
                },
            )]),
            Some(0.075192),
            None
        ),
        entry!(
            "n2-p2-s-m5-opt",
            "Optimized, second order",
            2,
            S,
            5,
            2,
            Source::Values(&[("a1", SQRT3_A)]),
            Some(0.069778),
            None
        ),
        // n = 2, p = 4
        entry!(
            "n2-p4-sl-m7-yoshida",
            "Forest-Ruth / Yoshida triple jump",
            2,
            SL,
            7,
            4,
            Source::Yoshida(2),
            Some(0.38640),
            Some(AB)
        ),
        entry!(
            "n2-p4-s-m9-mclachlan",
            "McLachlan, m=9",
            2,
            S,
            9,
            4,
            Source::Values(&[
                ("b1", Lit("6/11")),
                (
                    "a1",
                    Closed {
                        expr: "(642+sqrt(471))/3924",
                        value: "0.16913927992207204517500246596517433521386913366802"
                    }
                ),
                (
                    "a2",
                    Closed {
                        expr: "121*(12-sqrt(471))/3924",
                        value: "-0.29918620390405079950863171511942789421149850716360"
                    }
                ),
            ]),
            Some(0.072483),
            Some(BA)
        ),
        entry!(
            "n2-p4-s-m9-omelyan",
            "Omelyan et al., m=9",
            2,
            S,
            9,
            4,
            Source::Values(&[
                ("a1", Lit("0.1720865590295143")),
                ("b1", Lit("0.5915620307551568")),
                ("a2", Lit("-0.1616217622107222")),
            ]),
            Some(0.069248),
            Some(BA)
        ),
        entry!(
            "n2-p4-s-m9-opt",
            "Optimized S, m=9",
            2,
            S,
            9,
            4,
            Source::Values(&[
                ("b1", Lit("-0.35905925216967795307")),
                ("a1", Lit("0.26756486526206148829")),
                ("a2", Lit("-0.034180403245134195595")),
            ]),
            Some(0.068161),
            Some(BA)
        ),
        entry!(
            "n2-p4-s-m9-analytic",
            "Analytic S, m=9",
            2,
            S,
            9,
            4,
            Source::Values(&[
                ("b1", Lit("-1/3")),
                (
                    "a1",
                    Closed {
                        expr: "17/2-(5/2)*sqrt(65/6)",
                        value: "0.27149264244520874273397456511537538913114088829916"
                    }
                ),
                (
                    "a2",
                    Closed {
                        expr: "(3/20)*(sqrt(390)-20)",
                        value: "-0.037737351280275147384230843441535140087210719787699"
                    }
                ),
            ]),
            None,
            None
        ),
        entry!(
            "n2-p4-s-m9-opt2",
            "Optimized S, m=9, second minimum",
            2,
            S,
            9,
            4,
            Source::Values(&[
                ("b1", Lit("0.60417497648530223585")),
                ("a1", Lit("0.17285948240376668244")),
                ("a2", Lit("-0.14265971252922336963")),
            ]),
            Some(0.069172),
            Some(BA)
        ),
        entry!(
            "n2-p4-sl-m11-suzuki",
            "Suzuki fractal, q=2",
            2,
            SL,
            11,
            4,
            Source::Suzuki(2),
            Some(0.216883),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m11-kahanli",
            "Kahan-Li, m=11",
            2,
            SL,
            11,
            4,
            Source::Values(&[("w1", SQRT3_B), ("w2", SQRT3_A)]),
            Some(0.17706),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m11-mclachlan",
            "McLachlan SL, m=11",
            2,
            SL,
            11,
            4,
            Source::Values(&[("w1", Lit("0.28")), ("w2", Lit("0.62546642846767004501"))]),
            Some(0.11155),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m11-omelyan",
            "Omelyan et al. SL, m=11",
            2,
            SL,
            11,
            4,
            Source::Values(&[
                ("w1", Lit("0.3221375960817984")),
                ("w2", Lit("0.5413165481700430"))
            ]),
            Some(0.13365),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m11-opt",
            "Optimized SL, m=11",
            2,
            SL,
            11,
            4,
            Source::Values(&[
                ("w1", Lit("0.25686635900587695859")),
                ("w2", Lit("0.67762403230558747362"))
            ]),
            Some(0.10509),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m11-analytic",
            "Analytic SL, m=11",
            2,
            SL,
            11,
            4,
            Source::Values(&[("w1", SL11_ANALYTIC_W1), ("w2", Lit("2/3"))]),
            None,
            None
        ),
        entry!(
            "n2-p4-sl-m11-opt2",
            "Optimized SL, m=11, second minimum",
            2,
            SL,
            11,
            4,
            Source::Values(&[
                ("w1", Lit("0.75433412633084310590")),
                ("w2", Lit("0.22503541239785228348"))
            ]),
            Some(0.16224),
            Some(AB)
        ),
        entry!(
            "n2-p4-s-m11-mclachlan",
            "McLachlan S, m=11",
            2,
            S,
            11,
            4,
            Source::Values(&[
                ("b1", Lit("2/5")),
                ("b2", Lit("-1/10")),
                (
                    "a1",
                    Closed {
                        expr: "(14-sqrt(19))/108",
                        value: "0.089269454226475244886694611260559114267249963655255"
                    }
                ),
                (
                    "a2",
                    Closed {
                        expr: "(20-7*sqrt(19))/108",
                        value: "-0.097336042636895508015359943398308422351472476635436"
                    }
                ),
            ]),
            Some(0.023685),
            Some(AB)
        ),
        entry!(
            "n2-p4-s-m11-opt",
            "Optimized S, m=11",
            2,
            S,
            11,
            4,
            Source::Values(&[
                ("b1", Lit("0.42652466131587616168")),
                ("b2", Lit("-0.12039526945509726545")),
                ("a1", Lit("0.095848502741203681182")),
                ("a2", Lit("-0.078111158921637922695")),
            ]),
            Some(0.018684),
            Some(BA)
        ),
        entry!(
            "n2-p4-s-m11-analytic",
            "Analytic S, m=11",
            2,
            S,
            11,
            4,
            Source::Values(&[
                ("b1", Lit("3/7")),
                ("b2", Lit("-3/25")),
                (
                    "a1",
                    Closed {
                        expr: "23*(25454-7*sqrt(1125991))/4233384",
                        value: "0.097935957578393201268690134160236724383055940000860",
                    }
                ),
                (
                    "a2",
                    Closed {
                        expr: "(91875-121*sqrt(1125991))/470376",
                        value: "-0.077642981210606096870647339610434688972856267806466",
                    }
                ),
            ]),
            Some(0.019991),
            None
        ),
        entry!(
            "n2-p4-s-m11-opt2",
            "Optimized S, m=11, second minimum",
            2,
            S,
            11,
            4,
            Source::Values(&[
                ("b1", Lit("0.24759965401237406809")),
                ("b2", Lit("-0.11679903600878927064")),
                ("a1", Lit("0.085676159176699987229")),
                ("a2", Lit("0.49899422969605248140")),
            ]),
            Some(0.019074),
            Some(AB)
        ),
        entry!(
            "n2-p4-sl-m13-opt",
            "Optimized SL, m=13",
            2,
            SL,
            13,
            4,
            Source::Values(&[("w1", SL_W1_CUBE), ("w2", SL_W2_CUBE)]),
            Some(0.28728),
            Some(AB)
        ),
        entry!(
            "n2-p4-s-m13-opt",
            "Optimized S, m=13",
            2,
            S,
            13,
            4,
            Source::Values(&[
                ("a2", Lit("0.36781398298317937022")),
                ("b2", Lit("-0.092981212295614937267")),
                ("a3", Lit("-0.068212103824011730130")),
                ("a1", Lit("0.074319284239746906187")),
                // Solved from the order conditions with the other four values
                // held fixed; the commonly printed b1 repeats a1 and fails p = 4.
                ("b1", Lit("0.19691743001645597006")),
            ]),
            Some(0.013886),
            Some(AB)
        ),
        entry!(
        "n2-p4-s-m13-analytic",
        "Analytic S, m=13",
        2, S, 13, 4,
        Source::Values(&[
            ("a2", Lit("7/19")),
            ("b2", Lit("-4/43")),
            ("a3", Lit("-2/29")),
            ("a1", Closed {
                expr: "(28509-4*sqrt(14575449)-3y)/142158, y=sqrt(18920*sqrt(14575449)-71143921)",
                value: "0.071103684872388107810990478121057368980481342662392",
            }),
            ("b1", Closed {
                expr: "(6487-y)/28380, y=sqrt(18920*sqrt(14575449)-71143921)",
                value: "0.19181442548916825708519821930963493757648931521800",
            }),
        ]),
        Some(0.014704),
        None
    ),
        // n = 2, p = 6
        entry!(
            "n2-p6-sl-m15-yoshida",
            "Yoshida numeric solution, m=15",
            2,
            SL,
            15,
            6,
            Source::Values(&[
                ("w1", Lit("0.78451361047755726382")),
                ("w2", Lit("0.23557321335935813368")),
                ("w3", Lit("-1.17767998417887100695")),
            ]),
            Some(0.44573),
            Some(AB)
        ),
        entry!(
            "n2-p6-sl-m19-yoshida",
            "Yoshida triple jump, q=3",
            2,
            SL,
            19,
            6,
            Source::Yoshida(3),
            Some(26.18692),
            Some(AB)
        ),
        entry!(
            "n2-p6-sl-m19-kahanli",
            "Kahan-Li, m=19",
            2,
            SL,
            19,
            6,
            Source::Values(&[
                ("w1", Lit("0.3910302033086847882")),
                ("w2", Lit("0.3340372896111360175")),
                ("w3", Lit("-0.70622728118756134346")),
                ("w4", Lit("0.081877549648059445768")),
            ]),
            Some(0.22167),
            Some(AB)
        ),
        entry!(
            "n2-p6-sl-m19-opt",
            "Optimized SL, m=19",
            2,
            SL,
            19,
            6,
            Source::Values(&[
                ("w1", Lit("0.18793069262651671457")),
                ("w2", Lit("0.5553")),
                ("w3", Lit("0.12837035888423653774")),
                ("w4", Lit("-0.84315275357471264676")),
            ]),
            Some(0.17255),
            Some(BA)
        ),
        entry!(
            "n2-p6-sl-m23-opt",
            "Optimized SL, m=23",
            2,
            SL,
            23,
            6,
            Source::Values(&[
                ("w1", Lit("0.11246183971085248218")),
                ("w2", Lit("0.21955991439348897340")),
                ("w3", Lit("0.47486253551971306793")),
                ("w4", Lit("-0.74")),
                ("w5", Lit("0.018")),
            ]),
            Some(0.17204),
            Some(AB)
        ),
        entry!(
            "n2-p6-sl-m51-suzuki",
            "Suzuki fractal, q=3",
            2,
            SL,
            51,
            6,
            Source::Suzuki(3),
            Some(0.84749),
            Some(BA)
        ),
        // n = 3, p = 1 and 2
        entry!(
            "n3-p1-n-m3-euler",
            "Euler (Lie-Trotter)",
            3,
            N,
            3,
            1,
            Source::Values(&[]),
            Some(4.5),
            None
        ),
        entry!(
            "n3-p2-sl-m5-leapfrog",
            "Leapfrog",
            3,
            SL,
            5,
            2,
            Source::Values(&[]),
            Some(325.0 / 96.0),
            Some(A_FIRST)
        ),
        entry!(
            "n3-p2-s-m9-opt",
            "Optimized S, m=9",
            3,
            S,
            9,
            2,
            Source::Values(&[("a1", Lit("1/6")), ("b1", SQRT3_A)]),
            Some(1.0496),
            Some(A_NOT_FIRST)
        ),
        entry!(
            "n3-p2-sabc-m11-opt",
            "Optimized S-abc, m=11",
            3,
            SAbc,
            11,
            2,
            Source::Values(&[
                ("a1", Lit("0.098049260850570928723")),
                ("b1", Lit("0.20732225423860549595")),
                ("c1", Lit("0.35418178737720793097")),
            ]),
            Some(2.3391),
            None
        ),
        entry!(
            "n3-p2-s-m11-opt",
            "Optimized S, m=11",
            3,
            S,
            11,
            2,
            Source::Values(&[
                ("a1", Lit("1/6")),
                ("b1", SQRT3_A),
                (
                    "b2",
                    Closed {
                        expr: "(4*sqrt(3)-3)/24",
                        value: "0.16367513459481288225457439025097872782380087563506"
                    }
                ),
            ]),
            Some(1.3054),
            Some(A_NOT_FIRST)
        ),
        // n = 3, p = 4
        entry!(
            "n3-p4-sl-m13-yoshida",
            "Forest-Ruth / Yoshida triple jump",
            3,
            SL,
            13,
            4,
            Source::Yoshida(2),
            Some(65.721),
            Some(&["ACB"])
        ),
        entry!(
            "n3-p4-se-m17-opt",
            "Optimized SE, m=17",
            3,
            SE,
            17,
            EulerPair,
            4,
            Source::Values(&[
                ("u", Lit("0.17981480932806103194")),
                ("r1", Lit("-0.057483169922767706230")),
                ("q1", Lit("0.73912878293102653974")),
            ]),
            Some(15.3395),
            Some(ABC)
        ),
        entry!(
            "n3-p4-se-m17-analytic",
            "Analytic SE, m=17",
            3,
            SE,
            17,
            EulerPair,
            4,
            Source::Values(&[
                (
                    "u",
                    Closed {
                        expr: "(57-6*sqrt(30)-sqrt(231-36*sqrt(30)))/102",
                        value: "0.17961921948907337942447781172138859231837395185972",
                    }
                ),
                ("r1", Lit("-1/17")),
                (
                    "q1",
                    Closed {
                        expr: "(3+sqrt(231-36*sqrt(30)))/12",
                        value: "0.73462384681704570760708968636418629553009793420250",
                    }
                ),
            ]),
            None,
            None
        ),
        entry!(
            "n3-p4-sl-m21-suzuki",
            "Suzuki fractal, q=2",
            3,
            SL,
            21,
            4,
            Source::Suzuki(2),
            Some(35.239),
            Some(ABC)
        ),
        entry!(
            "n3-p4-sl-m21-mclachlan",
            "McLachlan SL weights for three terms",
            3,
            SL,
            21,
            4,
            Source::Values(&[("w1", Lit("0.28")), ("w2", Lit("0.62546642846767004501"))]),
            Some(19.479),
            Some(ABC)
        ),
        entry!(
            "n3-p4-sl-m21-omelyan",
            "Omelyan et al. SL weights for three terms",
            3,
            SL,
            21,
            4,
            Source::Values(&[
                ("w1", Lit("0.3221375960817984")),
                ("w2", Lit("0.5413165481700430"))
            ]),
            Some(22.827),
            Some(ABC)
        ),
        entry!(
            "n3-p4-sl-m21-kahanli",
            "Kahan-Li weights for three terms",
            3,
            SL,
            21,
            4,
            Source::Values(&[("w1", SQRT3_B), ("w2", SQRT3_A)]),
            Some(33.346),
            Some(ABC)
        ),
        entry!(
            "n3-p4-sl-m21-opt",
            "Optimized SL, m=21",
            3,
            SL,
            21,
            4,
            Source::Values(&[
                ("w1", Lit("0.25733995540811130577")),
                ("w2", Lit("0.6765218865807686"))
            ]),
            Some(18.968),
            Some(ABC)
        ),
        entry!(
            "n3-p4-sl-m21-analytic",
            "Analytic SL, m=21",
            3,
            SL,
            21,
            4,
            Source::Values(&[("w1", SL11_ANALYTIC_W1), ("w2", Lit("2/3"))]),
            None,
            None
        ),
        entry!(
            "n3-p4-sl-m21-opt2",
            "Optimized SL, m=21, second minimum",
            3,
            SL,
            21,
            4,
            Source::Values(&[
                ("w1", Lit("0.75433412633084310590")),
                ("w2", Lit("0.22503541239785228348"))
            ]),
            Some(29.284),
            Some(ABC)
        ),
        entry!(
            "n3-p4-se-m21-opt",
            "Optimized SE, m=21",
            3,
            SE,
            21,
            EulerPair,
            4,
            Source::Values(&[
                ("u", Lit("0.095968145884398107402")),
                ("q1", Lit("0.43046123580897338276")),
                ("r1", Lit("-0.075403897922216340661")),
                ("q2", Lit("-0.12443549678124729963")),
            ]),
            Some(3.92577),
            Some(&["CAB"])
        ),
        entry!(
            "n3-p4-sl-m25-opt",
            "Optimized SL, m=25",
            3,
            SL,
            25,
            4,
            Source::Values(&[
                (
                    "w1",
                    Closed {
                        expr: "(2+2^(-1/3)+2^(1/3))/6",
                        value: "0.67560359597982881702384390448573041346099968810857",
                    }
                ),
                ("w2", SL_W2_CUBE),
            ]),
            Some(56.179),
            Some(&["ACB"])
        ),
        entry!(
            "n3-p4-se-m25-opt",
            "Optimized SE, m=25",
            3,
            SE,
            25,
            EulerPair,
            4,
            Source::Values(&[
                ("u", Lit("657/10000")),
                (
                    "q1",
                    Closed {
                        expr: "(164817921201-1207*sqrt(186292620253182))/834300125568",
                        value: "0.17780614884830743097284554999795612439030649157110",
                    }
                ),
                ("r1", Lit("42/125")),
                (
                    "q2",
                    Closed {
                        expr: "(21225084384-2887*sqrt(186292620253182))/128353865472",
                        value: "-0.14163426720238391074527176635422106374828477456400",
                    }
                ),
                ("r2", Lit("-28/625")),
            ]),
            Some(3.3799),
            Some(&["BAC"])
        ),
        // n = 3, p = 6
        entry!(
            "n3-p6-sl-m29-opt",
            "Optimized SL, m=29",
            3,
            SL,
            29,
            6,
            Source::Values(&[
                ("w1", Lit("0.78451361047755726382")),
                ("w2", Lit("0.23557321335935813368")),
                ("w3", Lit("-1.1776799841788710069")),
            ]),
            Some(722.85),
            Some(ABC)
        ),
        entry!(
            "n3-p6-sl-m37-yoshida",
            "Yoshida triple jump, q=3",
            3,
            SL,
            37,
            6,
            Source::Yoshida(3),
            Some(68024.0),
            Some(ABC)
        ),
        entry!(
            "n3-p6-sl-m37-kahanli",
            "Kahan-Li weights for three terms",
            3,
            SL,
            37,
            6,
            Source::Values(&[
                ("w1", Lit("0.3910302033086847882")),
                ("w2", Lit("0.3340372896111360175")),
                ("w3", Lit("-0.70622728118756134346")),
                ("w4", Lit("0.081877549648059445768")),
            ]),
            Some(687.06),
            Some(ABC)
        ),
        entry!(
            "n3-p6-sl-m37-opt",
            "Optimized SL, m=37",
            3,
            SL,
            37,
            6,
            Source::Values(&[
                ("w1", Lit("0.16659349375998375835")),
                ("w2", Lit("0.56336178134626382570")),
                ("w3", Lit("0.14590936034821488251")),
                ("w4", Lit("-0.852319424")),
            ]),
            Some(411.08),
            Some(ABC)
        ),
        entry!(
            "n3-p6-sl-m37-opt2",
            "Optimized SL, m=37, second minimum",
            3,
            SL,
            37,
            6,
            Source::Values(&[
                ("w1", Lit("0.30049931385485146980")),
                ("w2", Lit("0.56792684581184873321")),
                ("w3", Lit("-0.89703459487987352595")),
                ("w4", Lit("0.024808114")),
            ]),
            Some(571.12),
            Some(ABC)
        ),
        entry!(
            "n3-p6-sl-m101-suzuki",
            "Suzuki fractal, q=3",
            3,
            SL,
            101,
            6,
            Source::Suzuki(3),
            Some(51034.0),
            Some(ABC)
        ),
    ];
