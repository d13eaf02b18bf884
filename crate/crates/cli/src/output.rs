//! Output schemas and formatting.
//!
//! Rationals are serialized as exact strings ("22/7"), never floats, so the
//! interface preserves exactness; JSON output round-trips through the typed
//! schema byte-identically.

use serde::{Deserialize, Serialize};

use resbound_core::{BoundReport, BoundsRow, DegreePolynomial, OrderSpec, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (use text, json or csv)")),
        }
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct TruncationMeta {
    pub min_z: i32,
    pub min_w: i32,
    pub max_w: i32,
    pub max_h: u32,
    pub multiplier: u32,
}

impl TruncationMeta {
    pub fn new(spec: &OrderSpec, multiplier: u32) -> Self {
        TruncationMeta {
            min_z: spec.min_z,
            min_w: spec.min_w,
            max_w: spec.max_w,
            max_h: spec.max_h,
            multiplier,
        }
    }
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct Meta {
    pub n: u32,
    pub epsilon: String,
    /// `"symbolic"` or the exact rational value.
    pub delta: String,
    pub truncation: TruncationMeta,
    /// Exponent of the factored-out ample-twist power.
    pub normalization_power: u32,
}

/// One `d`-power of the integral, split into its `δ`-free and `δ`-linear
/// parts (the coefficients are always linear in `δ`).
#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct PolyEntry {
    pub d_power: u32,
    pub delta0: String,
    pub delta1: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct IntegralOutput {
    pub meta: Meta,
    pub polynomial: Vec<PolyEntry>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub d: u64,
    pub value: String,
    pub positive: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct VerifyOutput {
    pub meta: Meta,
    pub polynomial: Vec<PolyEntry>,
    pub report: VerifyReport,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct BoundsOutput {
    pub rows: Vec<BoundsRow>,
    /// Full certification records for the rows where the pipeline ran.
    pub reports: Vec<BoundReport>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct OracleOutput {
    pub total: u32,
    pub failures: u32,
    pub transcript: Vec<String>,
    pub first_counterexample: Option<String>,
}

/// Splits the polynomial into entries, either symbolically or at a fixed δ.
pub fn poly_entries(poly: &DegreePolynomial, delta: Option<&Rational>) -> Vec<PolyEntry> {
    (1..=poly.n + 1)
        .map(|i| {
            let (a, b) = poly.delta_split(i);
            match delta {
                None => PolyEntry {
                    d_power: i,
                    delta0: a.to_string(),
                    delta1: b.to_string(),
                },
                Some(dl) => PolyEntry {
                    d_power: i,
                    delta0: (&a + &(&b * dl)).to_string(),
                    delta1: "0".to_string(),
                },
            }
        })
        .collect()
}

pub fn polynomial_text(poly: &DegreePolynomial, delta: Option<&Rational>) -> String {
    let mut parts = Vec::new();
    for i in (1..=poly.n + 1).rev() {
        let c = match delta {
            None => poly.coeff(i).clone(),
            Some(dl) => poly.coeff(i).eval_delta(dl),
        };
        if c.is_zero() {
            continue;
        }
        let var = if i == 1 {
            "d".to_string()
        } else {
            format!("d^{i}")
        };
        parts.push(format!("({c}) {var}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        format!("p(d) = {}", parts.join(" + "))
    }
}

pub fn integral_csv(entries: &[PolyEntry]) -> String {
    let mut out = String::from("d_power,delta0,delta1\n");
    for e in entries {
        out.push_str(&format!("{},{},{}\n", e.d_power, e.delta0, e.delta1));
    }
    out
}

pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let mut out =
        String::from("n,ggl_theorem_bound,ggl_computed_bound,kobayashi_bound,certified\n");
    for r in rows {
        let certified = match r.certified {
            None => "",
            Some(true) => "true",
            Some(false) => "false",
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.ggl_theorem_bound, r.ggl_computed_bound, r.kobayashi_bound, certified
        ));
    }
    out
}

pub fn bounds_text(rows: &[BoundsRow], reports: &[BoundReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>4} {:>20} {:>20} {:>20} {:>10}\n",
        "n", "ggl_theorem_bound", "ggl_computed_bound", "kobayashi_bound", "certified"
    ));
    for r in rows {
        let certified = match r.certified {
            None => "-",
            Some(true) => "yes",
            Some(false) => "FAILED",
        };
        out.push_str(&format!(
            "{:>4} {:>20} {:>20} {:>20} {:>10}\n",
            r.n, r.ggl_theorem_bound, r.ggl_computed_bound, r.kobayashi_bound, certified
        ));
    }
    for rep in reports {
        out.push_str(&format!(
            "n={}: certified={} from={} (dominance hypothesis: {})\n",
            rep.n,
            rep.certified,
            rep.certified_positive_from
                .as_ref()
                .map(|r| r.to_string())
                .unwrap_or_else(|| "-".into()),
            rep.fujiwara_hypothesis_holds,
        ));
        for e in rep.estimates_log.iter().filter(|e| !e.holds) {
            out.push_str(&format!(
                "n={}: audit {} did not hold: {} !< {}\n",
                rep.n, e.name, e.lhs, e.rhs
            ));
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}
