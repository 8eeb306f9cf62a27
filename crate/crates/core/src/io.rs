//! JSON and CSV formats for designs, bounds and model descriptors.
//!
//! Designs are written as
//! `{"q": 3, "points": [[1,0,0], ...], "weights": [...], "weights_exact": ["17/99", ...]}`.
//! `weights` is optional on input (uniform when absent) and `weights_exact`,
//! when present, takes precedence over `weights`. Floats are written with the
//! shortest representation that parses back to the same value.

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::basis::{ModelBasis, Order};
use crate::error::{Error, Result};
use crate::simplex::{ComponentBounds, Design, MixturePoint};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignDoc {
    pub q: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights_exact: Option<Vec<String>>,
}

impl From<&Design> for DesignDoc {
    fn from(d: &Design) -> Self {
        DesignDoc {
            q: d.q(),
            points: d.points().iter().map(|p| p.coords().to_vec()).collect(),
            weights: Some(d.weights().to_vec()),
            weights_exact: d
                .exact_weights()
                .map(|e| e.iter().map(|r| r.to_string()).collect()),
        }
    }
}

impl DesignDoc {
    pub fn into_design(self) -> Result<Design> {
        let points = self.support()?;
        match (self.weights_exact, self.weights) {
            (Some(exact), _) => {
                let ratios = exact
                    .iter()
                    .map(|s| parse_ratio(s))
                    .collect::<Result<Vec<_>>>()?;
                if ratios.len() != points.len() {
                    return Err(Error::InvalidDesign(format!(
                        "{} points but {} exact weights",
                        points.len(),
                        ratios.len()
                    )));
                }
                Design::with_exact_weights(points, ratios)
            }
            (None, Some(w)) => Design::new(points, w),
            (None, None) => Design::uniform(points),
        }
    }

    /// The support points alone, checked against `q`.
    pub fn support(&self) -> Result<Vec<MixturePoint>> {
        if self.q == 0 {
            return Err(Error::InvalidDesign("q must be at least 1".into()));
        }
        self.points
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.len() != self.q {
                    return Err(Error::at_point(
                        i,
                        Error::DimensionMismatch {
                            expected: self.q,
                            found: c.len(),
                        },
                    ));
                }
                MixturePoint::new(c.clone()).map_err(|e| Error::at_point(i, e))
            })
            .collect()
    }
}

pub fn parse_design(json: &str) -> Result<Design> {
    parse_design_doc(json)?.into_design()
}

pub fn parse_design_doc(json: &str) -> Result<DesignDoc> {
    serde_json::from_str(json).map_err(|e| Error::MalformedJson(e.to_string()))
}

pub fn design_to_json(d: &Design) -> String {
    serde_json::to_string_pretty(&DesignDoc::from(d)).expect("design serializes")
}

/// One row per support point: `x1..xq,weight`.
pub fn design_to_csv(d: &Design) -> String {
    let mut out: String = (1..=d.q()).map(|i| format!("x{i},")).collect();
    out.push_str("weight\n");
    for (p, w) in d.iter() {
        for c in p.coords() {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&format!("{w}\n"));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsDoc {
    #[serde(default)]
    pub lower: Option<Vec<f64>>,
    #[serde(default)]
    pub upper: Option<Vec<f64>>,
}

/// Bounds JSON `{"lower": [...], "upper": [...]}`; a missing side defaults
/// to 0 (lower) or 1 (upper).
pub fn parse_bounds(json: &str) -> Result<ComponentBounds> {
    let doc: BoundsDoc =
        serde_json::from_str(json).map_err(|e| Error::MalformedJson(e.to_string()))?;
    match (doc.lower, doc.upper) {
        (Some(l), Some(u)) => ComponentBounds::new(l, u),
        (Some(l), None) => ComponentBounds::lower_only(l),
        (None, Some(u)) => ComponentBounds::upper_only(u),
        (None, None) => Err(Error::InfeasibleBounds(
            "bounds need 'lower' or 'upper'".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BasisDoc {
    pub q: usize,
    pub order: u8,
}

/// Model descriptor JSON `{"q": 3, "order": 2}`.
pub fn parse_basis(json: &str) -> Result<ModelBasis> {
    let doc: BasisDoc =
        serde_json::from_str(json).map_err(|e| Error::MalformedJson(e.to_string()))?;
    ModelBasis::new(doc.q, Order::try_from(doc.order)?)
}

pub fn basis_to_json(b: &ModelBasis) -> String {
    let order = match b.order() {
        Order::First => 1,
        Order::Second => 2,
    };
    serde_json::to_string(&BasisDoc { q: b.q(), order }).expect("basis serializes")
}

/// Parses `"a/b"` or an integer.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::MalformedJson(format!("'{s}' is not a fraction"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

/// Finite values as JSON numbers, infinities as `"inf"` / `"-inf"`.
pub fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn serialize_ratio<S: Serializer>(
    r: &Ratio<i64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Formats `x` with `digits` significant digits, switching to scientific
/// notation for very large or small magnitudes.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}
