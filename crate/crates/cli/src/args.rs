//! Parsing of command-line values and of the problem file.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use holodom::complex_poly::RationalFn;
use holodom::double_section_flows::{DoubleSection, Section};
use holodom::entire_expr::EntireExpr;
use holodom::sampling::SampleSpec;
use holodom::tangent_catalog::FamilySpec;
use num_complex::Complex;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

pub type Cx = Complex<f64>;

/// `re,im`, or a bare real number.
pub fn complex(s: &str) -> Result<Cx> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().with_context(|| format!("bad number {p:?} in {s:?}"));
    match parts.as_slice() {
        [re] => Ok(Cx::new(num(re)?, 0.0)),
        [re, im] => Ok(Cx::new(num(re)?, num(im)?)),
        _ => bail!("expected re,im but got {s:?}"),
    }
}

/// `re,im;re,im;...`.
pub fn complex_list(s: &str) -> Result<Vec<Cx>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(complex).collect()
}

/// Inline JSON, or `@path` for a file.
pub fn json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(&text_of(s)?).with_context(|| format!("invalid JSON argument {s:?}"))
}

fn text_of(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("cannot read {path}")),
        None => Ok(s.to_string()),
    }
}

fn from_value<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("invalid {what}"))
}

/// An entire expression, or a bare polynomial coefficient list.
fn expr_of(v: Value) -> Result<EntireExpr<f64>> {
    if v.is_array() {
        Ok(EntireExpr::poly(from_value(v, "polynomial")?))
    } else {
        from_value(v, "entire expression")
    }
}

/// A rational function, or a bare polynomial coefficient list.
fn rational_of(v: Value) -> Result<RationalFn<f64>> {
    if v.is_array() {
        Ok(RationalFn::from_poly(from_value(v, "polynomial")?))
    } else {
        from_value(v, "rational function")
    }
}

/// `"inf"` or a rational function.
fn section_of(v: Value) -> Result<Section<f64>> {
    match v {
        Value::String(n) if n == "inf" || n == "infinity" => Ok(Section::Infinity),
        Value::String(n) => bail!("unknown section {n:?}, expected \"inf\" or a rational function"),
        v => Ok(Section::Rational(rational_of(v)?)),
    }
}

pub fn expr(s: &str) -> Result<EntireExpr<f64>> {
    expr_of(json(s)?)
}

pub fn rational(s: &str) -> Result<RationalFn<f64>> {
    rational_of(json(s)?)
}

pub fn section(s: &str) -> Result<Section<f64>> {
    if s == "inf" || s == "infinity" {
        return Ok(Section::Infinity);
    }
    section_of(json(s)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoubleSection {
    a: Value,
    b: Value,
    c: Value,
    #[serde(default)]
    u: Option<Value>,
    #[serde(default)]
    sigma: Option<Value>,
}

pub struct DoubleSectionInput {
    pub d: DoubleSection<f64>,
    pub u: Option<EntireExpr<f64>>,
    pub sigma: Option<Section<f64>>,
}

#[derive(Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringInput {
    pub r: u32,
    pub s: u32,
    pub a: Cx,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    #[serde(default)]
    s: Option<Value>,
    #[serde(default)]
    u: Option<Value>,
    #[serde(default)]
    double_section: Option<RawDoubleSection>,
    #[serde(default)]
    family: Option<FamilySpec<f64>>,
    #[serde(default)]
    covering: Option<CoveringInput>,
    #[serde(default)]
    samples: Option<SampleSpec<f64>>,
}

/// Defaults for every subcommand, read from `--problem`.
#[derive(Default)]
pub struct Problem {
    pub s: Option<RationalFn<f64>>,
    pub u: Option<EntireExpr<f64>>,
    pub double_section: Option<DoubleSectionInput>,
    pub family: Option<FamilySpec<f64>>,
    pub covering: Option<CoveringInput>,
    pub samples: Option<SampleSpec<f64>>,
}

impl Problem {
    pub fn load(path: Option<&Path>) -> Result<Problem> {
        let Some(path) = path else { return Ok(Problem::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let raw: RawProblem =
            serde_json::from_str(&text).with_context(|| format!("invalid problem file {}", path.display()))?;
        let double_section = match raw.double_section {
            Some(d) => Some(DoubleSectionInput {
                d: DoubleSection::new(expr_of(d.a)?, expr_of(d.b)?, expr_of(d.c)?)?,
                u: d.u.map(expr_of).transpose()?,
                sigma: d.sigma.map(section_of).transpose()?,
            }),
            None => None,
        };
        Ok(Problem {
            s: raw.s.map(rational_of).transpose()?,
            u: raw.u.map(expr_of).transpose()?,
            double_section,
            family: raw.family,
            covering: raw.covering,
            samples: raw.samples,
        })
    }
}

/// The command-line value if given, else the problem file entry.
pub fn pick<T>(cli: Option<T>, file: Option<T>, what: &str) -> Result<T> {
    cli.or(file).ok_or_else(|| anyhow!("missing {what}: pass it on the command line or in --problem"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use holodom::complex_poly::Poly;

    #[test]
    fn complex_pairs() {
        assert_eq!(complex("1.5,-2").unwrap(), Cx::new(1.5, -2.0));
        assert_eq!(complex("1e-3").unwrap(), Cx::new(1e-3, 0.0));
        assert_eq!(complex_list("1,0; 0,2").unwrap(), vec![Cx::new(1.0, 0.0), Cx::new(0.0, 2.0)]);
        assert!(complex("1,2,3").is_err());
        assert!(complex("x,1").is_err());
    }

    #[test]
    fn expressions_and_sections() {
        assert_eq!(expr("[[0,0],[1,0]]").unwrap(), EntireExpr::poly(Poly::from_reals(&[0.0, 1.0])));
        assert_eq!(expr(r#"{"op":"var"}"#).unwrap(), EntireExpr::var());
        let s = rational(r#"{"num":[[1,0]],"den":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(s.den().degree(), Some(1));
        assert_eq!(section("inf").unwrap(), Section::Infinity);
        assert!(matches!(section("[[1,0]]").unwrap(), Section::Rational(_)));
        assert!(section(r#""sideways""#).is_err());
    }
}
