//! JSON carpet and column-sequence configs.
//!
//! A carpet is `{"maps":[{"r1":..,"r2":..,"d1":..,"d2":..}, ...]}` where each value
//! is a number or a rational `[num, den]` (integers or integer strings). When every
//! value of every map is rational the system is built exactly.

use serde::Deserialize;
use serde_json::Value;

use crate::carpet::{validate, CarpetSystem, DiagonalMap};
use crate::error::{Error, Result};
use crate::moran::{ColumnSequence, RatioMultiset};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Ratio([i64; 2]),
    Text([String; 2]),
}

impl Number {
    fn rational(&self) -> Result<Option<(i64, i64)>> {
        match self {
            Number::Float(_) => Ok(None),
            Number::Ratio([n, d]) => Ok(Some((*n, *d))),
            Number::Text([n, d]) => {
                let parse = |s: &str| s.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")));
                Ok(Some((parse(n)?, parse(d)?)))
            }
        }
    }

    fn value(&self) -> Result<f64> {
        match self.rational()? {
            None => match self {
                Number::Float(x) => Ok(*x),
                _ => unreachable!(),
            },
            Some((_, 0)) => Err(Error::Parse("zero denominator".into())),
            Some((n, d)) => Ok(n as f64 / d as f64),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    r1: Number,
    r2: Number,
    d1: Number,
    d2: Number,
}

impl MapSpec {
    fn parts(&self) -> [&Number; 4] {
        [&self.r1, &self.r2, &self.d1, &self.d2]
    }
}

#[derive(Debug, Clone, Deserialize)]
struct CarpetConfig {
    maps: Vec<MapSpec>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Read the maps of a carpet config; the output of other commands that carries a
/// `results.config` object is accepted too.
pub fn parse_maps(json: &str) -> Result<Vec<DiagonalMap>> {
    let value: Value = serde_json::from_str(json).map_err(parse_error)?;
    let inner = match value.pointer("/results/config") {
        Some(cfg) if value.get("maps").is_none() => cfg.clone(),
        _ => value,
    };
    let config: CarpetConfig = serde_json::from_value(inner).map_err(parse_error)?;
    let specs = &config.maps;
    let all_rational = specs.iter().all(|m| m.parts().iter().all(|n| !matches!(n, Number::Float(_))));
    specs
        .iter()
        .map(|m| {
            if all_rational {
                let mut parts = [(0, 1); 4];
                for (slot, n) in parts.iter_mut().zip(m.parts()) {
                    *slot = n.rational()?.expect("checked above");
                }
                DiagonalMap::from_rationals(parts)
            } else {
                let [r1, r2, d1, d2] = m.parts().map(|n| n.value());
                Ok(DiagonalMap::new(r1?, r2?, d1?, d2?))
            }
        })
        .collect()
}

/// Parse and validate a carpet config.
pub fn load_system(json: &str) -> Result<CarpetSystem> {
    validate(parse_maps(json)?)
}

/// Config for `system`, with rationals where the maps are exact.
pub fn system_config(system: &CarpetSystem) -> Value {
    let maps: Vec<Value> = system
        .maps()
        .iter()
        .map(|m| match m.rationals() {
            Some([r1, r2, d1, d2]) => {
                let q = |(n, d): (i128, i128)| serde_json::json!([n as i64, d as i64]);
                serde_json::json!({"r1": q(r1), "r2": q(r2), "d1": q(d1), "d2": q(d2)})
            }
            None => serde_json::json!({"r1": m.r1, "r2": m.r2, "d1": m.d1, "d2": m.d2}),
        })
        .collect();
    serde_json::json!({ "maps": maps })
}

/// Column sequence file: `{"preperiod": [[r, ...], ...], "period": [[r, ...], ...]}`
/// with ratios written as numbers or rationals; `preperiod` may be omitted.
#[derive(Debug, Clone, Deserialize)]
struct ColumnsSpec {
    #[serde(default)]
    preperiod: Vec<Vec<RatioSpec>>,
    period: Vec<Vec<RatioSpec>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RatioSpec {
    Float(f64),
    Ratio([i64; 2]),
}

impl RatioSpec {
    fn value(&self) -> Result<f64> {
        match *self {
            RatioSpec::Float(x) => Ok(x),
            RatioSpec::Ratio([_, 0]) => Err(Error::Parse("zero denominator".into())),
            RatioSpec::Ratio([n, d]) => Ok(n as f64 / d as f64),
        }
    }
}

pub fn load_columns(json: &str) -> Result<ColumnSequence> {
    let spec: ColumnsSpec = serde_json::from_str(json).map_err(parse_error)?;
    let convert = |steps: &[Vec<RatioSpec>]| -> Result<Vec<RatioMultiset>> {
        steps.iter().map(|s| RatioMultiset::new(s.iter().map(RatioSpec::value).collect::<Result<Vec<_>>>()?)).collect()
    };
    ColumnSequence::new(convert(&spec.preperiod)?, convert(&spec.period)?)
}
