//! Command-line forms of the probability and weight schemes:
//! `trivalency`, `constant:<p>`, `uniform:<w>`, `randint:<max>`,
//! `file:<path>`.

use std::path::PathBuf;
use std::str::FromStr;

use wicmax_core::{ProbScheme, WeightScheme};

#[derive(Debug, Clone, PartialEq)]
pub struct ProbArg(pub ProbScheme<f64>);

impl FromStr for ProbArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("trivalency") {
            return Ok(ProbArg(ProbScheme::Trivalency));
        }
        if let Some(rest) = s.strip_prefix("constant:") {
            let p: f64 = rest
                .parse()
                .map_err(|_| format!("bad probability {rest:?}"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("probability {p} outside [0, 1]"));
            }
            return Ok(ProbArg(ProbScheme::Constant(p)));
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(ProbArg(ProbScheme::FromFile(PathBuf::from(rest))));
        }
        Err(format!(
            "unknown probability scheme {s:?} (expected trivalency, constant:<p> or file:<path>)"
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightArg(pub WeightScheme<f64>);

impl FromStr for WeightArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("uniform:") {
            let w: f64 = rest.parse().map_err(|_| format!("bad weight {rest:?}"))?;
            if w < 0.0 {
                return Err(format!("weight {w} must be non-negative"));
            }
            return Ok(WeightArg(WeightScheme::Uniform(w)));
        }
        if let Some(rest) = s.strip_prefix("randint:") {
            let max: u32 = rest.parse().map_err(|_| format!("bad bound {rest:?}"))?;
            if max == 0 {
                return Err("randint bound must be at least 1".into());
            }
            return Ok(WeightArg(WeightScheme::RandomInt(max)));
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(WeightArg(WeightScheme::FromFile(PathBuf::from(rest))));
        }
        Err(format!(
            "unknown weight scheme {s:?} (expected uniform:<w>, randint:<max> or file:<path>)"
        ))
    }
}
