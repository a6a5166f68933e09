//! Plain-text (TOML) map descriptions.
//!
//! ```toml
//! family = "symmetric"
//! a = "6/5"
//! ```
//!
//! `beta` families take `beta` and `alpha`. `custom` maps list `domain`, `c`
//! and, per branch, `breakpoints` (one more than `slopes`), `slopes`, and
//! `intercepts`.

use serde::{Deserialize, Serialize};

use super::{AffinePiece, BranchFn, LorenzMap};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapFamily {
    Symmetric,
    Beta,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDescription {
    pub breakpoints: Vec<String>,
    pub slopes: Vec<String>,
    pub intercepts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDescription {
    pub family: MapFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<BranchDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<BranchDescription>,
}

impl MapDescription {
    pub fn symmetric(a: &str) -> Self {
        MapDescription { a: Some(a.to_string()), ..Self::empty(MapFamily::Symmetric) }
    }

    pub fn beta(beta: &str, alpha: &str) -> Self {
        MapDescription { beta: Some(beta.to_string()), alpha: Some(alpha.to_string()), ..Self::empty(MapFamily::Beta) }
    }

    fn empty(family: MapFamily) -> Self {
        MapDescription { family, a: None, beta: None, alpha: None, domain: None, c: None, left: None, right: None }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("map descriptions always serialize")
    }

    /// Parses the numbers and builds the validated map.
    pub fn build(&self) -> Result<LorenzMap> {
        match self.family {
            MapFamily::Symmetric => LorenzMap::symmetric(required(&self.a, "a")?),
            MapFamily::Beta => LorenzMap::beta(required(&self.beta, "beta")?, required(&self.alpha, "alpha")?),
            MapFamily::Custom => {
                let [a, b] = self.domain.as_ref().ok_or_else(|| missing("domain"))?;
                let (a, b): (Scalar, Scalar) = (a.parse()?, b.parse()?);
                let c = required(&self.c, "c")?;
                let left = branch(self.left.as_ref().ok_or_else(|| missing("left"))?, "left")?;
                let right = branch(self.right.as_ref().ok_or_else(|| missing("right"))?, "right")?;
                LorenzMap::new(a, b, c, left, right)
            }
        }
    }
}

fn missing(key: &str) -> Error {
    Error::Parse(format!("missing key '{key}'"))
}

fn required(value: &Option<String>, key: &str) -> Result<Scalar> {
    value.as_deref().ok_or_else(|| missing(key))?.parse()
}

fn branch(desc: &BranchDescription, name: &str) -> Result<BranchFn> {
    let n = desc.slopes.len();
    if n == 0 || desc.intercepts.len() != n || desc.breakpoints.len() != n + 1 {
        return Err(Error::Parse(format!("{name} branch needs k slopes, k intercepts and k+1 breakpoints")));
    }
    let parse_all = |v: &[String]| v.iter().map(|s| s.parse::<Scalar>()).collect::<Result<Vec<_>>>();
    let bps = parse_all(&desc.breakpoints)?;
    let slopes = parse_all(&desc.slopes)?;
    let icpts = parse_all(&desc.intercepts)?;
    let pieces = (0..n)
        .map(|i| AffinePiece::new(bps[i].clone(), bps[i + 1].clone(), slopes[i].clone(), icpts[i].clone()))
        .collect();
    Ok(BranchFn::new(pieces))
}
