//! ε grids as users write them: coarse to fine, i.e. strictly decreasing,
//! either as a comma list `0.4,0.2,0.1` or as `geom(start,stop,k)`.

use serde::{Deserialize, Serialize};

use crate::error::{RunError, RunResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsGrid {
    List(Vec<f64>),
    Expr(String),
}

impl EpsGrid {
    /// Grid values in the order given, validated.
    pub fn values(&self) -> RunResult<Vec<f64>> {
        let v = match self {
            EpsGrid::List(v) => v.clone(),
            EpsGrid::Expr(s) => parse_eps_grid(s)?,
        };
        check_descending(&v)?;
        Ok(v)
    }

    /// The same values finest first, which is what the core expects.
    pub fn ascending(&self) -> RunResult<Vec<f64>> {
        let mut v = self.values()?;
        v.reverse();
        Ok(v)
    }
}

impl std::str::FromStr for EpsGrid {
    type Err = RunError;

    fn from_str(s: &str) -> RunResult<Self> {
        let grid = EpsGrid::Expr(s.trim().to_string());
        grid.values()?;
        Ok(grid)
    }
}

fn check_descending(v: &[f64]) -> RunResult<()> {
    if v.is_empty() {
        return Err(RunError::config("the ε grid is empty"));
    }
    if let Some(e) = v.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(RunError::config(format!("ε = {e} is not a positive finite number")));
    }
    if let Some(w) = v.windows(2).find(|w| w[0] <= w[1]) {
        return Err(RunError::config(format!(
            "the ε grid must go from coarse to fine (strictly decreasing), but {} is followed by {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn parse_number(s: &str) -> RunResult<f64> {
    s.trim().parse().map_err(|_| RunError::config(format!("'{}' is not a number", s.trim())))
}

/// Parses either notation without checking the order.
pub fn parse_eps_grid(s: &str) -> RunResult<Vec<f64>> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("geom(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(RunError::config(format!("'{s}': expected geom(start,stop,k)")));
        }
        let start = parse_number(parts[0])?;
        let stop = parse_number(parts[1])?;
        let k: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| RunError::config(format!("'{}' is not a point count", parts[2].trim())))?;
        if k < 2 || !(start > 0.0 && stop > 0.0) {
            return Err(RunError::config(format!("'{s}': need k ≥ 2 and positive endpoints")));
        }
        let ratio = stop / start;
        let mut v: Vec<f64> = (0..k).map(|i| start * ratio.powf(i as f64 / (k - 1) as f64)).collect();
        v[k - 1] = stop;
        return Ok(v);
    }
    s.split(',').map(parse_number).collect()
}
