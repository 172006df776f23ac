use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limits on the searches that have no a-priori termination bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Maximum continued-fraction steps before a point is declared undecided.
    pub cf_steps: usize,
    /// Coordinate box `[-bound, bound]` for seeding form enumeration.
    pub coord_bound: i64,
    /// Bit length a walk coordinate may grow beyond twice the starting height.
    /// Periodic walks revisit finitely many points, so runaway growth means the
    /// point is not periodic.
    pub height_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cf_steps: 10_000,
            coord_bound: 12,
            height_bits: 96,
        }
    }
}

impl Budget {
    /// Parses overrides like `cf_steps=500,coord_bound=8` on top of the defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut out = Budget::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("budget entry {item:?} is not key=value"))
            })?;
            let bad = || Error::InvalidArgument(format!("bad budget value in {item:?}"));
            match key.trim() {
                "cf_steps" => out.cf_steps = value.trim().parse().map_err(|_| bad())?,
                "coord_bound" => out.coord_bound = value.trim().parse().map_err(|_| bad())?,
                "height_bits" => out.height_bits = value.trim().parse().map_err(|_| bad())?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown budget key {other:?}"
                    )))
                }
            }
        }
        if out.coord_bound < 1 || out.cf_steps < 1 || out.height_bits < 1 {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let b = Budget::parse("cf_steps=50, coord_bound=3").unwrap();
        assert_eq!(
            b,
            Budget {
                cf_steps: 50,
                coord_bound: 3,
                ..Budget::default()
            }
        );
        assert_eq!(Budget::parse("height_bits=64").unwrap().height_bits, 64);
        assert_eq!(Budget::parse("").unwrap(), Budget::default());
        assert!(Budget::parse("depth=3").is_err());
        assert!(Budget::parse("cf_steps=-1").is_err());
    }
}
