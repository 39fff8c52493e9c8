use serde::{Deserialize, Serialize};

/// Which of the two WKB solutions: `Plus` is recessive as Re xi -> -inf,
/// `Minus` as Re xi -> +inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1 for `Plus`, -1 for `Minus`.
    pub fn sg(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Direction of travel in Re xi along the ray towards the recessive end.
    pub fn ray_dir(self) -> f64 {
        -self.sg()
    }

    /// max(1, -+ sgn(Re xi) |Re xi|^rho)
    pub fn weight(self, re_xi: f64, rho: f64) -> f64 {
        let v = -self.sg() * re_xi;
        if v > 0.0 {
            v.powf(rho).max(1.0)
        } else {
            1.0
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "plus"),
            Sign::Minus => write!(f, "minus"),
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(format!("unknown sign '{other}'")),
        }
    }
}
