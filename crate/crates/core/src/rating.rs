//! Qualitative rating scale and its mapping onto numeric ranges.
//!
//! Seven ordered levels partition `[0, 1]` at the breakpoints
//! `0, 0.01, 0.05, 0.2, 0.5, 0.7, 0.9, 1`. Adjacent levels share an
//! endpoint; [`classify_value`] resolves a value sitting exactly on a
//! breakpoint to the higher level.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::BoundedRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RatingLevel {
    Negligible,
    VeryLow,
    Low,
    Moderate,
    Considerable,
    High,
    VeryHigh,
}

const BREAKPOINTS: [f64; 8] = [0.0, 0.01, 0.05, 0.2, 0.5, 0.7, 0.9, 1.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatingError {
    #[error("unknown rating level `{0}`")]
    UnknownLevel(String),
    #[error("rating span `{label}` is reversed: {from} ranks above {to}")]
    ReversedSpan {
        label: String,
        from: RatingLevel,
        to: RatingLevel,
    },
    #[error("value {0} lies outside [0, 1]")]
    OutOfUnitInterval(f64),
}

impl RatingLevel {
    pub const ALL: [RatingLevel; 7] = [
        RatingLevel::Negligible,
        RatingLevel::VeryLow,
        RatingLevel::Low,
        RatingLevel::Moderate,
        RatingLevel::Considerable,
        RatingLevel::High,
        RatingLevel::VeryHigh,
    ];

    fn index(self) -> usize {
        self as usize
    }

    /// Human-readable name, e.g. `"Very Low"`.
    pub fn label(self) -> &'static str {
        match self {
            RatingLevel::Negligible => "Negligible",
            RatingLevel::VeryLow => "Very Low",
            RatingLevel::Low => "Low",
            RatingLevel::Moderate => "Moderate",
            RatingLevel::Considerable => "Considerable",
            RatingLevel::High => "High",
            RatingLevel::VeryHigh => "Very High",
        }
    }

    pub fn range(self) -> BoundedRange {
        rating_to_range(self)
    }
}

impl fmt::Display for RatingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RatingLevel {
    type Err = RatingError;

    /// Case-insensitive; spaces, underscores and hyphens are ignored so
    /// `"Very Low"`, `"very_low"` and `"VeryLow"` all parse.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_' && *c != '-')
            .flat_map(char::to_lowercase)
            .collect();
        let level = match key.as_str() {
            "negligible" => RatingLevel::Negligible,
            "verylow" => RatingLevel::VeryLow,
            "low" => RatingLevel::Low,
            "moderate" => RatingLevel::Moderate,
            "considerable" => RatingLevel::Considerable,
            "high" => RatingLevel::High,
            "veryhigh" => RatingLevel::VeryHigh,
            _ => return Err(RatingError::UnknownLevel(s.trim().to_string())),
        };
        Ok(level)
    }
}

pub fn rating_to_range(level: RatingLevel) -> BoundedRange {
    let i = level.index();
    BoundedRange {
        lo: BREAKPOINTS[i],
        hi: BREAKPOINTS[i + 1],
    }
}

/// Resolves a label such as `"Low"` or `"Negligible to Moderate"` to the
/// numeric range it covers.
pub fn parse_rating_label(label: &str) -> Result<BoundedRange, RatingError> {
    let (from, to) = parse_span(label)?;
    Ok(BoundedRange {
        lo: rating_to_range(from).lo,
        hi: rating_to_range(to).hi,
    })
}

/// Splits `"X to Y"` into its two levels; a single level yields `(X, X)`.
pub fn parse_span(label: &str) -> Result<(RatingLevel, RatingLevel), RatingError> {
    let lower = label.to_ascii_lowercase();
    match lower.find(" to ") {
        Some(at) => {
            let from: RatingLevel = label[..at].parse()?;
            let to: RatingLevel = label[at + 4..].parse()?;
            if to < from {
                return Err(RatingError::ReversedSpan {
                    label: label.trim().to_string(),
                    from,
                    to,
                });
            }
            Ok((from, to))
        }
        None => {
            let level: RatingLevel = label.parse()?;
            Ok((level, level))
        }
    }
}

/// Level whose canonical range contains `x`, lo-inclusive and
/// hi-exclusive, with `1.0` mapping to [`RatingLevel::VeryHigh`].
pub fn classify_value(x: f64) -> Result<RatingLevel, RatingError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(RatingError::OutOfUnitInterval(x));
    }
    let level = RatingLevel::ALL
        .iter()
        .copied()
        .find(|l| x < BREAKPOINTS[l.index() + 1])
        .unwrap_or(RatingLevel::VeryHigh);
    Ok(level)
}

/// Inverse of [`parse_rating_label`]: the canonical label for a range that
/// spans whole levels exactly, or `None` when the endpoints fall between
/// breakpoints.
pub fn label_for_range(range: &BoundedRange) -> Option<String> {
    let from = RatingLevel::ALL
        .iter()
        .copied()
        .find(|l| rating_to_range(*l).lo == range.lo)?;
    let to = RatingLevel::ALL
        .iter()
        .copied()
        .find(|l| rating_to_range(*l).hi == range.hi)?;
    if to < from {
        return None;
    }
    if from == to {
        Some(from.label().to_string())
    } else {
        Some(format!("{} to {}", from.label(), to.label()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(lo: f64, hi: f64) -> BoundedRange {
        BoundedRange { lo, hi }
    }

    #[test]
    fn canonical_ranges() {
        assert_eq!(rating_to_range(RatingLevel::Low), r(0.05, 0.2));
        assert_eq!(rating_to_range(RatingLevel::Negligible), r(0.0, 0.01));
        assert_eq!(rating_to_range(RatingLevel::VeryHigh), r(0.9, 1.0));
    }

    #[test]
    fn ranges_tile_the_unit_interval() {
        assert_eq!(rating_to_range(RatingLevel::Negligible).lo, 0.0);
        assert_eq!(rating_to_range(RatingLevel::VeryHigh).hi, 1.0);
        for pair in RatingLevel::ALL.windows(2) {
            let (a, b) = (rating_to_range(pair[0]), rating_to_range(pair[1]));
            assert!(a.lo < a.hi);
            assert_eq!(a.hi, b.lo);
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn spans() {
        assert_eq!(parse_rating_label("Negligible to Moderate").unwrap(), r(0.0, 0.5));
        assert_eq!(parse_rating_label("Moderate to Considerable").unwrap(), r(0.2, 0.7));
        assert_eq!(parse_rating_label("negligible to negligible").unwrap(), r(0.0, 0.01));
        assert_eq!(parse_rating_label("  very low TO Very High ").unwrap(), r(0.01, 1.0));
    }

    #[test]
    fn span_errors() {
        assert!(matches!(
            parse_rating_label("Severe"),
            Err(RatingError::UnknownLevel(s)) if s == "Severe"
        ));
        assert!(matches!(
            parse_rating_label("Low to Apocalyptic"),
            Err(RatingError::UnknownLevel(_))
        ));
        assert!(matches!(
            parse_rating_label("High to Low"),
            Err(RatingError::ReversedSpan {
                from: RatingLevel::High,
                to: RatingLevel::Low,
                ..
            })
        ));
    }

    #[test]
    fn classify_examples() {
        let cube_root = 0.0066f64.cbrt();
        assert!((0.05..0.2).contains(&cube_root));
        assert_eq!(classify_value(cube_root).unwrap(), RatingLevel::Low);
        assert_eq!(classify_value(0.1876).unwrap(), RatingLevel::Low);
        assert_eq!(classify_value(0.0).unwrap(), RatingLevel::Negligible);
        assert_eq!(classify_value(0.2).unwrap(), RatingLevel::Moderate);
        assert_eq!(classify_value(1.0).unwrap(), RatingLevel::VeryHigh);
        assert_eq!(classify_value(0.9).unwrap(), RatingLevel::VeryHigh);
        assert!(classify_value(-0.01).is_err());
        assert!(classify_value(1.5).is_err());
        assert!(classify_value(f64::NAN).is_err());
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(label_for_range(&r(0.0, 0.5)).as_deref(), Some("Negligible to Moderate"));
        assert_eq!(label_for_range(&r(0.05, 0.2)).as_deref(), Some("Low"));
        assert_eq!(label_for_range(&r(0.05, 0.3)), None);
        for a in RatingLevel::ALL {
            for b in RatingLevel::ALL.iter().filter(|b| **b >= a) {
                let label = format!("{} to {}", a, b);
                let range = parse_rating_label(&label).unwrap();
                assert_eq!(parse_rating_label(&label_for_range(&range).unwrap()).unwrap(), range);
            }
        }
    }

    proptest! {
        #[test]
        fn classified_level_contains_value(x in 0.0f64..=1.0) {
            let level = classify_value(x).unwrap();
            let range = rating_to_range(level);
            prop_assert!(range.lo <= x);
            prop_assert!(x < range.hi || (x == 1.0 && level == RatingLevel::VeryHigh));
        }

        #[test]
        fn single_level_equals_canonical(i in 0usize..7) {
            let level = RatingLevel::ALL[i];
            prop_assert_eq!(parse_rating_label(level.label()).unwrap(), rating_to_range(level));
        }

        #[test]
        fn span_takes_outer_endpoints(i in 0usize..7, j in 0usize..7) {
            let (a, b) = (RatingLevel::ALL[i.min(j)], RatingLevel::ALL[i.max(j)]);
            let range = parse_rating_label(&format!("{a} to {b}")).unwrap();
            prop_assert_eq!(range.lo, rating_to_range(a).lo);
            prop_assert_eq!(range.hi, rating_to_range(b).hi);
        }
    }
}
