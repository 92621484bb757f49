//! Well-being profiles over variable populations.
//!
//! A [`Profile`] is a nonempty sequence of finite well-being levels, one per
//! individual. Profiles are written in a small text notation where `k*x`
//! stands for `k` individuals at level `x`:
//!
//! ```
//! use popswo::Profile;
//!
//! let p: Profile = "2*1 -1".parse().unwrap();
//! assert_eq!(p.levels(), &[1.0, 1.0, -1.0]);
//! assert_eq!(p.to_string(), "2*1 -1");
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    levels: Vec<f64>,
}

impl Profile {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(&bad) = levels.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self { levels })
    }

    /// `m` individuals at level `x` (the `m*x` notation).
    pub fn replicate(m: usize, x: f64) -> Result<Self> {
        if m == 0 {
            return Err(invalid("replicate needs m >= 1"));
        }
        Self::new(vec![x; m])
    }

    pub fn singleton(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<f64> {
        self.levels
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    /// Levels of `self` followed by levels of `other`.
    pub fn concat(&self, other: &Profile) -> Profile {
        let mut levels = Vec::with_capacity(self.len() + other.len());
        levels.extend_from_slice(&self.levels);
        levels.extend_from_slice(&other.levels);
        Profile { levels }
    }

    /// Appends `k` individuals at level `x`.
    pub fn with_added(&self, k: usize, x: f64) -> Result<Profile> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let mut levels = self.levels.clone();
        levels.extend(std::iter::repeat_n(x, k));
        Ok(Profile { levels })
    }

    pub fn sum(&self) -> f64 {
        compensated_sum(self.levels.iter().copied())
    }

    /// Arithmetic mean. Shifted by the first level so that a constant profile
    /// returns its level exactly.
    pub fn mean(&self) -> f64 {
        let base = self.levels[0];
        let dev = compensated_sum(self.levels.iter().map(|&x| x - base));
        base + dev / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.levels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.levels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sorted_ascending(&self) -> Profile {
        let mut levels = self.levels.clone();
        levels.sort_by(f64::total_cmp);
        Profile { levels }
    }

    pub fn count_positive(&self) -> usize {
        self.levels.iter().filter(|&&x| x > 0.0).count()
    }

    pub fn is_all_positive(&self) -> bool {
        self.levels.iter().all(|&x| x > 0.0)
    }

    pub fn is_all_negative(&self) -> bool {
        self.levels.iter().all(|&x| x < 0.0)
    }

    /// Geometric mean of the positive parts: `(prod u_i)^(1/n)` when every
    /// level is strictly positive, otherwise exactly zero.
    pub fn geomean_positive_part(&self) -> f64 {
        if !self.is_all_positive() {
            return 0.0;
        }
        log_domain_geomean(&self.levels, |x| x)
    }

    /// Geometric mean of the absolute negative parts: `(prod |u_i|)^(1/n)`
    /// when every level is strictly negative, otherwise exactly zero.
    pub fn geomean_negative_part_abs(&self) -> f64 {
        if !self.is_all_negative() {
            return 0.0;
        }
        log_domain_geomean(&self.levels, f64::abs)
    }

    /// Applies `f` to every level, rejecting non-finite results.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Profile> {
        Profile::new(self.levels.iter().map(|&x| f(x)).collect())
    }

    /// `self + t * dir`, componentwise.
    pub fn along(&self, dir: &Profile, t: f64) -> Result<Profile> {
        if self.len() != dir.len() {
            return Err(invalid(format!(
                "ray base has {} levels but direction has {}",
                self.len(),
                dir.len()
            )));
        }
        Profile::new(
            self.levels
                .iter()
                .zip(&dir.levels)
                .map(|(&b, &d)| b + t * d)
                .collect(),
        )
    }

    /// Reorders levels by `perm`, which must be a permutation of `0..len`.
    pub fn permuted(&self, perm: &[usize]) -> Profile {
        debug_assert_eq!(perm.len(), self.len());
        Profile {
            levels: perm.iter().map(|&i| self.levels[i]).collect(),
        }
    }

    /// Componentwise `self >= other` (same population only).
    pub fn dominates_weakly(&self, other: &Profile) -> bool {
        self.len() == other.len() && self.levels.iter().zip(&other.levels).all(|(a, b)| a >= b)
    }
}

fn log_domain_geomean(levels: &[f64], abs: impl Fn(f64) -> f64) -> f64 {
    let first = abs(levels[0]);
    if levels.iter().all(|&x| abs(x) == first) {
        return first;
    }
    let log_mean = compensated_sum(levels.iter().map(|&x| abs(x).ln())) / levels.len() as f64;
    log_mean.exp()
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Parses the `k*x` notation: whitespace-separated tokens, each a decimal
/// real or `k*x` with `k` a positive integer.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let mut levels = Vec::new();
    for (position, token) in text.split_whitespace().enumerate() {
        let err = |reason: &str| Error::Parse {
            position,
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let (count, value) = match token.split_once('*') {
            Some((k, x)) => {
                let k: usize = k
                    .parse()
                    .map_err(|_| err("replication count must be a positive integer"))?;
                if k == 0 {
                    return Err(err("replication count must be positive"));
                }
                (k, x)
            }
            None => (1, token),
        };
        let x = parse_level(value).ok_or_else(|| err("not a finite decimal real"))?;
        levels.extend(std::iter::repeat_n(x, count));
    }
    Profile::new(levels)
}

fn parse_level(s: &str) -> Option<f64> {
    // Rust's float grammar also accepts "inf"/"nan"; reject anything
    // that is not plain decimal/exponent notation.
    if s.is_empty()
        || !s
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'))
    {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses a profile file: one profile per line, `#` starts a comment line,
/// blank lines are skipped.
pub fn parse_profile_file(text: &str) -> Result<Vec<Profile>> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(parse_profile)
        .collect()
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_profile(s)
    }
}

impl fmt::Display for Profile {
    /// Run-length form; round-trips through [`parse_profile`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.levels.len() {
            let x = self.levels[i];
            let mut run = 1;
            while i + run < self.levels.len() && self.levels[i + run].to_bits() == x.to_bits() {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run}*{x}")?;
            } else {
                write!(f, "{x}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_profile(&s).map_err(serde::de::Error::custom)
    }
}

/// Lexicographic comparison of two equal-length ascending sequences.
pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(ord) => return ord,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    #[test]
    fn parse_replication_notation() {
        let ten = p("10*10");
        assert_eq!(ten.len(), 10);
        assert!(ten.levels().iter().all(|&x| x == 10.0));
        assert_eq!(p("1 2 3").levels(), &[1.0, 2.0, 3.0]);
        assert_eq!(p("2*1 -1").levels(), &[1.0, 1.0, -1.0]);
        assert_eq!(p("  1.5e1\t-0.25 ").levels(), &[15.0, -0.25]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_profile("   "), Err(Error::EmptyProfile));
        assert_eq!(parse_profile(""), Err(Error::EmptyProfile));
        match parse_profile("1 0*3") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_profile("1 2 abc") {
            Err(Error::Parse { position, token, .. }) => {
                assert_eq!(position, 2);
                assert_eq!(token, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_profile("inf"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("NaN"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("-2*3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("1,5"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("1e999"), Err(Error::Parse { .. })));
    }

    #[test]
    fn profile_file_skips_comments() {
        let text = "# intro profiles\n10*10\n\n101*1\n  # indented comment\n";
        let profiles = parse_profile_file(text).unwrap();
        assert_eq!(profiles.len(), 2);
        assert_eq!(profiles[1].len(), 101);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(Profile::new(vec![]), Err(Error::EmptyProfile));
        assert!(matches!(Profile::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(_))));
        assert!(matches!(Profile::replicate(0, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn concat_and_replicate() {
        assert_eq!(p("1 2").concat(&p("3")).levels(), &[1.0, 2.0, 3.0]);
        let sadistic = p("10*10").concat(&p("-1"));
        assert_eq!(sadistic.len(), 11);
        assert_eq!(sadistic.levels()[10], -1.0);
        assert_eq!(p("5").concat(&p("5")).levels(), &[5.0, 5.0]);

        let many = Profile::replicate(101, 1.0).unwrap();
        assert_eq!(many.len(), 101);
        assert_eq!(Profile::replicate(1, 7.0).unwrap().levels(), &[7.0]);
        assert_eq!(Profile::replicate(3, 0.0).unwrap().levels(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn mean_examples() {
        let s = p("10*10 100*1");
        assert_relative_eq!(s.mean(), 200.0 / 110.0, max_relative = 1e-15);
        assert_eq!(p("-3.25").mean(), -3.25);
        assert_eq!(p("4 2").mean(), 3.0);
    }

    #[test]
    fn sorting() {
        assert_eq!(p("3 1 2").sorted_ascending().levels(), &[1.0, 2.0, 3.0]);
        assert_eq!(p("1 1").sorted_ascending().levels(), &[1.0, 1.0]);
        assert_eq!(p("-1 -2").sorted_ascending().levels(), &[-2.0, -1.0]);
    }

    #[test]
    fn geometric_parts() {
        assert_eq!(p("100 100").geomean_positive_part(), 100.0);
        assert_eq!(p("100 100 0").geomean_positive_part(), 0.0);
        assert_relative_eq!(p("2 8").geomean_positive_part(), 4.0, max_relative = 1e-15);

        assert_relative_eq!(p("-2 -8").geomean_negative_part_abs(), 4.0, max_relative = 1e-15);
        assert_eq!(p("-1 5").geomean_negative_part_abs(), 0.0);
        assert_eq!(p("-3").geomean_negative_part_abs(), 3.0);
        assert_eq!(p("0 -3").geomean_negative_part_abs(), 0.0);
    }

    #[test]
    fn geomean_survives_large_populations() {
        // naive products overflow (1e3^200) and underflow (1e-3^200)
        let big = Profile::replicate(199, 1e3).unwrap().with_added(1, 2e3).unwrap();
        let g = big.geomean_positive_part();
        assert!(g.is_finite() && g > 1e3 && g < 2e3);
        let tiny = Profile::replicate(199, 1e-3).unwrap().with_added(1, 2e-3).unwrap();
        let g = tiny.geomean_positive_part();
        assert!(g > 1e-3 && g < 2e-3);
    }

    #[test]
    fn counting_positive_levels() {
        assert_eq!(p("1 0 -1").count_positive(), 1);
        assert_eq!(p("2 3").count_positive(), 2);
        assert_eq!(p("-1 -1").count_positive(), 0);
    }

    #[test]
    fn display_is_run_length() {
        assert_eq!(p("10*10 -1").to_string(), "10*10 -1");
        assert_eq!(p("1 1 2 1").to_string(), "2*1 2 1");
        assert_eq!(p("0.1").to_string(), "0.1");
    }
}
