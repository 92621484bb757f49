//! Social welfare orderings over variable-population profiles.
//!
//! Every ordering is exposed through [`compare`], which returns a
//! [`Verdict`] for "left compared with right". Value-based orderings also
//! expose a real-valued representation through [`value`]; comparisons of
//! those values treat differences within the configured tolerance as ties.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::profile::{compensated_sum, lex_cmp, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Better,
    Worse,
    Indifferent,
}

impl Verdict {
    /// The verdict seen from the other side of the comparison.
    pub fn inverse(self) -> Verdict {
        match self {
            Verdict::Better => Verdict::Worse,
            Verdict::Worse => Verdict::Better,
            Verdict::Indifferent => Verdict::Indifferent,
        }
    }

    /// `left ≽ right`.
    pub fn at_least_as_good(self) -> bool {
        self != Verdict::Worse
    }

    pub fn is_strict(self) -> bool {
        self != Verdict::Indifferent
    }

    pub fn from_ordering(ord: Ordering) -> Verdict {
        match ord {
            Ordering::Greater => Verdict::Better,
            Ordering::Less => Verdict::Worse,
            Ordering::Equal => Verdict::Indifferent,
        }
    }

    /// Compares two values with a symmetric tie band of width `tol`.
    pub fn from_values(left: f64, right: f64, tol: f64) -> Verdict {
        if (left - right).abs() <= tol {
            Verdict::Indifferent
        } else if left > right {
            Verdict::Better
        } else {
            Verdict::Worse
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Better => "BETTER",
            Verdict::Worse => "WORSE",
            Verdict::Indifferent => "INDIFFERENT",
        })
    }
}

/// Per-person transform `g`: continuous, strictly increasing, concave, `g(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GKind {
    #[default]
    Identity,
    /// `1 - e^(-x)`. Saturates to 1.0 in binary64 above roughly `x = 37`.
    ExpBounded,
}

impl GKind {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            GKind::Identity => x,
            GKind::ExpBounded => -(-x).exp_m1(),
        }
    }
}

/// Bounded, continuous, strictly increasing outer transform of the
/// Theorem 2 family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FBoundedKind {
    #[default]
    Arctan,
}

impl FBoundedKind {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            FBoundedKind::Arctan => x.atan(),
        }
    }

    pub fn supremum(self) -> f64 {
        match self {
            FBoundedKind::Arctan => FRAC_PI_2,
        }
    }
}

/// Number-dampening function over population sizes (Theorem 3 family).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FDampenKind {
    /// `arctan(n)`: bounded, so replicated low-level populations stay capped.
    #[default]
    Arctan,
    /// `sqrt(n)`
    Sqrt,
    /// `n`, which reduces the positive key to a plain sum.
    Identity,
}

impl FDampenKind {
    pub fn apply(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            FDampenKind::Arctan => n.atan(),
            FDampenKind::Sqrt => n.sqrt(),
            FDampenKind::Identity => n,
        }
    }

    /// `sup_n f(n)`, infinite for unbounded kinds.
    pub fn supremum(self) -> f64 {
        match self {
            FDampenKind::Arctan => FRAC_PI_2,
            FDampenKind::Sqrt | FDampenKind::Identity => f64::INFINITY,
        }
    }
}

macro_rules! kebab_from_str {
    ($ty:ty, $($name:literal => $variant:expr),+ $(,)?) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().replace('_', "-").as_str() {
                    $($name => Ok($variant),)+
                    other => Err(invalid(format!("unknown {}: {other}", stringify!($ty)))),
                }
            }
        }
    };
}

kebab_from_str!(GKind, "identity" => GKind::Identity, "exp-bounded" => GKind::ExpBounded);
kebab_from_str!(FBoundedKind, "arctan" => FBoundedKind::Arctan);
kebab_from_str!(
    FDampenKind,
    "arctan" => FDampenKind::Arctan,
    "sqrt" => FDampenKind::Sqrt,
    "identity" => FDampenKind::Identity,
);

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwoConfig {
    pub g: GKind,
    pub f_bounded: FBoundedKind,
    pub f_dampen: FDampenKind,
    pub critical_level: f64,
    pub tolerance: f64,
}

impl Default for SwoConfig {
    fn default() -> Self {
        Self {
            g: GKind::Identity,
            f_bounded: FBoundedKind::Arctan,
            f_dampen: FDampenKind::Arctan,
            critical_level: 0.0,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SwoConfig {
    pub fn with_critical_level(mut self, c: f64) -> Self {
        self.critical_level = c;
        self
    }

    pub fn with_f_dampen(mut self, f: FDampenKind) -> Self {
        self.f_dampen = f;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("tolerance must be a positive finite real"));
        }
        if !self.critical_level.is_finite() {
            return Err(invalid("critical level must be finite"));
        }
        Ok(())
    }

    fn g_sum(&self, levels: impl IntoIterator<Item = f64>) -> f64 {
        compensated_sum(levels.into_iter().map(|x| self.g.apply(x)))
    }

    fn clgu_sum(&self, u: &Profile) -> f64 {
        let gc = self.g.apply(self.critical_level);
        compensated_sum(u.levels().iter().map(|&x| self.g.apply(x) - gc))
    }
}

/// Registry of orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SwoId {
    Total,
    Average,
    Clgu,
    Theorem2,
    Theorem3,
    LeximinExtended,
    Theorem7,
    ModifiedTheorem2,
}

impl SwoId {
    pub const ALL: [SwoId; 8] = [
        SwoId::Total,
        SwoId::Average,
        SwoId::Clgu,
        SwoId::Theorem2,
        SwoId::Theorem3,
        SwoId::LeximinExtended,
        SwoId::Theorem7,
        SwoId::ModifiedTheorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SwoId::Total => "total",
            SwoId::Average => "average",
            SwoId::Clgu => "clgu",
            SwoId::Theorem2 => "theorem2",
            SwoId::Theorem3 => "theorem3",
            SwoId::LeximinExtended => "leximin",
            SwoId::Theorem7 => "theorem7",
            SwoId::ModifiedTheorem2 => "modified-theorem2",
        }
    }

    /// Whether the ordering is represented by a real-valued function.
    pub fn is_value_based(self) -> bool {
        !matches!(self, SwoId::Theorem3 | SwoId::LeximinExtended)
    }
}

impl fmt::Display for SwoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SwoId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_'))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "total" => SwoId::Total,
            "average" => SwoId::Average,
            "clgu" => SwoId::Clgu,
            "theorem2" => SwoId::Theorem2,
            "theorem3" => SwoId::Theorem3,
            "leximin" | "leximinextended" => SwoId::LeximinExtended,
            "theorem7" => SwoId::Theorem7,
            "modifiedtheorem2" => SwoId::ModifiedTheorem2,
            _ => return Err(invalid(format!("unknown SWO id: {s}"))),
        })
    }
}

pub fn compare(id: SwoId, u: &Profile, v: &Profile, cfg: &SwoConfig) -> Verdict {
    let tol = cfg.tolerance;
    match id {
        SwoId::Total | SwoId::Average | SwoId::Clgu => compare_baseline(id, u, v, cfg),
        SwoId::Theorem2 => Verdict::from_values(value_theorem2(u, cfg), value_theorem2(v, cfg), tol),
        SwoId::Theorem3 => compare_theorem3(u, v, cfg),
        SwoId::LeximinExtended => compare_leximin_extended(u, v),
        SwoId::Theorem7 => compare_theorem7(u, v, cfg),
        SwoId::ModifiedTheorem2 => Verdict::from_values(
            value_modified_theorem2(u, cfg),
            value_modified_theorem2(v, cfg),
            tol,
        ),
    }
}

/// Real-valued representation for value-based orderings. Theorem 7 reports
/// its reduced two-variable form.
pub fn value(id: SwoId, u: &Profile, cfg: &SwoConfig) -> Option<f64> {
    match id {
        SwoId::Total => Some(u.sum()),
        SwoId::Average => Some(u.mean()),
        SwoId::Clgu => Some(cfg.clgu_sum(u)),
        SwoId::Theorem2 => Some(value_theorem2(u, cfg)),
        SwoId::Theorem7 => Some(value_theorem7_reduced(u, cfg)),
        SwoId::ModifiedTheorem2 => Some(value_modified_theorem2(u, cfg)),
        SwoId::Theorem3 | SwoId::LeximinExtended => None,
    }
}

/// Total, average and critical-level generalized utilitarianism.
pub fn compare_baseline(id: SwoId, u: &Profile, v: &Profile, cfg: &SwoConfig) -> Verdict {
    let (a, b) = match id {
        SwoId::Total => (u.sum(), v.sum()),
        SwoId::Average => (u.mean(), v.mean()),
        SwoId::Clgu => (cfg.clgu_sum(u), cfg.clgu_sum(v)),
        other => panic!("{other} is not a baseline ordering"),
    };
    Verdict::from_values(a, b, cfg.tolerance)
}

/// `f(Σ g(u_i))` plus the geometric mean of the positive parts.
pub fn value_theorem2(u: &Profile, cfg: &SwoConfig) -> f64 {
    cfg.f_bounded.apply(cfg.g_sum(u.levels().iter().copied())) + u.geomean_positive_part()
}

/// `arctan Σ g(u_i)` plus the positive geometric part minus the absolute
/// negative geometric part.
pub fn value_modified_theorem2(u: &Profile, cfg: &SwoConfig) -> f64 {
    cfg.g_sum(u.levels().iter().copied()).atan() + u.geomean_positive_part()
        - u.geomean_negative_part_abs()
}

/// Lexicographic keys of the Theorem 3 ordering: the generalized-utilitarian
/// sum over non-positive levels, then the number-dampened sum over positive
/// levels.
pub fn theorem3_keys(u: &Profile, cfg: &SwoConfig) -> (f64, f64) {
    let negative = cfg.g_sum(u.levels().iter().copied().filter(|&x| x <= 0.0));
    let n_pos = u.count_positive();
    let positive = if n_pos == 0 {
        0.0
    } else {
        cfg.f_dampen.apply(n_pos) / n_pos as f64
            * cfg.g_sum(u.levels().iter().copied().filter(|&x| x > 0.0))
    };
    (negative, positive)
}

pub fn compare_theorem3(u: &Profile, v: &Profile, cfg: &SwoConfig) -> Verdict {
    let (un, up) = theorem3_keys(u, cfg);
    let (vn, vp) = theorem3_keys(v, cfg);
    match Verdict::from_values(un, vn, cfg.tolerance) {
        Verdict::Indifferent => Verdict::from_values(up, vp, cfg.tolerance),
        strict => strict,
    }
}

/// Extended leximin: the shorter profile is padded with copies of its own
/// maximum, then ascending sorts are compared from the worst-off upward.
pub fn compare_leximin_extended(u: &Profile, v: &Profile) -> Verdict {
    let pad = |p: &Profile, n: usize| {
        let mut levels = p.sorted_ascending().into_levels();
        let top = *levels.last().expect("profiles are nonempty");
        levels.resize(n, top);
        levels
    };
    let n = u.len().max(v.len());
    Verdict::from_ordering(lex_cmp(&pad(u, n), &pad(v, n)))
}

/// Smaller populations first; equal populations by critical-level sums.
pub fn compare_theorem7(u: &Profile, v: &Profile, cfg: &SwoConfig) -> Verdict {
    match u.len().cmp(&v.len()) {
        Ordering::Less => Verdict::Better,
        Ordering::Greater => Verdict::Worse,
        Ordering::Equal => Verdict::from_values(cfg.clgu_sum(u), cfg.clgu_sum(v), cfg.tolerance),
    }
}

/// `arctan Σ[g(u_i) − g(c)] − (n − 1)π`.
pub fn value_theorem7_reduced(u: &Profile, cfg: &SwoConfig) -> f64 {
    cfg.clgu_sum(u).atan() - (u.len() as f64 - 1.0) * PI
}
