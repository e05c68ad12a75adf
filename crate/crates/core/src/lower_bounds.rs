//! Lower bounds on the Neyman-Pearson boundary from f-divergence values.
//!
//! For a convex generator `f` and `D = D_f(P||Q)`, every achievable point
//! satisfies `(1-a) f(b/(1-a)) + a f((1-b)/a) <= D`. The set cut out by that
//! inequality is convex, so the smallest feasible `b` below the line of
//! ignorance is found by bisection. Several generators have closed forms.

use std::fmt;
use std::str::FromStr;

use crate::curve::{Line, Orientation};
use crate::distributions::{lr_profile, CategoricalPair};
use crate::divergences::{f_divergence, parse_args, FGenerator};
use crate::error::{Error, Result};
use crate::numeric::{bisect_threshold, BISECTION_MAX_ITER, BISECTION_TOL};

/// `(1-a) f(b/(1-a)) + a f((1-b)/a)`, with perspective limits at the edges.
pub fn divergence_lhs(gen: &FGenerator, alpha: f64, beta: f64) -> f64 {
    gen.perspective(1.0 - alpha, beta) + gen.perspective(alpha, 1.0 - beta)
}

/// The same functional with the roles of `P` and `Q` exchanged:
/// `b f((1-a)/b) + (1-b) f(a/(1-b))`.
pub fn reversed_lhs(gen: &FGenerator, alpha: f64, beta: f64) -> f64 {
    gen.perspective(beta, 1.0 - alpha) + gen.perspective(1.0 - beta, alpha)
}

/// Relative tolerance when comparing a divergence functional to a divergence value.
pub const LHS_SLACK: f64 = 1e-12;

/// Smallest `beta` in `[0, 1 - alpha]` with `lhs(beta) <= divergence`.
///
/// `lhs` is convex in `beta`, so the feasible set is an interval. When it
/// contains `1 - alpha` (always the case for `f(1) = 0`) a bisection on
/// `[0, 1 - alpha]` finds its left end. Otherwise the interval sits around the
/// minimizer of `lhs`, located first by golden-section search. If even the
/// minimum exceeds `divergence` no pair has that divergence and the ignorance
/// value `1 - alpha` is returned. Comparisons carry a relative slack of
/// [`LHS_SLACK`] so rounding in `divergence` cannot cut off flat stretches of
/// `lhs` that sit exactly at the divergence.
fn smallest_feasible<L: Fn(f64) -> f64>(alpha: f64, divergence: f64, lhs: L) -> f64 {
    if alpha >= 1.0 {
        return 0.0;
    }
    let top = 1.0 - alpha;
    let limit = divergence + LHS_SLACK * divergence.abs();
    let accept = |beta: f64| lhs(beta) <= limit;
    let hi = if accept(top) {
        top
    } else {
        let m = convex_argmin(&lhs, 0.0, top);
        if !accept(m) {
            return top;
        }
        m
    };
    bisect_threshold(0.0, hi, accept)
}

fn convex_argmin<L: Fn(f64) -> f64>(g: &L, lo: f64, hi: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let x1 = hi - ratio * (hi - lo);
        let x2 = lo + ratio * (hi - lo);
        if g(x1) <= g(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    [lo, 0.5 * (lo + hi), hi]
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, x| {
            let v = g(x);
            if v < best.1 || best.0.is_nan() {
                (x, v)
            } else {
                best
            }
        })
        .0
}

fn check_divergence(d: f64) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::NegativeDivergence(d));
    }
    Ok(())
}

fn check_open_unit(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError {
            value: alpha,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

fn check_closed_unit(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::DomainError {
            value: alpha,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// Implicit lower bound on `[0, 1]`; endpoints follow the perspective limits.
pub(crate) fn implicit_lower(gen: &FGenerator, divergence: f64, alpha: f64) -> f64 {
    if divergence.is_infinite() {
        return 0.0;
    }
    smallest_feasible(alpha, divergence, |beta| divergence_lhs(gen, alpha, beta))
}

pub(crate) fn implicit_reversed_lower(gen: &FGenerator, divergence: f64, alpha: f64) -> f64 {
    if divergence.is_infinite() {
        return 0.0;
    }
    smallest_feasible(alpha, divergence, |beta| reversed_lhs(gen, alpha, beta))
}

/// Smallest `beta` in `[0, 1 - alpha]` with `(alpha, beta)` not excluded by
/// `D_f(P||Q) = divergence`.
pub fn generic_lower(gen: &FGenerator, divergence: f64, alpha: f64) -> Result<f64> {
    check_open_unit(alpha)?;
    check_divergence(divergence)?;
    Ok(implicit_lower(gen, divergence, alpha))
}

/// Lower bound from the reversed divergence `D_f(Q||P) = divergence`.
pub fn reversed_lower(gen: &FGenerator, divergence: f64, alpha: f64) -> Result<f64> {
    check_open_unit(alpha)?;
    check_divergence(divergence)?;
    Ok(implicit_reversed_lower(gen, divergence, alpha))
}

/// Bounds with a closed form or a dedicated solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerKind {
    /// Value: total variation distance.
    Tvd,
    /// Value: Hellinger affinity `rho_{1/2}`.
    Hellinger,
    /// Value: `KL(P||Q)`.
    Kl,
    /// Value: Chernoff coefficient `rho_q`.
    Alpha(f64),
    /// Value: `chi^2(P||Q)`.
    Chi2Forward,
    /// Value: `chi^2(Q||P)`.
    Chi2Reverse,
    /// Value: `KL(P||Q)`, through Pinsker's inequality.
    Pinsker,
    /// Value: the indicator divergence, `0` when every likelihood ratio is in `[lower, upper]`.
    Indicator { lower: f64, upper: f64 },
}

impl LowerKind {
    /// Kinds whose value tensorizes as `rho^n` over `n` i.i.d. samples.
    pub fn tensorizes(&self) -> bool {
        matches!(self, Self::Hellinger | Self::Alpha(_))
    }

    /// Checks the value range and sample count for this kind.
    pub fn validate(&self, value: f64, n: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::ParamOutOfRange {
                name: "n",
                value: 0.0,
            });
        }
        if n > 1 && !self.tensorizes() {
            return Err(Error::KindMismatch(format!(
                "{self} does not tensorize; n must be 1"
            )));
        }
        let out = |what| Err(Error::ValueOutOfRange { what, value });
        if value.is_nan() {
            return out("divergence");
        }
        match *self {
            Self::Hellinger if !(0.0..=1.0).contains(&value) => out("Hellinger affinity"),
            Self::Alpha(q) if !(q > 0.0 && q < 1.0) => Err(Error::ParamOutOfRange {
                name: "q",
                value: q,
            }),
            Self::Alpha(_) if !(0.0..=1.0).contains(&value) => out("Chernoff coefficient"),
            Self::Tvd if !(0.0..=1.0).contains(&value) => out("total variation"),
            Self::Indicator { lower, upper } => {
                FGenerator::indicator(lower, upper)?;
                if value < 0.0 {
                    out("indicator divergence")
                } else {
                    Ok(())
                }
            }
            _ if value < 0.0 => out("divergence"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Tvd => write!(f, "tvd"),
            Self::Hellinger => write!(f, "hellinger"),
            Self::Kl => write!(f, "kl"),
            Self::Alpha(q) => write!(f, "alpha:{q}"),
            Self::Chi2Forward => write!(f, "chi2_fwd"),
            Self::Chi2Reverse => write!(f, "chi2_rev"),
            Self::Pinsker => write!(f, "pinsker"),
            Self::Indicator { lower, upper } => write!(f, "ind:{lower},{upper}"),
        }
    }
}

impl FromStr for LowerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        match (name, args) {
            ("tvd", None) => Ok(Self::Tvd),
            ("hellinger", None) => Ok(Self::Hellinger),
            ("kl", None) => Ok(Self::Kl),
            ("chi2_fwd", None) => Ok(Self::Chi2Forward),
            ("chi2_rev", None) => Ok(Self::Chi2Reverse),
            ("pinsker", None) => Ok(Self::Pinsker),
            ("alpha", Some(a)) => {
                let q = parse_args(a, "bound kind", 1)?[0];
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::ParamOutOfRange {
                        name: "q",
                        value: q,
                    });
                }
                Ok(Self::Alpha(q))
            }
            ("ind", Some(a)) => {
                let v = parse_args(a, "bound kind", 2)?;
                FGenerator::indicator(v[0], v[1])?;
                Ok(Self::Indicator {
                    lower: v[0],
                    upper: v[1],
                })
            }
            _ => Err(Error::Parse {
                what: "bound kind",
                input: s.to_string(),
            }),
        }
    }
}

/// Named lower bound at `alpha` in `[0, 1]`, clamped to `[0, 1 - alpha]`.
pub fn named_lower(kind: LowerKind, value: f64, n: u32, alpha: f64) -> Result<f64> {
    check_closed_unit(alpha)?;
    kind.validate(value, n)?;
    Ok(named_lower_unchecked(kind, value, n, alpha))
}

pub(crate) fn named_lower_unchecked(kind: LowerKind, value: f64, n: u32, alpha: f64) -> f64 {
    let ceiling = 1.0 - alpha;
    let raw = match kind {
        LowerKind::Tvd => 1.0 - value - alpha,
        LowerKind::Pinsker => 1.0 - (0.5 * value).sqrt() - alpha,
        LowerKind::Hellinger => {
            let gamma = value.powf(n as f64).clamp(0.0, 1.0).asin();
            let theta = alpha.sqrt().clamp(0.0, 1.0).asin();
            (gamma - theta).max(0.0).sin().powi(2)
        }
        LowerKind::Alpha(q) => alpha_lower(q, value.powf(n as f64), alpha),
        LowerKind::Kl => implicit_lower(&FGenerator::Kl, value, alpha),
        LowerKind::Chi2Forward => 1.0 - alpha - (value * alpha * (1.0 - alpha)).sqrt(),
        LowerKind::Chi2Reverse => chi2_reverse_lower(value, alpha),
        LowerKind::Indicator { lower, upper } => {
            if value.is_infinite() {
                0.0
            } else {
                let mut b = (-lower * alpha + lower)
                    .max(-upper * alpha + 1.0)
                    .max((1.0 - alpha) / upper);
                if lower > 0.0 {
                    b = b.max(1.0 - alpha / lower);
                }
                b
            }
        }
    };
    if raw.is_nan() {
        return 0.0;
    }
    raw.clamp(0.0, ceiling.max(0.0))
}

/// Chernoff coefficient of order `q` between the two-point laws of a test:
/// `(1-b)^q a^(1-q) + b^q (1-a)^(1-q)`. By Hoelder it is at least `rho_q`.
pub(crate) fn test_affinity(q: f64, alpha: f64, beta: f64) -> f64 {
    (1.0 - beta).powf(q) * alpha.powf(1.0 - q) + beta.powf(q) * (1.0 - alpha).powf(1.0 - q)
}

/// Smallest `b` with `test_affinity(q, a, b) >= rho`.
fn alpha_lower(q: f64, rho: f64, alpha: f64) -> f64 {
    let affinity = |beta: f64| test_affinity(q, alpha, beta);
    smallest_feasible(alpha, -rho, |beta| -affinity(beta))
}

/// Smallest root in `[0, 1 - a]` of `(1 - b - a)^2 = c b (1 - b)`.
fn chi2_reverse_lower(c: f64, alpha: f64) -> f64 {
    if c.is_infinite() || alpha >= 1.0 {
        return 0.0;
    }
    let r = 1.0 - alpha;
    let a = 1.0 + c;
    let b = 2.0 * r + c;
    let disc = (c * c + 4.0 * c * alpha * r).max(0.0);
    let _ = a;
    // Stable form of (b - sqrt(disc)) / (2a).
    2.0 * r * r / (b + disc.sqrt())
}

/// Hockey-stick supporting line `beta >= -gamma alpha + 1 - D_gamma`.
pub fn hockey_stick_line(gamma: f64, divergence: f64) -> Result<Line> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::ParamOutOfRange {
            name: "gamma",
            value: gamma,
        });
    }
    check_divergence(divergence)?;
    Line::new(gamma, 1.0, 1.0 - divergence, Orientation::Lower)
}

/// Hockey-stick lines of a pair at `gamma = 0` and at each finite likelihood ratio.
pub fn hockey_lines(pair: &CategoricalPair) -> Vec<Line> {
    let mut gammas = vec![0.0];
    gammas.extend(
        lr_profile(pair)
            .segments
            .iter()
            .map(|s| s.ratio)
            .filter(|r| r.is_finite() && *r > 0.0),
    );
    gammas
        .into_iter()
        .map(|g| {
            let d = f_divergence(pair, &FGenerator::HockeyStick(g)).value;
            hockey_stick_line(g, d).expect("valid hockey-stick parameters")
        })
        .collect()
}

/// Upper envelope of the hockey-stick lines at `alpha`, clamped at zero.
pub fn hockey_envelope(pair: &CategoricalPair, alpha: f64) -> Result<f64> {
    check_closed_unit(alpha)?;
    Ok(envelope_of(&hockey_lines(pair), alpha))
}

pub(crate) fn envelope_of(lines: &[Line], alpha: f64) -> f64 {
    lines
        .iter()
        .filter_map(|l| l.beta_at(alpha))
        .fold(0.0, f64::max)
}

/// Supporting line `s a + (2 - s) b = 1 - sqrt(1 - s (2 - s) rho^2)` of the
/// Hellinger lower bound.
pub fn hellinger_supporting_line(s: f64, rho: f64) -> Result<Line> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::ParamOutOfRange {
            name: "s",
            value: s,
        });
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "rho",
            value: rho,
        });
    }
    let c = 1.0 - (1.0 - s * (2.0 - s) * rho * rho).max(0.0).sqrt();
    Line::new(s, 2.0 - s, c, Orientation::Lower)
}
