//! f-generators, f-divergences, α-divergences and Chernoff coefficients.
//!
//! Values live on the extended half-line `[0, +inf]`; `f64::INFINITY` is the
//! explicit `+inf` and products use the measure-theoretic rule `0 * inf = 0`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distributions::CategoricalPair;
use crate::error::{Error, Result};

/// Product on the extended reals with `0 * inf = 0`.
pub fn ext_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// A convex generator `f` with `f(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FGenerator {
    /// `|t - 1| / 2`
    Tvd,
    /// `t ln t`
    Kl,
    /// `-ln t`
    ReverseKl,
    /// `(1 - sqrt t)^2 / 2`, so the divergence is `1 - rho_{1/2}`.
    Hellinger2,
    /// `(q + (1 - q) t - t^(1-q)) / (q (1 - q))`
    Alpha(f64),
    /// `max(t - gamma, 0)`. Note `f(1) = 1 - gamma` for `gamma < 1`.
    HockeyStick(f64),
    /// `(t - 1)^2`
    Chi2,
    /// `0` on `[lower, upper]`, `+inf` elsewhere.
    Indicator { lower: f64, upper: f64 },
}

impl FGenerator {
    pub fn alpha(q: f64) -> Result<Self> {
        if !q.is_finite() || q == 0.0 || q == 1.0 {
            return Err(Error::ParamOutOfRange {
                name: "q",
                value: q,
            });
        }
        Ok(Self::Alpha(q))
    }

    pub fn hockey_stick(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "gamma",
                value: gamma,
            });
        }
        Ok(Self::HockeyStick(gamma))
    }

    pub fn indicator(lower: f64, upper: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lower) {
            return Err(Error::ParamOutOfRange {
                name: "lower",
                value: lower,
            });
        }
        if !upper.is_finite() || upper <= 1.0 {
            return Err(Error::ParamOutOfRange {
                name: "upper",
                value: upper,
            });
        }
        Ok(Self::Indicator { lower, upper })
    }

    /// `f(t)` for finite `t >= 0`; `t = +inf` returns `f'(inf)`.
    pub fn value(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return self.slope_at_infinity();
        }
        match *self {
            Self::Tvd => 0.5 * (t - 1.0).abs(),
            Self::Kl => {
                if t == 0.0 {
                    0.0
                } else {
                    t * t.ln()
                }
            }
            Self::ReverseKl => {
                if t == 0.0 {
                    f64::INFINITY
                } else {
                    -t.ln()
                }
            }
            Self::Hellinger2 => 0.5 * (1.0 - t.sqrt()).powi(2),
            Self::Alpha(q) => {
                let pow = t.powf(1.0 - q);
                if pow.is_infinite() {
                    f64::INFINITY
                } else {
                    (q + (1.0 - q) * t - pow) / (q * (1.0 - q))
                }
            }
            Self::HockeyStick(gamma) => (t - gamma).max(0.0),
            Self::Chi2 => (t - 1.0).powi(2),
            Self::Indicator { lower, upper } => {
                let slack = 1.0 + crate::distributions::RATIO_TIE_TOL;
                if t * slack >= lower && t <= upper * slack {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `f'(inf) = lim_{t -> 0+} t f(1/t)`, tabulated per kind.
    pub fn slope_at_infinity(&self) -> f64 {
        match *self {
            Self::Tvd | Self::Hellinger2 => 0.5,
            Self::Kl | Self::Chi2 | Self::Indicator { .. } => f64::INFINITY,
            Self::ReverseKl => 0.0,
            Self::Alpha(q) => {
                if q > 0.0 {
                    1.0 / q
                } else {
                    f64::INFINITY
                }
            }
            Self::HockeyStick(_) => 1.0,
        }
    }

    /// Perspective `w f(x / w)` extended to `w = 0` by `x f'(inf)`.
    pub fn perspective(&self, weight: f64, numer: f64) -> f64 {
        if weight <= 0.0 {
            ext_mul(numer, self.slope_at_infinity())
        } else {
            ext_mul(weight, self.value(numer / weight))
        }
    }

    /// The generator `f*(t) = t f(1/t)` of the reversed divergence, for the
    /// kinds whose conjugate stays in this family.
    pub fn conjugate(&self) -> Option<Self> {
        match *self {
            Self::Tvd => Some(Self::Tvd),
            Self::Kl => Some(Self::ReverseKl),
            Self::ReverseKl => Some(Self::Kl),
            Self::Hellinger2 => Some(Self::Hellinger2),
            Self::Alpha(q) => Some(Self::Alpha(1.0 - q)),
            Self::Indicator { lower, upper } if lower > 0.0 && lower < 1.0 => {
                Some(Self::Indicator {
                    lower: 1.0 / upper,
                    upper: 1.0 / lower,
                })
            }
            _ => None,
        }
    }
}

impl fmt::Display for FGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Tvd => write!(f, "tvd"),
            Self::Kl => write!(f, "kl"),
            Self::ReverseKl => write!(f, "rkl"),
            Self::Hellinger2 => write!(f, "h2"),
            Self::Alpha(q) => write!(f, "alpha:{q}"),
            Self::HockeyStick(g) => write!(f, "hs:{g}"),
            Self::Chi2 => write!(f, "chi2"),
            Self::Indicator { lower, upper } => write!(f, "ind:{lower},{upper}"),
        }
    }
}

pub(crate) fn parse_args(s: &str, what: &'static str, count: usize) -> Result<Vec<f64>> {
    let err = || Error::Parse {
        what,
        input: s.to_string(),
    };
    let args: Vec<f64> = s
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| err())?;
    if args.len() != count {
        return Err(err());
    }
    Ok(args)
}

impl FromStr for FGenerator {
    type Err = Error;

    /// Parses `tvd`, `kl`, `rkl`, `h2`, `alpha:q`, `hs:gamma`, `chi2`, `ind:l,u`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        match (name, args) {
            ("tvd", None) => Ok(Self::Tvd),
            ("kl", None) => Ok(Self::Kl),
            ("rkl", None) => Ok(Self::ReverseKl),
            ("h2", None) => Ok(Self::Hellinger2),
            ("chi2", None) => Ok(Self::Chi2),
            ("alpha", Some(a)) => Self::alpha(parse_args(a, "generator", 1)?[0]),
            ("hs", Some(a)) => Self::hockey_stick(parse_args(a, "generator", 1)?[0]),
            ("ind", Some(a)) => {
                let v = parse_args(a, "generator", 2)?;
                Self::indicator(v[0], v[1])
            }
            _ => Err(Error::Parse {
                what: "generator",
                input: s.to_string(),
            }),
        }
    }
}

/// `f(t)`, with the `+inf` sentinel mapping to `f'(inf)`.
pub fn generator_value(gen: &FGenerator, t: f64) -> f64 {
    gen.value(t)
}

/// A divergence value on `[0, +inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceValue {
    pub value: f64,
    pub finite: bool,
}

impl DivergenceValue {
    fn new(value: f64) -> Self {
        // Roundoff can push exact zeros slightly negative.
        let value = value.max(0.0);
        Self {
            value,
            finite: value.is_finite(),
        }
    }
}

/// `D_f(P||Q) = sum_{q>0} f(p/q) q + f'(inf) P[q = 0]`.
pub fn f_divergence(pair: &CategoricalPair, gen: &FGenerator) -> DivergenceValue {
    let mut on_support = 0.0;
    let mut off_support = 0.0;
    for (&p, &q) in pair.p().iter().zip(pair.q()) {
        if q > 0.0 {
            on_support += ext_mul(q, gen.value(p / q));
        } else {
            off_support += p;
        }
    }
    DivergenceValue::new(on_support + ext_mul(gen.slope_at_infinity(), off_support))
}

/// Chernoff coefficient `rho_q = sum p^q q^(1-q)` for `q` in `(0, 1)`.
pub fn chernoff_coefficient(pair: &CategoricalPair, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ExponentOutOfRange(q));
    }
    let rho: f64 = pair
        .p()
        .iter()
        .zip(pair.q())
        .map(|(&a, &b)| a.powf(q) * b.powf(1.0 - q))
        .sum();
    Ok(rho.clamp(0.0, 1.0))
}

/// α-divergence of order `q`, the divergence of the generator `Alpha(q)`.
/// Inside `(0, 1)` it equals `(1 - rho_{1-q}) / (q (1 - q))`, since
/// `sum q (p/q)^(1-q) = sum p^(1-q) q^q`; `q = 0` and `q = 1` are `KL(P||Q)`
/// and `KL(Q||P)`; other orders use the generator directly.
pub fn alpha_divergence(pair: &CategoricalPair, q: f64) -> Result<DivergenceValue> {
    if !q.is_finite() {
        return Err(Error::ParamOutOfRange {
            name: "q",
            value: q,
        });
    }
    if q == 0.0 {
        return Ok(f_divergence(pair, &FGenerator::Kl));
    }
    if q == 1.0 {
        return Ok(f_divergence(pair, &FGenerator::ReverseKl));
    }
    if q > 0.0 && q < 1.0 {
        let rho = chernoff_coefficient(pair, 1.0 - q)?;
        return Ok(DivergenceValue::new((1.0 - rho) / (q * (1.0 - q))));
    }
    Ok(f_divergence(pair, &FGenerator::Alpha(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> CategoricalPair {
        CategoricalPair::new(vec![0.6, 0.3, 0.1], vec![0.1, 0.3, 0.6], None).unwrap()
    }

    const RHO_R: f64 = 0.789_897_948_556_635_6; // 0.3 + 2 sqrt(0.06)

    #[test]
    fn generator_examples() {
        assert_eq!(generator_value(&FGenerator::Kl, 1.0), 0.0);
        let hs = FGenerator::HockeyStick(2.0);
        assert_eq!(generator_value(&hs, 3.0), 1.0);
        assert_eq!(generator_value(&hs, f64::INFINITY), 1.0);
        let ind = FGenerator::indicator(1.0 / 6.0, 6.0).unwrap();
        assert_eq!(generator_value(&ind, 7.0), f64::INFINITY);
        assert_eq!(generator_value(&ind, 6.0), 0.0);
    }

    #[test]
    fn generators_vanish_at_one() {
        let gens = [
            FGenerator::Tvd,
            FGenerator::Kl,
            FGenerator::ReverseKl,
            FGenerator::Hellinger2,
            FGenerator::Alpha(0.3),
            FGenerator::Alpha(2.5),
            FGenerator::Alpha(-1.0),
            FGenerator::HockeyStick(1.0),
            FGenerator::HockeyStick(3.0),
            FGenerator::Chi2,
            FGenerator::Indicator {
                lower: 0.0,
                upper: 2.0,
            },
        ];
        for g in gens {
            assert!(g.value(1.0).abs() < 1e-12, "{g}");
        }
    }

    #[test]
    fn slope_at_infinity_matches_numeric_limit() {
        // t f(1/t) at small t against the tabulated limit.
        for g in [
            FGenerator::Tvd,
            FGenerator::ReverseKl,
            FGenerator::Hellinger2,
            FGenerator::Alpha(0.3),
            FGenerator::Alpha(2.0),
            FGenerator::HockeyStick(2.0),
        ] {
            let t: f64 = 1e-15;
            let approx = t * g.value(1.0 / t);
            assert!((approx - g.slope_at_infinity()).abs() < 1e-3, "{g}");
        }
        for g in [FGenerator::Kl, FGenerator::Chi2, FGenerator::Alpha(-0.5)] {
            assert!(1e-9 * g.value(1e9) > 10.0);
            assert!(g.slope_at_infinity().is_infinite());
        }
    }

    #[test]
    fn divergence_examples() {
        let pair = r();
        let kl = f_divergence(&pair, &FGenerator::Kl);
        let want = 0.6 * 6f64.ln() + 0.1 * (1.0 / 6.0f64).ln();
        assert!((kl.value - want).abs() < 1e-15);
        assert!((kl.value - 0.5 * 6f64.ln()).abs() < 1e-15);
        assert!((f_divergence(&pair, &FGenerator::Tvd).value - 0.5).abs() < 1e-15);
        assert!((f_divergence(&pair, &FGenerator::HockeyStick(2.0)).value - 0.4).abs() < 1e-15);
        let same = CategoricalPair::new(vec![0.2, 0.8], vec![0.2, 0.8], None).unwrap();
        for g in [FGenerator::Kl, FGenerator::Chi2, FGenerator::Alpha(0.7)] {
            assert_eq!(f_divergence(&same, &g).value, 0.0);
        }
    }

    #[test]
    fn off_support_mass_uses_slope_at_infinity() {
        let pair = CategoricalPair::new(vec![0.5, 0.5], vec![0.0, 1.0], None).unwrap();
        let kl = f_divergence(&pair, &FGenerator::Kl);
        assert!(!kl.finite);
        // TVD: 0.5 * |0.5 - 1| * 1 + 0.5 * 0.5
        assert!((f_divergence(&pair, &FGenerator::Tvd).value - 0.5).abs() < 1e-15);
        // Reverse KL has f'(inf) = 0, so off-support mass is free.
        let rkl = f_divergence(&pair, &FGenerator::ReverseKl);
        assert!((rkl.value - 2f64.ln()).abs() < 1e-15);
        let ind = FGenerator::indicator(0.0, 10.0).unwrap();
        assert!(f_divergence(&pair, &ind).value.is_infinite());
    }

    #[test]
    fn chernoff_examples() {
        assert!((chernoff_coefficient(&r(), 0.5).unwrap() - RHO_R).abs() < 1e-15);
        let same = CategoricalPair::new(vec![0.3, 0.7], vec![0.3, 0.7], None).unwrap();
        assert!((chernoff_coefficient(&same, 0.2).unwrap() - 1.0).abs() < 1e-15);
        let disjoint = CategoricalPair::new(vec![1.0, 0.0], vec![0.0, 1.0], None).unwrap();
        assert_eq!(chernoff_coefficient(&disjoint, 0.5).unwrap(), 0.0);
        assert!(matches!(
            chernoff_coefficient(&r(), 1.0),
            Err(Error::ExponentOutOfRange(_))
        ));
    }

    #[test]
    fn alpha_divergence_examples() {
        let pair = r();
        let d = alpha_divergence(&pair, 0.5).unwrap().value;
        assert!((d - (1.0 - RHO_R) / 0.25).abs() < 1e-14);
        assert!((d - 0.840_408_205_773_457_5).abs() < 1e-12);
        let kl = f_divergence(&pair, &FGenerator::Kl).value;
        assert_eq!(alpha_divergence(&pair, 0.0).unwrap().value, kl);
        let rkl = f_divergence(&pair.swapped(), &FGenerator::Kl).value;
        assert!((alpha_divergence(&pair, 1.0).unwrap().value - rkl).abs() < 1e-15);
        let same = CategoricalPair::new(vec![0.3, 0.7], vec![0.3, 0.7], None).unwrap();
        assert!(alpha_divergence(&same, 0.3).unwrap().value.abs() < 1e-15);
        // Coefficient route agrees with the generator route, also off symmetry.
        let skew = CategoricalPair::new(vec![0.7, 0.2, 0.1], vec![0.2, 0.2, 0.6], None).unwrap();
        for q in [0.2, 0.8] {
            let a = alpha_divergence(&skew, q).unwrap().value;
            let b = f_divergence(&skew, &FGenerator::Alpha(q)).value;
            assert!((a - b).abs() < 1e-12, "q={q}");
            let near_zero = alpha_divergence(&skew, 1e-7).unwrap().value;
            let kl = f_divergence(&skew, &FGenerator::Kl).value;
            assert!((near_zero - kl).abs() < 1e-5);
        }
        for q in [0.2, 0.5, 0.8] {
            let a = alpha_divergence(&pair, q).unwrap().value;
            let b = f_divergence(&pair, &FGenerator::Alpha(q)).value;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "tvd",
            "kl",
            "rkl",
            "h2",
            "chi2",
            "alpha:0.25",
            "hs:2",
            "ind:0.5,3",
        ] {
            let g: FGenerator = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<FGenerator>().unwrap(), g);
        }
        assert!("alpha:1".parse::<FGenerator>().is_err());
        assert!("hs:-1".parse::<FGenerator>().is_err());
        assert!("ind:0.5,1".parse::<FGenerator>().is_err());
        assert!("ind:1.5,3".parse::<FGenerator>().is_err());
        assert!("foo".parse::<FGenerator>().is_err());
        assert!("kl:1".parse::<FGenerator>().is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(FGenerator::Kl.conjugate(), Some(FGenerator::ReverseKl));
        assert_eq!(
            FGenerator::Alpha(0.3).conjugate(),
            Some(FGenerator::Alpha(1.0 - 0.3))
        );
        assert_eq!(FGenerator::Chi2.conjugate(), None);
        for g in [
            FGenerator::Kl,
            FGenerator::Hellinger2,
            FGenerator::Alpha(0.3),
        ] {
            let c = g.conjugate().unwrap();
            for t in [0.1, 0.5, 2.0, 7.0] {
                assert!((c.value(t) - t * g.value(1.0 / t)).abs() < 1e-12);
            }
        }
    }
}
