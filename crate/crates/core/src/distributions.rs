//! Finite-support distribution pairs: construction, validation, discretization
//! of 1-D analytic families, tensor powers and likelihood-ratio profiles.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, Continuous, ContinuousCDF, Normal, Uniform};

use crate::error::{Error, Result};

/// Largest deviation of a mass vector's sum from 1 that is silently renormalized.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

/// Largest support a tensor power may produce.
pub const MAX_TENSOR_SUPPORT: usize = 1_000_000;

/// Relative tolerance under which two likelihood ratios are treated as equal.
pub const RATIO_TIE_TOL: f64 = 1e-12;

/// Two probability mass vectors `p`, `q` over a shared finite support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoricalPair {
    labels: Vec<String>,
    p: Vec<f64>,
    q: Vec<f64>,
}

/// Raw JSON form of a pair: `{"labels": [...], "p": [...], "q": [...]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct PairSpec {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl CategoricalPair {
    /// Validates and builds a pair. Sums within [`NORMALIZATION_SLACK`] of one
    /// are renormalized; anything further off is rejected.
    pub fn new(p: Vec<f64>, q: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::LengthMismatch {
                p: p.len(),
                q: q.len(),
            });
        }
        if p.is_empty() {
            return Err(Error::Empty);
        }
        for v in [&p, &q] {
            for (idx, &value) in v.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite { idx, value });
                }
                if value < 0.0 {
                    return Err(Error::NegativeMass { idx, value });
                }
            }
        }
        let p = normalize(p, "p")?;
        let q = normalize(q, "q")?;
        if let Some(idx) = p.iter().zip(&q).position(|(&a, &b)| a == 0.0 && b == 0.0) {
            return Err(Error::DeadItem { idx });
        }
        let labels = match labels {
            Some(l) if l.len() != p.len() => {
                return Err(Error::LabelMismatch {
                    labels: l.len(),
                    support: p.len(),
                })
            }
            Some(l) => l,
            None => (0..p.len()).map(|i| i.to_string()).collect(),
        };
        Ok(Self { labels, p, q })
    }

    pub fn from_spec(spec: PairSpec) -> Result<Self> {
        Self::new(spec.p, spec.q, spec.labels)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PairSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "pair JSON",
            input: e.to_string(),
        })?;
        Self::from_spec(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pair serializes")
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The same pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// `P[q = 0]`: mass that `p` puts where `q` vanishes.
    pub fn p_mass_off_q_support(&self) -> f64 {
        self.p
            .iter()
            .zip(&self.q)
            .filter(|(_, &q)| q == 0.0)
            .map(|(&p, _)| p)
            .sum()
    }
}

fn normalize(mut v: Vec<f64>, which: &'static str) -> Result<Vec<f64>> {
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::NotNormalized { which, sum });
    }
    if sum != 1.0 {
        v.iter_mut().for_each(|x| *x /= sum);
    }
    Ok(v)
}

/// Uniform grid over `[lower, upper]` split into `nodes` equal-width cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub nodes: usize,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, nodes: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::DegenerateGrid("need finite lower < upper"));
        }
        if nodes < 2 {
            return Err(Error::DegenerateGrid("need at least 2 cells"));
        }
        Ok(Self {
            lower,
            upper,
            nodes,
        })
    }

    fn width(&self) -> f64 {
        (self.upper - self.lower) / self.nodes as f64
    }

    fn edge(&self, i: usize) -> f64 {
        if i == self.nodes {
            self.upper
        } else {
            self.lower + i as f64 * self.width()
        }
    }
}

/// A univariate family with known density and cdf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFamily {
    Uniform { a: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
    Beta { a: f64, b: f64 },
}

impl AnalyticFamily {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::UnsupportedFamily(format!("uniform({a}, {b})")));
        }
        Ok(Self::Uniform { a, b })
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite()) || sigma <= 0.0 {
            return Err(Error::UnsupportedFamily(format!("gaussian({mu}, {sigma})")));
        }
        Ok(Self::Gaussian { mu, sigma })
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::UnsupportedFamily(format!("beta({a}, {b})")));
        }
        Ok(Self::Beta { a, b })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Uniform { a, b } => 0.5 * (a + b),
            Self::Gaussian { mu, .. } => mu,
            Self::Beta { a, b } => a / (a + b),
        }
    }

    pub fn std_dev(&self) -> f64 {
        match *self {
            Self::Uniform { a, b } => (b - a) / 12f64.sqrt(),
            Self::Gaussian { sigma, .. } => sigma,
            Self::Beta { a, b } => (a * b / ((a + b).powi(2) * (a + b + 1.0))).sqrt(),
        }
    }

    /// Density at `x` (zero outside the support).
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { a, b } => {
                if x < a || x > b {
                    0.0
                } else {
                    1.0 / (b - a)
                }
            }
            Self::Gaussian { mu, sigma } => normal(mu, sigma).pdf(x),
            Self::Beta { a, b } => {
                if x <= 0.0 || x >= 1.0 {
                    0.0
                } else {
                    beta(a, b).pdf(x)
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Self::Gaussian { mu, sigma } => normal(mu, sigma).cdf(x),
            Self::Beta { a, b } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    beta(a, b).cdf(x)
                }
            }
        }
    }

    fn sf(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mu, sigma } => normal(mu, sigma).sf(x),
            Self::Beta { a, b } if x > 0.0 && x < 1.0 => beta(a, b).sf(x),
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Probability of `[lo, hi]`, taking differences on whichever tail keeps
    /// precision.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        let m = if lo >= self.median_hint() {
            self.sf(lo) - self.sf(hi)
        } else {
            self.cdf(hi) - self.cdf(lo)
        };
        m.max(0.0)
    }

    fn median_hint(&self) -> f64 {
        self.mean()
    }

    /// Sanity check that the statrs backends accept the parameters.
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Uniform { a, b } => Uniform::new(a, b).is_ok(),
            Self::Gaussian { mu, sigma } => Normal::new(mu, sigma).is_ok(),
            Self::Beta { a, b } => Beta::new(a, b).is_ok(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedFamily(self.to_string()))
        }
    }
}

fn normal(mu: f64, sigma: f64) -> Normal {
    Normal::new(mu, sigma).expect("validated gaussian parameters")
}

fn beta(a: f64, b: f64) -> Beta {
    Beta::new(a, b).expect("validated beta parameters")
}

impl fmt::Display for AnalyticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            Self::Gaussian { mu, sigma } => write!(f, "gaussian:{mu},{sigma}"),
            Self::Beta { a, b } => write!(f, "beta:{a},{b}"),
        }
    }
}

impl FromStr for AnalyticFamily {
    type Err = Error;

    /// Parses `gaussian:mu,sigma`, `uniform:a,b` or `beta:a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::Parse {
            what: "analytic family",
            input: s.to_string(),
        };
        let (name, args) = s.split_once(':').ok_or_else(parse_err)?;
        let args: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err())?;
        if args.len() != 2 {
            return Err(parse_err());
        }
        match name.trim() {
            "gaussian" => Self::gaussian(args[0], args[1]),
            "uniform" => Self::uniform(args[0], args[1]),
            "beta" => Self::beta(args[0], args[1]),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

/// How a cell's probability is computed when discretizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CellRule {
    /// Exact cdf difference over the cell.
    #[default]
    CdfDifference,
    /// Density at the cell midpoint times the cell width.
    Midpoint,
}

/// A discretized pair plus the bookkeeping of what the window lost.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedPair {
    pub pair: CategoricalPair,
    /// Mass of `pf` outside the grid window.
    pub truncation_p: f64,
    /// Mass of `qf` outside the grid window.
    pub truncation_q: f64,
    /// Cells where both families put zero mass.
    pub dropped_cells: usize,
}

/// Discretizes two analytic families on a shared grid with exact cell masses.
pub fn discretize_analytic(
    pf: &AnalyticFamily,
    qf: &AnalyticFamily,
    grid: &GridSpec,
) -> Result<DiscretizedPair> {
    discretize_analytic_with(pf, qf, grid, CellRule::CdfDifference)
}

pub fn discretize_analytic_with(
    pf: &AnalyticFamily,
    qf: &AnalyticFamily,
    grid: &GridSpec,
    rule: CellRule,
) -> Result<DiscretizedPair> {
    pf.validate()?;
    qf.validate()?;
    let grid = GridSpec::new(grid.lower, grid.upper, grid.nodes)?;
    let width = grid.width();
    let cell = |fam: &AnalyticFamily, i: usize| -> f64 {
        let (lo, hi) = (grid.edge(i), grid.edge(i + 1));
        match rule {
            CellRule::CdfDifference => fam.interval_mass(lo, hi),
            CellRule::Midpoint => fam.density(0.5 * (lo + hi)) * width,
        }
    };

    let mut p = Vec::with_capacity(grid.nodes);
    let mut q = Vec::with_capacity(grid.nodes);
    let mut labels = Vec::with_capacity(grid.nodes);
    let mut dropped = 0;
    for i in 0..grid.nodes {
        let (a, b) = (cell(pf, i), cell(qf, i));
        if a == 0.0 && b == 0.0 {
            dropped += 1;
            continue;
        }
        p.push(a);
        q.push(b);
        labels.push(format!("{}", 0.5 * (grid.edge(i) + grid.edge(i + 1))));
    }
    let sp: f64 = p.iter().sum();
    let sq: f64 = q.iter().sum();
    if sp <= 0.0 || sq <= 0.0 {
        return Err(Error::DegenerateGrid("window carries no mass"));
    }
    p.iter_mut().for_each(|x| *x /= sp);
    q.iter_mut().for_each(|x| *x /= sq);

    let outside = |fam: &AnalyticFamily| (fam.cdf(grid.lower) + fam.sf(grid.upper)).clamp(0.0, 1.0);
    Ok(DiscretizedPair {
        pair: CategoricalPair::new(p, q, Some(labels))?,
        truncation_p: outside(pf),
        truncation_q: outside(qf),
        dropped_cells: dropped,
    })
}

/// The `n`-fold product pair over tuples of the original support.
pub fn tensor_power(pair: &CategoricalPair, n: usize) -> Result<CategoricalPair> {
    if n == 0 {
        return Err(Error::ParamOutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    if n == 1 {
        return Ok(pair.clone());
    }
    let size = (pair.len() as f64).powi(n as i32);
    if size > MAX_TENSOR_SUPPORT as f64 {
        return Err(Error::BlowupLimit {
            size,
            limit: MAX_TENSOR_SUPPORT,
        });
    }
    let mut p = pair.p.clone();
    let mut q = pair.q.clone();
    let mut labels = pair.labels.clone();
    for _ in 1..n {
        let mut np = Vec::with_capacity(p.len() * pair.len());
        let mut nq = Vec::with_capacity(np.capacity());
        let mut nl = Vec::with_capacity(np.capacity());
        for i in 0..p.len() {
            for j in 0..pair.len() {
                let (a, b) = (p[i] * pair.p[j], q[i] * pair.q[j]);
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                np.push(a);
                nq.push(b);
                nl.push(format!("{},{}", labels[i], pair.labels[j]));
            }
        }
        p = np;
        q = nq;
        labels = nl;
    }
    // Items with p = 0 in one factor and q = 0 in another are dropped above;
    // renormalization only removes roundoff.
    let sp: f64 = p.iter().sum();
    let sq: f64 = q.iter().sum();
    p.iter_mut().for_each(|x| *x /= sp);
    q.iter_mut().for_each(|x| *x /= sq);
    CategoricalPair::new(p, q, Some(labels))
}

/// One step of a likelihood-ratio profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrSegment {
    /// `p_mass / q_mass`, `+inf` when `q_mass == 0`.
    pub ratio: f64,
    pub p_mass: f64,
    pub q_mass: f64,
}

/// Items grouped by likelihood ratio, strictly decreasing in ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrProfile {
    pub segments: Vec<LrSegment>,
}

impl LrProfile {
    /// `p` mass of the leading infinite-ratio segment, if any.
    pub fn infinite_p_mass(&self) -> f64 {
        self.segments
            .first()
            .filter(|s| s.ratio.is_infinite())
            .map_or(0.0, |s| s.p_mass)
    }
}

fn ratio_order(pi: f64, qi: f64, pj: f64, qj: f64) -> Ordering {
    // Descending in p/q without dividing.
    (pj * qi).partial_cmp(&(pi * qj)).unwrap_or(Ordering::Equal)
}

fn same_ratio(pi: f64, qi: f64, pj: f64, qj: f64) -> bool {
    let a = pi * qj;
    let b = pj * qi;
    a == b || (a - b).abs() <= RATIO_TIE_TOL * a.max(b)
}

/// Sorts items by likelihood ratio `p_i / q_i` (descending) and merges ties.
pub fn lr_profile(pair: &CategoricalPair) -> LrProfile {
    let mut order: Vec<usize> = (0..pair.len()).collect();
    order.sort_by(|&i, &j| ratio_order(pair.p[i], pair.q[i], pair.p[j], pair.q[j]));

    let mut segments: Vec<LrSegment> = Vec::new();
    for i in order {
        let (pi, qi) = (pair.p[i], pair.q[i]);
        match segments.last_mut() {
            Some(seg) if same_ratio(pi, qi, seg.p_mass, seg.q_mass) => {
                seg.p_mass += pi;
                seg.q_mass += qi;
            }
            _ => segments.push(LrSegment {
                ratio: 0.0,
                p_mass: pi,
                q_mass: qi,
            }),
        }
    }
    for seg in &mut segments {
        seg.ratio = if seg.q_mass == 0.0 {
            f64::INFINITY
        } else {
            seg.p_mass / seg.q_mass
        };
    }
    LrProfile { segments }
}
