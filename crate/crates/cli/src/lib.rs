//! Command-line front end for `np_region`.
//!
//! Every subcommand builds a [`Table`] (or a JSON document) and the caller
//! writes it to stdout or to `--output`. Numbers are printed with 12
//! significant digits and all work is sequential, so output bytes depend only
//! on the arguments and input files.

pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use np_region::format::fmt_g;
use np_region::numeric::unit_grid;
use np_region::upper_bounds::DEFAULT_HULL_GRID;
use np_region::{
    achievability_sample_size, bayes_error, ber_bounds, brute_force_boundary, chernoff_coefficient,
    convex_refine, discretize_analytic, exact_boundary, f_divergence, min_sample_size,
    realize_categorical, realize_unit_interval, roc_mixing_weight, roc_points, AnalyticFamily,
    BoundCurve, CategoricalPair, FGenerator, GridSpec, LowerKind, PiecewiseLinearBoundary,
    PriorPair, Side,
};

pub use table::{Cell, Table};

/// Default number of `alpha` grid points for sampled curves.
pub const DEFAULT_GRID: usize = 201;

/// Default number of cells when discretizing analytic families.
pub const DEFAULT_CELLS: usize = 4096;

/// Half-width of the discretization window in units of the largest standard deviation.
pub const WINDOW_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "np-region",
    version,
    about = "Neyman-Pearson regions, divergence bounds and realizations"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Number of equispaced alpha values for sampled curves.
    #[arg(long, global = true, env = "NP_REGION_GRID", default_value_t = DEFAULT_GRID,
          value_parser = parse_grid)]
    pub grid: usize,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err("grid must be at least 2".into());
    }
    Ok(n)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// f-divergences of a pair: `generator,value` rows.
    Divergence(DivergenceArgs),
    /// Boundary vertices of a pair: `alpha,beta` rows.
    Boundary(BoundaryArgs),
    /// A lower-bound curve sampled on the grid.
    Lower(LowerArgs),
    /// Chernoff envelope, its closed-form refinement and the numeric hull.
    Upper(UpperArgs),
    /// A pair from vertices, or a cdf table from a boundary.
    Realize(RealizeArgs),
    /// Bayes error of a pair, or an interval from bound curves.
    Ber(BerArgs),
    /// Sample sizes implied by the Chernoff-coefficient bounds.
    Samplesize(SampleSizeArgs),
    /// ROC points of a pair, or the mixing plan for a target operating point.
    Roc(RocArgs),
    /// Curve bundles for figures 1, 2, 4 and 5.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    /// Pair JSON file: `{"p": [...], "q": [...], "labels": [...]}`.
    #[arg(long)]
    pub pair: PathBuf,
    /// Generator spec: tvd, kl, rkl, h2, chi2, alpha:q, hs:gamma, ind:l,u.
    #[arg(long = "gen", required = true)]
    pub generators: Vec<FGenerator>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Pair JSON file.
    #[arg(long, conflicts_with_all = ["p_family", "q_family"])]
    pub pair: Option<PathBuf>,
    /// Use subset enumeration instead of likelihood-ratio sorting.
    #[arg(long)]
    pub brute_force: bool,
    /// Analytic family for P, e.g. gaussian:0,1.
    #[arg(long, requires = "q_family")]
    pub p_family: Option<AnalyticFamily>,
    /// Analytic family for Q.
    #[arg(long, requires = "p_family")]
    pub q_family: Option<AnalyticFamily>,
    /// Number of discretization cells for analytic families.
    #[arg(long, default_value_t = DEFAULT_CELLS)]
    pub cells: usize,
}

#[derive(Debug, Args)]
pub struct LowerArgs {
    /// Named bound: tvd, hellinger, kl, alpha:q, chi2_fwd, chi2_rev, pinsker, ind:l,u.
    #[arg(long, conflicts_with = "generator")]
    pub kind: Option<LowerKind>,
    /// Value for the named bound (divergence, affinity or coefficient).
    #[arg(
        long,
        visible_alias = "rho",
        requires = "kind",
        allow_negative_numbers = true
    )]
    pub value: Option<f64>,
    /// Tensorization count for hellinger and alpha kinds.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Generator for the implicit bound.
    #[arg(long = "gen", requires = "divergence")]
    pub generator: Option<FGenerator>,
    /// Divergence value for the implicit bound.
    #[arg(long, requires = "generator", allow_negative_numbers = true)]
    pub divergence: Option<f64>,
    /// Treat the divergence as D_f(Q||P).
    #[arg(long, requires = "generator")]
    pub reversed: bool,
}

#[derive(Debug, Args)]
pub struct UpperArgs {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Number of samples for the numeric convex hull.
    #[arg(long, default_value_t = DEFAULT_HULL_GRID)]
    pub hull_grid: usize,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    /// Vertex JSON `{"vertices": [[a, b], ...]}`; emits a pair.
    #[arg(
        long,
        conflicts_with = "boundary",
        required_unless_present = "boundary"
    )]
    pub vertices: Option<PathBuf>,
    /// Boundary vertex JSON; emits the cdf table of the unit-interval realization.
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    /// Number of cdf knots.
    #[arg(long, default_value_t = 1001)]
    pub knots: usize,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    /// Prior probability of P.
    #[arg(long)]
    pub prior: f64,
    /// Pair JSON file; reports the exact Bayes error.
    #[arg(long, conflicts_with_all = ["kind", "rho"])]
    pub pair: Option<PathBuf>,
    /// Lower-bound kind; defaults to alpha:q (hellinger at q = 1/2) with --rho.
    #[arg(long, requires = "value")]
    pub kind: Option<LowerKind>,
    /// Value for --kind.
    #[arg(long)]
    pub value: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Chernoff coefficient for the refined upper bound.
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct SampleSizeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    /// Pair JSON file.
    #[arg(long)]
    pub pair: PathBuf,
    /// Target false positive rate.
    #[arg(long, requires = "tpr")]
    pub fpr: Option<f64>,
    /// Target true positive rate.
    #[arg(long, requires = "fpr")]
    pub tpr: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number: 1, 2, 4 or 5.
    #[arg(value_parser = ["1", "2", "4", "5"])]
    pub which: String,
    /// Figure 1: divergence levels.
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.5, 0.8])]
    pub values: Vec<f64>,
    /// Figure 2: Hellinger affinity; figure 4: Chernoff coefficient.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Figure 2: sample counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1u32, 40, 160])]
    pub ns: Vec<u32>,
    /// Figure 4: order of the Chernoff coefficient.
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Figure 5: family of P.
    #[arg(long, default_value = "gaussian:0,1")]
    pub p_family: AnalyticFamily,
    /// Figure 5: family of Q.
    #[arg(long, default_value = "gaussian:0,2")]
    pub q_family: AnalyticFamily,
    /// Figure 5: discretization cells.
    #[arg(long, default_value_t = DEFAULT_CELLS)]
    pub cells: usize,
}

/// Failure of a run: usage problems exit with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(np_region::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Domain(e) => write!(f, "{}: {e}", e.name()),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl From<np_region::Error> for CliError {
    fn from(e: np_region::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a subcommand produced.
pub enum Output {
    Table(Table),
    /// Already-rendered JSON document, used for pairs.
    Json(String),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Table(t), Format::Csv) => t.to_csv(),
            (Output::Table(t), Format::Json) => t.to_json(),
            (Output::Json(s), _) => format!("{s}\n"),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> CliResult<CategoricalPair> {
    Ok(CategoricalPair::from_json(&read(path)?)?)
}

/// Reads `{"vertices": [[a, b], ...]}` or the JSON table this tool writes
/// for `boundary`, `{"columns": [...], "rows": [[a, b], ...]}`.
fn read_vertices(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let text = read(path)?;
    let bad = |what: &str| {
        CliError::Domain(np_region::Error::Parse {
            what: "vertex JSON",
            input: what.to_string(),
        })
    };
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let list = doc
        .get("vertices")
        .or_else(|| doc.get("rows"))
        .and_then(|v| v.as_array())
        .ok_or_else(|| bad("missing \"vertices\" array"))?;
    list.iter()
        .map(|v| match v.as_array().map(|a| a.as_slice()) {
            Some([a, b]) => match (a.as_f64(), b.as_f64()) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(bad(&v.to_string())),
            },
            _ => Err(bad(&v.to_string())),
        })
        .collect()
}

fn vertex_table(vertices: &[(f64, f64)], header: [&str; 2]) -> Table {
    let mut t = Table::new(header);
    for &(a, b) in vertices {
        t.push_nums(&[a, b]);
    }
    t
}

/// Shared window covering both families: `mean +- 10 sd_max`, clipped to
/// bounded supports.
pub fn analytic_window(pf: &AnalyticFamily, qf: &AnalyticFamily) -> (f64, f64) {
    let support = |f: &AnalyticFamily| match *f {
        AnalyticFamily::Uniform { a, b } => (a, b),
        AnalyticFamily::Beta { .. } => (0.0, 1.0),
        AnalyticFamily::Gaussian { mu, .. } => (mu, mu),
    };
    let sd = pf.std_dev().max(qf.std_dev());
    let reach = |f: &AnalyticFamily| match f {
        AnalyticFamily::Gaussian { .. } => {
            let (m, _) = support(f);
            (m - WINDOW_SIGMAS * sd, m + WINDOW_SIGMAS * sd)
        }
        _ => support(f),
    };
    let (a, b) = (reach(pf), reach(qf));
    (a.0.min(b.0), a.1.max(b.1))
}

fn discretize(
    pf: &AnalyticFamily,
    qf: &AnalyticFamily,
    cells: usize,
) -> CliResult<CategoricalPair> {
    let (lo, hi) = analytic_window(pf, qf);
    let grid = GridSpec::new(lo, hi, cells)?;
    Ok(discretize_analytic(pf, qf, &grid)?.pair)
}

fn curve_table(grid: usize, columns: &[(String, BoundCurve)]) -> CliResult<Table> {
    let mut t =
        Table::new(std::iter::once("alpha".to_string()).chain(columns.iter().map(|c| c.0.clone())));
    for a in unit_grid(grid) {
        let mut row = vec![a];
        for (_, c) in columns {
            row.push(c.eval(a)?);
        }
        t.push_nums(&row);
    }
    Ok(t)
}

/// Runs a parsed command line and returns the rendered output.
pub fn run(cli: &Cli) -> CliResult<String> {
    let out = match &cli.command {
        Command::Divergence(a) => divergence(a)?,
        Command::Boundary(a) => boundary(a)?,
        Command::Lower(a) => lower(a, cli.grid)?,
        Command::Upper(a) => upper(a, cli.grid)?,
        Command::Realize(a) => realize(a, cli.format)?,
        Command::Ber(a) => ber(a, cli.grid)?,
        Command::Samplesize(a) => samplesize(a)?,
        Command::Roc(a) => roc(a)?,
        Command::Figure(a) => figure(a, cli.grid)?,
    };
    Ok(out.render(cli.format))
}

/// Runs and writes to `--output` or returns the text for stdout.
pub fn run_and_write(cli: &Cli) -> CliResult<Option<String>> {
    let text = run(cli)?;
    match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn divergence(a: &DivergenceArgs) -> CliResult<Output> {
    let pair = read_pair(&a.pair)?;
    let mut t = Table::new(["generator", "value"]);
    for g in &a.generators {
        t.push(vec![
            Cell::Text(g.to_string()),
            Cell::Num(f_divergence(&pair, g).value),
        ]);
    }
    Ok(Output::Table(t))
}

fn boundary(a: &BoundaryArgs) -> CliResult<Output> {
    let pair = match (&a.pair, &a.p_family, &a.q_family) {
        (Some(path), None, None) => read_pair(path)?,
        (None, Some(pf), Some(qf)) => discretize(pf, qf, a.cells)?,
        _ => {
            return Err(CliError::Usage(
                "boundary needs --pair or both --p-family and --q-family".into(),
            ))
        }
    };
    let b = if a.brute_force {
        brute_force_boundary(&pair)?
    } else {
        exact_boundary(&pair)
    };
    Ok(Output::Table(vertex_table(b.vertices(), ["alpha", "beta"])))
}

fn lower(a: &LowerArgs, grid: usize) -> CliResult<Output> {
    let curve = match (&a.kind, &a.generator) {
        (Some(kind), None) => {
            let value = a
                .value
                .ok_or_else(|| CliError::Usage("--kind needs --value".into()))?;
            BoundCurve::named(*kind, value, a.n)?
        }
        (None, Some(gen)) => {
            if a.n != 1 {
                return Err(CliError::Usage("--n applies only to --kind".into()));
            }
            let d = a.divergence.expect("clap enforces --divergence");
            if a.reversed {
                BoundCurve::reversed(*gen, d)?
            } else {
                BoundCurve::generic(*gen, d)?
            }
        }
        _ => return Err(CliError::Usage("lower needs --kind or --gen".into())),
    };
    Ok(Output::Table(curve_table(grid, &[("beta".into(), curve)])?))
}

fn upper(a: &UpperArgs, grid: usize) -> CliResult<Output> {
    let raw = BoundCurve::chernoff_envelope(a.q, a.rho, a.n)?;
    let refined = BoundCurve::refined_chernoff(a.q, a.rho, a.n)?;
    let hull = BoundCurve::polyline(Side::Upper, convex_refine(&raw, a.hull_grid)?);
    Ok(Output::Table(curve_table(
        grid,
        &[
            ("envelope".into(), raw),
            ("refined".into(), refined),
            ("hull".into(), hull),
        ],
    )?))
}

fn realize(a: &RealizeArgs, format: Format) -> CliResult<Output> {
    if let Some(path) = &a.vertices {
        let pair = realize_categorical(&read_vertices(path)?)?;
        return Ok(match format {
            Format::Json => Output::Json(pair.to_json()),
            Format::Csv => {
                let mut t = Table::new(["label", "p", "q"]);
                for ((l, &p), &q) in pair.labels().iter().zip(pair.p()).zip(pair.q()) {
                    t.push(vec![Cell::Text(l.clone()), Cell::Num(p), Cell::Num(q)]);
                }
                Output::Table(t)
            }
        });
    }
    let path = a
        .boundary
        .as_ref()
        .expect("clap requires --vertices or --boundary");
    let b = PiecewiseLinearBoundary::new(read_vertices(path)?)?;
    let table = realize_unit_interval(|x| b.eval(x).unwrap_or(f64::NAN), a.knots)?;
    let mut t = Table::new(["x", "F"]);
    for (&x, &f) in table.knots().iter().zip(table.values()) {
        t.push_nums(&[x, f]);
    }
    Ok(Output::Table(t))
}

fn ber(a: &BerArgs, grid: usize) -> CliResult<Output> {
    let prior = PriorPair::new(a.prior)?;
    if let Some(path) = &a.pair {
        let b = exact_boundary(&read_pair(path)?);
        let (value, (alpha, beta)) = bayes_error(&b, prior);
        let mut t = Table::new(["pi_p", "ber", "alpha", "beta"]);
        t.push_nums(&[a.prior, value, alpha, beta]);
        return Ok(Output::Table(t));
    }
    let rho = a
        .rho
        .ok_or_else(|| CliError::Usage("ber needs --pair or --rho".into()))?;
    let lower = match (a.kind, a.value) {
        (Some(kind), Some(value)) => BoundCurve::named(kind, value, a.n)?,
        _ => BoundCurve::named(LowerKind::Alpha(a.q), rho, a.n)?,
    };
    let upper = BoundCurve::refined_chernoff(a.q, rho, a.n)?;
    let (lb, ub) = ber_bounds(&lower, &upper, prior, grid)?;
    let mut t = Table::new(["pi_p", "lower", "upper"]);
    t.push_nums(&[a.prior, lb, ub]);
    Ok(Output::Table(t))
}

fn samplesize(a: &SampleSizeArgs) -> CliResult<Output> {
    let exclusion = min_sample_size(a.q, a.rho, a.alpha, a.beta)?;
    let achievability = achievability_sample_size(a.q, a.rho, a.alpha, a.beta)?;
    let mut t = Table::new([
        "q",
        "rho",
        "alpha",
        "beta",
        "exclusion_n_bound",
        "achievability_n_bound",
    ]);
    t.push(vec![
        a.q.into(),
        a.rho.into(),
        a.alpha.into(),
        a.beta.into(),
        exclusion.into(),
        achievability.into(),
    ]);
    Ok(Output::Table(t))
}

fn roc(a: &RocArgs) -> CliResult<Output> {
    let b = exact_boundary(&read_pair(&a.pair)?);
    match (a.fpr, a.tpr) {
        (Some(fpr), Some(tpr)) => {
            let plan = roc_mixing_weight(&b, fpr, 1.0 - tpr)?;
            let mut t = Table::new(["fpr", "tpr", "lambda", "boundary_tpr", "ignorance_tpr"]);
            t.push_nums(&[
                fpr,
                tpr,
                plan.lambda,
                1.0 - plan.boundary_beta,
                1.0 - plan.ignorance_beta,
            ]);
            Ok(Output::Table(t))
        }
        _ => Ok(Output::Table(vertex_table(&roc_points(&b), ["fpr", "tpr"]))),
    }
}

fn figure(a: &FigureArgs, grid: usize) -> CliResult<Output> {
    let table = match a.which.as_str() {
        "1" => {
            let mut cols = Vec::new();
            for &v in &a.values {
                cols.push((
                    format!("kl_{}", fmt_g(v)),
                    BoundCurve::named(LowerKind::Kl, v, 1)?,
                ));
            }
            for &v in &a.values {
                // Squared Hellinger distance v corresponds to affinity 1 - v.
                cols.push((
                    format!("h2_{}", fmt_g(v)),
                    BoundCurve::named(LowerKind::Hellinger, 1.0 - v, 1)?,
                ));
            }
            for &v in &a.values {
                cols.push((
                    format!("tvd_{}", fmt_g(v)),
                    BoundCurve::named(LowerKind::Tvd, v, 1)?,
                ));
            }
            cols.push(("ignorance".into(), BoundCurve::ignorance(Side::Lower)));
            curve_table(grid, &cols)?
        }
        "2" => {
            let rho = a.rho.unwrap_or(0.99);
            let mut cols = Vec::new();
            for &n in &a.ns {
                cols.push((
                    format!("n_{n}"),
                    BoundCurve::named(LowerKind::Hellinger, rho, n)?,
                ));
            }
            cols.push(("ignorance".into(), BoundCurve::ignorance(Side::Lower)));
            curve_table(grid, &cols)?
        }
        "4" => {
            let rho = a.rho.unwrap_or(0.8);
            curve_table(
                grid,
                &[
                    ("raw".into(), BoundCurve::chernoff_envelope(a.q, rho, 1)?),
                    ("refined".into(), BoundCurve::refined_chernoff(a.q, rho, 1)?),
                    ("ignorance".into(), BoundCurve::ignorance(Side::Upper)),
                ],
            )?
        }
        "5" => figure5(a, grid)?,
        other => return Err(CliError::Usage(format!("unknown figure {other}"))),
    };
    Ok(Output::Table(table))
}

fn figure5(a: &FigureArgs, grid: usize) -> CliResult<Table> {
    let pair = discretize(&a.p_family, &a.q_family, a.cells)?;
    let rev = pair.swapped();
    let tvd = f_divergence(&pair, &FGenerator::Tvd).value;
    let rho = chernoff_coefficient(&pair, 0.5)?;
    let kl = f_divergence(&pair, &FGenerator::Kl).value;
    let kl_rev = f_divergence(&rev, &FGenerator::Kl).value;
    let chi2 = f_divergence(&pair, &FGenerator::Chi2).value;
    let chi2_rev = f_divergence(&rev, &FGenerator::Chi2).value;
    let b = exact_boundary(&pair);
    let cols = vec![
        ("boundary".to_string(), BoundCurve::polyline(Side::Lower, b)),
        ("tvd".into(), BoundCurve::named(LowerKind::Tvd, tvd, 1)?),
        (
            "hellinger".into(),
            BoundCurve::named(LowerKind::Hellinger, rho, 1)?,
        ),
        ("kl".into(), BoundCurve::named(LowerKind::Kl, kl, 1)?),
        (
            "kl_rev".into(),
            BoundCurve::reversed(FGenerator::Kl, kl_rev)?,
        ),
        (
            "chi2_fwd".into(),
            BoundCurve::named(LowerKind::Chi2Forward, chi2, 1)?,
        ),
        (
            "chi2_rev".into(),
            BoundCurve::named(LowerKind::Chi2Reverse, chi2_rev, 1)?,
        ),
        (
            "pinsker".into(),
            BoundCurve::named(LowerKind::Pinsker, kl, 1)?,
        ),
    ];
    curve_table(grid, &cols)
}
