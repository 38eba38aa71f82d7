//! Command-line front end. Exit codes: 0 success, 2 configuration error,
//! 3 numerical failure.

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assembly::{assemble, GalerkinSystem, DEFAULT_NNZ_CAP};
use crate::error::{Error, Result};
use crate::extremal::{witness_lower, witness_upper, WitnessReport};
use crate::index_set::{
    bounds_quantities, bounds_quantities_of, gap_example, make_energy_optimized, make_full_grid,
    make_standard_sparse, monotone_closure, read_index_file, BoundsReport, MonotoneIndexSet,
    MultiIndex, Ratio,
};
use crate::report;
use crate::solver::{model_rhs, pcg, ModelRhs, DEFAULT_PCG_MAXIT};
use crate::space::SparseGridSpace;
use crate::spectral::{
    dense_extremal_eigs, lanczos_extremal_eigs, SpectralReport, DEFAULT_DENSE_CAP,
    DEFAULT_LANCZOS_MAXIT, DEFAULT_LANCZOS_TOL, DEFAULT_SEED,
};
use crate::transform::{evaluate_function, hierarchize, NodalValues};

#[derive(Parser)]
#[command(name = "hbgrid", version, about = "Sparse grid hierarchical-basis condition numbers")]
struct Cli {
    /// Cap BLAS worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Full,
    Sparse,
    Energy,
    File,
    Gap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dense,
    Lanczos,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Index-set family
    #[arg(long, value_enum)]
    family: Family,
    /// Spatial dimension
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Level parameter: a single k or an inclusive range "lo..hi"
    #[arg(long)]
    k: Option<String>,
    /// Energy-optimization parameter, rational "p/q" (family energy)
    #[arg(long)]
    a: Option<String>,
    /// Index-set file, one multi-index per line (family file)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpectralArgs {
    /// Eigenvalue method; auto picks dense up to 4000 rows
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Residual tolerance for iterative methods
    #[arg(long, default_value_t = DEFAULT_LANCZOS_TOL)]
    tol: f64,
    /// RNG seed for iterative starting vectors
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Condition numbers and combinatorial bounds, one row per k
    Condition {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Normalized condition numbers rho_k = kappa / (k^(d-1) 2^(k rate))
    Asymptotics {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Combinatorial quantities n, n~, n~' of the index set
    Bounds {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rayleigh-quotient witnesses for the extreme eigenvalues
    Witness {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve the scaled Galerkin system by preconditioned CG
    Solve {
        #[command(flatten)]
        family: FamilyArgs,
        /// Model right-hand side: constant_one | product_sine
        #[arg(long, default_value = "constant_one")]
        rhs: String,
        /// PCG relative residual tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Interpolate a model function and evaluate at a point
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        /// Model function to interpolate: constant_one | product_sine
        #[arg(long, default_value = "product_sine")]
        rhs: String,
        /// Evaluation point, comma-separated coordinates in (0,1)
        #[arg(long)]
        point: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(t) = cli.threads {
        // must happen before the first BLAS call
        std::env::set_var("OPENBLAS_NUM_THREADS", t.to_string());
        std::env::set_var("OMP_NUM_THREADS", t.to_string());
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::from(0),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. }
        | Error::SolverStalled { .. }
        | Error::Lapack { .. }
        | Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Condition { family, spectral, output } => cmd_condition(family, spectral, output),
        Command::Asymptotics { family, spectral, output } => {
            cmd_asymptotics(family, spectral, output)
        }
        Command::Bounds { family, output } => cmd_bounds(family, output),
        Command::Witness { family, spectral, output } => cmd_witness(family, spectral, output),
        Command::Solve { family, rhs, tol, output } => cmd_solve(family, rhs, tol, output),
        Command::Eval { family, rhs, point, output } => cmd_eval(family, rhs, point, output),
    }
}

fn parse_k_range(s: &str) -> Result<Vec<u32>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| Error::Parse(format!("bad k range '{s}'")))?;
        let hi: u32 = hi.trim().parse().map_err(|_| Error::Parse(format!("bad k range '{s}'")))?;
        if lo < 1 || hi < lo {
            return Err(Error::InvalidArgument(format!("empty k range '{s}'")));
        }
        Ok((lo..=hi).collect())
    } else {
        let k: u32 = s.trim().parse().map_err(|_| Error::Parse(format!("bad k '{s}'")))?;
        if k < 1 {
            return Err(Error::InvalidArgument("k must be >= 1".into()));
        }
        Ok(vec![k])
    }
}

impl FamilyArgs {
    fn k_values(&self) -> Result<Vec<u32>> {
        match (&self.family, &self.k) {
            (Family::File, _) => Ok(vec![0]), // placeholder; file ignores k
            (_, Some(s)) => parse_k_range(s),
            (_, None) => Err(Error::InvalidArgument("--k is required for this family".into())),
        }
    }

    fn a_value(&self) -> Result<Ratio> {
        let s = self
            .a
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("--a is required for family energy".into()))?;
        let a = Ratio::parse(s)?;
        if a.num >= a.den {
            return Err(Error::InvalidArgument("energy parameter must satisfy a < 1".into()));
        }
        Ok(a)
    }

    fn build(&self, k: u32) -> Result<MonotoneIndexSet> {
        if self.d < 1 {
            return Err(Error::InvalidArgument("d must be >= 1".into()));
        }
        match self.family {
            Family::Full => Ok(make_full_grid(&MultiIndex::new(vec![k; self.d])?)),
            Family::Sparse => make_standard_sparse(k, self.d),
            Family::Energy => make_energy_optimized(k, self.d, self.a_value()?),
            Family::Gap => gap_example(k, self.d).map(|(set, _)| set),
            Family::File => {
                let path = self.file.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("--file is required for family file".into())
                })?;
                let (indices, monotone) = read_index_file(BufReader::new(fs::File::open(path)?))?;
                if !monotone {
                    eprintln!("warning: index set is not monotone; using its closure");
                }
                monotone_closure(&indices)
            }
        }
    }
}

fn spectral_report(system: &GalerkinSystem, args: &SpectralArgs) -> Result<SpectralReport> {
    let use_dense = match args.method {
        MethodArg::Dense => true,
        MethodArg::Lanczos => false,
        MethodArg::Auto => system.dim() <= DEFAULT_DENSE_CAP,
    };
    if use_dense {
        dense_extremal_eigs(system, usize::MAX)
    } else {
        lanczos_extremal_eigs(system, args.tol, args.seed, DEFAULT_LANCZOS_MAXIT)
    }
}

fn emit(output: &OutputArgs, content: String) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct ConditionRow {
    k: u32,
    dim: usize,
    lambda_min: f64,
    lambda_max: f64,
    kappa: f64,
    n_lambda: usize,
    #[serde(serialize_with = "report::serialize_biguint")]
    n_tilde: num_bigint::BigUint,
    #[serde(serialize_with = "report::serialize_biguint")]
    n_tilde_prime: num_bigint::BigUint,
    kappa_over_lower: f64,
    kappa_over_upper: f64,
}

fn condition_rows(family: &FamilyArgs, spectral: &SpectralArgs) -> Result<Vec<ConditionRow>> {
    let mut rows = Vec::new();
    for k in family.k_values()? {
        let set = family.build(k)?;
        let bounds = bounds_quantities(&set)?;
        let k_out = if family.family == Family::File { bounds.k_lambda } else { k };
        let space = SparseGridSpace::new(set)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let sp = spectral_report(&system, spectral)?;
        let sandwich = crate::spectral::sandwich_check(&bounds, &sp);
        rows.push(ConditionRow {
            k: k_out,
            dim: space.dim(),
            lambda_min: sp.lambda_min,
            lambda_max: sp.lambda_max,
            kappa: sp.kappa,
            n_lambda: bounds.n_lambda,
            n_tilde: bounds.n_tilde,
            n_tilde_prime: bounds.n_tilde_prime,
            kappa_over_lower: sandwich.ratio_lower,
            kappa_over_upper: sandwich.ratio_upper,
        });
    }
    Ok(rows)
}

fn cmd_condition(family: FamilyArgs, spectral: SpectralArgs, output: OutputArgs) -> Result<()> {
    let rows = condition_rows(&family, &spectral)?;
    let content = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from(
                "k,dim,lambda_min,lambda_max,kappa,n_lambda,n_tilde,n_tilde_prime,\
                 kappa_over_lower,kappa_over_upper\r\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\r\n",
                    r.k,
                    r.dim,
                    r.lambda_min,
                    r.lambda_max,
                    r.kappa,
                    r.n_lambda,
                    r.n_tilde,
                    r.n_tilde_prime,
                    r.kappa_over_lower,
                    r.kappa_over_upper
                ));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                rows: Vec<ConditionRow>,
            }
            report::to_json(Body { rows }) + "\n"
        }
    };
    emit(&output, content)
}

/// kappa growth exponent per level for each family.
pub fn asymptotic_rate(family_is_full: bool, d: usize, a: Option<Ratio>) -> f64 {
    let d = d as f64;
    match (family_is_full, a) {
        (true, _) => d - 1.0,
        (false, None) => (d - 1.0) / d,
        (false, Some(a)) => {
            let a = a.as_f64();
            (d - 1.0) * (1.0 - a) / (d - a)
        }
    }
}

#[derive(Serialize)]
struct AsymptoticsRow {
    k: u32,
    dim: usize,
    kappa: f64,
    rho: f64,
}

fn cmd_asymptotics(family: FamilyArgs, spectral: SpectralArgs, output: OutputArgs) -> Result<()> {
    let rate = match family.family {
        Family::Full => asymptotic_rate(true, family.d, None),
        Family::Sparse => asymptotic_rate(false, family.d, None),
        Family::Energy => asymptotic_rate(false, family.d, Some(family.a_value()?)),
        _ => {
            return Err(Error::InvalidArgument(
                "asymptotics needs family full, sparse, or energy".into(),
            ))
        }
    };
    let ks = family.k_values()?;
    if ks.len() < 4 {
        return Err(Error::InvalidArgument("asymptotics needs a k-range of length >= 4".into()));
    }
    let rows: Vec<AsymptoticsRow> = condition_rows(&family, &spectral)?
        .into_iter()
        .map(|r| {
            let scale = (r.k as f64).powi(family.d as i32 - 1) * 2.0f64.powf(r.k as f64 * rate);
            AsymptoticsRow { k: r.k, dim: r.dim, kappa: r.kappa, rho: r.kappa / scale }
        })
        .collect();
    let rho_max = rows.iter().map(|r| r.rho).fold(f64::MIN, f64::max);
    let rho_min = rows.iter().map(|r| r.rho).fold(f64::MAX, f64::min);
    let content = match output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("k,dim,kappa,rho\r\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{}\r\n", r.k, r.dim, r.kappa, r.rho));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body {
                rate: f64,
                rho_max_over_min: f64,
                rows: Vec<AsymptoticsRow>,
            }
            report::to_json(Body { rate, rho_max_over_min: rho_max / rho_min, rows }) + "\n"
        }
    };
    emit(&output, content)
}

fn cmd_bounds(family: FamilyArgs, output: OutputArgs) -> Result<()> {
    #[derive(Serialize)]
    struct LiteralPart {
        size: usize,
        bounds: BoundsReport,
    }
    #[derive(Serialize)]
    struct Body {
        d: usize,
        k: u32,
        size: usize,
        bounds: BoundsReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        literal: Option<LiteralPart>,
    }
    let mut bodies = Vec::new();
    for k in family.k_values()? {
        let set = family.build(k)?;
        let bounds = bounds_quantities(&set)?;
        let literal = if family.family == Family::Gap {
            let (_, literal_indices) = gap_example(k, family.d)?;
            Some(LiteralPart {
                size: literal_indices.len(),
                bounds: bounds_quantities_of(&literal_indices)?,
            })
        } else {
            None
        };
        bodies.push(Body {
            d: set.dim(),
            k: if family.family == Family::File { bounds.k_lambda } else { k },
            size: set.len(),
            bounds,
            literal,
        });
    }
    if output.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("bounds reports are JSON only".into()));
    }
    let content = if bodies.len() == 1 {
        report::to_json(bodies.pop().expect("non-empty")) + "\n"
    } else {
        #[derive(Serialize)]
        struct Multi<T: Serialize> {
            reports: Vec<T>,
        }
        report::to_json(Multi { reports: bodies }) + "\n"
    };
    emit(&output, content)
}

fn cmd_witness(family: FamilyArgs, spectral: SpectralArgs, output: OutputArgs) -> Result<()> {
    #[derive(Serialize)]
    struct Body {
        d: usize,
        k: u32,
        dim: usize,
        lambda_min: f64,
        lambda_max: f64,
        sbar: WitnessReport,
        psi: WitnessReport,
        sbar_below_lambda_max: bool,
        psi_above_lambda_min: bool,
    }
    if output.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("witness reports are JSON only".into()));
    }
    let mut bodies = Vec::new();
    for k in family.k_values()? {
        let set = family.build(k)?;
        let d = set.dim();
        let space = SparseGridSpace::new(set)?;
        let system = assemble(&space, DEFAULT_NNZ_CAP)?;
        let sp = spectral_report(&system, &spectral)?;
        let sbar = witness_upper(&space, &system)?;
        let psi = witness_lower(&space, &system, false)?;
        bodies.push(Body {
            d,
            k: if family.family == Family::File { space.index_set().k_lambda() } else { k },
            dim: space.dim(),
            lambda_min: sp.lambda_min,
            lambda_max: sp.lambda_max,
            sbar_below_lambda_max: sbar.rayleigh <= sp.lambda_max * (1.0 + 1e-8),
            psi_above_lambda_min: psi.rayleigh >= sp.lambda_min * (1.0 - 1e-8),
            sbar,
            psi,
        });
    }
    let content = if bodies.len() == 1 {
        report::to_json(bodies.pop().expect("non-empty")) + "\n"
    } else {
        #[derive(Serialize)]
        struct Multi<T: Serialize> {
            reports: Vec<T>,
        }
        report::to_json(Multi { reports: bodies }) + "\n"
    };
    emit(&output, content)
}

fn cmd_solve(family: FamilyArgs, rhs: String, tol: f64, output: OutputArgs) -> Result<()> {
    #[derive(Serialize)]
    struct Body {
        dim: usize,
        rhs: String,
        iterations: usize,
        residual: f64,
        converged: bool,
        solution_h1_sq: f64,
    }
    if output.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("solve reports are JSON only".into()));
    }
    let kind = ModelRhs::parse(&rhs)?;
    let ks = family.k_values()?;
    if ks.len() != 1 {
        return Err(Error::InvalidArgument("solve takes a single k".into()));
    }
    let set = family.build(ks[0])?;
    let space = SparseGridSpace::new(set)?;
    let system = assemble(&space, DEFAULT_NNZ_CAP)?;
    let b = model_rhs(&space, kind);
    let (x, stats) = pcg(&system, &b, tol, DEFAULT_PCG_MAXIT)?;
    let (_, h1_sq, _) = system.norms(&x)?;
    let content = report::to_json(Body {
        dim: space.dim(),
        rhs,
        iterations: stats.iterations,
        residual: stats.residual,
        converged: stats.converged,
        solution_h1_sq: h1_sq,
    }) + "\n";
    emit(&output, content)
}

fn cmd_eval(family: FamilyArgs, rhs: String, point: String, output: OutputArgs) -> Result<()> {
    #[derive(Serialize)]
    struct Body {
        dim: usize,
        point: Vec<f64>,
        value: f64,
        target: f64,
    }
    if output.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("eval reports are JSON only".into()));
    }
    let kind = ModelRhs::parse(&rhs)?;
    let ks = family.k_values()?;
    if ks.len() != 1 {
        return Err(Error::InvalidArgument("eval takes a single k".into()));
    }
    let set = family.build(ks[0])?;
    let space = SparseGridSpace::new(set)?;
    let x: Vec<f64> = point
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<_>>()?;
    if x.len() != space.spatial_dim() {
        return Err(Error::DimensionMismatch { expected: space.spatial_dim(), got: x.len() });
    }
    let f = |p: &[f64]| -> f64 {
        match kind {
            ModelRhs::ConstantOne => 1.0,
            ModelRhs::ProductSine => {
                p.iter().map(|&t| (std::f64::consts::PI * t).sin()).product()
            }
        }
    };
    let samples = NodalValues(
        (0..space.dim())
            .map(|i| {
                let p: Vec<f64> = space.node(i).iter().map(|c| c.value()).collect();
                f(&p)
            })
            .collect(),
    );
    let c = hierarchize(&space, &samples)?;
    let value = evaluate_function(&space, &c, &x)?;
    let content =
        report::to_json(Body { dim: space.dim(), target: f(&x), point: x, value }) + "\n";
    emit(&output, content)
}
