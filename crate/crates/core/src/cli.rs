//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a verified property fails, 2 for usage, configuration
//! and pipeline errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curve::{aggregate, classify_segments, extract_curve, ExtractOptions, StaircaseCurve};
use crate::error::{Error, Result};
use crate::io::{curve_to_string, render_curve_svg, render_family_svg, render_schedule_svg, CurveFormat, RunConfig};
use crate::model::{solve_schedule, PriceSeries, ResourceSpec};
use crate::verify::{
    check_complementarity, check_segment_bounds, check_staircase, check_structure, run_suite, PropertyReport, Suite,
};

#[derive(Parser, Debug)]
#[command(name = "bidcurve", version, about = "Staircase bid curves for storage-like resources")]
struct Cli {
    /// Output directory (default: the config's `out_dir`, else `.`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    price_tol: Option<f64>,
    #[arg(long, global = true)]
    level_tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract, classify and export the bid curve of one resource.
    Curve {
        config: PathBuf,
        /// Skip curve.svg.
        #[arg(long)]
        no_svg: bool,
    },
    /// Run verification batches, or the property checks on one config.
    Verify {
        config: Option<PathBuf>,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Sum the curves of several resources sharing a price axis.
    Aggregate {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Export a family of curves over one parameter.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
    },
    /// Solve the look-ahead schedule at one first-period price.
    Schedule {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c1: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    /// Initial state of charge as a fraction of capacity.
    Soc,
    /// Both charging and discharging efficiency.
    Efficiency,
    Dissipation,
    /// Multiplier on every forecast.
    ForecastScale,
}

fn init_threads() {
    if let Some(n) = std::env::var("BIDCURVE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, e.g. on a second call.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_threads();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Curve { config, no_svg } => {
            let cfg = RunConfig::load(config)?;
            let (r, prices) = cfg.resolve()?;
            let curve = curve_for(&r, &prices, &options(cli, &cfg))?;
            let out = out_dir(cli, Some(&cfg))?;
            write_curve_files(&out, "curve", &curve, !no_svg)?;
            print_curve(&curve);
            Ok(0)
        }
        Command::Verify {
            config,
            suite,
            instances,
        } => {
            let reports = match config {
                Some(path) => {
                    let cfg = RunConfig::load(path)?;
                    let (r, prices) = cfg.resolve()?;
                    let curve = curve_for(&r, &prices, &options(cli, &cfg))?;
                    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
                    let reports = config_checks(&curve, &r, &prices, seed)?;
                    write_json(&out_dir(cli, Some(&cfg))?.join("verify.json"), &reports)?;
                    reports
                }
                None => {
                    let suite: Suite = suite.parse()?;
                    let opts = ExtractOptions {
                        price_tol: cli.price_tol,
                        level_tol: cli.level_tol,
                        ..Default::default()
                    };
                    let rep = run_suite(suite, *instances, cli.seed.unwrap_or(0), &opts);
                    for (family, (pass, fail)) in rep.summary() {
                        println!("{family:<20} {pass:>5} passed {fail:>5} failed");
                    }
                    write_json(&out_dir(cli, None)?.join("verify.json"), &rep)?;
                    rep.reports
                }
            };
            let failures: Vec<&PropertyReport> = reports.iter().filter(|r| !r.passed()).collect();
            for f in &failures {
                println!("{f}");
            }
            if config.is_some() {
                for r in &reports {
                    if r.passed() {
                        println!("{r}");
                    }
                }
            }
            Ok(if failures.is_empty() { 0 } else { 1 })
        }
        Command::Aggregate { configs } => {
            let mut curves = Vec::with_capacity(configs.len());
            let mut first = None;
            for path in configs {
                let cfg = RunConfig::load(path)?;
                let (r, prices) = cfg.resolve()?;
                curves.push(curve_for(&r, &prices, &options(cli, &cfg))?);
                first.get_or_insert(cfg);
            }
            let total = aggregate(&curves)?;
            write_curve_files(&out_dir(cli, first.as_ref())?, "aggregate", &total, true)?;
            print_curve(&total);
            Ok(0)
        }
        Command::Sweep { config, param, values } => {
            let cfg = RunConfig::load(config)?;
            let (r, prices) = cfg.resolve()?;
            let opts = options(cli, &cfg);
            let mut family = Vec::with_capacity(values.len());
            for &v in values {
                let (r2, p2) = swept(&r, &prices, *param, v)?;
                let curve = curve_for(&r2, &p2, &opts)?;
                println!("{v:>10}: {} levels {:?}", curve.num_levels(), curve.levels);
                family.push((v, curve));
            }
            let out = out_dir(cli, Some(&cfg))?;
            #[derive(Serialize)]
            struct Member<'a> {
                value: f64,
                curve: &'a StaircaseCurve,
            }
            #[derive(Serialize)]
            struct Family<'a> {
                param: SweepParam,
                members: Vec<Member<'a>>,
            }
            let doc = Family {
                param: *param,
                members: family.iter().map(|(value, curve)| Member { value: *value, curve }).collect(),
            };
            write_json(&out.join("sweep.json"), &doc)?;
            let named: Vec<(String, StaircaseCurve)> = family
                .iter()
                .map(|(v, c)| (format!("{} = {v}", param_name(*param)), c.clone()))
                .collect();
            write_text(&out.join("sweep.svg"), &render_family_svg(&named)?)?;
            Ok(0)
        }
        Command::Schedule { config, c1 } => {
            let cfg = RunConfig::load(config)?;
            let (r, prices) = cfg.resolve()?;
            let s = solve_schedule(&r, &prices, *c1)?;
            let out = out_dir(cli, Some(&cfg))?;
            write_json(&out.join("schedule.json"), &s)?;
            let unit = if matches!(r, ResourceSpec::Ac(_)) { "degC" } else { "MWh" };
            write_text(&out.join("schedule.svg"), &render_schedule_svg(&s, prices.delta_t, unit)?)?;
            println!("P1 = {} MW, objective = {}", s.power[0], s.objective);
            if let Some(d) = &s.diagnostics {
                println!(
                    "t_b = {:?} ({:?}), n_c = {}, n_d = {}, n_0 = {}, threshold = {:?}",
                    d.t_b, d.terminal, d.n_c, d.n_d, d.n_0, d.threshold
                );
            }
            Ok(0)
        }
    }
}

fn param_name(p: SweepParam) -> &'static str {
    match p {
        SweepParam::Soc => "soc",
        SweepParam::Efficiency => "efficiency",
        SweepParam::Dissipation => "dissipation",
        SweepParam::ForecastScale => "forecast scale",
    }
}

fn options(cli: &Cli, cfg: &RunConfig) -> ExtractOptions {
    let mut o = cfg.extract.options();
    if cli.price_tol.is_some() {
        o.price_tol = cli.price_tol;
    }
    if cli.level_tol.is_some() {
        o.level_tol = cli.level_tol;
    }
    o
}

fn out_dir(cli: &Cli, cfg: Option<&RunConfig>) -> Result<PathBuf> {
    let dir = match (&cli.out, cfg.and_then(|c| c.out_dir.as_ref().map(|d| c.base_dir.join(d)))) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => d,
        (None, None) => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn curve_for(r: &ResourceSpec, prices: &PriceSeries, opts: &ExtractOptions) -> Result<StaircaseCurve> {
    let c = extract_curve(r, prices, opts)?;
    classify_segments(&c, r, prices)
}

fn swept(r: &ResourceSpec, prices: &PriceSeries, param: SweepParam, v: f64) -> Result<(ResourceSpec, PriceSeries)> {
    if param == SweepParam::ForecastScale {
        let mut p = prices.clone();
        p.future_prices.iter_mut().for_each(|c| *c *= v);
        return Ok((r.clone(), p));
    }
    let mut b = r
        .battery()
        .cloned()
        .ok_or_else(|| Error::invalid(format!("sweeping {} needs a battery resource", param_name(param))))?;
    match param {
        SweepParam::Soc => b.e_init = v * b.e_max,
        SweepParam::Efficiency => b = b.with_efficiency(v),
        SweepParam::Dissipation => b = b.with_dissipation(v),
        SweepParam::ForecastScale => unreachable!(),
    }
    let r = if b.is_ideal() {
        ResourceSpec::IdealBattery(b)
    } else {
        ResourceSpec::ImperfectBattery(b)
    };
    r.validate()?;
    Ok((r, prices.clone()))
}

fn config_checks(curve: &StaircaseCurve, r: &ResourceSpec, prices: &PriceSeries, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut out = vec![check_staircase(curve, r, prices, 200, seed), check_segment_bounds(curve, r)];
    if let Some(p) = r.battery() {
        let mut structure = PropertyReport::new("structure");
        let mut comp = PropertyReport::new("complementarity").tol("comp_tol", p.comp_tol());
        for c1 in curve.representative_prices() {
            let s = solve_schedule(r, prices, c1)?;
            for w in check_structure(&s, p).witnesses {
                structure.fail(Some(c1), w.detail);
            }
            for w in check_complementarity(&s, p).witnesses {
                comp.fail(Some(c1), w.detail);
            }
        }
        out.push(structure);
        out.push(comp);
    }
    Ok(out.into_iter().map(|r| r.for_instance("config")).collect())
}

fn write_text(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    s.push('\n');
    write_text(path, &s)
}

fn write_curve_files(dir: &Path, stem: &str, curve: &StaircaseCurve, svg: bool) -> Result<()> {
    write_text(&dir.join(format!("{stem}.json")), &curve_to_string(curve, CurveFormat::Json))?;
    write_text(&dir.join(format!("{stem}.csv")), &curve_to_string(curve, CurveFormat::Csv))?;
    if svg {
        write_text(&dir.join(format!("{stem}.svg")), &render_curve_svg(curve)?)?;
    }
    Ok(())
}

fn print_curve(curve: &StaircaseCurve) {
    for ((lo, hi, level), label) in curve.stairs().into_iter().zip(&curve.labels) {
        println!("[{lo:>12.4}, {hi:>12.4})  {level:>10.4} MW  {}", label.kind);
    }
}
