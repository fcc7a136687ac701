//! `meshforge` command-line tool.
//!
//! Exit codes: 0 success, 1 a computed check failed, 2 bad usage or input.

mod config;
mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use meshforge::dg::{check_d_squared, dg_auslander, h0, DgPresentation};
use meshforge::homology::{cy_duality_check, cy_fraction, ext_table_from_quiver, stable_quotient};
use meshforge::koszul::{koszul_cohomology, koszul_dual, AugmentedDgAlgebra};
use meshforge::quiver::{
    ade_translation_quiver, export_quiver, export_translation_quiver, is_dynkin, parse_quiver,
    Family, Format, TranslationQuiver,
};
use meshforge::Rational;
use serde_json::{json, Value};

use config::{SuiteConfig, CONFIG_ENV};

#[derive(Parser)]
#[command(
    name = "meshforge",
    version,
    about = "dg Auslander algebras of ADE singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable translation quiver of an ADE type, as json, dot or tikz.
    Gen(Opts),
    /// Build the dg Auslander algebra and check d² = 0.
    Dg {
        #[command(flatten)]
        opts: Opts,
        /// Also compute H⁰.
        #[arg(long)]
        h0: bool,
    },
    /// Ext table of the simples from the mesh resolutions.
    Ext(Opts),
    /// Calabi-Yau duality and fractions.
    Cy(Opts),
    /// Koszul dual and its cohomology in degrees 0..4.
    Koszul(Opts),
    /// Run the verification suite.
    Verify(Opts),
}

#[derive(Args, Clone, Default)]
struct Opts {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    index: Option<usize>,
    /// Krull dimension; only its parity matters.
    #[arg(long)]
    dim: Option<usize>,
    /// Quiver (or augmented algebra) JSON file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Word-length bound L.
    #[arg(long)]
    trunc: Option<usize>,
    /// Tensor-length bound W.
    #[arg(long)]
    words: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<meshforge::Error> for Failure {
    fn from(e: meshforge::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

impl Opts {
    fn format(&self) -> CliResult<Format> {
        self.format
            .as_deref()
            .unwrap_or("json")
            .parse()
            .map_err(usage)
    }

    fn generator(&self) -> CliResult<Option<(Family, usize, usize)>> {
        let Some(f) = &self.family else {
            return Ok(None);
        };
        let family: Family = f.parse().map_err(usage)?;
        let index = self.index.ok_or_else(|| usage("--family needs --index"))?;
        if !is_dynkin(family, index) {
            return Err(usage(format!("{family}{index} is not a Dynkin type")));
        }
        Ok(Some((family, index, self.dim.unwrap_or(0))))
    }

    fn name(&self) -> String {
        match (&self.family, &self.input) {
            (Some(f), _) => format!(
                "{}{}_dim{}",
                f.to_uppercase(),
                self.index.unwrap_or(0),
                self.dim.unwrap_or(0)
            ),
            (None, Some(p)) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            _ => "out".into(),
        }
    }

    fn read_input(&self) -> CliResult<Option<String>> {
        match &self.input {
            Some(p) => std::fs::read_to_string(p)
                .map(Some)
                .map_err(|e| usage(format!("{}: {e}", p.display()))),
            None => Ok(None),
        }
    }

    /// The quiver named by `--family/--index/--dim` or `--in`.
    fn quiver(&self) -> CliResult<TranslationQuiver> {
        if let Some((f, n, d)) = self.generator()? {
            return Ok(ade_translation_quiver(f, n, d)?);
        }
        match self.read_input()? {
            Some(text) => parse_quiver(&text).map_err(usage),
            None => Err(usage("give --family/--index/--dim or --in")),
        }
    }
}

fn emit(opts: &Opts, command: &str, ext: &str, text: &str) -> CliResult<()> {
    match &opts.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{command}_{}.{ext}", opts.name()));
            std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(opts: &Opts, command: &str, v: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v).expect("json values serialize");
    text.push('\n');
    emit(opts, command, "json", &text)
}

fn extension(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Tikz => "tex",
    }
}

fn gen(opts: &Opts) -> CliResult<bool> {
    let format = opts.format()?;
    let tq = opts.quiver()?;
    emit(
        opts,
        "gen",
        extension(format),
        &export_translation_quiver(&tq, format),
    )?;
    Ok(true)
}

fn load_dg(opts: &Opts, bound: usize) -> CliResult<DgPresentation<Rational>> {
    if opts.family.is_none() {
        if let Some(text) = opts.read_input()? {
            let v: Value = serde_json::from_str(&text).map_err(usage)?;
            if v.get("diff").is_some() {
                return DgPresentation::from_json(&text).map_err(usage);
            }
        }
    }
    let tq = opts.quiver()?;
    let stable = if tq.projective_vertices().is_empty() {
        tq
    } else {
        tq.stable_part()
    };
    Ok(dg_auslander(&stable, bound)?)
}

fn blocks(b: &BTreeMap<(String, String), usize>) -> Value {
    Value::Array(
        b.iter()
            .map(|((s, t), d)| json!({"src": s, "tgt": t, "dim": d}))
            .collect(),
    )
}

fn dg(opts: &Opts, want_h0: bool) -> CliResult<bool> {
    let l = opts.trunc.unwrap_or(20);
    let format = opts.format()?;
    let dg = load_dg(opts, l)?;
    let ok = check_d_squared(&dg);
    if format != Format::Json {
        emit(
            opts,
            "dg",
            extension(format),
            &export_quiver(&dg.quiver().quiver, format),
        )?;
        return Ok(ok);
    }
    let mut report = json!({"presentation": dg.to_json(), "d_squared": ok});
    if want_h0 {
        let a = h0(&dg, l)?;
        report["h0"] = json!({"dim": a.dim(), "blocks": blocks(&a.block_dims()), "stabilized": a.stabilized, "L_used": a.l_used});
    }
    emit_json(opts, "dg", &report)?;
    Ok(ok)
}

fn ext(opts: &Opts) -> CliResult<bool> {
    let tq = opts.quiver()?;
    let t = ext_table_from_quiver(&tq, 1, &BTreeMap::new())?;
    emit_json(opts, "ext", &t.to_json())?;
    Ok(true)
}

fn cy(opts: &Opts) -> CliResult<bool> {
    let tq = opts.quiver()?;
    let t = ext_table_from_quiver(&tq, 1, &BTreeMap::new())?;
    let ok = cy_duality_check(&t);
    let mut fractions = BTreeMap::new();
    for v in tq.non_projective_vertices() {
        let (num, den) = cy_fraction(&tq, &v, 1)?;
        fractions.insert(v, format!("{num}/{den}"));
    }
    emit_json(
        opts,
        "cy",
        &json!({"duality": ok, "fractions": fractions, "d": 1}),
    )?;
    Ok(ok)
}

fn koszul(opts: &Opts) -> CliResult<bool> {
    let l = opts.trunc.unwrap_or(20);
    let w = opts.words.unwrap_or(12);
    let text = if opts.family.is_none() {
        opts.read_input()?
    } else {
        None
    };
    let alg: AugmentedDgAlgebra<Rational> = match text {
        Some(t)
            if serde_json::from_str::<Value>(&t)
                .map_err(usage)?
                .get("basis")
                .is_some() =>
        {
            AugmentedDgAlgebra::from_json(&serde_json::from_str(&t).map_err(usage)?)
                .map_err(usage)?
        }
        _ => {
            let tq = opts.quiver()?;
            let a = if tq.projective_vertices().is_empty() {
                h0(&dg_auslander::<Rational>(&tq, l)?, l)?
            } else {
                stable_quotient(&tq, l)?
            };
            AugmentedDgAlgebra::from_algebra(&a)?
        }
    };
    let e = koszul_dual(&alg, w)?;
    let top = 4.min(w as i32 - 1);
    let h = koszul_cohomology(&e, 0, top, w)?;
    let ok = e.check_d_squared();
    let cohomology: serde_json::Map<String, Value> = h
        .iter()
        .map(|(n, d)| {
            (
                n.to_string(),
                json!({"dim": d.dim, "stabilized": d.stabilized, "blocks": blocks(&d.blocks)}),
            )
        })
        .collect();
    emit_json(
        opts,
        "koszul",
        &json!({"generators": e.generators.len(), "W": w, "d_squared": ok, "cohomology": cohomology}),
    )?;
    Ok(ok)
}

fn suite_config(opts: &Opts) -> CliResult<SuiteConfig> {
    let path = opts
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => SuiteConfig::load(&p).map_err(usage)?,
        None => SuiteConfig::default(),
    };
    if let Some(f) = &opts.family {
        cfg.set("families", f).map_err(usage)?;
    }
    if let Some(l) = opts.trunc {
        cfg.l_max = l;
    }
    if let Some(w) = opts.words {
        cfg.w_max = w;
    }
    if let Some(o) = &opts.out {
        cfg.out = Some(o.clone());
    }
    cfg.check().map_err(usage)?;
    Ok(cfg)
}

fn verify(opts: &Opts) -> CliResult<bool> {
    let cfg = suite_config(opts)?;
    let report = suite::run(&cfg);
    let body =
        serde_json::to_string_pretty(&report.to_json()).expect("json values serialize") + "\n";
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            let write = |name: &str, text: &str| {
                std::fs::write(dir.join(name), text).map_err(|e| usage(format!("{name}: {e}")))
            };
            write("report.json", &body)?;
            write(
                "timings.json",
                &(serde_json::to_string_pretty(&report.timings_json()).expect("json") + "\n"),
            )?;
        }
        None => print!("{body}"),
    }
    for r in report.results.iter().filter(|r| r.status != "pass") {
        eprintln!("FAIL {}: {}", r.check, r.actual);
    }
    let failed = report.results.iter().filter(|r| r.status != "pass").count();
    eprintln!("{} checks, {} failed", report.results.len(), failed);
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Gen(o) => gen(o),
        Command::Dg { opts, h0 } => dg(opts, *h0),
        Command::Ext(o) => ext(o),
        Command::Cy(o) => cy(o),
        Command::Koszul(o) => koszul(o),
        Command::Verify(o) => verify(o),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
