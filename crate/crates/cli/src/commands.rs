use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use frate_core::aep::{self, ScanRow};
use frate_core::pullback::{self, HmmRow, IdentityReport, Observation};
use frate_core::spectral::{self, SolveReport};
use frate_core::transport::{self, ContinuityReport};
use frate_core::words::word_label;
use frate_core::{Dist, Error as CoreError, Graph, MarkovSource, SpectralPointId};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{AepScanArgs, ChainArgs, Cli, Command, Format, OrnsteinArgs, PullbackArgs, SampleArgs, ScanArgs, SpectralArgs};
use crate::config::{parse_point, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::formats::{self, ChainFile, DistFile, GraphFile};
use crate::report::{self, human, sci, FrateRow, ScanJsonRow, EXACT, SOLVER_GAP};

/// Runs a parsed command line and returns what goes to stdout.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Spectral(a) => cmd_spectral(&a),
        Command::Frate(a) => cmd_frate(&a),
        Command::AepScan(a) => cmd_aep_scan(&a),
        Command::Pullback(a) => cmd_pullback(&a),
        Command::Ornstein(a) => cmd_ornstein(&a),
        Command::EntropyRate(a) => cmd_entropy_rate(&a),
        Command::Sample(a) => cmd_sample(&a),
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn solve_certificate(gap: f64) -> &'static str {
    if gap == 0.0 {
        EXACT
    } else {
        SOLVER_GAP
    }
}

#[derive(Serialize)]
struct SpectralReport {
    graph: String,
    vertices: usize,
    edges: usize,
    point: &'static str,
    value: f64,
    certified_gap: f64,
    solver: &'static str,
    iterations: usize,
    certificate: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<Vec<f64>>,
}

pub fn cmd_spectral(args: &SpectralArgs) -> CliResult<String> {
    let g = formats::load_graph(&args.graph)?;
    let id = parse_point(args.point.name())?;
    let r: SolveReport = spectral::evaluate_report(id, &g)?;
    let rep = SpectralReport {
        graph: display(&args.graph),
        vertices: g.n(),
        edges: g.edge_count(),
        point: id.name(),
        value: r.value,
        certified_gap: r.certified_gap,
        solver: r.solver.name(),
        iterations: r.iterations,
        certificate: solve_certificate(r.certified_gap),
        dual: r.dual,
    };
    Ok(match args.format {
        Format::Json => formats::to_json(&rep),
        Format::Csv => format!(
            "point,value,certified_gap,solver,iterations,certificate\n{},{},{},{},{},{}\n",
            rep.point, rep.value, rep.certified_gap, rep.solver, rep.iterations, rep.certificate
        ),
        Format::Text => format!(
            "value: {}\npoint: {}\ncertified_gap: {}\nsolver: {} ({} iterations)\ncertificate: {}\n",
            human(rep.value),
            rep.point,
            sci(rep.certified_gap),
            rep.solver,
            rep.iterations,
            rep.certificate
        ),
    })
}

/// Merges `--config` with the explicit flags. Relative paths inside a
/// config file are taken relative to that file.
pub fn resolve_config(args: &ScanArgs) -> CliResult<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let mut cfg: ExperimentConfig = formats::read_json(path)?;
            let base = path.parent().unwrap_or(Path::new(""));
            let rebase = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            rebase(&mut cfg.graph);
            rebase(&mut cfg.chain);
            cfg.obs.as_mut().map(rebase);
            cfg.out.as_mut().map(rebase);
            cfg
        }
        None => {
            let missing = |what: &str| CliError::Input(format!("--{what} is required without --config"));
            let graph = args.graph.clone().ok_or_else(|| missing("graph"))?;
            let chain = args.chain.clone().ok_or_else(|| missing("chain"))?;
            ExperimentConfig::new(graph, chain)
        }
    };
    if let Some(g) = &args.graph {
        cfg.graph = g.clone();
    }
    if let Some(c) = &args.chain {
        cfg.chain = c.clone();
    }
    if let Some(p) = args.point {
        cfg.point = p.name().into();
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    if let Some(k) = args.k_max {
        cfg.k_max = k;
    }
    if let Some(c) = &args.c {
        cfg.c = c.clone();
    }
    if let Some(s) = &args.seed {
        cfg.seeds = s.clone();
    }
    if let Some(o) = &args.out {
        cfg.out = Some(o.clone());
    }
    if let Some(cap) = args.cap_vertices {
        cfg.cap_vertices = cap;
    }
    Ok(cfg)
}

fn load_inputs(cfg: &ExperimentConfig) -> CliResult<(Graph, ChainFile, MarkovSource)> {
    let g = formats::load_graph(&cfg.graph)?;
    let (file, src) = formats::load_chain(&cfg.chain)?;
    file.check_alphabet(&g)?;
    Ok((g, file, src))
}

fn power_cap_check(g: &Graph, n: usize, cap: u64) -> CliResult<()> {
    let size = (g.n() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(CoreError::SizeCapExceeded {
            what: "strong power vertices",
            size,
            cap: cap as u128,
        }
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct FrateJson<'a> {
    config: &'a ExperimentConfig,
    /// The refinement is the one of the fractional clique cover number.
    spectral_point: &'static str,
    entropy_rate: f64,
    mutual_information: f64,
    rows: &'a [FrateRow],
}

pub fn frate_rows(g: &Graph, src: &MarkovSource, k_max: usize) -> CliResult<Vec<FrateRow>> {
    let rate = src.entropy_rate();
    (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let b = aep::markov_aep_bracket(g, src, k)?;
            let h = src.marginal(k)?.entropy();
            Ok(FrateRow {
                k,
                upper: b.upper,
                lower: b.lower,
                width: b.gap,
                rate_lower: rate - (h - b.upper * k as f64) / k as f64,
                solver_gap: b.certified_gap,
                certificate: solve_certificate(b.certified_gap).into(),
            })
        })
        .collect()
}

pub fn cmd_frate(args: &ScanArgs) -> CliResult<String> {
    let cfg = resolve_config(args)?;
    let id = cfg.validate()?;
    if id != SpectralPointId::FracCliqueCover {
        warn!("F-rate brackets use the fractional clique cover refinement; ignoring --point {}", id);
    }
    let (g, _, src) = load_inputs(&cfg)?;
    power_cap_check(&g, cfg.k_max, cfg.cap_vertices)?;
    let rows = frate_rows(&g, &src, cfg.k_max)?;
    let csv = report::frate_csv(&rows);
    let json = formats::to_json(&FrateJson {
        config: &cfg,
        spectral_point: SpectralPointId::FracCliqueCover.name(),
        entropy_rate: src.entropy_rate(),
        mutual_information: src.mutual_information(),
        rows: &rows,
    });
    if let Some(out) = &cfg.out {
        formats::write_file(&out.join("frate.csv"), &csv)?;
        formats::write_file(&out.join("frate.json"), &json)?;
    }
    Ok(if args.format == Format::Json { json } else { csv })
}

#[derive(Serialize)]
struct ScanJson<'a> {
    config: &'a ExperimentConfig,
    rows: Vec<ScanJsonRow>,
}

/// Scan rows for `n = 1..=n_max`; lengths run in parallel and the rows come
/// back ordered by `(n, c)`.
pub fn scan_rows(g: &Graph, src: &MarkovSource, id: SpectralPointId, cfg: &ExperimentConfig) -> CliResult<Vec<ScanRow>> {
    let per_n = (1..=cfg.n_max)
        .into_par_iter()
        .map(|n| aep::scan_length(g, src, id, n, &cfg.c, cfg.k_max))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

pub fn cmd_aep_scan(args: &AepScanArgs) -> CliResult<String> {
    let cfg = resolve_config(&args.scan)?;
    let id = cfg.validate()?;
    let (g, _, src) = load_inputs(&cfg)?;
    power_cap_check(&g, cfg.n_max, cfg.cap_vertices)?;
    let rows = scan_rows(&g, &src, id, &cfg)?;
    let csv = report::scan_csv(&rows);
    let json = formats::to_json(&ScanJson {
        config: &cfg,
        rows: rows.iter().map(ScanJsonRow::from).collect(),
    });
    if let Some(out) = &cfg.out {
        formats::write_file(&out.join("scan.csv"), &csv)?;
        formats::write_file(&out.join("scan.json"), &json)?;
        if args.svg {
            formats::write_file(&out.join("scan.svg"), &report::scan_svg(&csv)?)?;
        }
    } else if args.svg {
        return Err(CliError::Input("--svg needs --out".into()));
    }
    Ok(if args.scan.format == Format::Json { json } else { csv })
}

#[derive(Serialize)]
struct Identity {
    observed: f64,
    hidden: f64,
    tolerance: f64,
    margin: f64,
    equal: bool,
    certificate: &'static str,
}

impl Identity {
    fn new(r: &IdentityReport, certificate: &'static str) -> Self {
        Identity {
            observed: r.observed,
            hidden: r.hidden,
            tolerance: r.tolerance,
            margin: r.margin,
            equal: r.equal,
            certificate,
        }
    }

    fn line(&self) -> String {
        format!("equal: {}, margin: {}", self.equal, sci(self.margin))
    }
}

#[derive(Serialize)]
struct HmmJsonRow {
    k: usize,
    frate_lower: f64,
    frate_upper: f64,
    hmm_lower: f64,
    hmm_upper: f64,
    overlap: bool,
}

impl From<&HmmRow> for HmmJsonRow {
    fn from(r: &HmmRow) -> Self {
        HmmJsonRow {
            k: r.k,
            frate_lower: r.frate_lower,
            frate_upper: r.frate_upper,
            hmm_lower: r.hmm_lower,
            hmm_upper: r.hmm_upper,
            overlap: r.overlap,
        }
    }
}

#[derive(Serialize)]
struct PullbackJson {
    obs: String,
    point: &'static str,
    pullback: GraphFile,
    product_equal: bool,
    f_identity: Identity,
    law: Vec<f64>,
    refinement_identity: Identity,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    hmm: Vec<HmmJsonRow>,
}

fn hidden_law(args: &PullbackArgs, obs: &Observation, chain: Option<&MarkovSource>) -> CliResult<Dist> {
    if let Some(path) = &args.dist {
        let file: DistFile = formats::read_json(path)?;
        return file.to_dist_on(obs.hidden());
    }
    Ok(match chain {
        Some(src) => src.pi(),
        None => Dist::uniform(obs.hidden_count()),
    })
}

pub fn cmd_pullback(args: &PullbackArgs) -> CliResult<String> {
    let obs = formats::load_observation(&args.obs)?;
    let id = parse_point(args.point.name())?;
    let chain = match &args.chain {
        Some(path) => {
            let (file, src) = formats::load_chain(path)?;
            if file.states != obs.hidden() {
                return Err(CliError::Input(
                    "chain states must list the hidden states in the same order".into(),
                ));
            }
            Some(src)
        }
        None => None,
    };
    let all: Vec<usize> = (0..obs.hidden_count()).collect();
    let f_identity = pullback::pullback_f_identity(&obs, &all, id)?;
    let law = hidden_law(args, &obs, chain.as_ref())?;
    let refinement = pullback::pullback_refinement_identity(&obs, &law)?;
    let hmm = match &chain {
        Some(src) if obs.graph().is_edgeless() => {
            let k_max = args.k_max.min(pullback::HMM_K_CAP);
            pullback::hmm_frate_crosscheck(&obs, src, k_max)?.rows
        }
        Some(_) => {
            warn!("hidden-process cross-check skipped: the observed graph has edges");
            Vec::new()
        }
        None => Vec::new(),
    };
    let f_cert = if id == SpectralPointId::Alpha { EXACT } else { SOLVER_GAP };
    let rep = PullbackJson {
        obs: display(&args.obs),
        point: id.name(),
        pullback: GraphFile::from_graph(&pullback::pullback(&obs)),
        product_equal: pullback::pullback_product_check(&obs, &obs),
        f_identity: Identity::new(&f_identity, f_cert),
        law: law.probs().to_vec(),
        refinement_identity: Identity::new(&refinement, SOLVER_GAP),
        hmm: hmm.iter().map(HmmJsonRow::from).collect(),
    };
    if args.format == Format::Json {
        return Ok(formats::to_json(&rep));
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "pullback graph: {} vertices, {} edges",
        rep.pullback.vertices.len(),
        rep.pullback.edges.len()
    );
    let _ = writeln!(s, "strong product: equal: {}", rep.product_equal);
    let _ = writeln!(s, "{} identity: {}", rep.point, rep.f_identity.line());
    let _ = writeln!(s, "refinement identity: {}", rep.refinement_identity.line());
    for r in &rep.hmm {
        let _ = writeln!(
            s,
            "k={}: F-rate [{}, {}], hidden process [{}, {}], overlap: {}",
            r.k,
            human(r.frate_lower),
            human(r.frate_upper),
            human(r.hmm_lower),
            human(r.hmm_upper),
            r.overlap
        );
    }
    Ok(s)
}

#[derive(Serialize)]
struct OrnsteinRow {
    n: usize,
    distance: f64,
    dual_bound: f64,
    pivots: usize,
    certificate: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    continuity: Option<ContinuityJson>,
}

#[derive(Serialize)]
struct ContinuityJson {
    lhs: f64,
    bound: f64,
    slack: f64,
    margin: f64,
    holds: bool,
}

impl From<&ContinuityReport> for ContinuityJson {
    fn from(r: &ContinuityReport) -> Self {
        ContinuityJson {
            lhs: r.lhs,
            bound: r.bound,
            slack: r.slack,
            margin: r.margin,
            holds: r.holds,
        }
    }
}

#[derive(Serialize)]
struct OrnsteinJson {
    chains: [String; 2],
    states: Vec<String>,
    rows: Vec<OrnsteinRow>,
}

pub fn cmd_ornstein(args: &OrnsteinArgs) -> CliResult<String> {
    if args.chain.len() != 2 {
        return Err(CliError::Input("--chain must be given exactly twice".into()));
    }
    let (f1, s1) = formats::load_chain(&args.chain[0])?;
    let (f2, s2) = formats::load_chain(&args.chain[1])?;
    if f1.states != f2.states {
        return Err(CliError::Input("chains must have the same states in the same order".into()));
    }
    if args.n_max == 0 {
        return Err(CliError::Input("--n-max must be positive".into()));
    }
    let graph = match &args.graph {
        Some(path) => {
            let g = formats::load_graph(path)?;
            f1.check_alphabet(&g)?;
            Some(g)
        }
        None => None,
    };
    let a = s1.alphabet();
    let mut rows = Vec::new();
    let mut last_coupling = None;
    for n in 1..=args.n_max {
        let (p, q) = (s1.marginal(n)?, s2.marginal(n)?);
        let r = transport::ornstein_distance(a, n, &p, &q)?;
        let continuity = match &graph {
            Some(g) => Some(ContinuityJson::from(&transport::continuity_check(g, n, &p, &q)?)),
            None => None,
        };
        rows.push(OrnsteinRow {
            n,
            distance: r.distance,
            dual_bound: r.dual_bound,
            pivots: r.pivots,
            certificate: SOLVER_GAP,
            continuity,
        });
        last_coupling = Some(r.coupling);
    }
    if let (Some(out), Some(c)) = (&args.out, &last_coupling) {
        let csv = formats::coupling_csv(&formats::coupling_rows(c, &f1.states));
        formats::write_file(&out.join("coupling.csv"), &csv)?;
    }
    let rep = OrnsteinJson {
        chains: [display(&args.chain[0]), display(&args.chain[1])],
        states: f1.states.clone(),
        rows,
    };
    Ok(match args.format {
        Format::Json => formats::to_json(&rep),
        Format::Csv => {
            let mut s = String::from("n,distance,dual_bound,certificate\n");
            for r in &rep.rows {
                let _ = writeln!(s, "{},{},{},{}", r.n, r.distance, r.dual_bound, r.certificate);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rep.rows {
                let _ = write!(s, "n={}: dbar: {} (dual {})", r.n, human(r.distance), human(r.dual_bound));
                if let Some(c) = &r.continuity {
                    let _ = write!(s, ", continuity holds: {}, margin: {}", c.holds, sci(c.margin));
                }
                s.push('\n');
            }
            s
        }
    })
}

#[derive(Serialize)]
struct EntropyRateJson {
    chain: String,
    states: Vec<String>,
    entropy_rate: f64,
    mutual_information: f64,
    stationary: Vec<f64>,
    period: usize,
}

pub fn cmd_entropy_rate(args: &ChainArgs) -> CliResult<String> {
    let (file, src) = formats::load_chain(&args.chain)?;
    if src.period() > 1 {
        warn!("chain has period {}", src.period());
    }
    let rep = EntropyRateJson {
        chain: display(&args.chain),
        states: file.states.clone(),
        entropy_rate: src.entropy_rate(),
        mutual_information: src.mutual_information(),
        stationary: src.pi().probs().to_vec(),
        period: src.period(),
    };
    Ok(match args.format {
        Format::Json => formats::to_json(&rep),
        Format::Csv => format!(
            "entropy_rate,mutual_information,period\n{},{},{}\n",
            rep.entropy_rate, rep.mutual_information, rep.period
        ),
        Format::Text => {
            let pi: Vec<String> = rep
                .states
                .iter()
                .zip(&rep.stationary)
                .map(|(s, p)| format!("{s}={}", human(*p)))
                .collect();
            format!(
                "entropy_rate: {}\nmutual_information: {}\nperiod: {}\nstationary: {}\n",
                human(rep.entropy_rate),
                human(rep.mutual_information),
                rep.period,
                pi.join(" ")
            )
        }
    })
}

pub fn cmd_sample(args: &SampleArgs) -> CliResult<String> {
    let (file, src) = formats::load_chain(&args.chain)?;
    let mut s = String::new();
    for i in 0..args.count {
        let w = src.sample(args.n, args.seed.wrapping_add(i as u64));
        let letters: Vec<&str> = w.letters().iter().map(|&a| file.states[a].as_str()).collect();
        let _ = writeln!(s, "{}", word_label(&letters));
    }
    Ok(s)
}
