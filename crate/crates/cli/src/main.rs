//! Command line front end: seeded, replayable experiment runs over the
//! color-energy library. Every run renders one canonical artifact (JSON
//! with sorted keys, or CSV for tabular commands), writes it atomically,
//! and appends an [`ExperimentRecord`] to a newline-delimited JSON log.
//! Errors exit nonzero with a JSON error object on stderr.

mod artifact;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use artifact::{
    append_record, big, canonical, csv_table, load_host, now_ms, sha256_hex, stream_seed,
    write_atomic, Artifact, ExperimentRecord, HostFile, LoadedHost,
};
use color_energy::combin::choose2;
use color_energy::matcher::DEFAULT_BUDGET;
use color_energy::reveal::sample_instance;
use color_energy::witness::GreedyOutcome;
use color_energy::{
    build_energy_graph, build_pruned, build_pruned_with_plan, color_energy, edge_count_exact,
    exact_f, exponent_entry, extract_subkt, extract_subktt, extract_theta, generate_coloring,
    greedy_low_color_clique, holder_lower_bound, incidence_witness, is_pq_coloring, parse_pattern,
    paper_edge_statistic, plant_coloring, reveal_ledger, validate_witness, verify_pruned,
    EnergyCaps, ExactCache, Filler, PipelineError, PipelineParams, PqMode, PqParams, PqVerdict,
    PrunedEnergyGraph, Scheme, TheoremInstance, WitnessReport,
};

const SEED_ENV: &str = "COLOR_ENERGY_SEED";
const LOG_ENV: &str = "COLOR_ENERGY_LOG";
const DEFAULT_LOG: &str = "color-energy-log.ndjson";

#[derive(Parser)]
#[command(
    name = "color-energy",
    version,
    about = "Color energy experiments on edge colorings of complete graphs"
)]
struct Cli {
    /// Root seed; each module call draws an independent named stream from
    /// it. Falls back to COLOR_ENERGY_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Input coloring file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Artifact destination; stdout when omitted. File writes are atomic.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Artifact format. CSV is available for the tabular commands
    /// (exponents, report).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Node-expansion budget for subgraph searches.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Experiment log; every successful run appends one JSON line. Falls
    /// back to COLOR_ENERGY_LOG, then color-energy-log.ndjson.
    #[arg(long, global = true)]
    log: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the (p, q) property: every p-clique spans at least q colors.
    Verify {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: u64,
        /// Sample this many random p-subsets instead of exhausting all.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Write a coloring file from a seeded scheme or a planted pattern.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, conflicts_with = "plant")]
        scheme: Option<SchemeArg>,
        /// Palette size for the random and modular schemes.
        #[arg(long)]
        colors: Option<usize>,
        /// Pattern spec to plant, e.g. theta:3,12 or cycle_star:3,4. The
        /// partition plan is embedded in the output file.
        #[arg(long)]
        plant: Option<String>,
        /// Energy order for plants.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Filler palette size for plants; fresh distinct colors when
        /// omitted.
        #[arg(long)]
        filler_palette: Option<usize>,
    },
    /// Energy statistics and the Hölder color-count certificate.
    Energy {
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Materialize the energy edge list (capped) and report its length.
        #[arg(long)]
        materialize: bool,
    },
    /// Build a pruned energy graph and verify its structural guarantees.
    Prune {
        /// Energy order; ignored when the input embeds a partition plan.
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Sample a reveal instance from the pruned graph and run the ledger.
    Reveal {
        /// Energy order; ignored when the input embeds a partition plan.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Ordering length to aim for.
        #[arg(long)]
        m: usize,
    },
    /// Run a witness pipeline; any report is revalidated before output.
    Witness {
        #[arg(long, value_enum)]
        pipeline: PipelineArg,
        /// Energy order; ignored when the input embeds a partition plan.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Branch vertices for subkt.
        #[arg(long)]
        t: Option<usize>,
        /// Path length for theta.
        #[arg(long)]
        a: Option<usize>,
        /// Path count for theta, side size for subktt.
        #[arg(long)]
        b: Option<usize>,
        /// Subdivision length for subktt.
        #[arg(long)]
        l: Option<usize>,
        /// Clique size for greedy.
        #[arg(long)]
        k: Option<usize>,
        /// Restriction rounds for greedy.
        #[arg(long)]
        m: Option<usize>,
        /// Forbidden pattern for incidence, e.g. theta:3,2.
        #[arg(long)]
        pattern: Option<String>,
        /// Density exponent for incidence, strictly between 1 and 2.
        #[arg(long)]
        gamma: Option<f64>,
        /// Overrides the pipeline's default pattern abundance.
        #[arg(long)]
        multiplicity: Option<usize>,
        /// Embeddings to request up front.
        #[arg(long, default_value_t = 8)]
        retries: usize,
    },
    /// Exact f(n, p, q) by exhaustive backtracking, with an optional cache.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// JSON cache keyed (n, p, q); hits skip the search.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// One lower-bound family row: p, q, and the exponent pair.
    Exponents {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Tabulate the experiment log.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// Uniform iid edge colors over the palette.
    Random,
    /// Proper circle-method coloring.
    RoundRobin,
    /// chi({i, j}) = (i + j) mod c.
    Modular,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Subkt,
    Theta,
    Subktt,
    Greedy,
    Incidence,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Paths,
    Greedy,
    Subkt,
    Theta,
    Subktt,
}

/// The kebab-case name clap accepts for a value-enum argument.
fn arg_name<T: ValueEnum>(arg: T) -> String {
    arg.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Verify { .. } => "verify",
        Command::Gen { .. } => "gen",
        Command::Energy { .. } => "energy",
        Command::Prune { .. } => "prune",
        Command::Reveal { .. } => "reveal",
        Command::Witness { .. } => "witness",
        Command::Exact { .. } => "exact",
        Command::Exponents { .. } => "exponents",
        Command::Report => "report",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_name(&cli.command);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let object = json!({
                "error": { "command": command, "message": format!("{err:#}") }
            });
            eprintln!(
                "{}",
                serde_json::to_string(&object).expect("error object serializes")
            );
            ExitCode::FAILURE
        }
    }
}

/// What a command hands back to the shared persistence path.
struct RunOutcome {
    params: Value,
    input_digest: Option<String>,
    artifact: Artifact,
}

fn run(cli: &Cli) -> Result<()> {
    if cli.format == Format::Csv
        && !matches!(cli.command, Command::Exponents { .. } | Command::Report)
    {
        bail!("csv output is only available for exponents and report");
    }
    let seed = resolve_seed(cli.seed)?;
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let started = now_ms();
    let outcome = dispatch(cli, seed, budget)?;

    let bytes = outcome.artifact.bytes();
    match &cli.output {
        Some(path) => write_atomic(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .context("writing to stdout")?,
    }

    let record = ExperimentRecord {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command_name(&cli.command).to_string(),
        params: outcome.params,
        seed,
        started_ms: started,
        finished_ms: now_ms(),
        input_digest: outcome.input_digest,
        output_digest: sha256_hex(&bytes),
        output_path: cli.output.as_ref().map(|p| p.display().to_string()),
        status: "ok".to_string(),
    };
    append_record(&log_path(cli), &record)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV} must be an unsigned 64-bit seed, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(anyhow!("{SEED_ENV} is not valid unicode: {e}")),
    }
}

fn log_path(cli: &Cli) -> PathBuf {
    cli.log
        .clone()
        .or_else(|| std::env::var(LOG_ENV).ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_LOG))
}

fn load_input(cli: &Cli) -> Result<LoadedHost> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("this command needs --input <coloring.json>"))?;
    load_host(path)
}

/// Rebuilds the pruned graph a plant was laid out for, or a fresh seeded
/// one for unplanned hosts.
fn pruned_for(host: &LoadedHost, r: usize, seed: u64) -> Result<PrunedEnergyGraph> {
    match host.plan.clone() {
        Some(plan) => Ok(build_pruned_with_plan(
            &host.graph,
            plan,
            stream_seed(seed, "prune"),
        )),
        None => Ok(build_pruned(&host.graph, r, stream_seed(seed, "prune"))?),
    }
}

fn req<T>(opt: Option<T>, flag: &str, whom: &str) -> Result<T> {
    opt.ok_or_else(|| anyhow!("{whom} needs --{flag}"))
}

fn dispatch(cli: &Cli, seed: u64, budget: u64) -> Result<RunOutcome> {
    match &cli.command {
        Command::Verify { p, q, sample } => run_verify(cli, seed, *p, *q, *sample),
        Command::Gen {
            n,
            scheme,
            colors,
            plant,
            r,
            filler_palette,
        } => run_gen(seed, *n, *scheme, *colors, plant.as_deref(), *r, *filler_palette),
        Command::Energy { r, materialize } => run_energy(cli, *r, *materialize),
        Command::Prune { r } => run_prune(cli, seed, *r),
        Command::Reveal { r, m } => run_reveal(cli, seed, *r, *m),
        Command::Witness {
            pipeline,
            r,
            t,
            a,
            b,
            l,
            k,
            m,
            pattern,
            gamma,
            multiplicity,
            retries,
        } => run_witness(
            cli,
            seed,
            budget,
            WitnessArgs {
                pipeline: *pipeline,
                r: *r,
                t: *t,
                a: *a,
                b: *b,
                l: *l,
                k: *k,
                m: *m,
                pattern: pattern.clone(),
                gamma: *gamma,
                multiplicity: *multiplicity,
                retries: *retries,
            },
        ),
        Command::Exact { n, p, q, cache } => run_exact(*n, *p, *q, cache.as_deref()),
        Command::Exponents {
            theorem,
            k,
            m,
            t,
            r,
            a,
            b,
            l,
        } => run_exponents(cli, *theorem, [*k, *m, *t, *r, *a, *b, *l]),
        Command::Report => run_report(cli),
    }
}

fn run_verify(cli: &Cli, seed: u64, p: usize, q: u64, sample: Option<u64>) -> Result<RunOutcome> {
    let host = load_input(cli)?;
    let mode = match sample {
        Some(trials) => PqMode::Sampled {
            trials,
            seed: stream_seed(seed, "verify"),
        },
        None => PqMode::Exhaustive,
    };
    let verdict = is_pq_coloring(&host.graph, PqParams { p, q }, mode)?;
    let (status, ok, violation) = match &verdict {
        PqVerdict::Holds => ("holds", true, Value::Null),
        PqVerdict::NoViolationFound => ("no_violation_found", true, Value::Null),
        PqVerdict::Violated(count) => ("violated", false, canonical(count)?),
    };
    Ok(RunOutcome {
        params: json!({ "p": p, "q": q, "sample": sample }),
        input_digest: Some(host.digest),
        artifact: Artifact::Json(json!({
            "p": p,
            "q": q,
            "mode": if sample.is_some() { "sampled" } else { "exhaustive" },
            "verdict": ok,
            "status": status,
            "violation": violation,
        })),
    })
}

fn run_gen(
    seed: u64,
    n: usize,
    scheme: Option<SchemeArg>,
    colors: Option<usize>,
    plant: Option<&str>,
    r: usize,
    filler_palette: Option<usize>,
) -> Result<RunOutcome> {
    let gen_seed = stream_seed(seed, "gen");
    let file = match (plant, scheme) {
        (Some(spec), _) => {
            let pattern = parse_pattern(spec)?;
            let filler = filler_palette
                .map(Filler::Palette)
                .unwrap_or(Filler::DistinctRandomOrder);
            let (g, layout) = plant_coloring(n, pattern.kind, r, gen_seed, filler)?;
            HostFile {
                coloring: g.to_file(),
                plan: Some(layout.plan),
            }
        }
        (None, Some(arg)) => {
            let scheme = match arg {
                SchemeArg::Random => Scheme::Random {
                    c: req(colors, "colors", "--scheme random")?,
                    seed: gen_seed,
                },
                SchemeArg::RoundRobin => Scheme::RoundRobinProper,
                SchemeArg::Modular => Scheme::Modular {
                    c: req(colors, "colors", "--scheme modular")?,
                },
            };
            HostFile {
                coloring: generate_coloring(n, scheme)?.to_file(),
                plan: None,
            }
        }
        (None, None) => bail!("gen needs --scheme or --plant"),
    };
    Ok(RunOutcome {
        params: json!({
            "n": n,
            "scheme": scheme.map(arg_name),
            "colors": colors,
            "plant": plant,
            "r": r,
            "filler_palette": filler_palette,
        }),
        input_digest: None,
        artifact: Artifact::Json(canonical(&file)?),
    })
}

fn run_energy(cli: &Cli, r: usize, materialize: bool) -> Result<RunOutcome> {
    let host = load_input(cli)?;
    let g = &host.graph;
    let bound = holder_lower_bound(g, r)?;
    let mut value = json!({
        "r": r,
        "n": g.n(),
        "num_colors": g.num_colors(),
        "edge_total": choose2(g.n()),
        "paper_edge_statistic": big(paper_edge_statistic(g, r)),
        "energy_edge_count": big(edge_count_exact(g, r)),
        "holder_bound_float": bound.bound_float,
        "holder": canonical(&bound)?,
    });
    if r == 2 {
        value["color_energy"] = big(color_energy(g));
    }
    if materialize {
        let eg = build_energy_graph(g, r, true, EnergyCaps::default())?;
        let edges = eg.materialized_edges().expect("materialized build");
        value["materialized_edge_count"] = big(edges.len() as u128);
    }
    Ok(RunOutcome {
        params: json!({ "r": r, "materialize": materialize }),
        input_digest: Some(host.digest),
        artifact: Artifact::Json(value),
    })
}

fn run_prune(cli: &Cli, seed: u64, r: usize) -> Result<RunOutcome> {
    let host = load_input(cli)?;
    let pg = pruned_for(&host, r, seed)?;
    let report = verify_pruned(&pg, &host.graph);
    if !report.ok() {
        bail!("pruned graph failed verification: {:?}", report.violations);
    }
    Ok(RunOutcome {
        params: json!({ "r": r }),
        input_digest: Some(host.digest),
        artifact: Artifact::Json(json!({
            "r": pg.r(),
            "n": pg.n,
            "planned": host.plan.is_some(),
            "tuple_count": pg.tuple_count(),
            "edge_count": pg.edges.len(),
            "candidates_before_thinning": pg.candidates_before_thinning,
            "verified": true,
            "pruned": canonical(&pg)?,
        })),
    })
}

fn run_reveal(cli: &Cli, seed: u64, r: usize, m: usize) -> Result<RunOutcome> {
    let host = load_input(cli)?;
    let pg = pruned_for(&host, r, seed)?;
    let inst = sample_instance(&host.graph, &pg, stream_seed(seed, "reveal"), m)
        .ok_or_else(|| {
            anyhow!("no reveal instance of length about {m}; try another seed or a denser coloring")
        })?;
    let ledger = reveal_ledger(&inst);
    Ok(RunOutcome {
        params: json!({ "r": r, "m": m }),
        input_digest: Some(host.digest),
        artifact: Artifact::Json(json!({
            "r": ledger.r,
            "m": ledger.m(),
            "h_vertices": inst.h.vertex_count(),
            "h_edges": inst.h.edge_count(),
            "n_step": ledger.n_step,
            "s_step": ledger.s_step,
            "d_step": ledger.d_step,
            "n_total": ledger.n_total,
            "s_total": ledger.s_total,
            "d_total": ledger.d_total,
            "n_coord": ledger.n_coord,
            "s_coord": ledger.s_coord,
            "d_coord": ledger.d_coord,
            "d_zero_steps": ledger.d_zero_steps,
            "sav": ledger.sav.to_string(),
            "repetition_gain_bound": ledger.repetition_gain_bound(),
            "final_vertices": ledger.final_graph().vertex_count(),
        })),
    })
}

struct WitnessArgs {
    pipeline: PipelineArg,
    r: usize,
    t: Option<usize>,
    a: Option<usize>,
    b: Option<usize>,
    l: Option<usize>,
    k: Option<usize>,
    m: Option<usize>,
    pattern: Option<String>,
    gamma: Option<f64>,
    multiplicity: Option<usize>,
    retries: usize,
}

fn run_witness(cli: &Cli, seed: u64, budget: u64, args: WitnessArgs) -> Result<RunOutcome> {
    let host = load_input(cli)?;
    let g = &host.graph;
    let params = PipelineParams {
        multiplicity: args.multiplicity,
        budget,
        retries: args.retries,
        seed: stream_seed(seed, "witness"),
    };

    let outcome = match args.pipeline {
        PipelineArg::Subkt => {
            let t = req(args.t, "t", "--pipeline subkt")?;
            let pg = pruned_for(&host, args.r, seed)?;
            pipeline_value(g, extract_subkt(g, &pg, t, params))?
        }
        PipelineArg::Theta => {
            let a = req(args.a, "a", "--pipeline theta")?;
            let b = req(args.b, "b", "--pipeline theta")?;
            let pg = pruned_for(&host, args.r, seed)?;
            pipeline_value(g, extract_theta(g, &pg, a, b, params))?
        }
        PipelineArg::Subktt => {
            let b = req(args.b, "b", "--pipeline subktt")?;
            let l = req(args.l, "l", "--pipeline subktt")?;
            let pg = pruned_for(&host, args.r, seed)?;
            pipeline_value(g, extract_subktt(g, &pg, b, l, params))?
        }
        PipelineArg::Greedy => {
            let k = req(args.k, "k", "--pipeline greedy")?;
            let m = req(args.m, "m", "--pipeline greedy")?;
            match greedy_low_color_clique(g, k, m)? {
                GreedyOutcome::Witness(w) => found_value(g, w)?,
                GreedyOutcome::Inapplicable { round, survivors } => json!({
                    "found": false,
                    "reason": "inapplicable",
                    "round": round,
                    "survivors": survivors,
                }),
            }
        }
        PipelineArg::Incidence => {
            let spec = req(args.pattern.as_deref(), "pattern", "--pipeline incidence")?;
            let gamma = req(args.gamma, "gamma", "--pipeline incidence")?;
            let f = parse_pattern(spec)?;
            pipeline_value(g, incidence_witness(g, &f, gamma, params))?
        }
    };

    Ok(RunOutcome {
        params: json!({
            "pipeline": arg_name(args.pipeline),
            "r": args.r,
            "t": args.t,
            "a": args.a,
            "b": args.b,
            "l": args.l,
            "k": args.k,
            "m": args.m,
            "pattern": args.pattern,
            "gamma": args.gamma,
            "multiplicity": args.multiplicity,
            "retries": args.retries,
            "budget": budget,
        }),
        input_digest: Some(host.digest),
        artifact: Artifact::Json(outcome),
    })
}

/// A miss is a result, not an error; anything else from a pipeline is
/// surfaced. Reports are recounted before they leave the process.
fn pipeline_value(
    g: &color_energy::ColoredCompleteGraph,
    result: Result<WitnessReport, PipelineError>,
) -> Result<Value> {
    match result {
        Ok(w) => found_value(g, w),
        Err(PipelineError::NotFound { budget_exhausted }) => Ok(json!({
            "found": false,
            "reason": "not_found",
            "budget_exhausted": budget_exhausted,
        })),
        Err(other) => Err(other.into()),
    }
}

fn found_value(g: &color_energy::ColoredCompleteGraph, w: WitnessReport) -> Result<Value> {
    validate_witness(g, &w).context("pipeline returned a witness that failed revalidation")?;
    Ok(json!({
        "found": true,
        "p": w.p_claimed,
        "q": w.q_claimed,
        "distinct_colors": w.distinct_colors,
        "repetitions": w.repetitions,
        "report": canonical(&w)?,
    }))
}

fn run_exact(n: usize, p: usize, q: usize, cache_path: Option<&std::path::Path>) -> Result<RunOutcome> {
    let mut cache = match cache_path {
        Some(path) => ExactCache::load(path)
            .with_context(|| format!("loading cache {}", path.display()))?,
        None => ExactCache::default(),
    };
    let cached = cache.get(n, p, q).map(canonical).transpose()?;
    let value = match cached {
        Some(v) => v,
        None => {
            let fresh = exact_f(n, p, q)?;
            let v = canonical(&fresh)?;
            if let Some(path) = cache_path {
                cache.put(fresh);
                cache
                    .save(path)
                    .with_context(|| format!("saving cache {}", path.display()))?;
            }
            v
        }
    };
    Ok(RunOutcome {
        params: json!({ "n": n, "p": p, "q": q }),
        input_digest: None,
        artifact: Artifact::Json(value),
    })
}

fn run_exponents(cli: &Cli, theorem: TheoremArg, opts: [Option<usize>; 7]) -> Result<RunOutcome> {
    let [k, m, t, r, a, b, l] = opts;
    let inst = match theorem {
        TheoremArg::Paths => TheoremInstance::Paths {
            k: req(k, "k", "--theorem paths")?,
            m: req(m, "m", "--theorem paths")?,
        },
        TheoremArg::Greedy => TheoremInstance::Greedy {
            k: req(k, "k", "--theorem greedy")?,
            m: req(m, "m", "--theorem greedy")?,
        },
        TheoremArg::Subkt => TheoremInstance::SubKt {
            t: req(t, "t", "--theorem subkt")?,
        },
        TheoremArg::Theta => TheoremInstance::Theta {
            r: req(r, "r", "--theorem theta")?,
            a: req(a, "a", "--theorem theta")?,
            b: req(b, "b", "--theorem theta")?,
        },
        TheoremArg::Subktt => TheoremInstance::SubKtt {
            r: req(r, "r", "--theorem subktt")?,
            b: req(b, "b", "--theorem subktt")?,
            l: req(l, "l", "--theorem subktt")?,
        },
    };
    let entry = exponent_entry(inst)?;
    let artifact = match cli.format {
        Format::Json => Artifact::Json(canonical(&entry)?),
        Format::Csv => Artifact::Csv(csv_table(
            &["source", "p", "q", "lower_exponent", "upper_exponent"],
            &[vec![
                entry.source.to_string(),
                entry.p.to_string(),
                entry.q.to_string(),
                entry.lower_exponent.to_string(),
                entry.upper_exponent.to_string(),
            ]],
        )),
    };
    Ok(RunOutcome {
        params: canonical(&inst)?,
        input_digest: None,
        artifact,
    })
}

fn run_report(cli: &Cli) -> Result<RunOutcome> {
    let log = log_path(cli);
    let bytes =
        std::fs::read(&log).with_context(|| format!("reading log {}", log.display()))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).context("log is not utf-8")?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: Value = serde_json::from_str(line)
            .with_context(|| format!("log line {} is not a JSON record", i + 1))?;
        records.push(record);
    }
    let artifact = match cli.format {
        Format::Json => Artifact::Json(Value::Array(records)),
        Format::Csv => {
            let field = |v: &Value, key: &str| match v.get(key) {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Null) | None => String::new(),
                Some(other) => other.to_string(),
            };
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|v| {
                    vec![
                        field(v, "command"),
                        field(v, "status"),
                        field(v, "seed"),
                        field(v, "version"),
                        field(v, "started_ms"),
                        field(v, "finished_ms"),
                        field(v, "input_digest"),
                        field(v, "output_digest"),
                        field(v, "output_path"),
                        field(v, "params"),
                    ]
                })
                .collect();
            Artifact::Csv(csv_table(
                &[
                    "command",
                    "status",
                    "seed",
                    "version",
                    "started_ms",
                    "finished_ms",
                    "input_digest",
                    "output_digest",
                    "output_path",
                    "params",
                ],
                &rows,
            ))
        }
    };
    Ok(RunOutcome {
        params: json!({ "log": log.display().to_string() }),
        input_digest: Some(digest),
        artifact,
    })
}
