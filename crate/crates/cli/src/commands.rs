use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use serde_json::{json, Value};

use heilbronn::codecs::{baseline_length, binomial, rank_arrangement, unrank_arrangement};
use heilbronn::constructions::{erdos_prime, erdos_report, is_prime, optimize_heilbronn};
use heilbronn::experiments::{
    analyze_pointset, default_trials, degenerate_structure_stats, derive_seed, quantile,
    sample_grid_arrangement, sample_min_areas, sample_unit_square, scan, tail_probability,
    BaselineCache,
};
use heilbronn::geom::{min_area_triangle, GridArrangement, SearchMode, MAX_GRID_SIDE};
use heilbronn::witnesses::{
    decode_witness, encode_collinear_witness, encode_rowline_witness, encode_small_triangle_witness,
    encode_theorem2, WitnessFile, WitnessKind, WitnessReport,
};

use crate::io::{self, Loaded};
use crate::output::{csv_row, emit_json, emit_text, Envelope, CSV_HEADER, SCHEMA_VERSION};
use crate::{CliError, Command, Format, Kind, Mode, WitnessAction};

/// Stream tag for the pilot run of `tail --quantile`, kept apart from the
/// trial streams of the measurement itself.
const PILOT_TAG: u64 = u64::MAX;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn check_grid_shape(k: u64, n: usize) -> Result<(), CliError> {
    require((2..=MAX_GRID_SIDE).contains(&k), || format!("K = {k} outside [2, 2^30]"))?;
    require((n as u128) <= (k as u128) * (k as u128), || format!("n = {n} exceeds K^2"))
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    start: Instant,
}

impl Ctx<'_> {
    fn json(&mut self, command: &'static str, seed: Option<u64>, params: Value, results: Value) -> Result<(), CliError> {
        let env = Envelope {
            command,
            version: SCHEMA_VERSION,
            seed,
            params,
            results,
            timing_ms: self.start.elapsed().as_secs_f64() * 1e3,
        };
        emit_json(self.out, &env)
    }

    /// Writes `text` to `path`, or to the output stream when no path is given.
    /// Returns whether a JSON summary should follow.
    fn file_or_stdout(&mut self, path: Option<&Path>, text: &str) -> Result<bool, CliError> {
        match path {
            Some(p) => io::write_text(p, text).map(|_| true),
            None => emit_text(self.out, text).map(|_| false),
        }
    }
}

fn search_mode(m: Mode) -> SearchMode {
    match m {
        Mode::Exhaustive => SearchMode::Exhaustive,
        Mode::Fast => SearchMode::Fast,
    }
}

fn witness_kind(k: Kind) -> WitnessKind {
    match k {
        Kind::Collinear => WitnessKind::Collinear,
        Kind::Rowline => WitnessKind::Rowline,
        Kind::SmallTriangle => WitnessKind::SmallTriangle,
        Kind::Theorem2 => WitnessKind::Theorem2,
    }
}

pub(crate) fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cx = Ctx { out, start: Instant::now() };
    match cmd {
        Command::MinTriangle { file, mode } => min_triangle(&mut cx, file, *mode),
        Command::Sample { n, seed, stream, grid, out } => sample(&mut cx, *n, *seed, *stream, *grid, out.as_deref()),
        Command::Scan { ns, seed, trials, format } => run_scan(&mut cx, ns, *seed, *trials, *format),
        Command::Tail { n, t, quantile, pilot_trials, trials, seed } => {
            tail(&mut cx, *n, *t, *quantile, *pilot_trials, *trials, *seed)
        }
        Command::ConstructErdos { p, out } => construct_erdos(&mut cx, *p, out.as_deref()),
        Command::Optimize { n, restarts, steps, seed, out } => {
            optimize(&mut cx, *n, *restarts, *steps, *seed, out.as_deref())
        }
        Command::Rank { grid } => rank(&mut cx, grid),
        Command::Unrank { k, n, index, out } => unrank(&mut cx, *k, *n, index, out.as_deref()),
        Command::Witness { kind, action, io } => match action {
            WitnessAction::Encode => {
                let grid = io.grid.as_deref().ok_or_else(|| usage("witness encode needs --grid"))?;
                witness_encode(&mut cx, witness_kind(*kind), grid, io.triple.as_deref(), io.out.as_deref())
            }
            WitnessAction::Decode => {
                let file = io.file.as_deref().ok_or_else(|| usage("witness decode needs --file"))?;
                witness_decode(&mut cx, witness_kind(*kind), file, io.out.as_deref())
            }
        },
        Command::StatsDegenerate { k, n, trials, seed } => stats_degenerate(&mut cx, *k, *n, *trials, *seed),
        Command::Analyze { file, seed, baseline_trials } => analyze(&mut cx, file, *seed, *baseline_trials),
    }
}

fn min_triangle(cx: &mut Ctx, file: &Path, mode: Mode) -> Result<(), CliError> {
    let params = json!({ "file": file.display().to_string(), "mode": format!("{mode:?}").to_lowercase() });
    let results = match io::load_any(file)? {
        Loaded::Grid(a) => {
            let r = min_area_triangle(&a, search_mode(mode))?;
            let (i, j, k) = r.triple();
            let v: Vec<[u32; 2]> = [i, j, k].iter().map(|&t| [a.points()[t].x, a.points()[t].y]).collect();
            json!({
                "input": "grid", "k": a.k(), "n": a.n(), "area": r.area,
                "twice_area": r.twice_area, "triple": [i, j, k], "vertices": v,
            })
        }
        Loaded::Points(p) => {
            let r = min_area_triangle(&p, search_mode(mode))?;
            let (i, j, k) = r.triple();
            let v: Vec<[f64; 2]> = [i, j, k].iter().map(|&t| [p.points[t].x, p.points[t].y]).collect();
            json!({ "input": "points", "n": p.len(), "area": r.area, "triple": [i, j, k], "vertices": v })
        }
    };
    cx.json("min-triangle", None, params, results)
}

fn sample(cx: &mut Ctx, n: usize, seed: u64, stream: u64, grid: Option<u64>, out: Option<&Path>) -> Result<(), CliError> {
    require(n >= 1, || "n must be at least 1".into())?;
    let (text, params) = match grid {
        Some(k) => {
            check_grid_shape(k, n)?;
            let a = sample_grid_arrangement(k, n, seed, stream)?;
            let head = format!("# seed={seed} stream={stream}\n");
            (head + &io::render_grid(&a), json!({ "n": n, "stream": stream, "grid": k }))
        }
        None => {
            let p = sample_unit_square(n, seed, stream);
            let text = io::render_pointset(&p, &[format!("seed={seed} stream={stream}")]);
            (text, json!({ "n": n, "stream": stream }))
        }
    };
    if cx.file_or_stdout(out, &text)? {
        let path = out.unwrap().display().to_string();
        cx.json("sample", Some(seed), params, json!({ "written": path }))?;
    }
    Ok(())
}

fn run_scan(cx: &mut Ctx, ns: &[usize], seed: u64, trials: Option<usize>, format: Format) -> Result<(), CliError> {
    require(ns.len() >= 3, || format!("scan needs at least 3 values of n, got {}", ns.len()))?;
    require(ns.iter().all(|&n| n >= 3), || "every n must be at least 3".into())?;
    if let Some(t) = trials {
        require(t >= 2, || "trials must be at least 2".into())?;
    }
    let r = scan(ns, seed, |n| trials.unwrap_or_else(|| default_trials(n)))?;
    match format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for e in &r.estimates {
                s += &csv_row(e);
                s.push('\n');
            }
            emit_text(cx.out, &s)
        }
        Format::Json => {
            let estimates: Vec<Value> = r
                .estimates
                .iter()
                .map(|e| {
                    json!({
                        "n": e.n, "trials": e.trials, "mean": e.mean, "stderr": e.stderr,
                        "lo95": e.ci95.0, "hi95": e.ci95.1, "scaled": e.mean * (e.n as f64).powi(3),
                        "degenerate": e.degenerate,
                        "trial_seed": derive_seed(seed, e.n as u64),
                    })
                })
                .collect();
            let params = json!({ "ns": ns, "trials": trials });
            let results = json!({
                "estimates": estimates,
                "slope": r.fit.slope,
                "intercept": r.fit.intercept,
                "r_squared": r.fit.r_squared,
            });
            cx.json("scan", Some(seed), params, results)
        }
    }
}

fn tail(
    cx: &mut Ctx,
    n: usize,
    t: Option<f64>,
    q: Option<f64>,
    pilot_trials: usize,
    trials: usize,
    seed: u64,
) -> Result<(), CliError> {
    require(n >= 3, || "n must be at least 3".into())?;
    require(trials >= 1, || "trials must be at least 1".into())?;
    let (threshold, pilot) = match (t, q) {
        (Some(t), None) => {
            require(t >= 0.0, || format!("threshold {t} must be nonnegative"))?;
            (t, Value::Null)
        }
        (None, Some(q)) => {
            require((0.0..=1.0).contains(&q), || format!("quantile {q} outside [0, 1]"))?;
            require(pilot_trials >= 1, || "pilot trials must be at least 1".into())?;
            let pilot_seed = derive_seed(seed, PILOT_TAG);
            let mut areas = sample_min_areas(n, pilot_trials, pilot_seed, SearchMode::Fast)?;
            areas.sort_by(f64::total_cmp);
            let t = quantile(&areas, q);
            (t, json!({ "quantile": q, "trials": pilot_trials, "seed": pilot_seed, "threshold": t }))
        }
        _ => return Err(usage("give exactly one of --t and --quantile")),
    };
    let r = tail_probability(n, threshold, trials, seed)?;
    let params = json!({ "n": n, "t": t, "quantile": q, "trials": trials });
    let results = json!({
        "threshold": r.threshold, "fraction": r.fraction, "trials": r.trials,
        "zero_area": r.zero_area, "pilot": pilot,
    });
    cx.json("tail", Some(seed), params, results)
}

fn construct_erdos(cx: &mut Ctx, p: u64, out: Option<&Path>) -> Result<(), CliError> {
    require(is_prime(p), || format!("{p} is not prime"))?;
    require(p <= MAX_GRID_SIDE, || format!("p = {p} exceeds 2^30"))?;
    let a = erdos_prime(p)?;
    let r = erdos_report(p)?;
    if let Some(path) = out {
        io::save_grid(&a, path)?;
    }
    let results = json!({
        "k": a.k(), "n": a.n(), "collinear_triples": 0,
        "min_twice_area": r.min_twice_area,
        "area_cell_scale": r.area_cell_scale,
        "area_grid_scale": r.area_grid_scale,
        "bound": 1.0 / (2.0 * (p as f64) * (p as f64)),
    });
    cx.json("construct-erdos", None, json!({ "p": p }), results)
}

fn optimize(cx: &mut Ctx, n: usize, restarts: usize, steps: u64, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    require((3..=16).contains(&n), || format!("n = {n} outside [3, 16]"))?;
    require(restarts >= 1, || "need at least one restart".into())?;
    let r = optimize_heilbronn(n, restarts, steps, seed)?;
    if let Some(path) = out {
        let head = [format!("seed={seed} restarts={restarts} steps={steps}"), format!("value={:?}", r.value)];
        io::write_text(path, &io::render_pointset(&r.points, &head))?;
    }
    let pts: Vec<[f64; 2]> = r.points.points.iter().map(|p| [p.x, p.y]).collect();
    let params = json!({ "n": n, "restarts": restarts, "steps": steps });
    let results = json!({ "value": r.value, "iterations": r.iterations, "restart": r.restart, "points": pts });
    cx.json("optimize", Some(seed), params, results)
}

fn rank(cx: &mut Ctx, grid: &Path) -> Result<(), CliError> {
    let a = io::load_grid(grid)?;
    let idx = rank_arrangement(&a);
    let results = json!({
        "k": a.k(), "n": a.n(),
        "index": idx.value.to_string(),
        "domain_size": idx.domain_size.to_string(),
        "baseline_bits": baseline_length(a.k(), a.n())?,
    });
    cx.json("rank", None, json!({ "grid": grid.display().to_string() }), results)
}

fn unrank(cx: &mut Ctx, k: u64, n: usize, index: &str, out: Option<&Path>) -> Result<(), CliError> {
    check_grid_shape(k, n)?;
    let idx: BigUint = index.parse().map_err(|_| usage(format!("index '{index}' is not a decimal integer")))?;
    let m = binomial(k * k, n as u64);
    require(idx < m, || format!("index must be below C(K^2, n) = {m}"))?;
    let a = unrank_arrangement(&idx, k, n)?;
    if cx.file_or_stdout(out, &io::render_grid(&a))? {
        let params = json!({ "k": k, "n": n, "index": index });
        cx.json("unrank", None, params, json!({ "written": out.unwrap().display().to_string() }))?;
    }
    Ok(())
}

fn encode(kind: WitnessKind, a: &GridArrangement, triple: Option<&[usize]>) -> Result<WitnessReport, CliError> {
    if triple.is_some() && kind != WitnessKind::SmallTriangle {
        return Err(usage("--triple only applies to small_triangle"));
    }
    let r = match kind {
        WitnessKind::Collinear => encode_collinear_witness(a)?,
        WitnessKind::Rowline => encode_rowline_witness(a)?,
        WitnessKind::SmallTriangle => {
            let t = match triple {
                Some(&[i, j, k]) => (i, j, k),
                Some(_) => return Err(usage("--triple takes three indices")),
                None => min_area_triangle(a, SearchMode::Exhaustive)?.triple(),
            };
            encode_small_triangle_witness(a, t)?
        }
        WitnessKind::Theorem2 => encode_theorem2(a)?,
    };
    Ok(r)
}

fn witness_encode(
    cx: &mut Ctx,
    kind: WitnessKind,
    grid: &Path,
    triple: Option<&[usize]>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let a = io::load_grid(grid)?;
    let r = encode(kind, &a, triple)?;
    let file = WitnessFile { kind, k: a.k(), n: a.n(), payload: r.payload.clone() };
    if cx.file_or_stdout(out, &file.render())? {
        let params = json!({ "kind": kind.name(), "grid": grid.display().to_string(), "triple": triple });
        let results = json!({
            "written": out.unwrap().display().to_string(),
            "k": a.k(), "n": a.n(),
            "witness_length": r.witness_length,
            "baseline_length": r.baseline_length,
            "savings": r.savings,
        });
        cx.json("witness-encode", None, params, results)?;
    }
    Ok(())
}

fn witness_decode(cx: &mut Ctx, kind: WitnessKind, file: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let w = io::parse_witness(&io::read_text(file)?)?;
    if w.kind != kind {
        return Err(CliError::Data(format!("file holds a {} witness, not {kind}", w.kind)));
    }
    let a = decode_witness(kind, &w.payload, w.k, w.n)?;
    if cx.file_or_stdout(out, &io::render_grid(&a))? {
        let params = json!({ "kind": kind.name(), "file": file.display().to_string() });
        let results = json!({ "written": out.unwrap().display().to_string(), "k": a.k(), "n": a.n() });
        cx.json("witness-decode", None, params, results)?;
    }
    Ok(())
}

fn stats_degenerate(cx: &mut Ctx, k: u64, n: usize, trials: usize, seed: u64) -> Result<(), CliError> {
    check_grid_shape(k, n)?;
    require(trials >= 1, || "trials must be at least 1".into())?;
    let s = degenerate_structure_stats(k, n, trials, seed)?;
    let params = json!({ "k": k, "n": n, "trials": trials });
    let results = json!({ "collinear": s.collinear, "shared_row": s.shared_row });
    cx.json("stats-degenerate", Some(seed), params, results)
}

fn analyze(cx: &mut Ctx, file: &Path, seed: u64, baseline_trials: usize) -> Result<(), CliError> {
    require(baseline_trials >= 1, || "baseline trials must be at least 1".into())?;
    let pts = match io::load_any(file)? {
        Loaded::Points(p) => p,
        Loaded::Grid(a) => a.to_unit(),
    };
    if pts.len() < 3 {
        return Err(CliError::Data(format!("need at least 3 points, got {}", pts.len())));
    }
    let mut cache = BaselineCache::new(seed, baseline_trials);
    let r = analyze_pointset(&pts, &mut cache)?;
    let params = json!({ "file": file.display().to_string(), "baseline_trials": baseline_trials });
    let results = json!({ "n": r.n, "area": r.area, "scaled": r.scaled, "percentile": r.percentile });
    cx.json("analyze", Some(seed), params, results)
}
