use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use apseq::asymptotics::{solve_threshold, Continuation, ThresholdFamily};
use apseq::counting::{brute_force_count, count_bounds, count_closed, BruteForceCaps};
use apseq::enumeration::{
    distribution_cached, DistributionTable, Engine, EnumerateOptions, DEFAULT_MAX_SIZE,
    PARALLEL_MAX_SIZE,
};
use apseq::las::longest_ap;
use apseq::montecarlo::{
    coverage_experiment, empirical_l_distribution, estimate_nk_mean, ExperimentConfig,
};
use apseq::noncommutative::{inversion_bijection_holds, left_ap_count, right_ap_count, Dihedral};
use apseq::{AdditiveSet, Element, Ordering, TOOL_VERSION};

use crate::args::*;
use crate::CliError;

#[derive(Serialize)]
struct Envelope<'a, P: Serialize> {
    command: &'a str,
    params: &'a P,
    result: Value,
    tool_version: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn emit_json<P: Serialize>(
    out: &mut dyn Write,
    command: &str,
    params: &P,
    result: Value,
    seed: Option<u64>,
) -> Result<()> {
    let env = Envelope {
        command,
        params,
        result,
        tool_version: TOOL_VERSION,
        seed,
    };
    serde_json::to_writer(&mut *out, &env)?;
    writeln!(out)?;
    Ok(())
}

fn parse_set(spec: &str) -> Result<AdditiveSet> {
    Ok(spec.parse::<AdditiveSet>()?)
}

pub fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let name = command.name();
    match command {
        Command::Count(a) => count(name, &a, out),
        Command::Las(a) => las(name, &a, out),
        Command::Enumerate(a) => enumerate(name, &a, out),
        Command::Predict(a) => predict(name, &a, out),
        Command::Simulate(a) => simulate(name, &a, out),
        Command::Nonabelian(a) => nonabelian(name, &a, out),
        Command::Tables(a) => crate::tables::run(&a, out, err),
    }
}

fn count(name: &str, a: &CountArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set(&a.set)?;
    let r = match a.method {
        CountMethod::Closed => count_closed(&set, a.k)?,
        CountMethod::Brute => brute_force_count(&set, a.k, &BruteForceCaps::default())?,
        CountMethod::Bounds => count_bounds(&set, a.k)?,
    };
    if a.json {
        let mut result = serde_json::to_value(&r)?;
        result["set"] = json!(set.to_string());
        result["k"] = json!(a.k);
        return emit_json(out, name, a, result, None);
    }
    match r.exact {
        Some(v) => writeln!(out, "{v}")?,
        None => writeln!(out, "{} {}", r.lower, r.upper)?,
    }
    Ok(())
}

fn parse_coords(text: &str) -> Result<Vec<Element>> {
    text.split(';')
        .map(|tuple| {
            let coords = tuple
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("bad coordinate tuple {tuple:?}: {e}")))?;
            Ok(Element(coords))
        })
        .collect()
}

fn build_ordering(set: &AdditiveSet, a: &LasArgs) -> Result<Ordering> {
    if let Some(text) = &a.coords {
        return Ok(Ordering::new(set.clone(), &parse_coords(text)?)?);
    }
    let seq = a.sequence.as_deref().unwrap_or_default();
    if set.dim() == 1 {
        let elems: Vec<Element> = seq.iter().map(|&v| Element::scalar(v)).collect();
        return Ok(Ordering::new(set.clone(), &elems)?);
    }
    let indices = seq
        .iter()
        .map(|&v| usize::try_from(v).map_err(|_| CliError::Usage(format!("negative index {v}"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Ordering::from_indices(set.clone(), indices)?)
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn las(name: &str, a: &LasArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set(&a.set)?;
    let ordering = build_ordering(&set, a)?;
    let mut r = longest_ap(&ordering)?;
    if !r.verify(&ordering) {
        return Err(apseq::Error::Internal("witness failed verification".into()).into());
    }
    if !a.witness {
        r.witness = None;
    }
    if a.json {
        return emit_json(out, name, a, serde_json::to_value(&r)?, None);
    }
    writeln!(out, "{}", r.length)?;
    if let Some(w) = &r.witness {
        let terms = w.progression.terms(&set)?;
        writeln!(out, "base: {}", w.progression.base)?;
        writeln!(out, "step: {}", w.progression.step)?;
        writeln!(out, "terms: {}", join(&terms))?;
        writeln!(out, "positions: {}", join(&w.positions))?;
    }
    Ok(())
}

/// CSV header and row for one distribution, laid out as `n,k1,...,kn`.
pub fn csv_row(table: &DistributionTable) -> (Vec<String>, Vec<String>) {
    let n = table.counts.len();
    let header = std::iter::once("n".to_string())
        .chain((1..=n).map(|k| format!("k{k}")))
        .collect();
    let row = std::iter::once(n.to_string())
        .chain(table.counts.iter().map(|c| c.to_string()))
        .collect();
    (header, row)
}

fn write_csv(out: impl Write, records: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn enumerate_options(
    parallel: Option<usize>,
    engine: Engine,
    symmetry: bool,
) -> EnumerateOptions {
    EnumerateOptions {
        symmetry,
        parallel,
        engine,
        max_size: if parallel.is_some() {
            PARALLEL_MAX_SIZE
        } else {
            DEFAULT_MAX_SIZE
        },
    }
}

fn enumerate(name: &str, a: &EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set(&a.set)?;
    let engine = match a.engine {
        EngineArg::Incremental => Engine::Incremental,
        EngineArg::Direct => Engine::Direct,
    };
    let opts = enumerate_options(a.parallel, engine, !a.no_symmetry);
    let table = distribution_cached(&set, &opts, a.cache.as_deref())?;
    let (header, row) = csv_row(&table);
    if let Some(path) = &a.csv {
        write_file_csv(path, &[header.clone(), row.clone()])?;
    }
    if a.json {
        let result = json!({
            "set": set.to_string(),
            "counts": table.counts,
            "total": table.total,
            "expected_length": table.expected_length(),
        });
        return emit_json(out, name, a, result, None);
    }
    write_csv(out, &[header, row])
}

fn write_file_csv(path: &Path, records: &[Vec<String>]) -> Result<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(file, records)
}

fn predict(name: &str, a: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set(&a.set)?;
    let family = ThresholdFamily::try_from(&set)?;
    let mode = match a.mode {
        ModeArg::Interp => Continuation::Interp,
        ModeArg::Smooth => Continuation::Smooth,
    };
    let r = solve_threshold(family, mode)?;
    if a.json {
        return emit_json(out, name, a, serde_json::to_value(&r)?, None);
    }
    writeln!(out, "value: {}", r.value)?;
    writeln!(out, "window: {} {}", r.window.0, r.window.1)?;
    if let Some(x) = r.asymptotic {
        writeln!(out, "asymptotic: {x}")?;
    }
    writeln!(out, "boundary_clamped: {}", r.boundary_clamped)?;
    writeln!(out, "residual: {:e}", r.residual)?;
    Ok(())
}

fn simulate(name: &str, a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set(&a.set)?;
    let config = ExperimentConfig::new(set, a.samples, a.seed);
    let (result, records, keyed): (Value, Vec<Vec<String>>, bool) = if let Some(k) = a.k {
        let s = estimate_nk_mean(&config.with_k(k), a.threads)?;
        let records = vec![
            ["k", "samples", "mean", "stderr", "expected", "z"]
                .map(String::from)
                .to_vec(),
            vec![
                s.k.to_string(),
                s.samples.to_string(),
                s.mean.to_string(),
                s.stderr.to_string(),
                s.expected.to_string(),
                s.z.to_string(),
            ],
        ];
        (serde_json::to_value(&s)?, records, true)
    } else if a.coverage {
        let c = coverage_experiment(&config, a.threads)?;
        let records = vec![
            [
                "samples",
                "value",
                "window_lo",
                "window_hi",
                "coverage",
                "mode",
                "mode_in_window",
            ]
            .map(String::from)
            .to_vec(),
            vec![
                c.samples.to_string(),
                c.threshold.value.to_string(),
                c.threshold.window.0.to_string(),
                c.threshold.window.1.to_string(),
                c.coverage.to_string(),
                c.mode.to_string(),
                c.mode_in_window.to_string(),
            ],
        ];
        (serde_json::to_value(&c)?, records, true)
    } else {
        let h = empirical_l_distribution(&config, a.threads)?;
        let mut records = vec![["length", "count", "fraction"].map(String::from).to_vec()];
        for (i, (&c, f)) in h.counts.iter().zip(h.fractions()).enumerate() {
            records.push(vec![(i + 1).to_string(), c.to_string(), f.to_string()]);
        }
        (serde_json::to_value(&h)?, records, false)
    };
    if a.json {
        return emit_json(out, name, a, result, Some(a.seed));
    }
    if a.csv {
        return write_csv(out, &records);
    }
    if keyed {
        for (k, v) in records[0].iter().zip(&records[1]) {
            writeln!(out, "{k}: {v}")?;
        }
    } else {
        for r in &records[1..] {
            writeln!(out, "{}", r.join(" "))?;
        }
    }
    Ok(())
}

fn parse_dihedral(spec: &str) -> Result<Dihedral> {
    let n = spec
        .strip_prefix("dihedral:")
        .and_then(|n| n.trim().parse::<u32>().ok())
        .ok_or_else(|| CliError::Usage(format!("expected dihedral:n, got {spec:?}")))?;
    Ok(Dihedral::new(n)?)
}

fn nonabelian(name: &str, a: &NonabelianArgs, out: &mut dyn Write) -> Result<()> {
    let group = parse_dihedral(&a.group)?;
    let left = left_ap_count(&group, a.k)?;
    let right = right_ap_count(&group, a.k)?;
    let bijection = inversion_bijection_holds(&group, a.k)?;
    if a.json {
        let result = json!({
            "order": group.order(),
            "k": a.k,
            "left": left,
            "right": right,
            "inversion_bijection": bijection,
        });
        return emit_json(out, name, a, result, None);
    }
    writeln!(out, "left: {left}")?;
    writeln!(out, "right: {right}")?;
    writeln!(out, "inversion_bijection: {bijection}")?;
    Ok(())
}
