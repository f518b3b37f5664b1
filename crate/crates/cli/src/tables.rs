use std::io::Write;

use anyhow::Result;
use sha2::{Digest, Sha256};

use apseq::enumeration::{distribution, Engine, PARALLEL_MAX_SIZE};
use apseq::AdditiveSet;

use crate::args::{TableFamily, TablesArgs};
use crate::commands::enumerate_options;
use crate::CliError;

const TABLE1: &str = include_str!("../golden/table1.csv");
const TABLE2: &str = include_str!("../golden/table2.csv");
const SUMS: &str = include_str!("../golden/SHA256SUMS");

/// The committed golden CSV for a family, after checking its recorded digest.
pub fn golden(family: TableFamily) -> Result<&'static str> {
    let (file, text) = match family {
        TableFamily::Interval => ("table1.csv", TABLE1),
        TableFamily::Cyclic => ("table2.csv", TABLE2),
    };
    let expected = SUMS
        .lines()
        .find_map(|l| {
            l.split_once("  ")
                .filter(|(_, f)| *f == file)
                .map(|(h, _)| h)
        })
        .ok_or_else(|| CliError::Mismatch(format!("no checksum recorded for {file}")))?;
    let actual = hex::encode(Sha256::digest(text.as_bytes()));
    if actual != expected {
        return Err(CliError::Mismatch(format!("{file} does not match its checksum")).into());
    }
    Ok(text)
}

/// Golden rows as `(n, counts)`, with blank cells dropped.
fn golden_rows(text: &str) -> Result<Vec<(usize, Vec<u128>)>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let mut cells = record.iter();
        let n: usize = cells.next().unwrap_or_default().parse()?;
        let counts = cells
            .filter(|c| !c.is_empty())
            .map(|c| c.parse::<u128>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push((n, counts));
    }
    Ok(rows)
}

pub fn run(a: &TablesArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if a.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()).into());
    }
    if a.max_n > PARALLEL_MAX_SIZE {
        return Err(apseq::Error::CapExceeded {
            what: "table size",
            value: a.max_n as u128,
            cap: PARALLEL_MAX_SIZE as u128,
        }
        .into());
    }
    let golden = golden_rows(golden(a.family)?)?;
    let opts = enumerate_options(a.parallel, Engine::Incremental, true);
    let mut records = vec![std::iter::once("n".to_string())
        .chain((1..=a.max_n).map(|k| format!("k{k}")))
        .collect::<Vec<_>>()];
    let mut mismatches = Vec::new();
    for n in 1..=a.max_n {
        let set = match a.family {
            TableFamily::Interval => AdditiveSet::interval(n as u64, 1)?,
            TableFamily::Cyclic => AdditiveSet::cyclic(n as u64)?,
        };
        let table = distribution(&set, &opts)?;
        writeln!(err, "row {n} done")?;
        let mut row = vec![n.to_string()];
        row.extend(table.counts.iter().map(|c| c.to_string()));
        row.resize(a.max_n + 1, String::new());
        records.push(row);
        match golden.iter().find(|(m, _)| *m == n) {
            Some((_, want)) if *want == table.counts => {}
            Some((_, want)) => {
                mismatches.push(format!("n={n}: got {:?}, golden {want:?}", table.counts))
            }
            None => mismatches.push(format!("n={n}: no golden row")),
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &records {
        w.write_record(r)?;
    }
    let bytes = w.into_inner()?;
    if let Some(path) = &a.out {
        std::fs::write(path, &bytes)?;
    }
    out.write_all(&bytes)?;
    if !mismatches.is_empty() {
        for m in &mismatches {
            writeln!(err, "{m}")?;
        }
        return Err(CliError::Mismatch(format!(
            "{} row(s) differ from the golden table",
            mismatches.len()
        ))
        .into());
    }
    Ok(())
}
