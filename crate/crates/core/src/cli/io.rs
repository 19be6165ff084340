//! Input parsing and output helpers shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::space::{DissimilaritySpace, GowerValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// CSV of coordinates with a header row.
    #[default]
    Coords,
    /// Headerless square matrix of dissimilarities.
    Matrix,
    /// CSV with `name:num` / `name:cat` headers, compared by Gower distance.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpaceArgs {
    /// Input file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Coords)]
    pub format: InputFormat,
    /// Metric for coordinate input.
    #[arg(long, value_enum, default_value_t = Metric::Euclidean)]
    pub metric: Metric,
    /// Treat a matrix as symmetric (overrides the sidecar).
    #[arg(long)]
    pub symmetric: Option<bool>,
    /// Co-location tolerance (overrides the sidecar).
    #[arg(long)]
    pub tolerance: Option<f64>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Parse(e.to_string())
}

fn parse_f64(v: &str, row: usize, col: usize) -> Result<f64, CliError> {
    v.parse::<f64>()
        .map_err(|_| CliError::Parse(format!("row {row}, column {col}: `{v}` is not a number")))
}

/// Coordinate rows of a CSV with a header line.
pub fn parse_coords(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        rows.push(
            rec.iter()
                .enumerate()
                .map(|(c, v)| parse_f64(v, i + 1, c + 1))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(rows)
}

/// Rows of a headerless numeric matrix.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    // row lengths are checked when the space is built
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        rows.push(
            rec.iter()
                .enumerate()
                .map(|(c, v)| parse_f64(v, i + 1, c + 1))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(rows)
}

/// A mixed-type table; each header is `name:num` or `name:cat`.
pub fn parse_mixed(text: &str) -> Result<Vec<Vec<GowerValue>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let numeric: Vec<bool> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| match h.rsplit_once(':') {
            Some((_, "num")) => Ok(true),
            Some((_, "cat")) => Ok(false),
            _ => Err(CliError::Parse(format!("header `{h}` must end in `:num` or `:cat`"))),
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        rows.push(
            rec.iter()
                .zip(&numeric)
                .enumerate()
                .map(|(c, (v, &num))| {
                    if num {
                        parse_f64(v, i + 1, c + 1).map(GowerValue::Num)
                    } else {
                        Ok(GowerValue::Cat(v.to_string()))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(rows)
}

/// Options read from `<matrix>.meta`, lines of `key=value`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MatrixMeta {
    pub symmetric: Option<bool>,
    pub tolerance: Option<f64>,
}

pub fn meta_path(input: &Path) -> PathBuf {
    let mut s = input.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

pub fn parse_meta(text: &str) -> Result<MatrixMeta, CliError> {
    let mut meta = MatrixMeta::default();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("sidecar line `{line}` is not key=value")))?;
        let value = value.trim();
        match key.trim() {
            "symmetric" => {
                meta.symmetric = Some(
                    value.parse().map_err(|_| CliError::Parse(format!("symmetric=`{value}` is not a bool")))?,
                )
            }
            "tolerance" => {
                meta.tolerance = Some(
                    value.parse().map_err(|_| CliError::Parse(format!("tolerance=`{value}` is not a number")))?,
                )
            }
            other => return Err(CliError::Parse(format!("unknown sidecar key `{other}`"))),
        }
    }
    Ok(meta)
}

/// Files a space depends on, for manifest hashing.
pub fn input_files(args: &SpaceArgs) -> Vec<PathBuf> {
    let mut files = vec![args.input.clone()];
    let meta = meta_path(&args.input);
    if args.format == InputFormat::Matrix && meta.exists() {
        files.push(meta);
    }
    files
}

pub fn load_space(args: &SpaceArgs) -> Result<DissimilaritySpace, CliError> {
    let text = read_text(&args.input)?;
    let space = match args.format {
        InputFormat::Coords => {
            let rows = parse_coords(&text)?;
            match args.metric {
                Metric::Euclidean => DissimilaritySpace::euclidean(&rows)?,
                Metric::Cosine => DissimilaritySpace::cosine(&rows)?,
            }
        }
        InputFormat::Matrix => {
            let meta_file = meta_path(&args.input);
            let meta = if meta_file.exists() { parse_meta(&read_text(&meta_file)?)? } else { MatrixMeta::default() };
            let symmetric = args.symmetric.or(meta.symmetric).unwrap_or(false);
            let tolerance = args.tolerance.or(meta.tolerance).unwrap_or(0.0);
            return Ok(DissimilaritySpace::from_rows(&parse_matrix(&text)?, symmetric, tolerance)?);
        }
        InputFormat::Mixed => DissimilaritySpace::gower(&parse_mixed(&text)?, None)?,
    };
    match args.tolerance {
        Some(t) => Ok(space.with_tolerance(t)?),
        None => Ok(space),
    }
}

/// Binary outcomes, optionally with a period per point.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub outcomes: Vec<u8>,
    /// Period index per point, in sorted label order.
    pub periods: Option<Vec<usize>>,
    pub period_labels: Vec<String>,
}

/// Parse `point_id,outcome[,period]` for `n` points; every id must appear once.
pub fn parse_outcomes(text: &str, n: usize) -> Result<OutcomeTable, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let with_period = match headers.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["point_id", "outcome"] => false,
        ["point_id", "outcome", "period"] => true,
        _ => return Err(CliError::Parse(format!("outcome header must be point_id,outcome[,period], got {headers:?}"))),
    };
    let mut outcomes: Vec<Option<u8>> = vec![None; n];
    let mut raw_periods: Vec<Option<String>> = vec![None; n];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let id: usize = rec[0]
            .parse()
            .map_err(|_| CliError::Parse(format!("row {}: bad point_id `{}`", i + 1, &rec[0])))?;
        if id >= n {
            return Err(CliError::Parse(format!("row {}: point_id {id} outside 0..{n}", i + 1)));
        }
        if outcomes[id].is_some() {
            return Err(CliError::Parse(format!("point_id {id} appears twice")));
        }
        outcomes[id] = Some(match &rec[1] {
            "0" => 0,
            "1" => 1,
            other => return Err(CliError::Parse(format!("row {}: outcome `{other}` is not 0 or 1", i + 1))),
        });
        if with_period {
            raw_periods[id] = Some(rec[2].to_string());
        }
    }
    let outcomes = outcomes
        .into_iter()
        .enumerate()
        .map(|(i, y)| y.ok_or_else(|| CliError::Parse(format!("no outcome for point {i}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if !with_period {
        return Ok(OutcomeTable { outcomes, periods: None, period_labels: Vec::new() });
    }
    let raw: Vec<String> = raw_periods.into_iter().map(|p| p.unwrap_or_default()).collect();
    let mut labels: Vec<String> = raw.clone();
    labels.sort();
    labels.dedup();
    if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<i64>().unwrap());
    }
    let periods = raw.iter().map(|p| labels.iter().position(|l| l == p).unwrap()).collect();
    Ok(OutcomeTable { outcomes, periods: Some(periods), period_labels: labels })
}

/// Write to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Coordinates as CSV with `x,y,z,...` headers.
pub fn points_csv(points: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let dim = points.first().map_or(0, Vec::len);
    let names = ["x", "y", "z"];
    let header: Vec<String> =
        (0..dim).map(|i| names.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = points.iter().map(|p| p.iter().map(|&v| fmt_f64(v)).collect()).collect();
    csv_bytes(&header, &rows)
}
