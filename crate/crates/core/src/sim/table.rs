//! Result rows and their CSV form.
//!
//! Numbers are written with `{:e}`, the shortest scientific form that parses
//! back to the same `f64`, so a written table reads back bit-identical.
//! Empty cells stand for values that do not apply to a row kind.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::cost::{ResourceAllocation, Solution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Fhei,
    ConstantQuality,
    ChannelInversion,
    GridOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fhei => "fhei",
            Method::ConstantQuality => "constant_quality",
            Method::ChannelInversion => "channel_inversion",
            Method::GridOracle => "grid_oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Method::Fhei, Method::ConstantQuality, Method::ChannelInversion, Method::GridOracle]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| parse_err(format!("unknown method `{s}`")))
    }
}

/// What a row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// One mobile of one solution.
    Mobile,
    /// One Monte-Carlo draw.
    Trial,
    /// Average over the feasible draws at one mobile count.
    Mean,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::Mobile => "mobile",
            RowKind::Trial => "trial",
            RowKind::Mean => "mean",
        }
    }
}

impl FromStr for RowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mobile" => Ok(RowKind::Mobile),
            "trial" => Ok(RowKind::Trial),
            "mean" => Ok(RowKind::Mean),
            _ => Err(parse_err(format!("unknown row kind `{s}`"))),
        }
    }
}

/// Full allocation attached to a row in verbose output.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationDump {
    pub d: Vec<f64>,
    pub alloc: ResourceAllocation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub kind: RowKind,
    pub mobiles: usize,
    pub trial: Option<usize>,
    pub method: Method,
    pub mobile: Option<usize>,
    pub d_bytes: Option<f64>,
    /// Quality of `mobile`.
    pub quality: Option<f64>,
    pub sum_quality: Option<f64>,
    pub mean_latency_s: Option<f64>,
    pub mean_energy_j: Option<f64>,
    pub feasible: bool,
    /// Feasible draws averaged into a mean row.
    pub count: Option<usize>,
    pub dump: Option<AllocationDump>,
}

impl ResultRow {
    /// One row per mobile of `solution`.
    pub fn per_mobile(
        solution: &Solution,
        method: Method,
        trial: Option<usize>,
        feasible: bool,
        verbose: bool,
    ) -> Vec<ResultRow> {
        (0..solution.d.len())
            .map(|m| ResultRow {
                kind: RowKind::Mobile,
                mobiles: solution.d.len(),
                trial,
                method,
                mobile: Some(m),
                d_bytes: Some(solution.d[m]),
                quality: Some(solution.quality[m]),
                sum_quality: Some(solution.sum_quality),
                mean_latency_s: Some(solution.mean_latency()),
                mean_energy_j: Some(solution.mean_energy()),
                feasible,
                count: None,
                dump: verbose.then(|| AllocationDump {
                    d: solution.d.clone(),
                    alloc: solution.alloc.clone(),
                }),
            })
            .collect()
    }

    /// One row summarizing a draw; `None` records an infeasible draw.
    pub fn trial(
        solution: Option<&Solution>,
        mobiles: usize,
        method: Method,
        trial: usize,
        feasible: bool,
        verbose: bool,
    ) -> ResultRow {
        ResultRow {
            kind: RowKind::Trial,
            mobiles,
            trial: Some(trial),
            method,
            mobile: None,
            d_bytes: None,
            quality: None,
            sum_quality: solution.map(|s| s.sum_quality),
            mean_latency_s: solution.map(Solution::mean_latency),
            mean_energy_j: solution.map(Solution::mean_energy),
            feasible,
            count: None,
            dump: solution.filter(|_| verbose).map(|s| AllocationDump {
                d: s.d.clone(),
                alloc: s.alloc.clone(),
            }),
        }
    }

    fn sort_key(&self) -> (usize, Option<usize>, Method, RowKind, Option<usize>) {
        (self.mobiles, self.trial, self.method, self.kind, self.mobile)
    }
}

/// Orders rows by mobile count, trial, method, kind and mobile index; mean
/// rows (no trial) come first within a mobile count.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by_key(ResultRow::sort_key);
}

pub const COLUMNS: [&str; 12] = [
    "kind",
    "mobiles",
    "trial",
    "method",
    "mobile",
    "d_bytes",
    "quality",
    "sum_quality",
    "mean_latency_s",
    "mean_energy_j",
    "feasible",
    "count",
];

pub const VERBOSE_COLUMNS: [&str; 5] = ["alpha", "beta", "edge_flops", "local_flops", "d_vector"];

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

fn int(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(";")
}

fn parse_err(message: String) -> Error {
    Error::Parse {
        line: None,
        field: None,
        message,
    }
}

/// The CSV text for `rows`, preceded by `preamble` as `#` comment lines.
pub fn to_csv_string(rows: &[ResultRow], preamble: &str) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::validation("no result rows to write"));
    }
    let verbose = rows.iter().any(|r| r.dump.is_some());
    let mut out = String::new();
    for line in preamble.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if verbose {
        header.extend(VERBOSE_COLUMNS);
    }
    writer.write_record(&header).map_err(io)?;
    for r in rows {
        let mut record = vec![
            r.kind.name().to_string(),
            r.mobiles.to_string(),
            int(r.trial),
            r.method.name().to_string(),
            int(r.mobile),
            num(r.d_bytes),
            num(r.quality),
            num(r.sum_quality),
            num(r.mean_latency_s),
            num(r.mean_energy_j),
            r.feasible.to_string(),
            int(r.count),
        ];
        if verbose {
            match &r.dump {
                Some(d) => record.extend([
                    list(&d.alloc.shares.alpha),
                    list(&d.alloc.shares.beta),
                    list(&d.alloc.edge),
                    list(&d.alloc.local),
                    list(&d.d),
                ]),
                None => record.extend(std::iter::repeat_n(String::new(), VERBOSE_COLUMNS.len())),
            }
        }
        writer.write_record(&record).map_err(io)?;
    }
    let body = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

/// Writes `rows` to `path`. Nothing is created when `rows` is empty.
pub fn emit_csv(rows: &[ResultRow], path: impl AsRef<Path>, preamble: &str) -> Result<()> {
    let text = to_csv_string(rows, preamble)?;
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cell_num(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| parse_err(format!("bad number `{s}`")))
}

fn cell_int(s: &str) -> Result<Option<usize>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| parse_err(format!("bad integer `{s}`")))
}

fn cell_list(s: &str) -> Result<Vec<f64>> {
    s.split(';')
        .map(|x| x.parse().map_err(|_| parse_err(format!("bad number `{x}`"))))
        .collect()
}

/// Parses text written by [`to_csv_string`].
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    let verbose = header.len() == COLUMNS.len() + VERBOSE_COLUMNS.len();
    if !header.iter().zip(COLUMNS.iter().chain(&VERBOSE_COLUMNS)).all(|(a, b)| a == *b)
        || !(verbose || header.len() == COLUMNS.len())
    {
        return Err(parse_err("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let locate = |e: Error| match e {
            Error::Parse { field, message, .. } => Error::Parse {
                line: Some(i + 2),
                field,
                message,
            },
            other => other,
        };
        let r = record.map_err(|e| parse_err(e.to_string()))?;
        let row = (|| -> Result<ResultRow> {
            let dump = if verbose && !r[12].is_empty() {
                Some(AllocationDump {
                    d: cell_list(&r[16])?,
                    alloc: ResourceAllocation {
                        shares: crate::link::TimeShares {
                            alpha: cell_list(&r[12])?,
                            beta: cell_list(&r[13])?,
                        },
                        edge: cell_list(&r[14])?,
                        local: cell_list(&r[15])?,
                    },
                })
            } else {
                None
            };
            Ok(ResultRow {
                kind: r[0].parse()?,
                mobiles: cell_int(&r[1])?.ok_or_else(|| parse_err("missing mobiles".into()))?,
                trial: cell_int(&r[2])?,
                method: r[3].parse()?,
                mobile: cell_int(&r[4])?,
                d_bytes: cell_num(&r[5])?,
                quality: cell_num(&r[6])?,
                sum_quality: cell_num(&r[7])?,
                mean_latency_s: cell_num(&r[8])?,
                mean_energy_j: cell_num(&r[9])?,
                feasible: r[10]
                    .parse()
                    .map_err(|_| parse_err(format!("bad flag `{}`", &r[10])))?,
                count: cell_int(&r[11])?,
                dump,
            })
        })()
        .map_err(locate)?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_csv(&text)
}
