//! Text formats: edge lists, DIMACS CNF, search results, bench reports and
//! the reduction sidecar map. All UTF-8 with `\n` line endings.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bench::{BenchCounts, BenchReport};
use crate::graph::{EdgeId, GraphBuilder, LabeledDigraph, RainbowPath};
use crate::reduction::{encode, Literal, ReductionMap, SatInstance};
use crate::search::{SearchResult, TargetStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// A message tied to a 1-based input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    fn error(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn warning(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
            severity: Severity::Warning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}', expected tsv or json")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        })
    }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines<'a>(
    text: &'a str,
    comment: &'a [&'a str],
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(move |(_, l)| {
            let t = l.trim();
            !t.is_empty() && !comment.iter().any(|c| t.starts_with(c))
        })
}

/// Parses `source<TAB>target<TAB>label` lines. `#` lines and blank lines are
/// skipped. Repeated triples become parallel edges and raise a warning.
pub fn parse_edge_list(text: &str) -> Result<(LabeledDigraph, Vec<Diagnostic>), Diagnostic> {
    let mut b = GraphBuilder::new();
    let mut warnings = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, raw) in content_lines(text, &["#"]) {
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(Diagnostic::error(
                line,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        if let Some(i) = fields.iter().position(|f| f.is_empty()) {
            return Err(Diagnostic::error(line, format!("field {} is empty", i + 1)));
        }
        if let Some(first) = seen.insert((fields[0], fields[1], fields[2]), line) {
            warnings.push(Diagnostic::warning(
                line,
                format!("duplicate of line {first}, kept as a parallel edge"),
            ));
        }
        b.add_edge(fields[0], fields[1], fields[2]);
    }
    Ok((b.build(), warnings))
}

pub fn write_edge_list(g: &LabeledDigraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            g.vertex_name(e.source),
            g.vertex_name(e.target),
            g.label_name(e.label)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("missing 'p cnf <vars> <clauses>' header")]
    MissingHeader,
    #[error("line {line}: malformed header")]
    BadHeader { line: usize },
    #[error("line {line}: '{token}' is not an integer literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} is out of range for {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
}

/// Standard DIMACS CNF. Clauses may span lines and have any width; `c`
/// lines are comments and a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<SatInstance, DimacsError> {
    let mut num_vars: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (line, raw) in content_lines(text, &["c"]) {
        let t = raw.trim();
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] if num_vars.is_none() => {
                    let v = v.parse().map_err(|_| DimacsError::BadHeader { line })?;
                    c.parse::<usize>()
                        .map_err(|_| DimacsError::BadHeader { line })?;
                    num_vars = Some(v);
                }
                _ => return Err(DimacsError::BadHeader { line }),
            }
            continue;
        }
        let n = num_vars.ok_or(DimacsError::MissingHeader)?;
        for token in t.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line,
                token: token.to_owned(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > n || lit.unsigned_abs() > i32::MAX as u64 {
                return Err(DimacsError::LiteralOutOfRange {
                    line,
                    literal: lit,
                    num_vars: n,
                });
            }
            current.push(Literal::from_dimacs(lit as i32));
        }
    }
    let n = num_vars.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    Ok(SatInstance::new(n, clauses).expect("literals validated while parsing"))
}

pub fn write_dimacs(inst: &SatInstance) -> String {
    let mut out = format!("p cnf {} {}\n", inst.num_vars(), inst.clauses().len());
    for c in inst.clauses() {
        for l in c {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub const RESULT_HEADER: &str =
    "target\tstatus\tspul_distance\tbfs_distance\tlabel_sequence\tvertex_sequence";

#[derive(Debug, Serialize)]
struct JsonTarget<'a> {
    target: &'a str,
    status: TargetStatus,
    spul_distance: Option<usize>,
    bfs_distance: Option<usize>,
    labels: Option<Vec<&'a str>>,
    vertices: Option<Vec<&'a str>>,
}

#[derive(Debug, Serialize)]
struct JsonResult<'a> {
    source: &'a str,
    aborted: bool,
    nodes_allocated: usize,
    paths_found: usize,
    nodes_per_depth: &'a [usize],
    targets: Vec<JsonTarget<'a>>,
}

fn path_names<'g>(g: &'g LabeledDigraph, p: &RainbowPath) -> (Vec<&'g str>, Vec<&'g str>) {
    let labels = p.labels(g).into_iter().map(|l| g.label_name(l)).collect();
    let vertices = p
        .vertices(g)
        .into_iter()
        .map(|v| g.vertex_name(v))
        .collect();
    (labels, vertices)
}

/// Renders one row per target, ordered by vertex id. Sequences are
/// `;`-joined; missing values are `-`.
pub fn write_result(g: &LabeledDigraph, result: &SearchResult, format: Format) -> String {
    match format {
        Format::Tsv => {
            let mut out = String::from(RESULT_HEADER);
            out.push('\n');
            for o in &result.outcomes {
                let dash = || "-".to_owned();
                let (labels, vertices) = o
                    .witness
                    .as_ref()
                    .map(|w| {
                        let (l, v) = path_names(g, w);
                        (l.join(";"), v.join(";"))
                    })
                    .unwrap_or_else(|| (dash(), dash()));
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    g.vertex_name(o.target),
                    o.status,
                    o.distance().map_or_else(dash, |d| d.to_string()),
                    o.bfs_distance.map_or_else(dash, |d| d.to_string()),
                    labels,
                    vertices
                );
            }
            out
        }
        Format::Json => {
            let targets = result
                .outcomes
                .iter()
                .map(|o| {
                    let names = o.witness.as_ref().map(|w| path_names(g, w));
                    let (labels, vertices) = match names {
                        Some((l, v)) => (Some(l), Some(v)),
                        None => (None, None),
                    };
                    JsonTarget {
                        target: g.vertex_name(o.target),
                        status: o.status,
                        spul_distance: o.distance(),
                        bfs_distance: o.bfs_distance,
                        labels,
                        vertices,
                    }
                })
                .collect();
            let doc = JsonResult {
                source: g.vertex_name(result.source),
                aborted: result.aborted,
                nodes_allocated: result.nodes_allocated,
                paths_found: result.paths_found,
                nodes_per_depth: &result.nodes_per_depth,
                targets,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
            s.push('\n');
            s
        }
    }
}

/// One row of a TSV result file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRow {
    pub target: String,
    pub status: String,
    pub spul_distance: Option<usize>,
    pub bfs_distance: Option<usize>,
    pub labels: Option<Vec<String>>,
    pub vertices: Option<Vec<String>>,
}

pub fn parse_result_tsv(text: &str) -> Result<Vec<ResultRow>, Diagnostic> {
    let mut rows = Vec::new();
    let mut lines = content_lines(text, &["#"]);
    match lines.next() {
        Some((_, h)) if h == RESULT_HEADER => {}
        Some((line, _)) => return Err(Diagnostic::error(line, "missing result header")),
        None => return Ok(rows),
    }
    let dist = |line: usize, s: &str| -> Result<Option<usize>, Diagnostic> {
        if s == "-" {
            Ok(None)
        } else {
            s.parse()
                .map(Some)
                .map_err(|_| Diagnostic::error(line, format!("bad distance '{s}'")))
        }
    };
    let seq = |s: &str| -> Option<Vec<String>> {
        match s {
            "-" => None,
            "" => Some(Vec::new()),
            s => Some(s.split(';').map(str::to_owned).collect()),
        }
    };
    for (line, raw) in lines {
        let f: Vec<&str> = raw.split('\t').collect();
        if f.len() != 6 {
            return Err(Diagnostic::error(
                line,
                format!("expected 6 tab-separated fields, found {}", f.len()),
            ));
        }
        rows.push(ResultRow {
            target: f[0].to_owned(),
            status: f[1].to_owned(),
            spul_distance: dist(line, f[2])?,
            bfs_distance: dist(line, f[3])?,
            labels: seq(f[4]),
            vertices: seq(f[5]),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("vertex sequence must be one longer than the label sequence")]
    LengthMismatch,
    #[error("no edge {from} -> {to} with label {label}")]
    NoSuchEdge {
        from: String,
        to: String,
        label: String,
    },
    #[error(transparent)]
    Path(#[from] crate::graph::PathError),
}

/// Rebuilds a path from its vertex and label names, taking the lowest-id
/// edge for each `(from, to, label)` step.
pub fn resolve_path(
    g: &LabeledDigraph,
    vertices: &[String],
    labels: &[String],
) -> Result<RainbowPath, ResolveError> {
    if vertices.len() != labels.len() + 1 {
        return Err(ResolveError::LengthMismatch);
    }
    let vid = |name: &String| {
        g.vertex_id(name)
            .ok_or_else(|| ResolveError::UnknownVertex(name.clone()))
    };
    let mut edges: Vec<EdgeId> = Vec::with_capacity(labels.len());
    for (step, label) in labels.iter().enumerate() {
        let from = vid(&vertices[step])?;
        let to = vid(&vertices[step + 1])?;
        let l = g
            .label_id(label)
            .ok_or_else(|| ResolveError::UnknownLabel(label.clone()))?;
        let e = g
            .out_edges(from)
            .iter()
            .copied()
            .find(|&e| g.edge(e).target == to && g.edge(e).label == l)
            .ok_or_else(|| ResolveError::NoSuchEdge {
                from: vertices[step].clone(),
                to: vertices[step + 1].clone(),
                label: label.clone(),
            })?;
        edges.push(e);
    }
    Ok(RainbowPath::new(g, vid(&vertices[0])?, edges)?)
}

const MAP_HEADER: &str = "# spul reduction map";

/// Sidecar for `decode`: the formula plus each variable's chain edge ids.
///
/// ```text
/// # spul reduction map
/// vars    2
/// clause  1 2
/// clause  -1 -2
/// source  s
/// sink    t
/// chain   1   pos 0;1
/// chain   1   neg 2;3
/// ```
pub fn write_reduction_map(rmap: &ReductionMap) -> String {
    let g = &rmap.graph;
    let mut out = format!("{MAP_HEADER}\nvars\t{}\n", rmap.instance.num_vars());
    for c in rmap.instance.clauses() {
        let lits: Vec<String> = c.iter().map(|l| l.to_dimacs().to_string()).collect();
        let _ = writeln!(out, "clause\t{}", lits.join(" "));
    }
    let _ = writeln!(out, "source\t{}", g.vertex_name(rmap.source));
    let _ = writeln!(out, "sink\t{}", g.vertex_name(rmap.sink));
    let ids = |c: &[EdgeId]| {
        c.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";")
    };
    for (j, (p, n)) in rmap
        .positive_chains
        .iter()
        .zip(&rmap.negative_chains)
        .enumerate()
    {
        let _ = writeln!(out, "chain\t{}\tpos\t{}", j + 1, ids(p));
        let _ = writeln!(out, "chain\t{}\tneg\t{}", j + 1, ids(n));
    }
    out
}

/// Reads a sidecar map, re-encodes its formula and checks that the stored
/// endpoints and chains match the encoding.
pub fn parse_reduction_map(text: &str) -> Result<ReductionMap, Diagnostic> {
    let mut num_vars = None;
    let mut clauses = Vec::new();
    let mut source = None;
    let mut sink = None;
    let mut chains: Vec<(usize, usize, bool, String)> = Vec::new();
    for (line, raw) in content_lines(text, &["#"]) {
        let f: Vec<&str> = raw.split('\t').collect();
        let bad = |what: &str| Diagnostic::error(line, format!("malformed {what} line"));
        match f.as_slice() {
            ["vars", n] => num_vars = Some(n.parse::<usize>().map_err(|_| bad("vars"))?),
            ["clause", lits] => {
                let c = lits
                    .split_whitespace()
                    .map(|t| match t.parse::<i32>() {
                        Ok(v) if v != 0 => Ok(Literal::from_dimacs(v)),
                        _ => Err(bad("clause")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                clauses.push(c);
            }
            ["source", s] => source = Some((line, s.to_string())),
            ["sink", t] => sink = Some((line, t.to_string())),
            ["chain", j, sign @ ("pos" | "neg"), ids] => {
                let j = j.parse().map_err(|_| bad("chain"))?;
                chains.push((line, j, *sign == "neg", ids.to_string()));
            }
            _ => return Err(Diagnostic::error(line, "unrecognized map line")),
        }
    }
    let n = num_vars.ok_or_else(|| Diagnostic::error(1, "missing vars line"))?;
    let inst = SatInstance::new(n, clauses).map_err(|e| Diagnostic::error(1, e.to_string()))?;
    let rmap = encode(&inst);
    let g = &rmap.graph;
    for (what, stored, actual) in [("source", source, rmap.source), ("sink", sink, rmap.sink)] {
        let (line, name) =
            stored.ok_or_else(|| Diagnostic::error(1, format!("missing {what} line")))?;
        if name != g.vertex_name(actual) {
            return Err(Diagnostic::error(
                line,
                format!("{what} does not match the encoding"),
            ));
        }
    }
    if chains.len() != 2 * n {
        return Err(Diagnostic::error(
            1,
            format!("expected {} chain lines", 2 * n),
        ));
    }
    for (line, j, negated, ids) in chains {
        let expected = match (j.checked_sub(1), negated) {
            (Some(j), false) if j < n => &rmap.positive_chains[j],
            (Some(j), true) if j < n => &rmap.negative_chains[j],
            _ => {
                return Err(Diagnostic::error(
                    line,
                    format!("variable {j} out of range"),
                ))
            }
        };
        let rendered = expected
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";");
        if rendered != ids {
            return Err(Diagnostic::error(line, "chain does not match the encoding"));
        }
    }
    Ok(rmap)
}

pub const BENCH_HEADER: &str =
    "source\tsp_total\tsp_correct\tsp_infeasible\tspul_found\tnodes_allocated\taborted";

fn bench_line(out: &mut String, name: &str, r: &BenchCounts) {
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        name, r.sp_total, r.sp_correct, r.sp_infeasible, r.spul_found, r.nodes_allocated, r.aborted
    );
}

/// Per-source rows in vertex-id order followed by a `TOTAL` row.
pub fn write_bench(g: &LabeledDigraph, report: &BenchReport, format: Format) -> String {
    match format {
        Format::Tsv => {
            let mut out = String::from(BENCH_HEADER);
            out.push('\n');
            for r in &report.rows {
                bench_line(&mut out, g.vertex_name(r.source), &r.counts);
            }
            bench_line(&mut out, "TOTAL", &report.totals);
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                source: &'a str,
                #[serde(flatten)]
                counts: &'a BenchCounts,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                rows: Vec<Row<'a>>,
                totals: &'a BenchCounts,
            }
            let doc = Doc {
                rows: report
                    .rows
                    .iter()
                    .map(|r| Row {
                        source: g.vertex_name(r.source),
                        counts: &r.counts,
                    })
                    .collect(),
                totals: &report.totals,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}
