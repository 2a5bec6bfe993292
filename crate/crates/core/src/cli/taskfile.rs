use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_traits::One;

use crate::conformal::PairingId;
use crate::exact::{fmt_q, q, qi, MultiPoly, Q};

use super::parse::{parse_poly_at, parse_rational, parse_value_at, strip_comment, ParseError, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum FieldValue {
    /// `V^a`.
    Vector(Vec<MultiPoly>),
    /// `V^ab`, symmetric.
    Tensor(Vec<Vec<MultiPoly>>),
    /// `φ_a`.
    Form(Vec<MultiPoly>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricValue {
    Flat,
    Matrix(Vec<Vec<MultiPoly>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Field { name: String, value: FieldValue, weight: Q },
    Density { name: String, poly: MultiPoly, weight: Q },
    Metric { name: String, value: MetricValue },
    Conformal { name: String, poly: MultiPoly },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Field { name, .. } | Decl::Density { name, .. } | Decl::Metric { name, .. } | Decl::Conformal { name, .. } => {
                name
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    SymmetryFirst { field: String, w: Option<Q> },
    SymmetrySecond { field: String },
    SolveCkt { valence: usize, max_degree: u32 },
    Pairing {
        pairing: PairingId,
        inputs: Vec<String>,
        metric: Option<String>,
        conformal: Option<String>,
        perturb: Option<usize>,
        lambda: Option<Q>,
    },
    Transform { metric: Option<String>, conformal: Option<String>, field: Option<String> },
    ExperimentYamabeCkt { samples: usize },
    SuiteAll,
}

impl Task {
    pub fn verb(&self) -> &'static str {
        match self {
            Task::SymmetryFirst { .. } => "verify-symmetry-first",
            Task::SymmetrySecond { .. } => "verify-symmetry-second",
            Task::SolveCkt { .. } => "solve-ckt",
            Task::Pairing { .. } => "verify-pairing",
            Task::Transform { .. } => "verify-transform",
            Task::ExperimentYamabeCkt { .. } => "experiment-yamabe-ckt",
            Task::SuiteAll => "suite-all",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskFile {
    pub dimension: usize,
    pub order: u32,
    pub seed: u64,
    pub decls: Vec<Decl>,
    pub tasks: Vec<Task>,
}

impl TaskFile {
    pub fn new(dimension: usize) -> Self {
        TaskFile { dimension, order: 6, seed: 0, decls: Vec::new(), tasks: Vec::new() }
    }

    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name() == name)
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.no, col, msg))
    }

    /// Column (1-based) of the byte offset `off`.
    fn col(&self, off: usize) -> usize {
        self.text[..off].chars().count() + 1
    }
}

/// Whitespace-separated words with their byte offsets.
fn words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn poly_list(v: Value, n: usize, line: &Line, col: usize) -> Result<Vec<MultiPoly>, ParseError> {
    let Value::List(items) = v else {
        return line.err(col, "expected a bracketed list");
    };
    if items.len() != n {
        return line.err(col, format!("expected {n} entries, got {}", items.len()));
    }
    items
        .into_iter()
        .map(|i| match i {
            Value::Poly(p) => Ok(p),
            Value::List(_) => line.err(col, "unexpected nested list"),
        })
        .collect()
}

fn poly_matrix(v: Value, n: usize, line: &Line, col: usize) -> Result<Vec<Vec<MultiPoly>>, ParseError> {
    let Value::List(rows) = v else {
        return line.err(col, "expected a bracketed matrix");
    };
    if rows.len() != n {
        return line.err(col, format!("expected {n} rows, got {}", rows.len()));
    }
    let m = rows.into_iter().map(|r| poly_list(r, n, line, col)).collect::<Result<Vec<_>, _>>()?;
    for a in 0..n {
        for b in 0..a {
            if m[a][b] != m[b][a] {
                return line.err(col, "matrix must be symmetric");
            }
        }
    }
    Ok(m)
}

/// Splits `NAME = rest` out of a declaration, returning the name, the
/// value text, its byte offset and an optional trailing `weight=`.
fn split_decl<'a>(line: &Line<'a>, off: usize, allow_weight: bool) -> Result<(String, &'a str, usize, Option<Q>), ParseError> {
    let body = &line.text[off..];
    let Some(eq) = body.find('=') else {
        return line.err(line.col(off), "expected `NAME = value`");
    };
    let name = body[..eq].trim();
    if !valid_name(name) {
        return line.err(line.col(off), format!("invalid name `{name}`"));
    }
    let mut vstart = off + eq + 1;
    let mut value = &line.text[vstart..];
    let mut weight = None;
    if let Some(wi) = value.find("weight=") {
        let wcol = line.col(vstart + wi);
        if !allow_weight {
            return line.err(wcol, "`weight=` is not allowed on this directive");
        }
        let wtext = value[wi + "weight=".len()..].trim();
        weight = Some(parse_rational(wtext, line.no, wcol + "weight=".len())?);
        value = &value[..wi];
    }
    let lead = value.len() - value.trim_start().len();
    vstart += lead;
    Ok((name.to_string(), value.trim(), vstart, weight))
}

fn options<'a>(line: &Line, ws: &[(usize, &'a str)]) -> Result<(Vec<(usize, &'a str)>, BTreeMap<&'a str, (usize, &'a str)>), ParseError> {
    let mut pos = Vec::new();
    let mut opts = BTreeMap::new();
    for &(o, w) in ws {
        match w.split_once('=') {
            Some((k, v)) => {
                if opts.insert(k, (o + k.len() + 1, v)).is_some() {
                    return line.err(line.col(o), format!("duplicate option `{k}`"));
                }
            }
            None => pos.push((o, w)),
        }
    }
    Ok((pos, opts))
}

/// Parses the line-oriented task grammar. `dimension` must precede every
/// declaration and task; names must be declared before use.
pub fn parse_taskfile(text: &str) -> Result<TaskFile, ParseError> {
    let mut tf: Option<TaskFile> = None;
    let (mut order, mut seed) = (None, None);
    let mut names: HashSet<String> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Line { no: i + 1, text: strip_comment(raw) };
        let ws = words(line.text);
        let Some(&(d_off, directive)) = ws.first() else { continue };
        let dcol = line.col(d_off);
        let arg_off = d_off + directive.len();
        let int_arg = |what: &str| -> Result<u64, ParseError> {
            match ws.get(1) {
                Some(&(o, w)) if ws.len() == 2 => w
                    .parse()
                    .map_err(|_| ParseError::new(line.no, line.col(o), format!("expected a non-negative integer {what}"))),
                _ => line.err(dcol, format!("`{directive}` takes exactly one integer")),
            }
        };
        match directive {
            "dimension" => {
                if tf.is_some() {
                    return line.err(dcol, "duplicate `dimension`");
                }
                let n = int_arg("dimension")? as usize;
                if n == 0 {
                    return line.err(dcol, "dimension must be positive");
                }
                tf = Some(TaskFile::new(n));
            }
            "order" => order = Some(int_arg("order")? as u32),
            "seed" => seed = Some(int_arg("seed")?),
            "field" | "density" | "metric" | "conformal" | "task" => {
                let Some(tf) = tf.as_mut() else {
                    return line.err(dcol, format!("`{directive}` before `dimension`"));
                };
                let n = tf.dimension;
                if directive == "task" {
                    let task = parse_task(&line, &ws[1..], tf, &names)?;
                    tf.tasks.push(task);
                    continue;
                }
                let allow_weight = matches!(directive, "field" | "density");
                let (name, value, voff, weight) = split_decl(&line, arg_off, allow_weight)?;
                if names.contains(&name) {
                    return line.err(line.col(arg_off) + 1, format!("`{name}` declared twice"));
                }
                let vcol = line.col(voff);
                let weight = weight.unwrap_or_else(|| qi(0));
                let decl = match directive {
                    "density" => Decl::Density { name: name.clone(), poly: parse_poly_at(value, n, line.no, vcol)?, weight },
                    "conformal" => {
                        let poly = parse_poly_at(value, n, line.no, vcol)?;
                        let at_base = poly.constant_term();
                        if !at_base.is_one() {
                            return line.err(vcol, format!("conformal factor must equal 1 at the origin, got {}", fmt_q(&at_base)));
                        }
                        Decl::Conformal { name: name.clone(), poly }
                    }
                    "metric" => {
                        let value = if value == "flat" {
                            MetricValue::Flat
                        } else {
                            let m = poly_matrix(parse_value_at(value, n, line.no, vcol)?, n, &line, vcol)?;
                            MetricValue::Matrix(m)
                        };
                        Decl::Metric { name: name.clone(), value }
                    }
                    _ => {
                        let (form, value, vcol) = match value.strip_prefix("form") {
                            Some(rest) if rest.trim_start().starts_with('[') => {
                                let lead = value.len() - rest.trim_start().len();
                                (true, rest.trim_start(), line.col(voff + lead))
                            }
                            _ => (false, value, vcol),
                        };
                        let v = parse_value_at(value, n, line.no, vcol)?;
                        let is_matrix = matches!(&v, Value::List(items) if items.iter().any(|x| matches!(x, Value::List(_))));
                        let fv = match (form, is_matrix) {
                            (true, false) => FieldValue::Form(poly_list(v, n, &line, vcol)?),
                            (true, true) => return line.err(vcol, "`form` takes a list of n entries"),
                            (false, false) => FieldValue::Vector(poly_list(v, n, &line, vcol)?),
                            (false, true) => FieldValue::Tensor(poly_matrix(v, n, &line, vcol)?),
                        };
                        Decl::Field { name: name.clone(), value: fv, weight }
                    }
                };
                names.insert(name);
                tf.decls.push(decl);
            }
            other => return line.err(dcol, format!("unknown directive `{other}`")),
        }
    }
    let mut tf = tf.ok_or_else(|| ParseError::new(1, 1, "missing `dimension`"))?;
    if let Some(o) = order {
        tf.order = o;
    }
    if let Some(s) = seed {
        tf.seed = s;
    }
    Ok(tf)
}

fn parse_task(line: &Line, ws: &[(usize, &str)], tf: &TaskFile, names: &HashSet<String>) -> Result<Task, ParseError> {
    let Some(&(voff, verb)) = ws.first() else {
        return line.err(line.text.len() + 1, "expected a task verb");
    };
    let (pos, opts) = options(line, &ws[1..])?;
    let vcol = line.col(voff);
    let known = |allowed: &[&str]| -> Result<(), ParseError> {
        for (k, (o, _)) in &opts {
            if !allowed.contains(k) {
                return line.err(line.col(*o) - k.len() - 1, format!("unknown option `{k}` for {verb}"));
            }
        }
        Ok(())
    };
    let declared = |(o, name): (usize, &str), kind: &str| -> Result<String, ParseError> {
        let ok = match tf.decl(name) {
            Some(Decl::Field { .. } | Decl::Density { .. }) => kind == "field",
            Some(Decl::Metric { .. }) => kind == "metric",
            Some(Decl::Conformal { .. }) => kind == "conformal",
            None => false,
        };
        if !names.contains(name) || !ok {
            return line.err(line.col(o), format!("undeclared {kind} `{name}`"));
        }
        Ok(name.to_string())
    };
    let opt_name = |k: &str, kind: &str| -> Result<Option<String>, ParseError> {
        opts.get(k).map(|&(o, v)| declared((o, v), kind)).transpose()
    };
    let opt_int = |k: &str| -> Result<Option<u64>, ParseError> {
        opts.get(k)
            .map(|&(o, v)| v.parse().map_err(|_| ParseError::new(line.no, line.col(o), format!("`{k}` expects an integer"))))
            .transpose()
    };
    let opt_q = |k: &str| -> Result<Option<Q>, ParseError> {
        opts.get(k).map(|&(o, v)| parse_rational(v, line.no, line.col(o))).transpose()
    };
    let positional = |count: usize| -> Result<(), ParseError> {
        if pos.len() != count {
            return line.err(vcol, format!("{verb} takes {count} positional argument(s), got {}", pos.len()));
        }
        Ok(())
    };
    Ok(match verb {
        "verify-symmetry-first" => {
            known(&["w"])?;
            positional(1)?;
            Task::SymmetryFirst { field: declared(pos[0], "field")?, w: opt_q("w")? }
        }
        "verify-symmetry-second" => {
            known(&[])?;
            positional(1)?;
            Task::SymmetrySecond { field: declared(pos[0], "field")? }
        }
        "solve-ckt" => {
            known(&["valence", "max-degree"])?;
            positional(0)?;
            let valence = opt_int("valence")?.unwrap_or(1) as usize;
            if !(1..=2).contains(&valence) {
                return line.err(vcol, "valence must be 1 or 2");
            }
            let max_degree = opt_int("max-degree")?.unwrap_or(2 * valence as u64) as u32;
            Task::SolveCkt { valence, max_degree }
        }
        "verify-pairing" => {
            known(&["metric", "conformal", "perturb", "lambda"])?;
            let Some(&(po, pname)) = pos.first() else {
                return line.err(vcol, "verify-pairing needs a pairing name");
            };
            let pairing: PairingId = pname
                .parse()
                .map_err(|_| ParseError::new(line.no, line.col(po), format!("unknown pairing `{pname}`")))?;
            let want = pairing.input_slots().len();
            positional(want + 1)?;
            let inputs = pos[1..].iter().map(|&p| declared(p, "field")).collect::<Result<_, _>>()?;
            Task::Pairing {
                pairing,
                inputs,
                metric: opt_name("metric", "metric")?,
                conformal: opt_name("conformal", "conformal")?,
                perturb: opt_int("perturb")?.map(|p| p as usize),
                lambda: opt_q("lambda")?,
            }
        }
        "verify-transform" => {
            known(&["metric", "conformal", "field"])?;
            positional(0)?;
            Task::Transform {
                metric: opt_name("metric", "metric")?,
                conformal: opt_name("conformal", "conformal")?,
                field: opt_name("field", "field")?,
            }
        }
        "experiment-yamabe-ckt" => {
            known(&["samples"])?;
            positional(0)?;
            Task::ExperimentYamabeCkt { samples: opt_int("samples")?.unwrap_or(4) as usize }
        }
        "suite-all" => {
            known(&[])?;
            positional(0)?;
            Task::SuiteAll
        }
        other => return line.err(vcol, format!("unknown task `{other}`")),
    })
}

fn list(ps: &[MultiPoly]) -> String {
    let items: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn matrix(m: &[Vec<MultiPoly>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| list(r)).collect();
    format!("[{}]", rows.join(", "))
}

/// Canonical text form; `parse_taskfile(&print_taskfile(tf)) == tf`.
pub fn print_taskfile(tf: &TaskFile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dimension {}", tf.dimension);
    let _ = writeln!(s, "order {}", tf.order);
    let _ = writeln!(s, "seed {}", tf.seed);
    for d in &tf.decls {
        let _ = match d {
            Decl::Field { name, value, weight } => {
                let v = match value {
                    FieldValue::Vector(v) => list(v),
                    FieldValue::Form(v) => format!("form {}", list(v)),
                    FieldValue::Tensor(m) => matrix(m),
                };
                writeln!(s, "field {name} = {v} weight={}", fmt_q(weight))
            }
            Decl::Density { name, poly, weight } => writeln!(s, "density {name} = {poly} weight={}", fmt_q(weight)),
            Decl::Metric { name, value: MetricValue::Flat } => writeln!(s, "metric {name} = flat"),
            Decl::Metric { name, value: MetricValue::Matrix(m) } => writeln!(s, "metric {name} = {}", matrix(m)),
            Decl::Conformal { name, poly } => writeln!(s, "conformal {name} = {poly}"),
        };
    }
    for t in &tf.tasks {
        let mut parts = vec![t.verb().to_string()];
        match t {
            Task::SymmetryFirst { field, w } => {
                parts.push(field.clone());
                if let Some(w) = w {
                    parts.push(format!("w={}", fmt_q(w)));
                }
            }
            Task::SymmetrySecond { field } => parts.push(field.clone()),
            Task::SolveCkt { valence, max_degree } => {
                parts.push(format!("valence={valence}"));
                parts.push(format!("max-degree={max_degree}"));
            }
            Task::Pairing { pairing, inputs, metric, conformal, perturb, lambda } => {
                parts.push(pairing.name().to_string());
                parts.extend(inputs.iter().cloned());
                if let Some(c) = conformal {
                    parts.push(format!("conformal={c}"));
                }
                if let Some(l) = lambda {
                    parts.push(format!("lambda={}", fmt_q(l)));
                }
                if let Some(m) = metric {
                    parts.push(format!("metric={m}"));
                }
                if let Some(p) = perturb {
                    parts.push(format!("perturb={p}"));
                }
            }
            Task::Transform { metric, conformal, field } => {
                for (k, v) in [("conformal", conformal), ("field", field), ("metric", metric)] {
                    if let Some(v) = v {
                        parts.push(format!("{k}={v}"));
                    }
                }
            }
            Task::ExperimentYamabeCkt { samples } => parts.push(format!("samples={samples}")),
            Task::SuiteAll => {}
        }
        let _ = writeln!(s, "task {}", parts.join(" "));
    }
    s
}

/// Weight `1 - n/2` acted on by the Laplacian symmetries.
pub fn yamabe_weight(n: usize) -> Q {
    Q::one() - q(n as i64, 2)
}
