//! Text formats: `.bqp` instance files and the benchmark CSV.
//!
//! A `.bqp` file looks like
//!
//! ```text
//! bqp 1
//! n 2
//! Q
//! 1 -2
//! -2 0
//! c
//! 3 1
//! x              # optional, together with lambda
//! 1 -1
//! lambda
//! 3 2
//! meta seed 7    # any number of trailing key/value lines
//! ```
//!
//! Sections must appear in this order. `#` starts a comment and blank lines
//! are ignored. Numbers are written in Rust's shortest round-trip decimal
//! form, so parsing a serialized file reproduces it exactly.

use std::fmt::{self, Write as _};

use crate::generator::Certificate;
use crate::model::{BqpInstance, Multipliers, SignVector};
use crate::numerics::SymMatrix;

pub const FORMAT_VERSION: u32 = 1;

pub const BENCH_CSV_HEADER: &str = "n,seed,gen_ms,solve_ms,iters,gap,certified";

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub version: u32,
    pub instance: BqpInstance,
    pub certificate: Option<Certificate>,
    /// `meta` lines in file order.
    pub metadata: Vec<(String, String)>,
}

impl InstanceFile {
    pub fn new(instance: BqpInstance) -> Self {
        Self {
            version: FORMAT_VERSION,
            instance,
            certificate: None,
            metadata: Vec::new(),
        }
    }

    pub fn with_certificate(mut self, cert: Certificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for ParseError {}

fn write_row<'a>(out: &mut String, values: impl IntoIterator<Item = &'a f64>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{v}").expect("writing to a String");
    }
    out.push('\n');
}

pub fn serialize_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    writeln!(out, "bqp {}", file.version).unwrap();
    writeln!(out, "n {}", inst.n()).unwrap();
    out.push_str("Q\n");
    for row in inst.q().rows() {
        write_row(&mut out, row);
    }
    out.push_str("c\n");
    write_row(&mut out, inst.c());
    if let Some(cert) = &file.certificate {
        out.push_str("x\n");
        write_row(&mut out, &cert.x.to_f64());
        out.push_str("lambda\n");
        write_row(&mut out, cert.lambda.as_slice());
    }
    for (k, v) in &file.metadata {
        writeln!(out, "meta {k} {v}").unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line with comments stripped.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                return Some((i + 1, body));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next().ok_or_else(|| ParseError {
            line: self.last + 1,
            reason: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        reason: reason.into(),
    })
}

fn parse_row(line: usize, body: &str, n: usize) -> Result<Vec<f64>, ParseError> {
    let values = body
        .split_whitespace()
        .map(|tok| match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => err(line, format!("non-finite value `{tok}`")),
            Err(_) => err(line, format!("bad number `{tok}`")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != n {
        return err(
            line,
            format!("dimension mismatch: expected {n} values, found {}", values.len()),
        );
    }
    Ok(values)
}

fn expect_keyword(lines: &mut Lines, keyword: &str) -> Result<(), ParseError> {
    let (line, body) = lines.expect(&format!("section `{keyword}`"))?;
    if body != keyword {
        return err(line, format!("expected section `{keyword}`, found `{body}`"));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = Lines::new(text);

    let (line, body) = lines.expect("header `bqp 1`")?;
    let version = match body.split_whitespace().collect::<Vec<_>>()[..] {
        ["bqp", v] => v
            .parse::<u32>()
            .or_else(|_| err(line, format!("bad version `{v}`")))?,
        _ => return err(line, "expected header `bqp <version>`"),
    };
    if version != FORMAT_VERSION {
        return err(line, format!("unsupported format version {version}"));
    }

    let (line, body) = lines.expect("`n <int>`")?;
    let n = match body.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", v] => v
            .parse::<usize>()
            .or_else(|_| err(line, format!("bad size `{v}`")))?,
        _ => return err(line, "expected `n <int>`"),
    };
    if n == 0 {
        return err(line, "size must be at least 1");
    }

    expect_keyword(&mut lines, "Q")?;
    let mut q = Vec::with_capacity(n * n);
    for i in 0..n {
        let (line, body) = lines.expect("a row of Q")?;
        let row = parse_row(line, body, n)?;
        for (j, v) in row.iter().enumerate().take(i) {
            if *v != q[j * n + i] {
                return err(line, format!("asymmetric Q: entry ({i}, {j}) differs from ({j}, {i})"));
            }
        }
        q.extend(row);
    }
    let q = SymMatrix::from_row_major(n, q).expect("validated above");

    expect_keyword(&mut lines, "c")?;
    let (line, body) = lines.expect("the c row")?;
    let c = parse_row(line, body, n)?;
    let instance = BqpInstance::new(q, c).expect("validated above");

    let mut file = InstanceFile::new(instance);
    let mut next = lines.next();

    if let Some((line, "x")) = next {
        let (xl, body) = lines.expect("the x row")?;
        let xs = parse_row(xl, body, n)?;
        let x = SignVector::from_f64(&xs).or_else(|e| err(xl, format!("certificate entry not ±1: {e}")))?;
        match lines.next() {
            Some((_, "lambda")) => {}
            Some((l, other)) => return err(l, format!("expected section `lambda`, found `{other}`")),
            None => return err(line, "section `x` without `lambda`"),
        }
        let (ll, body) = lines.expect("the lambda row")?;
        let lambda = Multipliers::new(parse_row(ll, body, n)?).expect("finite values");
        file.certificate = Some(Certificate { x, lambda });
        next = lines.next();
    } else if let Some((line, "lambda")) = next {
        return err(line, "section `lambda` without `x`");
    }

    while let Some((line, body)) = next {
        let Some(rest) = body.strip_prefix("meta").filter(|r| r.starts_with(char::is_whitespace)) else {
            return err(line, format!("unknown or out-of-order section `{body}`"));
        };
        let rest = rest.trim_start();
        let Some((key, value)) = rest.split_once(char::is_whitespace) else {
            return err(line, "meta line needs a key and a value");
        };
        file.metadata.push((key.to_string(), value.trim().to_string()));
        next = lines.next();
    }
    Ok(file)
}

/// One row of a size/seed timing sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub seed: u64,
    pub gen_millis: f64,
    pub solve_millis: f64,
    pub iterations: usize,
    /// `f(x) − g(λ)`; NaN when the solve produced no primal.
    pub gap: f64,
    pub certified: bool,
    /// `f(x)` at the returned point, kept for relative-gap checks. Not written.
    pub primal_value: f64,
}

pub fn write_bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(BENCH_CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{:.3},{:.3},{},{:e},{}",
            r.n, r.seed, r.gen_millis, r.solve_millis, r.iterations, r.gap, r.certified
        )
        .unwrap();
    }
    out
}
