use std::fmt;
use std::io::Read;

use forest_hopf::checks::{run_suite, CheckReport, Suite, SuiteConfig};
use forest_hopf::ck_hopf::{antipode_ck, coproduct_ck};
use forest_hopf::lincomb::{concat_product, Basis};
use forest_hopf::rota_baxter::{antipode_rb, coproduct_rb, diamond, enumerate_rbf};
use forest_hopf::{
    enumerate_forests, theta_inv, BracketedWord, Comb, Error, Forest, LinComb, Weight,
};
use serde_json::{json, Value};

use crate::{Algebra, Config, Direction, Format, Kind};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    UnknownSuite(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::UnsupportedWeight) => 4,
            CliError::Core(e) if e.is_domain_error() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
            CliError::UnknownSuite(s) => write!(f, "unknown suite `{s}`"),
        }
    }
}

pub struct Output {
    pub stdout: String,
    pub status: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, status: 0 }
    }
}

type CliResult = Result<Output, CliError>;

/// Resolves `-` (stdin) and `@path`; anything else is the text itself.
fn read_source(expr: &str) -> Result<String, CliError> {
    if expr == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = expr.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {path}: {e}")))
    } else {
        Ok(expr.to_string())
    }
}

fn read_lincomb(expr: &str, cfg: &Config) -> Result<LinComb, CliError> {
    let text = read_source(expr)?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
        Ok(LinComb::from_json(&v, &cfg.alphabet)?)
    } else {
        Ok(LinComb::parse(&text, &cfg.alphabet)?)
    }
}

fn render<K: Basis>(c: &Comb<K>, cfg: &Config) -> String {
    let c = c.specialize(&cfg.output_weight());
    match cfg.format {
        Format::Text => format!("{c}\n"),
        Format::Latex => format!("{}\n", c.to_latex()),
        Format::Json => format!("{}\n", c.to_json()),
    }
}

pub fn parse(expr: &str, cfg: &Config) -> CliResult {
    Ok(Output::ok(render(&read_lincomb(expr, cfg)?, cfg)))
}

pub fn mul(algebra: Algebra, left: &str, right: &str, cfg: &Config) -> CliResult {
    let a = read_lincomb(left, cfg)?;
    let b = read_lincomb(right, cfg)?;
    let product = match algebra {
        Algebra::Ck => concat_product(&a, &b),
        Algebra::Rb => diamond(&a, &b)?,
    };
    Ok(Output::ok(render(&product, cfg)))
}

pub fn coprod(algebra: Algebra, expr: &str, cfg: &Config) -> CliResult {
    let a = read_lincomb(expr, cfg)?;
    let delta = match algebra {
        Algebra::Ck => coproduct_ck(&a),
        Algebra::Rb => coproduct_rb(&a)?,
    };
    Ok(Output::ok(render(&delta, cfg)))
}

pub fn antipode(algebra: Algebra, expr: &str, cfg: &Config) -> CliResult {
    let a = read_lincomb(expr, cfg)?;
    let s = match algebra {
        Algebra::Ck => antipode_ck(&a),
        Algebra::Rb => antipode_rb(&a, &cfg.output_weight())?,
    };
    Ok(Output::ok(render(&s, cfg)))
}

pub fn phi(expr: &str, cfg: &Config) -> CliResult {
    let a = read_lincomb(expr, cfg)?;
    Ok(Output::ok(render(&forest_hopf::rota_baxter::phi(&a)?, cfg)))
}

pub fn theta(direction: Direction, expr: &str, cfg: &Config) -> CliResult {
    let text = read_source(expr)?;
    let out = match direction {
        Direction::ToForest => {
            let f = forest_hopf::theta(&BracketedWord::parse(&text, &cfg.alphabet)?);
            match cfg.format {
                Format::Text => f.to_string(),
                Format::Latex => f.to_latex(),
                Format::Json => f.to_json().to_string(),
            }
        }
        Direction::ToWord => {
            let w = theta_inv(&Forest::parse(&text, &cfg.alphabet)?)?;
            match cfg.format {
                Format::Text => w.to_string(),
                Format::Latex => w.to_latex(),
                Format::Json => w.to_json().to_string(),
            }
        }
    };
    Ok(Output::ok(format!("{out}\n")))
}

fn report_json(r: &CheckReport) -> Value {
    json!({
        "suite": r.suite.name(),
        "instances": r.instances,
        "failures": r.failures.iter().map(|f| json!({
            "input": f.input,
            "expected": f.expected,
            "actual": f.actual,
        })).collect::<Vec<_>>(),
    })
}

fn report_text(r: &CheckReport, out: &mut String) {
    let verdict = if r.passed() { "ok" } else { "FAILED" };
    out.push_str(&format!(
        "{}: {} instances, {} failures ... {verdict}\n",
        r.suite,
        r.instances,
        r.failures.len()
    ));
    for f in &r.failures {
        out.push_str(&format!(
            "  input: {}\n    expected: {}\n    actual:   {}\n",
            f.input, f.expected, f.actual
        ));
    }
}

pub fn check(suite: &str, cfg: &Config) -> CliResult {
    let suite_cfg = SuiteConfig {
        alphabet: cfg.alphabet.clone(),
        max_vertices: cfg.max_vertices,
        weight: cfg.weight.clone(),
    };
    let reports: Vec<CheckReport> = if suite == "all" {
        Suite::ALL
            .into_iter()
            .map(|s| {
                // The weight-zero suites always run at λ = 0 here.
                let c = if s.requires_weight_zero() {
                    SuiteConfig {
                        weight: Some(Weight::zero()),
                        ..suite_cfg.clone()
                    }
                } else {
                    suite_cfg.clone()
                };
                run_suite(s, &c)
            })
            .collect::<Result<_, _>>()?
    } else {
        let s: Suite = suite
            .parse()
            .map_err(|_| CliError::UnknownSuite(suite.to_string()))?;
        vec![run_suite(s, &suite_cfg)?]
    };
    for r in &reports {
        eprintln!("{}: {:.3}s", r.suite, r.elapsed.as_secs_f64());
    }
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let stdout = match cfg.format {
        Format::Json if reports.len() == 1 => format!("{}\n", report_json(&reports[0])),
        Format::Json => format!(
            "{}\n",
            json!({
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                "instances": instances,
                "failures": failures,
            })
        ),
        Format::Text | Format::Latex => {
            let mut out = String::new();
            for r in &reports {
                report_text(r, &mut out);
            }
            if reports.len() > 1 {
                out.push_str(&format!(
                    "all: {} suites, {instances} instances, {failures} failures\n",
                    reports.len()
                ));
            }
            out
        }
    };
    Ok(Output {
        stdout,
        status: if failures == 0 { 0 } else { 1 },
    })
}

pub fn enumerate(kind: Kind, cfg: &Config) -> CliResult {
    let items: Vec<Forest> = match kind {
        Kind::Forests => enumerate_forests(cfg.max_vertices, &cfg.alphabet, false).collect(),
        Kind::Rbf => enumerate_rbf(cfg.max_vertices, &cfg.alphabet).collect(),
    };
    let stdout = match cfg.format {
        Format::Json => format!(
            "{}\n",
            json!({
                "forests": items.iter().map(Forest::to_json).collect::<Vec<_>>(),
                "count": items.len(),
            })
        ),
        Format::Text | Format::Latex => {
            let mut out = String::new();
            for f in &items {
                let line = if cfg.format == Format::Latex {
                    f.to_latex()
                } else {
                    f.to_string()
                };
                out.push_str(&line);
                out.push('\n');
            }
            out.push_str(&format!("count {}\n", items.len()));
            out
        }
    };
    Ok(Output::ok(stdout))
}
