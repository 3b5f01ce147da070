//! Rendering of command results as text, CSV or JSON.

use std::fmt::Write;

use clap::ValueEnum;
use logical_bm::physical::{Bell, FockVector, OutcomeClass, Pattern};
use logical_bm::prob::to_f64;
use logical_bm::verify::ConditionReport;
use num_rational::{BigRational, Rational64};
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// One evaluated scheme. Fields that a command does not produce stay empty.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub scheme: String,
    pub code: String,
    pub n: usize,
    pub p_b: String,
    pub exact_num: Option<String>,
    pub exact_den: Option<String>,
    pub mc_estimate: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub wall_time_s: Option<f64>,
}

impl Row {
    pub fn new(scheme: &str, code: &str, n: usize, p_b: &BigRational) -> Row {
        Row {
            scheme: scheme.into(),
            code: code.into(),
            n,
            p_b: p_b.to_string(),
            exact_num: None,
            exact_den: None,
            mc_estimate: None,
            mc_stderr: None,
            trials: None,
            seed: None,
            wall_time_s: None,
        }
    }

    pub fn set_exact(&mut self, p: &BigRational) {
        self.exact_num = Some(p.numer().to_string());
        self.exact_den = Some(p.denom().to_string());
    }
}

fn csv_of<T: Serialize>(records: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("flat record");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn json_of<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn ratio(num: &str, den: &str) -> String {
    if den == "1" {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

pub fn rows(rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => csv_of(rows),
        Format::Json => json_of(rows),
        Format::Text => {
            let mut s = String::new();
            for r in rows {
                let _ = writeln!(s, "scheme      {}", r.scheme);
                let _ = writeln!(s, "code        {} (n = {})", r.code, r.n);
                let _ = writeln!(s, "P_B         {}", r.p_b);
                if let (Some(a), Some(b)) = (&r.exact_num, &r.exact_den) {
                    let v: BigRational = ratio(a, b).parse().expect("rational");
                    let _ = writeln!(s, "exact       {} ≈ {:.9}", ratio(a, b), to_f64(&v));
                }
                if let (Some(e), Some(se), Some(t), Some(seed)) = (r.mc_estimate, r.mc_stderr, r.trials, r.seed) {
                    let _ = writeln!(s, "mc          {e:.6} ± {se:.6} ({t} trials, seed {seed})");
                }
                if let Some(t) = r.wall_time_s {
                    let _ = writeln!(s, "wall time   {t:.3} s");
                }
            }
            s
        }
    }
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    scheme: &'a str,
    code: &'a str,
    conditions_pass: Option<bool>,
    first_failure: Option<u8>,
    no_premature_logical: Option<bool>,
    no_almost_stabilizer: Option<bool>,
    all_fail_necessity: bool,
    p_b: String,
    bound: String,
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    code: &str,
    report: &ConditionReport,
    h1: bool,
    h2: bool,
    necessity: bool,
    p_b: &BigRational,
    bound: &BigRational,
    format: Format,
) -> String {
    let row = VerifyRow {
        scheme: &report.scheme,
        code,
        conditions_pass: Some(report.passed()),
        first_failure: report.first_failure().map(|c| c.condition),
        no_premature_logical: Some(h1),
        no_almost_stabilizer: Some(h2),
        all_fail_necessity: necessity,
        p_b: p_b.to_string(),
        bound: bound.to_string(),
    };
    match format {
        Format::Csv => csv_of(&[row]),
        Format::Json => json_of(&json!({ "summary": row, "report": report })),
        Format::Text => {
            let mark = |b: bool| if b { "pass" } else { "FAIL" };
            let mut s = format!("code {code}\n{report}");
            let _ = writeln!(s, "heuristic no-premature-logical: {}", mark(h1));
            let _ = writeln!(s, "heuristic no-almost-measured-stabilizer: {}", mark(h2));
            let _ = writeln!(s, "all-fail necessity: {}", mark(necessity));
            let _ = writeln!(s, "bound at P_B = {p_b}: {bound}");
            let _ = writeln!(s, "result: {}", if report.passed() { "pass" } else { "FAIL" });
            s
        }
    }
}

pub fn verify_static(code: &str, scheme: &str, necessity: bool, p_b: &BigRational, bound: &BigRational, format: Format) -> String {
    let row = VerifyRow {
        scheme,
        code,
        conditions_pass: None,
        first_failure: None,
        no_premature_logical: None,
        no_almost_stabilizer: None,
        all_fail_necessity: necessity,
        p_b: p_b.to_string(),
        bound: bound.to_string(),
    };
    match format {
        Format::Csv => csv_of(&[row]),
        Format::Json => json_of(&json!({ "summary": row })),
        Format::Text => {
            let mark = if necessity { "pass" } else { "FAIL" };
            format!(
                "code {code}\nscheme {scheme}\nstatic scheme: the optimality conditions apply to adaptive schemes only\n\
                 all-fail necessity: {mark}\nbound at P_B = {p_b}: {bound}\nresult: FAIL\n"
            )
        }
    }
}

#[derive(Serialize)]
struct BoundRow {
    n1: usize,
    n2: usize,
    p_b: String,
    bound_num: String,
    bound_den: String,
}

pub fn bound(n1: usize, n2: usize, p_b: &BigRational, b: &BigRational, format: Format) -> String {
    let row = BoundRow { n1, n2, p_b: p_b.to_string(), bound_num: b.numer().to_string(), bound_den: b.denom().to_string() };
    match format {
        Format::Csv => csv_of(&[row]),
        Format::Json => json_of(&row),
        Format::Text => format!("{b}\n"),
    }
}

fn pattern_string(p: &Pattern) -> String {
    p.iter().map(|n| n.to_string()).collect()
}

fn class_string(c: &OutcomeClass) -> String {
    let sign = |v: i8| if v > 0 { '+' } else { '-' };
    match c {
        OutcomeClass::Unambiguous(b) => b.name().to_string(),
        OutcomeClass::Partial { zz, z1, z2 } => format!("partial ZZ={}1 ZI={}1 IZ={}1", sign(*zz), sign(*z1), sign(*z2)),
        OutcomeClass::Impossible => "unreachable".to_string(),
    }
}

#[derive(Serialize)]
struct PatternRow {
    pattern: String,
    class: String,
    phi_plus: String,
    phi_minus: String,
    psi_plus: String,
    psi_minus: String,
    p_b: String,
}

pub fn physbm(table: &[(Bell, FockVector)], patterns: &[(Pattern, OutcomeClass)], p_b: Rational64, format: Format) -> String {
    let amp = |b: Bell, p: &Pattern| {
        let a = table.iter().find(|(x, _)| *x == b).expect("every input").1.amplitude(p);
        if a.is_zero() {
            "0".to_string()
        } else {
            a.to_string()
        }
    };
    let rows: Vec<PatternRow> = patterns
        .iter()
        .map(|(p, c)| PatternRow {
            pattern: pattern_string(p),
            class: class_string(c),
            phi_plus: amp(Bell::PhiPlus, p),
            phi_minus: amp(Bell::PhiMinus, p),
            psi_plus: amp(Bell::PsiPlus, p),
            psi_minus: amp(Bell::PsiMinus, p),
            p_b: p_b.to_string(),
        })
        .collect();
    match format {
        Format::Csv => csv_of(&rows),
        Format::Json => {
            let outputs: Vec<_> = table.iter().map(|(b, v)| json!({ "input": b.name(), "output": v.to_string() })).collect();
            json_of(&json!({ "outputs": outputs, "patterns": rows, "p_b": p_b.to_string() }))
        }
        Format::Text => {
            let mut s = String::from("analyzer outputs\n");
            for (b, v) in table {
                let _ = writeln!(s, "  {} -> {v}", b.name());
            }
            let _ = writeln!(s, "\npattern  class");
            for r in &rows {
                let _ = writeln!(s, "  {}   {}", r.pattern, r.class);
            }
            let _ = writeln!(s, "\nP_B = {p_b}");
            s
        }
    }
}

#[derive(Serialize)]
pub struct CompareRow {
    pub d: usize,
    pub simple: String,
    pub optimized: String,
    pub feedforward: String,
}

impl CompareRow {
    pub fn new(d: usize, simple: &BigRational, optimized: &BigRational, feedforward: &BigRational) -> CompareRow {
        CompareRow { d, simple: simple.to_string(), optimized: optimized.to_string(), feedforward: feedforward.to_string() }
    }
}

pub fn compare(rows: &[CompareRow], format: Format) -> String {
    match format {
        Format::Csv => csv_of(rows),
        Format::Json => json_of(rows),
        Format::Text => {
            let f = |v: &str| to_f64(&v.parse::<BigRational>().expect("rational"));
            let mut s = format!("{:>2}  {:>24}  {:>24}  {:>24}\n", "d", "simple static", "optimized static", "feedforward");
            for r in rows {
                let cell = |v: &str| format!("{v} ({:.6})", f(v));
                let _ = writeln!(s, "{:>2}  {:>24}  {:>24}  {:>24}", r.d, cell(&r.simple), cell(&r.optimized), cell(&r.feedforward));
            }
            s
        }
    }
}
