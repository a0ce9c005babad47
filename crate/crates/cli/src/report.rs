//! Report types shared by all output formats. Every report serializes to
//! JSON and parses back; exact values use `{"num": "...", "den": "..."}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use ramroot_core::{OscillationDiagnostic, Rational, Scalar, ScalarMode, TerminationReason};

/// A float or an exact rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn from_scalar<S: Scalar>(s: &S) -> Number {
        match S::MODE {
            ScalarMode::Float => Number::Float(s.to_f64()),
            ScalarMode::Rational => Number::Exact(Rational::from(s.to_ratio().expect("rational scalar"))),
        }
    }

    /// `p/q` for exact values, shortest round-trip form for floats.
    pub fn raw(&self) -> String {
        match self {
            Number::Exact(r) => r.to_string(),
            Number::Float(x) => format!("{x:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRow {
    pub m: usize,
    pub z: Number,
    pub decimal: String,
    /// `|f(z_m)|` as a float.
    pub residual: f64,
    pub condition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: String,
    pub equation: String,
    pub mode: ScalarMode,
    pub order: usize,
    pub iterates: Vec<SolveRow>,
    pub root: Number,
    pub root_decimal: String,
    pub termination: TerminationReason,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergentRow {
    pub n: usize,
    /// `None` where the order-n step is undefined.
    pub value: Option<Number>,
    pub decimal: Option<String>,
    /// Agreeing decimal digits against the reference root, if one is known.
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub problem: String,
    pub equation: String,
    pub mode: ScalarMode,
    pub start: Number,
    pub reference: Option<String>,
    pub convergents: Vec<ConvergentRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub coeffs: Vec<Number>,
    pub mode: ScalarMode,
    pub p: Vec<Number>,
    pub convergents: Vec<ConvergentRow>,
    pub diagnostic: OscillationDiagnostic,
    pub suspicious: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub label: String,
    pub problem: String,
    pub start: Rational,
    pub digit_target: u32,
    pub first_n_meeting_target: Option<usize>,
    pub convergent_at_target: Option<Rational>,
    pub digits_at_target: Option<u32>,
    pub published_fraction: Rational,
    pub published_digits: u32,
    pub exact_fraction_n: Option<usize>,
    pub target_met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatCellReport {
    pub computed: Option<String>,
    pub published: Option<String>,
    pub deviation: Option<f64>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatRowReport {
    pub row: usize,
    pub cells: Vec<FloatCellReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TableReport {
    Rational {
        table: u8,
        nmax: usize,
        rows: Vec<ScanRow>,
        all_met: bool,
    },
    Float {
        table: u8,
        title: String,
        columns: Vec<String>,
        starts: Vec<f64>,
        rows: Vec<FloatRowReport>,
        max_deviation: f64,
        all_match: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub n: usize,
    pub expected: usize,
    pub termination: TerminationReason,
    pub steps: usize,
    pub empirical_order: Option<f64>,
    /// Set when fewer than three iterates have a resolvable error.
    pub note: Option<String>,
    /// Estimate off by more than the flag threshold.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub problem: String,
    pub equation: String,
    pub rows: Vec<OrderRow>,
}

pub fn json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn fmt_f(v: Option<f64>, prec: usize) -> String {
    v.map(|x| format!("{x:.prec$}")).unwrap_or_else(|| "-".into())
}

impl SolveReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem {}: {}", self.problem, self.equation);
        let _ = writeln!(s, "mode {}, order {}", self.mode, self.order);
        let with_cond = self.iterates.iter().any(|r| r.condition.is_some());
        let _ = write!(s, "{:>4}  {:<24} {:>10}", "m", "z_m", "|f(z_m)|");
        if with_cond {
            let _ = write!(s, " {:>10}", "indicator");
        }
        s.push('\n');
        for r in &self.iterates {
            let _ = write!(s, "{:>4}  {:<24} {:>10}", r.m, r.decimal, format!("{:.3e}", r.residual));
            if with_cond {
                let _ = write!(s, " {:>10}", r.condition.map(|c| format!("{c:.3e}")).unwrap_or_else(|| "-".into()));
            }
            s.push('\n');
        }
        let _ = writeln!(s, "root {}", self.root_decimal);
        let _ = writeln!(s, "termination {:?}", self.termination);
        s
    }

    pub fn csv(&self) -> String {
        let rows = self
            .iterates
            .iter()
            .map(|r| {
                vec![r.m.to_string(), r.decimal.clone(), r.z.raw(), format!("{:e}", r.residual), opt(&r.condition)]
            })
            .collect();
        csv_string(&["m", "z", "z_exact", "residual", "indicator"], rows)
    }
}

fn convergent_text(s: &mut String, rows: &[ConvergentRow], label: &str) {
    let with_digits = rows.iter().any(|r| r.digits.is_some());
    let exact = rows.iter().any(|r| matches!(r.value, Some(Number::Exact(_))));
    let decimals: Vec<&str> = rows.iter().map(|r| r.decimal.as_deref().unwrap_or("undefined")).collect();
    let fractions: Vec<String> =
        rows.iter().map(|r| r.value.as_ref().map(Number::raw).unwrap_or_else(|| "-".into())).collect();
    let dw = decimals.iter().map(|d| d.len()).chain([5]).max().unwrap_or(5);
    let fw = fractions.iter().map(String::len).chain([8]).max().unwrap_or(8);
    let mut header = format!("{label:>4}  {:<dw$}", "value");
    if exact {
        let _ = write!(header, "  {:<fw$}", "fraction");
    }
    if with_digits {
        header.push_str("  digits");
    }
    s.push_str(header.trim_end());
    s.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let mut line = format!("{:>4}  {:<dw$}", r.n, decimals[i]);
        if exact {
            let _ = write!(line, "  {:<fw$}", fractions[i]);
        }
        if with_digits {
            let _ = write!(line, "  {:>6}", r.digits.map(|d| d.to_string()).unwrap_or_else(|| "-".into()));
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
}

fn convergent_csv(rows: &[ConvergentRow], label: &str) -> String {
    let body = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.decimal.clone().unwrap_or_default(),
                r.value.as_ref().map(Number::raw).unwrap_or_default(),
                opt(&r.digits),
            ]
        })
        .collect();
    csv_string(&[label, "value", "exact", "digits"], body)
}

impl ConvergeReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem {}: {}", self.problem, self.equation);
        let _ = writeln!(s, "mode {}, start {}", self.mode, self.start.raw());
        if let Some(r) = &self.reference {
            let _ = writeln!(s, "reference {r}");
        }
        convergent_text(&mut s, &self.convergents, "n");
        s
    }

    pub fn csv(&self) -> String {
        convergent_csv(&self.convergents, "n")
    }
}

impl SeriesReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let coeffs: Vec<String> = self.coeffs.iter().map(Number::raw).collect();
        let _ = writeln!(s, "A = [{}], mode {}", coeffs.join(", "), self.mode);
        let p: Vec<String> = self.p.iter().map(Number::raw).collect();
        let _ = writeln!(s, "P = [{}]", p.join(", "));
        convergent_text(&mut s, &self.convergents, "k");
        let d = &self.diagnostic;
        let _ = writeln!(
            s,
            "oscillation check: sign changes {}, non-contracting {}, undefined entries {}{}",
            d.sign_changes,
            d.non_contracting,
            d.undefined_entries,
            if self.suspicious { " (no unique smallest root?)" } else { "" }
        );
        s
    }

    pub fn csv(&self) -> String {
        convergent_csv(&self.convergents, "k")
    }
}

impl TableReport {
    pub fn passed(&self) -> bool {
        match self {
            TableReport::Rational { all_met, .. } => *all_met,
            TableReport::Float { all_match, .. } => *all_match,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        match self {
            TableReport::Rational { table, nmax, rows, all_met } => {
                let _ = writeln!(s, "table {table}: exact convergents scanned over n = 1..{nmax}");
                let _ = writeln!(
                    s,
                    "{:<18} {:>6} {:>4} {:<28} {:>6} {:<14} {:>6} {:>7}",
                    "row", "target", "n", "convergent", "digits", "published", "digits", "exact n"
                );
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{:<18} {:>6} {:>4} {:<28} {:>6} {:<14} {:>6} {:>7}",
                        r.label,
                        r.digit_target,
                        opt(&r.first_n_meeting_target),
                        opt(&r.convergent_at_target),
                        opt(&r.digits_at_target),
                        r.published_fraction.to_string(),
                        r.published_digits,
                        r.exact_fraction_n.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
                    );
                }
                let _ = writeln!(s, "{}", if *all_met { "all digit targets met" } else { "digit target missed" });
            }
            TableReport::Float { table, title, columns, starts, rows, max_deviation, all_match } => {
                let _ = writeln!(s, "table {table}: {title}");
                let _ = write!(s, "{:>4}", "row");
                for (c, z0) in columns.iter().zip(starts) {
                    let _ = write!(s, "  {:<33}", format!("{c} (start {z0})"));
                }
                s.push('\n');
                for r in rows {
                    let _ = write!(s, "{:>4}", r.row);
                    for c in &r.cells {
                        let cell = match (&c.computed, &c.published) {
                            (Some(v), Some(p)) => format!("{v} {} {p}", if c.matches { "=" } else { "!" }),
                            (Some(v), None) => format!("{v} (unpublished)"),
                            (None, Some(p)) => format!("- ! {p}"),
                            (None, None) => String::new(),
                        };
                        let _ = write!(s, "  {cell:<33}");
                    }
                    s.push('\n');
                }
                let _ = writeln!(
                    s,
                    "max deviation {max_deviation:.2e}, {}",
                    if *all_match { "all cells match" } else { "mismatch" }
                );
            }
        }
        s
    }

    pub fn csv(&self) -> String {
        match self {
            TableReport::Rational { rows, .. } => {
                let body = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.label.clone(),
                            r.digit_target.to_string(),
                            opt(&r.first_n_meeting_target),
                            opt(&r.convergent_at_target),
                            opt(&r.digits_at_target),
                            r.published_fraction.to_string(),
                            r.published_digits.to_string(),
                            opt(&r.exact_fraction_n),
                            r.target_met.to_string(),
                        ]
                    })
                    .collect();
                csv_string(
                    &["row", "target", "n", "convergent", "digits", "published", "published_digits", "exact_n", "met"],
                    body,
                )
            }
            TableReport::Float { columns, rows, .. } => {
                let mut body = Vec::new();
                for r in rows {
                    for (c, cell) in columns.iter().zip(&r.cells) {
                        body.push(vec![
                            r.row.to_string(),
                            c.clone(),
                            opt(&cell.computed),
                            opt(&cell.published),
                            cell.deviation.map(|d| format!("{d:e}")).unwrap_or_default(),
                            cell.matches.to_string(),
                        ]);
                    }
                }
                csv_string(&["row", "column", "computed", "published", "deviation", "match"], body)
            }
        }
    }
}

impl OrderReport {
    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem {}: {}", self.problem, self.equation);
        let _ = writeln!(s, "{:>3} {:>8} {:>10} {:>6}  {:<15}", "n", "expected", "estimate", "steps", "termination");
        for r in &self.rows {
            let _ = write!(
                s,
                "{:>3} {:>8} {:>10} {:>6}  {:<15}",
                r.n,
                r.expected,
                fmt_f(r.empirical_order, 3),
                r.steps,
                format!("{:?}", r.termination)
            );
            if r.flagged {
                s.push_str("  off by more than 0.5");
            }
            if let Some(note) = &r.note {
                let _ = write!(s, "  {note}");
            }
            s.push('\n');
        }
        s
    }

    pub fn csv(&self) -> String {
        let body = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.expected.to_string(),
                    opt(&r.empirical_order),
                    r.steps.to_string(),
                    format!("{:?}", r.termination),
                    r.flagged.to_string(),
                ]
            })
            .collect();
        csv_string(&["n", "expected", "estimate", "steps", "termination", "flagged"], body)
    }
}
