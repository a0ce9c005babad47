use ramroot_core::reproduce::{self, FloatTable, ScanOutcome};
use ramroot_core::scalar::matching_digits_ratio;
use ramroot_core::{
    convergent_table, empirical_order, iterate, oscillation_diagnostic, p_sequence, root_convergents, to_decimal,
    Error, PowerSeriesEquation, Rational, Result, Scalar, ScalarMode, SolverConfig, TerminationReason,
};

use crate::args::{parse_order_range, ConvergeArgs, Format, OrderArgs, OutputArgs, SeriesArgs, SolveArgs, TablesArgs};
use crate::problem::{resolve, Resolved};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_STEP_UNDEFINED: i32 = 3;

/// Estimates further than this from `n + 1` are flagged.
pub const ORDER_FLAG_THRESHOLD: f64 = 0.5;

/// Output of a command: rendered text and the exit code.
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn render<T: serde::Serialize>(
    out: &OutputArgs,
    report: &T,
    text: impl Fn(&T) -> String,
    csv: impl Fn(&T) -> String,
) -> String {
    match out.format {
        Format::Text => text(report).lines().map(|l| l.trim_end().to_string() + "\n").collect(),
        Format::Csv => csv(report),
        Format::Json => json(report) + "\n",
    }
}

fn parse_scalar<S: Scalar>(label: &str, s: &str) -> Result<S> {
    S::parse(s).map_err(|_| Error::InvalidParameter(format!("{label}: cannot parse `{s}`")))
}

fn digits_against(r: &Resolved, value: &impl Scalar) -> Option<u32> {
    if !r.has_reference {
        return None;
    }
    value.to_ratio().map(|v| matching_digits_ratio(&v, &r.problem.reference_value()))
}

pub fn solve(args: &SolveArgs) -> Result<Outcome> {
    let r = resolve(&args.problem)?;
    match args.mode.into() {
        ScalarMode::Float => solve_in::<f64>(args, &r),
        ScalarMode::Rational => solve_in::<Rational>(args, &r),
    }
}

fn solve_in<S: Scalar>(args: &SolveArgs, r: &Resolved) -> Result<Outcome> {
    let config = SolverConfig {
        order: args.order,
        max_iterations: args.max_iter,
        residual_tolerance: parse_scalar::<S>("--tol", &args.tol)?,
        step_tolerance: parse_scalar::<S>("--step-tol", &args.step_tol)?,
        check_condition: args.condition,
    };
    config.validate()?;
    let z0 = S::from_ratio(&r.start);
    let trace = iterate(&r.problem, &z0, &config)?;
    let digits = args.output.digits;
    let report = SolveReport {
        problem: r.problem.name.clone(),
        equation: r.problem.description(),
        mode: S::MODE,
        order: args.order,
        iterates: trace
            .iterates
            .iter()
            .map(|rec| SolveRow {
                m: rec.index,
                z: Number::from_scalar(&rec.z),
                decimal: to_decimal(&rec.z, digits),
                residual: rec.residual.abs().to_f64(),
                condition: rec.condition.as_ref().map(Scalar::to_f64),
            })
            .collect(),
        root: Number::from_scalar(trace.root()),
        root_decimal: to_decimal(trace.root(), digits),
        termination: trace.termination,
        converged: trace.termination.converged(),
    };
    let code = match trace.termination {
        TerminationReason::ResidualMet | TerminationReason::StepMet => EXIT_OK,
        TerminationReason::MaxIterations => EXIT_NOT_CONVERGED,
        TerminationReason::StepUndefined => EXIT_STEP_UNDEFINED,
    };
    Ok(Outcome { output: render(&args.output, &report, SolveReport::text, SolveReport::csv), code })
}

pub fn converge(args: &ConvergeArgs) -> Result<Outcome> {
    let r = resolve(&args.problem)?;
    match args.mode.into() {
        ScalarMode::Float => converge_in::<f64>(args, &r),
        ScalarMode::Rational => converge_in::<Rational>(args, &r),
    }
}

fn converge_in<S: Scalar>(args: &ConvergeArgs, r: &Resolved) -> Result<Outcome> {
    if args.nmax == 0 {
        return Err(Error::InvalidParameter("--nmax must be at least 1".into()));
    }
    let z0 = S::from_ratio(&r.start);
    let table = convergent_table(&r.problem, &z0, args.nmax)?;
    let digits = args.output.digits;
    let rational = S::MODE == ScalarMode::Rational;
    let report = ConvergeReport {
        problem: r.problem.name.clone(),
        equation: r.problem.description(),
        mode: S::MODE,
        start: Number::from_scalar(&z0),
        reference: r.has_reference.then(|| r.problem.reference_root.clone()),
        convergents: table
            .iter()
            .enumerate()
            .map(|(i, c)| ConvergentRow {
                n: i + 1,
                value: c.as_ref().map(Number::from_scalar),
                decimal: c.as_ref().map(|v| to_decimal(v, digits)),
                digits: c.as_ref().filter(|_| rational).and_then(|v| digits_against(r, v)),
            })
            .collect(),
    };
    Ok(Outcome { output: render(&args.output, &report, ConvergeReport::text, ConvergeReport::csv), code: EXIT_OK })
}

pub fn series(args: &SeriesArgs) -> Result<Outcome> {
    match args.mode.into() {
        ScalarMode::Float => series_in::<f64>(args),
        ScalarMode::Rational => series_in::<Rational>(args),
    }
}

fn series_in<S: Scalar>(args: &SeriesArgs) -> Result<Outcome> {
    if args.n < 2 {
        return Err(Error::InvalidParameter("--n must be at least 2".into()));
    }
    let coeffs = args.coeffs.iter().map(|c| parse_scalar::<S>("--coeffs", c)).collect::<Result<Vec<S>>>()?;
    let eq = PowerSeriesEquation::new(coeffs)?;
    let p = p_sequence(&eq, args.n);
    let conv = root_convergents(&eq, args.n)?;
    let diagnostic = oscillation_diagnostic(&conv);
    let digits = args.output.digits;
    let report = SeriesReport {
        coeffs: eq.coeffs().iter().map(Number::from_scalar).collect(),
        mode: S::MODE,
        p: p.iter().map(Number::from_scalar).collect(),
        convergents: conv
            .iter()
            .enumerate()
            .map(|(i, c)| ConvergentRow {
                n: i + 1,
                value: c.as_ref().map(Number::from_scalar),
                decimal: c.as_ref().map(|v| to_decimal(v, digits)),
                digits: None,
            })
            .collect(),
        diagnostic,
        suspicious: diagnostic.suspicious(),
    };
    Ok(Outcome { output: render(&args.output, &report, SeriesReport::text, SeriesReport::csv), code: EXIT_OK })
}

fn scan_row(o: ScanOutcome) -> ScanRow {
    ScanRow {
        target_met: o.target_met(),
        label: o.label,
        problem: o.problem,
        start: o.start,
        digit_target: o.digit_target,
        first_n_meeting_target: o.first_n_meeting_target,
        convergent_at_target: o.convergent_at_target,
        digits_at_target: o.digits_at_target,
        published_fraction: o.published_fraction,
        published_digits: o.published_digits,
        exact_fraction_n: o.exact_fraction_n,
    }
}

fn float_table(table: u8, t: FloatTable) -> TableReport {
    TableReport::Float {
        table,
        max_deviation: t.max_deviation(),
        all_match: t.all_match(),
        rows: t
            .cells
            .iter()
            .enumerate()
            .map(|(i, row)| FloatRowReport {
                row: t.first_row + i,
                cells: row
                    .iter()
                    .map(|c| FloatCellReport {
                        computed: c.rendered(),
                        published: c.published.map(str::to_string),
                        deviation: c.deviation(),
                        matches: c.matches(),
                    })
                    .collect(),
            })
            .collect(),
        title: t.title,
        columns: t.columns,
        starts: t.starts,
    }
}

pub fn tables(args: &TablesArgs) -> Result<Outcome> {
    if args.nmax == 0 {
        return Err(Error::InvalidParameter("--nmax must be at least 1".into()));
    }
    let report = match args.table {
        1 | 2 => {
            let outcomes = if args.table == 1 { reproduce::table1(args.nmax)? } else { reproduce::table2(args.nmax)? };
            let rows: Vec<ScanRow> = outcomes.into_iter().map(scan_row).collect();
            TableReport::Rational {
                table: args.table,
                nmax: args.nmax,
                all_met: rows.iter().all(|r| r.target_met),
                rows,
            }
        }
        3 => float_table(3, reproduce::table3()?),
        4 => float_table(4, reproduce::table4()?),
        other => return Err(Error::InvalidParameter(format!("no table {other}"))),
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_NOT_CONVERGED };
    Ok(Outcome { output: render(&args.output, &report, TableReport::text, TableReport::csv), code })
}

pub fn order(args: &OrderArgs) -> Result<Outcome> {
    let orders = parse_order_range(&args.n).map_err(Error::InvalidParameter)?;
    let r = resolve(&args.problem)?;
    if !r.has_reference {
        return Err(Error::InvalidParameter("order needs a problem with a known root".into()));
    }
    let root: f64 = r.problem.reference();
    let z0 = f64::from_ratio(&r.start);
    let mut rows = Vec::new();
    for n in orders {
        let mut config = SolverConfig::<f64>::new(n);
        config.max_iterations = args.max_iter;
        config.validate()?;
        let trace = iterate(&r.problem, &z0, &config)?;
        let expected = n + 1;
        let (estimate, note) = match empirical_order(&trace, &root) {
            Ok(p) => (Some(p), None),
            Err(Error::InsufficientData(msg)) => (None, Some(msg)),
            Err(e) => return Err(e),
        };
        rows.push(OrderRow {
            n,
            expected,
            termination: trace.termination,
            steps: trace.steps(),
            flagged: estimate.is_some_and(|p| (p - expected as f64).abs() > ORDER_FLAG_THRESHOLD),
            empirical_order: estimate,
            note,
        });
    }
    let report = OrderReport { problem: r.problem.name.clone(), equation: r.problem.description(), rows };
    Ok(Outcome { output: render(&args.output, &report, OrderReport::text, OrderReport::csv), code: EXIT_OK })
}
