use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use tandem_sdt::{
    approx_d_eff, contingent_optimal_criteria, continuous_fusion_bound, criterion_from_ln_beta, expected_payoff,
    fit_alpha as fit_alpha_grid, log_spaced, make_aid, maximize_d_eff, optimal_ln_beta, optimal_shift, rates_at,
    roc_curve, tandem_performance, trust_scaled_criteria, trust_sweep, verify_against_analytic, AidCharacteristics,
    ContingentCriteria, DetectorParams, OperatingPoint, PayoffContext, SearchConfig, SimConfig, TandemPerformance,
    Verification,
};

use crate::args::{
    range_grid, AnalyzeArgs, FitAlphaArgs, Format, Grid, OutputArgs, PayoffArgs, RocArgs, SimulateArgs, SurfaceArgs,
    TrustArgs,
};
use crate::output::{to_csv, to_json, CliError, Emission, RunManifest};

pub enum Status {
    Ok,
    VerificationFailed,
}

type Outcome = Result<(Emission, Status), CliError>;

const UNINFORMATIVE_NOTE: &str = "aid uninformative; tandem equals human alone";

fn payoff_context(args: &PayoffArgs) -> Result<PayoffContext, CliError> {
    let ctx = match args.payoffs {
        Some([j_tp, j_fp, j_tn, j_fn]) => PayoffContext::new(args.p_signal, j_tp, j_fp, j_tn, j_fn),
        None => PayoffContext::from_ratio(args.p_signal, args.payoff_ratio.unwrap_or(1.0)),
    };
    Ok(ctx?)
}

fn format_of(output: &OutputArgs, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let format = output.format.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(CliError::Usage(format!(
            "--format {} is not available for this command",
            serde_json::to_value(format)?.as_str().unwrap_or("?")
        )))
    }
}

fn finish<P: Serialize>(command: &str, params: &P, seed: Option<u64>, body: Vec<u8>) -> Outcome {
    let manifest = RunManifest::new(command, serde_json::to_value(params)?, seed, &body);
    Ok((Emission { body, manifest }, Status::Ok))
}

/// The aid cutoff given on the command line, or the one maximising `d'_eff`.
fn resolve_aid(d_h: f64, d_a: f64, c_a: Option<f64>, ctx: &PayoffContext) -> Result<AidCharacteristics, CliError> {
    let c_a = match c_a {
        Some(c) => c,
        None => maximize_d_eff(d_h, d_a, ctx, &SearchConfig::default())?.c_a_star,
    };
    Ok(make_aid(d_a, c_a)?)
}

#[derive(Debug, Serialize)]
struct Unaided {
    ln_beta: f64,
    criterion: f64,
    operating_point: OperatingPoint,
    expected_payoff: f64,
}

#[derive(Debug, Serialize)]
struct Contingent {
    ln_beta_alert: f64,
    ln_beta_no_alert: f64,
    criterion_alert: f64,
    criterion_no_alert: f64,
    optimal_shift: f64,
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    d_h: f64,
    d_a: f64,
    c_a: f64,
    p_alert_given_s1: f64,
    p_alert_given_s0: f64,
    unaided: Unaided,
    contingent: Contingent,
    tandem: TandemPerformance,
    note: Option<&'static str>,
}

fn analyze_report(args: &AnalyzeArgs) -> Result<AnalyzeReport, CliError> {
    let ctx = payoff_context(&args.payoff)?;
    let aid = resolve_aid(args.d_h, args.d_a, args.c_a, &ctx)?;
    let ln_beta = optimal_ln_beta(&ctx);
    let criterion = criterion_from_ln_beta(ln_beta, args.d_h)?;
    let unaided_op = rates_at(&DetectorParams::new(args.d_h, criterion)?);
    let criteria = contingent_optimal_criteria(&aid, &ctx)?;
    let (criterion_alert, criterion_no_alert) = criteria.on_axis(args.d_h)?;
    Ok(AnalyzeReport {
        d_h: args.d_h,
        d_a: args.d_a,
        c_a: aid.criterion_a,
        p_alert_given_s1: aid.p_alert_given_s1.value(),
        p_alert_given_s0: aid.p_alert_given_s0.value(),
        unaided: Unaided {
            ln_beta,
            criterion,
            operating_point: unaided_op,
            expected_payoff: expected_payoff(&unaided_op, &ctx),
        },
        contingent: Contingent {
            ln_beta_alert: criteria.ln_beta_alert,
            ln_beta_no_alert: criteria.ln_beta_no_alert,
            criterion_alert,
            criterion_no_alert,
            optimal_shift: optimal_shift(&aid)?,
        },
        tandem: tandem_performance(args.d_h, &criteria, &aid, &ctx)?,
        note: (!aid.is_informative()).then_some(UNINFORMATIVE_NOTE),
    })
}

fn render_text(r: &AnalyzeReport) -> String {
    let rows = [
        ("human d'", r.d_h),
        ("aid d'", r.d_a),
        ("aid cutoff", r.c_a),
        ("P(alert | signal)", r.p_alert_given_s1),
        ("P(alert | noise)", r.p_alert_given_s0),
        ("unaided ln beta*", r.unaided.ln_beta),
        ("unaided criterion", r.unaided.criterion),
        ("unaided P_TP", r.unaided.operating_point.p_tp.value()),
        ("unaided P_FP", r.unaided.operating_point.p_fp.value()),
        ("unaided expected payoff", r.unaided.expected_payoff),
        ("ln beta* after alert", r.contingent.ln_beta_alert),
        ("ln beta* after no alert", r.contingent.ln_beta_no_alert),
        ("criterion after alert", r.contingent.criterion_alert),
        ("criterion after no alert", r.contingent.criterion_no_alert),
        ("optimal shift", r.contingent.optimal_shift),
        ("tandem P_TP", r.tandem.operating_point.p_tp.value()),
        ("tandem P_FP", r.tandem.operating_point.p_fp.value()),
        ("tandem d'_eff", r.tandem.d_eff),
        ("tandem expected payoff", r.tandem.expected_payoff),
    ];
    let mut text = String::new();
    for (label, value) in rows {
        let _ = writeln!(text, "{label:<26}{value:>10.4}");
    }
    if let Some(note) = r.note {
        let _ = writeln!(text, "note: {note}");
    }
    text
}

pub fn analyze(args: &AnalyzeArgs) -> Outcome {
    let format = format_of(&args.output, Format::Text, &[Format::Text, Format::Json])?;
    let report = analyze_report(args)?;
    let body = match format {
        Format::Json => to_json(&report)?,
        _ => render_text(&report).into_bytes(),
    };
    finish("analyze", args, None, body)
}

#[derive(Debug, Serialize)]
struct SurfaceRow {
    d_h: f64,
    d_a: f64,
    c_a_star: f64,
    d_eff_star: f64,
    approx_d_eff: f64,
    bound: f64,
}

#[derive(Debug, Serialize)]
struct SurfaceTable<'a> {
    alpha: f64,
    rows: &'a [SurfaceRow],
}

fn pairs(d_h_grid: &Grid, d_a_grid: &Grid) -> Vec<(f64, f64)> {
    d_h_grid
        .0
        .iter()
        .flat_map(|&d_h| d_a_grid.0.iter().map(move |&d_a| (d_h, d_a)))
        .collect()
}

pub fn surface(args: &SurfaceArgs) -> Outcome {
    let format = format_of(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let ctx = payoff_context(&args.payoff)?;
    let search = SearchConfig::default();
    let rows = pairs(&args.d_h_grid, &args.d_a_grid)
        .par_iter()
        .map(|&(d_h, d_a)| {
            let opt = maximize_d_eff(d_h, d_a, &ctx, &search)?;
            Ok(SurfaceRow {
                d_h,
                d_a,
                c_a_star: opt.c_a_star,
                d_eff_star: opt.d_eff_star,
                approx_d_eff: approx_d_eff(d_h, d_a, args.alpha)?,
                bound: continuous_fusion_bound(d_h, d_a)?,
            })
        })
        .collect::<Result<Vec<_>, tandem_sdt::Error>>()?;
    let body = match format {
        Format::Json => to_json(&SurfaceTable {
            alpha: args.alpha,
            rows: &rows,
        })?,
        _ => to_csv(&rows)?,
    };
    finish("surface", args, None, body)
}

pub fn trust(args: &TrustArgs) -> Outcome {
    let format = format_of(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let ctx = payoff_context(&args.payoff)?;
    let ratios = match &args.ratios {
        Some(grid) => grid.0.clone(),
        None => log_spaced(args.ratio_min, args.ratio_max, args.ratio_count)?,
    };
    let search = SearchConfig::default();
    let points = trust_sweep(args.d_h, args.d_a, &ctx, &ratios, &search)?;
    let body = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct TrustTable<'a> {
                d_h: f64,
                d_a: f64,
                c_a_star: f64,
                points: &'a [tandem_sdt::TrustSweepPoint],
            }
            let c_a_star = maximize_d_eff(args.d_h, args.d_a, &ctx, &search)?.c_a_star;
            to_json(&TrustTable {
                d_h: args.d_h,
                d_a: args.d_a,
                c_a_star,
                points: &points,
            })?
        }
        _ => to_csv(&points)?,
    };
    finish("trust", args, None, body)
}

pub fn fit_alpha(args: &FitAlphaArgs) -> Outcome {
    let format = format_of(&args.output, Format::Json, &[Format::Json, Format::Csv])?;
    let ctx = payoff_context(&args.payoff)?;
    let fit = fit_alpha_grid(&pairs(&args.d_h_grid, &args.d_a_grid), &ctx, &SearchConfig::default())?;
    let body = match format {
        Format::Csv => to_csv(&fit.points)?,
        _ => to_json(&fit)?,
    };
    finish("fit-alpha", args, None, body)
}

#[derive(Debug, Serialize)]
struct RocRow {
    criterion: f64,
    p_fp: f64,
    p_tp: f64,
}

pub fn roc(args: &RocArgs) -> Outcome {
    let format = format_of(&args.output, Format::Csv, &[Format::Csv, Format::Json])?;
    let criteria = range_grid(args.c_min, args.c_max, args.c_step).map_err(CliError::Usage)?;
    let rows: Vec<RocRow> = roc_curve(args.d_h, &criteria)?
        .iter()
        .zip(&criteria)
        .map(|(op, &criterion)| RocRow {
            criterion,
            p_fp: op.p_fp.value(),
            p_tp: op.p_tp.value(),
        })
        .collect();
    let body = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct RocTable<'a> {
                dprime: f64,
                points: &'a [RocRow],
            }
            to_json(&RocTable {
                dprime: args.d_h,
                points: &rows,
            })?
        }
        _ => to_csv(&rows)?,
    };
    finish("roc", args, None, body)
}

#[derive(Serialize)]
struct SimulationDocument<'a> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    verification: &'a Verification,
}

pub fn simulate(args: &SimulateArgs) -> Outcome {
    format_of(&args.output, Format::Json, &[Format::Json])?;
    let ctx = payoff_context(&args.payoff)?;
    let aid = resolve_aid(args.d_h, args.d_a, args.c_a, &ctx)?;
    let optimal: ContingentCriteria = contingent_optimal_criteria(&aid, &ctx)?;
    let criteria = trust_scaled_criteria(&optimal, args.trust_ratio)?;
    let config = SimConfig::new(args.d_h, aid, criteria, ctx.p_signal, args.n_trials, args.seed)?;
    let verification = verify_against_analytic(&config, &ctx)?;

    // The embedded manifest checksums the results alone, so the document
    // does not have to contain its own hash.
    let results = to_json(&verification)?;
    let embedded = RunManifest::new("simulate", serde_json::to_value(args)?, Some(args.seed), &results);
    let body = to_json(&SimulationDocument {
        manifest: &embedded,
        verification: &verification,
    })?;
    let status = if verification.report.passed {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    let (emission, _) = finish("simulate", args, Some(args.seed), body)?;
    Ok((emission, status))
}
