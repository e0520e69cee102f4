//! `qcawalk`: simulate and cross-check one-dimensional quantum cellular
//! automata and coined quantum walks from the command line.
//!
//! Exit status: 0 on success, 1 when a verification or limit comparison
//! fails, 2 for invalid flags or parameters.

mod expr;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qca_walk::asymptotics::{kolmogorov_distance, rescaled_qca_sample};
use qca_walk::coined::{
    evolve_walk, generalized_blocks_from_qca, plain_blocks, walk_distribution, ChiralityOrder,
    CoinMatrix, Family, QubitState, WalkState,
};
use qca_walk::correspondence::{
    patel_factorize, two_step_factorize, verify_a_correspondence, verify_b_correspondence,
    verify_two_step, verify_type_reduction, CorrespondenceReport, PatelParams,
};
use qca_walk::qca::{
    classify, params_from_angles, qca_distribution, unitarity_residuals, AngleTriple, Branch,
    QcaParams,
};
use qca_walk::IDENTITY_TOL;

use crate::expr::{parse_complex, parse_real};
use crate::report::{Field, Payload, Report};

#[derive(Parser, Debug)]
#[command(
    name = "qcawalk",
    version,
    about = "Exact simulation and cross-checks of 1-D quantum cellular automata and coined quantum walks",
    long_about = "Exact simulation and cross-checks of 1-D quantum cellular automata and coined \
quantum walks.\n\nNumeric flags accept decimals and pi/sqrt expressions such as pi/4, 3pi/2, \
-0.25 or 1/sqrt2. Complex flags take `re` or `re,im`.\n\nExit status: 0 success, 1 verification \
failure, 2 invalid input."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the type class, the tuple and the five unitarity residuals.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit the QCA distribution x^{(m:±)}(n) as (site, probability) rows.
    SimulateQca {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        qubit: QubitArgs,
        /// Number of steps n.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Start site m of the first delta.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        /// Which neighbour pairs with m: `+` uses m+1, `-` uses m-1.
        #[arg(long, default_value = "+", value_parser = parse_branch, allow_hyphen_values = true)]
        sign: Branch,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit a coined-walk position distribution.
    ///
    /// Without --coin the generalized walk of the QCA tuple is run; with
    /// --coin the plain walk of that 2x2 coin. The qubit starts at the origin.
    SimulateQw {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        qubit: QubitArgs,
        /// Plain-walk coin entries a' b' c' d' (each `re` or `re,im`).
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_hyphen_values = true)]
        coin: Option<Vec<String>>,
        /// Walk family.
        #[arg(long, value_enum, default_value_t = FamilyArg::A)]
        family: FamilyArg,
        /// Number of steps n.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one correspondence check; exits 1 if any error exceeds 1e-12.
    Verify {
        /// Which identity to check.
        #[arg(long, value_enum, default_value_t = VerifyKind::A)]
        kind: VerifyKind,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        qubit: QubitArgs,
        #[command(flatten)]
        two_step: TwoStepArgs,
        #[command(flatten)]
        patel: PatelArgs,
        /// Family for `two-step` and `reduction`.
        #[arg(long, value_enum, default_value_t = FamilyArg::A)]
        family: FamilyArg,
        /// Check every step n <= steps.
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print two-step coin factors or the even/odd layer factorization.
    Factorize {
        #[arg(long, value_enum, default_value_t = FactorKind::TwoStep)]
        kind: FactorKind,
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        two_step: TwoStepArgs,
        #[command(flatten)]
        patel: PatelArgs,
        #[arg(long, value_enum, default_value_t = FamilyArg::A)]
        family: FamilyArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kolmogorov distance between X_n/n and the closed-form limit law.
    LimitCompare {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        qubit: QubitArgs,
        /// Number of steps n.
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// Pass when the distance is at most this.
        #[arg(long, default_value = "0.08", value_parser = parse_real)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct AngleArgs {
    /// θ in [0, 2π).
    #[arg(long, default_value = "pi/4", value_parser = parse_real, allow_hyphen_values = true)]
    theta: f64,
    /// φ in [0, 2π).
    #[arg(long, default_value = "pi/4", value_parser = parse_real, allow_hyphen_values = true)]
    phi: f64,
    /// δ in [0, 2π).
    #[arg(long, default_value = "pi/2", value_parser = parse_real, allow_hyphen_values = true)]
    delta: f64,
}

/// Either angles (θ, φ, δ) or a raw tuple (a, b, c, d); defaults to the
/// angles (pi/4, pi/4, pi/2).
#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[command(flatten)]
    angles: AngleArgs,
    /// Raw tuple a b c d (each `re` or `re,im`); replaces the angles.
    #[arg(
        long,
        num_args = 4,
        value_names = ["A", "B", "C", "D"],
        allow_hyphen_values = true,
        conflicts_with_all = ["theta", "phi", "delta"]
    )]
    tuple: Option<Vec<String>>,
}

#[derive(Args, Debug, Clone)]
struct QubitArgs {
    /// Initial qubit `ALPHA BETA`, each `re` or `re,im`.
    #[arg(
        long,
        num_args = 2,
        value_names = ["ALPHA", "BETA"],
        default_values = ["1/sqrt2", "1/sqrt2"],
        allow_hyphen_values = true
    )]
    qubit: Vec<String>,
}

#[derive(Args, Debug, Clone)]
struct TwoStepArgs {
    /// θ₁ in [0, 2π) for the two-step factors.
    #[arg(long, default_value = "0", value_parser = parse_real, allow_hyphen_values = true)]
    theta1: f64,
    /// θ₂ in [0, 2π) for the two-step factors.
    #[arg(long, default_value = "0", value_parser = parse_real, allow_hyphen_values = true)]
    theta2: f64,
}

#[derive(Args, Debug, Clone)]
struct PatelArgs {
    /// Even-layer angle φ₁ in [0, 2π).
    #[arg(long, default_value = "pi/4", value_parser = parse_real, allow_hyphen_values = true)]
    phi1: f64,
    /// Odd-layer angle φ₂ in [0, 2π).
    #[arg(long, default_value = "pi/4", value_parser = parse_real, allow_hyphen_values = true)]
    phi2: f64,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock duration in JSON output (otherwise null).
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum VerifyKind {
    A,
    B,
    TwoStep,
    Patel,
    Reduction,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FactorKind {
    TwoStep,
    Patel,
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "+" | "plus" => Ok(Branch::Plus),
        "-" | "minus" => Ok(Branch::Minus),
        _ => Err(format!("sign must be `+` or `-`, got `{s}`")),
    }
}

/// Input that parsed but failed validation; exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

struct Outcome {
    report: Report,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let output = match &cli.command {
        Command::Classify { output, .. }
        | Command::SimulateQca { output, .. }
        | Command::SimulateQw { output, .. }
        | Command::Verify { output, .. }
        | Command::Factorize { output, .. }
        | Command::LimitCompare { output, .. } => output.clone(),
    };
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(UsageError(reason)) => {
            eprintln!("error: {reason}");
            return ExitCode::from(2);
        }
    };
    let mut report = outcome.report;
    if output.timing {
        report.duration_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let text = match output.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(command: &Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Classify { params, .. } => classify_cmd(params),
        Command::SimulateQca {
            params,
            qubit,
            steps,
            m,
            sign,
            ..
        } => simulate_qca_cmd(params, qubit, *steps, *m, *sign),
        Command::SimulateQw {
            params,
            qubit,
            coin,
            family,
            steps,
            ..
        } => simulate_qw_cmd(params, qubit, coin.as_deref(), (*family).into(), *steps),
        Command::Verify {
            kind,
            params,
            qubit,
            two_step,
            patel,
            family,
            steps,
            ..
        } => verify_cmd(
            *kind,
            params,
            qubit,
            two_step,
            patel,
            (*family).into(),
            *steps,
        ),
        Command::Factorize {
            kind,
            angles,
            two_step,
            patel,
            family,
            ..
        } => factorize_cmd(*kind, angles, two_step, patel, (*family).into()),
        Command::LimitCompare {
            params,
            qubit,
            steps,
            tolerance,
            ..
        } => limit_compare_cmd(params, qubit, *steps, *tolerance),
    }
}

/// Resolved parameters plus the fields describing how they were given.
fn resolve_params(args: &ParamArgs) -> Result<(QcaParams, Vec<(String, Field)>), UsageError> {
    match &args.tuple {
        Some(raw) => {
            let t = raw
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            let params = QcaParams::new(t[0], t[1], t[2], t[3])?;
            Ok((params, tuple_fields(&params)))
        }
        None => {
            let angles = resolve_angles(&args.angles)?;
            let params = params_from_angles(angles);
            let mut fields = angle_fields(&angles);
            fields.extend(tuple_fields(&params));
            Ok((params, fields))
        }
    }
}

fn resolve_angles(args: &AngleArgs) -> Result<AngleTriple, UsageError> {
    Ok(AngleTriple::new(args.theta, args.phi, args.delta)?)
}

fn angle_fields(a: &AngleTriple) -> Vec<(String, Field)> {
    vec![
        ("theta".into(), Field::Real(a.theta)),
        ("phi".into(), Field::Real(a.phi)),
        ("delta".into(), Field::Real(a.delta)),
    ]
}

fn tuple_fields(p: &QcaParams) -> Vec<(String, Field)> {
    ["a", "b", "c", "d"]
        .iter()
        .zip(p.tuple())
        .map(|(k, z)| (k.to_string(), Field::Complex(z)))
        .collect()
}

fn resolve_qubit(args: &QubitArgs) -> Result<(QubitState, Vec<(String, Field)>), UsageError> {
    let alpha = parse_complex(&args.qubit[0])?;
    let beta = parse_complex(&args.qubit[1])?;
    let qubit = QubitState::new(alpha, beta)?;
    Ok((
        qubit,
        vec![
            ("alpha".into(), Field::Complex(alpha)),
            ("beta".into(), Field::Complex(beta)),
        ],
    ))
}

fn residual_rows(p: &QcaParams) -> Vec<(String, f64)> {
    let r = unitarity_residuals(p.a(), p.b(), p.c(), p.d());
    (1..=5)
        .zip(r.0)
        .map(|(i, v)| (format!("unitarity{i}"), v))
        .collect()
}

fn classify_cmd(args: &ParamArgs) -> Result<Outcome, UsageError> {
    let (params, fields) = resolve_params(args)?;
    let class = classify(&params)?;
    let mut result = vec![("class".to_string(), Field::Text(class.to_string()))];
    result.extend(tuple_fields(&params));
    Ok(Outcome {
        report: Report {
            command: "classify".into(),
            params: fields,
            result: Payload::Fields(result),
            residuals: residual_rows(&params),
            duration_ms: None,
        },
        passed: true,
    })
}

fn simulate_qca_cmd(
    args: &ParamArgs,
    qubit_args: &QubitArgs,
    steps: usize,
    m: i64,
    branch: Branch,
) -> Result<Outcome, UsageError> {
    let (params, mut fields) = resolve_params(args)?;
    let (qubit, qfields) = resolve_qubit(qubit_args)?;
    fields.extend(qfields);
    fields.push(("steps".into(), Field::Int(steps as i64)));
    fields.push(("m".into(), Field::Int(m)));
    let sign = match branch {
        Branch::Plus => "+",
        Branch::Minus => "-",
    };
    fields.push(("sign".into(), Field::Text(sign.into())));
    let dist = qca_distribution(m, branch, &qubit, steps, &params);
    let mass_defect = (dist.total() - 1.0).abs();
    Ok(Outcome {
        report: Report {
            command: "simulate-qca".into(),
            params: fields,
            result: Payload::Distribution(dist),
            residuals: vec![("total_mass".into(), mass_defect)],
            duration_ms: None,
        },
        passed: true,
    })
}

fn simulate_qw_cmd(
    args: &ParamArgs,
    qubit_args: &QubitArgs,
    coin: Option<&[String]>,
    family: Family,
    steps: usize,
) -> Result<Outcome, UsageError> {
    let (qubit, qfields) = resolve_qubit(qubit_args)?;
    let mut fields = vec![("family".to_string(), Field::Text(family.to_string()))];
    let blocks = match coin {
        Some(entries) => {
            let e = entries
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            let coin = CoinMatrix::new(e[0], e[1], e[2], e[3])?;
            fields.push(("walk".into(), Field::Text("plain".into())));
            fields.push(("coin".into(), Field::Matrix(coin.matrix())));
            plain_blocks(&coin, family)
        }
        None => {
            let (params, pfields) = resolve_params(args)?;
            fields.push(("walk".into(), Field::Text("generalized".into())));
            fields.extend(pfields);
            generalized_blocks_from_qca(&params, family)
        }
    };
    fields.extend(qfields);
    fields.push(("steps".into(), Field::Int(steps as i64)));
    let order = match blocks.order {
        ChiralityOrder::LUpper => "L-upper",
        ChiralityOrder::RUpper => "R-upper",
    };
    fields.push(("chirality_order".into(), Field::Text(order.into())));
    let state = evolve_walk(&WalkState::at_origin(&qubit, blocks.order), &blocks, steps)?;
    let dist = walk_distribution(&state);
    let mass_defect = (dist.total() - 1.0).abs();
    Ok(Outcome {
        report: Report {
            command: "simulate-qw".into(),
            params: fields,
            result: Payload::Distribution(dist),
            residuals: vec![
                ("total_mass".into(), mass_defect),
                ("block_unitarity".into(), blocks.unitarity_defect()),
            ],
            duration_ms: None,
        },
        passed: true,
    })
}

fn correspondence_outcome(mut fields: Vec<(String, Field)>, rep: CorrespondenceReport) -> Outcome {
    fields.push(("identity".into(), Field::Text(rep.identity_name.clone())));
    let passed = rep.passes(IDENTITY_TOL);
    Outcome {
        report: Report {
            command: "verify".into(),
            params: fields,
            result: Payload::Fields(vec![
                ("identity".into(), Field::Text(rep.identity_name.clone())),
                ("steps_checked".into(), Field::Int(rep.steps_checked as i64)),
                ("tolerance".into(), Field::Real(IDENTITY_TOL)),
                ("pass".into(), Field::Bool(passed)),
            ]),
            residuals: vec![
                ("max_amplitude_error".into(), rep.max_amplitude_error),
                ("max_probability_error".into(), rep.max_probability_error),
            ],
            duration_ms: None,
        },
        passed,
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    kind: VerifyKind,
    params_args: &ParamArgs,
    qubit_args: &QubitArgs,
    two_step: &TwoStepArgs,
    patel: &PatelArgs,
    family: Family,
    steps: usize,
) -> Result<Outcome, UsageError> {
    let mut fields = Vec::new();
    let rep = match kind {
        VerifyKind::A | VerifyKind::B | VerifyKind::Reduction => {
            let (params, pfields) = resolve_params(params_args)?;
            let (qubit, qfields) = resolve_qubit(qubit_args)?;
            fields.extend(pfields);
            fields.extend(qfields);
            fields.push(("steps".into(), Field::Int(steps as i64)));
            match kind {
                VerifyKind::A => verify_a_correspondence(&params, &qubit, steps),
                VerifyKind::B => verify_b_correspondence(&params, &qubit, steps),
                _ => {
                    fields.push(("family".into(), Field::Text(family.to_string())));
                    verify_type_reduction(&params, &qubit, steps, family)?
                }
            }
        }
        VerifyKind::TwoStep => {
            if params_args.tuple.is_some() {
                return Err(UsageError(
                    "two-step factors need angles, not --tuple".into(),
                ));
            }
            let angles = resolve_angles(&params_args.angles)?;
            let (qubit, qfields) = resolve_qubit(qubit_args)?;
            fields.extend(angle_fields(&angles));
            fields.push(("theta1".into(), Field::Real(two_step.theta1)));
            fields.push(("theta2".into(), Field::Real(two_step.theta2)));
            fields.push(("family".into(), Field::Text(family.to_string())));
            fields.extend(qfields);
            fields.push(("steps".into(), Field::Int(steps as i64)));
            verify_two_step(
                angles,
                two_step.theta1,
                two_step.theta2,
                family,
                &qubit,
                steps,
            )?
        }
        VerifyKind::Patel => {
            let p = PatelParams::new(patel.phi1, patel.phi2)?;
            fields.push(("phi1".into(), Field::Real(p.phi1)));
            fields.push(("phi2".into(), Field::Real(p.phi2)));
            patel_factorize(p)?.1
        }
    };
    Ok(correspondence_outcome(fields, rep))
}

fn factorize_cmd(
    kind: FactorKind,
    angle_args: &AngleArgs,
    two_step: &TwoStepArgs,
    patel: &PatelArgs,
    family: Family,
) -> Result<Outcome, UsageError> {
    let (fields, result, residuals) = match kind {
        FactorKind::TwoStep => {
            let angles = resolve_angles(angle_args)?;
            let f = two_step_factorize(angles, two_step.theta1, two_step.theta2, family)?;
            let target = generalized_blocks_from_qca(&params_from_angles(angles), family);
            let [rp, rq, rt] = f.product_residuals(&target);
            let mut fields = angle_fields(&angles);
            fields.push(("theta1".into(), Field::Real(two_step.theta1)));
            fields.push(("theta2".into(), Field::Real(two_step.theta2)));
            fields.push(("family".into(), Field::Text(family.to_string())));
            let result = vec![
                ("P1".to_string(), Field::Matrix(f.p1)),
                ("Q1".into(), Field::Matrix(f.q1)),
                ("P2".into(), Field::Matrix(f.p2)),
                ("Q2".into(), Field::Matrix(f.q2)),
                ("U1".into(), Field::Matrix(f.u1())),
                ("U2".into(), Field::Matrix(f.u2())),
            ];
            let residuals = vec![
                ("P=P2*P1".to_string(), rp),
                ("Q=Q2*Q1".into(), rq),
                ("T=P2*Q1+Q2*P1".into(), rt),
                ("unitarity".into(), f.unitarity_defect()),
            ];
            (fields, result, residuals)
        }
        FactorKind::Patel => {
            let p = PatelParams::new(patel.phi1, patel.phi2)?;
            let (params, rep) = patel_factorize(p)?;
            let angles = p.angles();
            let fields = vec![
                ("phi1".to_string(), Field::Real(p.phi1)),
                ("phi2".into(), Field::Real(p.phi2)),
            ];
            let mut result = vec![
                (
                    "U_e".to_string(),
                    Field::Matrix(qca_walk::correspondence::layer_block(p.phi1)),
                ),
                (
                    "U_o".into(),
                    Field::Matrix(qca_walk::correspondence::layer_block(p.phi2)),
                ),
            ];
            result.extend(tuple_fields(&params));
            result.extend(
                angle_fields(&angles)
                    .into_iter()
                    .map(|(k, v)| (format!("angle.{k}"), v)),
            );
            result.push(("class".into(), Field::Text(classify(&params)?.to_string())));
            let residuals = vec![
                ("max_amplitude_error".to_string(), rep.max_amplitude_error),
                ("max_probability_error".into(), rep.max_probability_error),
            ];
            (fields, result, residuals)
        }
    };
    let passed = residuals.iter().all(|(_, r)| *r <= IDENTITY_TOL);
    Ok(Outcome {
        report: Report {
            command: "factorize".into(),
            params: fields,
            result: Payload::Fields(result),
            residuals,
            duration_ms: None,
        },
        passed,
    })
}

fn limit_compare_cmd(
    args: &ParamArgs,
    qubit_args: &QubitArgs,
    steps: usize,
    tolerance: f64,
) -> Result<Outcome, UsageError> {
    let (params, mut fields) = resolve_params(args)?;
    let (qubit, qfields) = resolve_qubit(qubit_args)?;
    fields.extend(qfields);
    fields.push(("steps".into(), Field::Int(steps as i64)));
    fields.push(("tolerance".into(), Field::Real(tolerance)));
    let sample = rescaled_qca_sample(&params, &qubit, steps)?;
    let distance = kolmogorov_distance(&sample);
    let passed = distance <= tolerance;
    Ok(Outcome {
        report: Report {
            command: "limit-compare".into(),
            params: fields,
            result: Payload::Fields(vec![
                ("n".into(), Field::Int(steps as i64)),
                ("kolmogorov_distance".into(), Field::Real(distance)),
                ("pass".into(), Field::Bool(passed)),
            ]),
            residuals: vec![("total_mass".into(), (sample.total_mass() - 1.0).abs())],
            duration_ms: None,
        },
        passed,
    })
}
