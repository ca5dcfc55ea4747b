//! One function per subcommand, each returning formatted tables.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive};

use symsense::codes::{make_logical, CodewordRecord, GnuParams, Label};
use symsense::metrology::{fi_code_basis, lyapunov_residual, qfi_mixed, qfi_pure, sld};
use symsense::noise::{ad_qfi_bound, amplitude_damp, delete, deletion_qfi, total_weight};
use symsense::optimizer::{
    closed_form, fqec_curve, p2_exponent, parse_grid, parse_rational, polytope_grid, polytope_membership_exact,
    solve_lp, to_f64, GhzVariant, LPInstance,
};
use symsense::protocols::{
    expected_fi_p1, run_ensemble, run_protocol2, run_protocol3, EnsembleSummary, ProtocolConfig, Simulator,
};
use symsense::qec::deletion_qec;
use symsense::symcore::{Branch, SymEnsemble};
use symsense::SymError;

use crate::output::{Output, Table};
use crate::{CodeArgs, Command, GhzChoice, LpArgs, ProtocolArgs};

/// Largest Dicke block for which the dense mixed-state QFI is computed.
const MAX_DENSE_DIM: u64 = 400;

#[derive(Debug)]
pub enum CliError {
    /// Bad user input; exit code 2.
    Invalid(String),
    /// Anything else; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid configuration: {m}"),
            CliError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        match e {
            SymError::InvalidParams(_) | SymError::Precondition(_) | SymError::ZeroVariance | SymError::Infeasible => {
                CliError::Invalid(e.to_string())
            }
            SymError::ZeroProbability(_) => CliError::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Shortest round-trip float text.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Qfi(code) => qfi(code),
        Command::FiScan { code, theta_grid } => fi_scan(code, theta_grid),
        Command::Sld { code, theta } => sld_cmd(code, *theta),
        Command::Delete { code, t } => delete_cmd(code, *t),
        Command::Ad { code, gamma } => ad_cmd(code, *gamma),
        Command::QecDelete { code, t } => qec_delete(code, *t),
        Command::Protocol1(args) => protocol(args, false),
        Command::Protocol2(args) => protocol(args, true),
        Command::Protocol3 { c1, k, q, e1, e2 } => protocol3(c1, *k, q, e1, e2),
        Command::Polytope(args) => polytope(args),
        Command::FqecScan { q, e1, e2, c_grid } => fqec_scan(q, e1, e2, c_grid),
        Command::Verify => Ok(crate::verify::run()),
    }
}

fn to_ratio_u64(x: &BigRational) -> CliResult<Ratio<u64>> {
    let (p, q) = (x.numer().to_u64(), x.denom().to_u64());
    match (p, q) {
        (Some(p), Some(q)) if q > 0 => Ok(Ratio::new(p, q)),
        _ => Err(invalid(format!("u = {x} must be a non-negative ratio of 64-bit integers"))),
    }
}

/// Resolves `--u` exactly. A fraction or integer is taken as given; a decimal
/// snaps to the nearest `u` with `g·n·u` integral, with a note on stderr.
fn parse_scale(text: &str, g: u64, n: u64) -> CliResult<Ratio<u64>> {
    let u = parse_rational(text)?;
    if u.is_negative() {
        return Err(invalid("u must be positive"));
    }
    let gn = BigRational::from_integer(BigInt::from(g * n));
    let span = &u * &gn;
    if span.is_integer() || text.contains('/') {
        return to_ratio_u64(&u);
    }
    let snapped = span.round();
    let u_eff = &snapped / &gn;
    eprintln!("note: u = {text} gives g*n*u = {:.6}; using g*n*u = {snapped} (u = {u_eff})", to_f64(&span));
    to_ratio_u64(&u_eff)
}

/// Builds the code. With `--nq` the shift defaults to the centred value
/// when `centred` is set and to 0 otherwise; with `--u` likewise.
fn build_params(c: &CodeArgs, centred: bool) -> CliResult<GnuParams> {
    let gn = c.g.checked_mul(c.n).ok_or_else(|| invalid("g*n overflows"))?;
    if let Some(nq) = c.nq {
        let s = match c.s {
            Some(s) => s,
            None if centred => nq.checked_sub(gn).ok_or_else(|| invalid("g*n exceeds N"))? / 2,
            None => 0,
        };
        return Ok(GnuParams::from_lattice(nq, c.g, c.n, s)?);
    }
    let u = parse_scale(c.u.as_deref().unwrap_or("1"), c.g, c.n)?;
    let s = match c.s {
        Some(s) => s,
        None if centred => {
            // N/2 − gn/2 with N = gnu + s gives s = gn(u − 1).
            let s = (u - Ratio::from_integer(1)) * Ratio::from_integer(gn);
            if !s.is_integer() {
                return Err(invalid("centred shift g*n*(u-1) is not an integer; pass --s"));
            }
            s.to_integer()
        }
        None => 0,
    };
    Ok(GnuParams::new(c.g, c.n, u, s)?)
}

fn code_fields(p: &GnuParams) -> Vec<(&'static str, String)> {
    vec![
        ("g", p.g().to_string()),
        ("n", p.n().to_string()),
        ("u", p.u_string()),
        ("s", p.s().to_string()),
        ("N", p.n_qubits().to_string()),
    ]
}

fn record(name: &str, mut head: Vec<(&'static str, String)>, tail: Vec<(&'static str, String)>) -> Table {
    head.extend(tail);
    Table::record(name, &head)
}

fn qfi(code: &CodeArgs) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let plus = make_logical(&p, Label::Plus);
    let closed = p.g() * p.g() * p.n();
    let summary = record(
        "qfi",
        code_fields(&p),
        vec![("qfi_closed_form", closed.to_string()), ("qfi_numeric", num(qfi_pure(&plus.state)))],
    );
    let mut amps = Table::new("codewords", &["label", "w", "re", "im"]);
    for label in [Label::Zero, Label::One, Label::Plus] {
        let rec = CodewordRecord::from(&make_logical(&p, label));
        for a in rec.amps {
            amps.push(vec![label.to_string(), a.w.to_string(), num(a.re), num(a.im)]);
        }
    }
    Ok(Output { tables: vec![summary, amps], ..Default::default() })
}

fn fi_scan(code: &CodeArgs, grid: &str) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let qfi = (p.g() * p.g() * p.n()) as f64;
    let mut t = Table::new("fi_scan", &["theta", "fi_two_outcome", "fi_three_outcome", "qfi"]);
    for theta in parse_grid(grid)? {
        let th = to_f64(&theta);
        let fi = fi_code_basis(&p, th);
        t.push(vec![num(th), num(fi.two_outcome), num(fi.three_outcome), num(qfi)]);
    }
    Ok(Output { tables: vec![t], ..Default::default() })
}

fn sld_cmd(code: &CodeArgs, theta: f64) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let state = make_logical(&p, Label::Plus).state.apply_signal(theta);
    let dec = sld(&state)?;
    let summary = record(
        "sld",
        code_fields(&p),
        vec![
            ("theta", num(theta)),
            ("eigval_plus", num(dec.eigval_plus)),
            ("eigval_minus", num(dec.eigval_minus)),
            ("qfi", num(qfi_pure(&state))),
            ("lyapunov_residual", num(lyapunov_residual(&state, &dec))),
        ],
    );
    let mut vecs = Table::new("sld_eigenvectors", &["w", "plus_re", "plus_im", "minus_re", "minus_im"]);
    for (w, (a, b)) in dec.eigvec_plus.amps().iter().zip(dec.eigvec_minus.amps()).enumerate() {
        if a.norm_sqr() + b.norm_sqr() > 0.0 {
            vecs.push(vec![w.to_string(), num(a.re), num(a.im), num(b.re), num(b.im)]);
        }
    }
    Ok(Output { tables: vec![summary, vecs], ..Default::default() })
}

/// Dense QFI of a same-size mixture, or `NA` when too large.
fn mixture_qfi(branches: Vec<Branch>) -> CliResult<String> {
    let dim = branches.first().map(|b| b.state.amps().len() as u64).unwrap_or(0);
    if dim > MAX_DENSE_DIM {
        return Ok("NA".into());
    }
    let total: f64 = branches.iter().map(|b| b.prob).sum();
    let branches = branches.into_iter().map(|b| Branch { prob: b.prob / total, state: b.state }).collect();
    Ok(num(qfi_mixed(&SymEnsemble::new(branches)?)?))
}

fn delete_cmd(code: &CodeArgs, t: u64) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let plus = make_logical(&p, Label::Plus).state;
    let dec = delete(&plus, t)?;
    let mut rows = Table::new("delete_branches", &["a", "weight", "variance", "qfi_contribution"]);
    for o in &dec.outcomes {
        let v = o.state.jz_moments().variance;
        rows.push(vec![o.shift.to_string(), num(o.weight), num(v), num(4.0 * o.weight * v)]);
    }
    let formula = match deletion_qfi(&p, t) {
        Ok(q) => num(q),
        Err(_) => "NA".into(),
    };
    let numeric =
        mixture_qfi(dec.outcomes.iter().map(|o| Branch { prob: o.weight, state: o.state.clone() }).collect())?;
    let summary = record(
        "delete",
        code_fields(&p),
        vec![
            ("t", t.to_string()),
            ("qfi_formula", formula),
            ("qfi_numeric", numeric),
            ("total_weight", num(total_weight(&dec, |o| o.weight))),
            ("pruned_mass", num(dec.pruned_mass)),
        ],
    );
    Ok(Output { tables: vec![summary, rows], ..Default::default() })
}

fn ad_cmd(code: &CodeArgs, gamma: f64) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let plus = make_logical(&p, Label::Plus).state;
    let dec = amplitude_damp(&plus, gamma)?;
    let mut rows = Table::new("ad_branches", &["x", "weight", "variance", "qfi_bound_contribution"]);
    for o in &dec.outcomes {
        let v = o.state.jz_moments().variance;
        rows.push(vec![o.damped.to_string(), num(o.weight), num(v), num(4.0 * o.weight * v)]);
    }
    let summary = record(
        "ad",
        code_fields(&p),
        vec![
            ("gamma", num(gamma)),
            ("qfi_bound", num(ad_qfi_bound(&p, gamma)?)),
            ("qfi_ideal", (p.g() * p.g() * p.n()).to_string()),
            ("total_weight", num(total_weight(&dec, |o| o.weight))),
            ("pruned_mass", num(dec.pruned_mass)),
        ],
    );
    Ok(Output { tables: vec![summary, rows], ..Default::default() })
}

fn qec_delete(code: &CodeArgs, t: u64) -> CliResult<Output> {
    let p = build_params(code, false)?;
    let plus = make_logical(&p, Label::Plus).state;
    let dec = delete(&plus, t)?;
    let target = (p.g() * p.g() * p.n()) as f64;
    let mut rows = Table::new(
        "qec_delete_branches",
        &["a", "weight", "syndrome", "new_shift", "leak", "qfi_corrected", "qfi_target"],
    );
    let mut avg = 0.0;
    let mut mass = 0.0;
    for o in &dec.outcomes {
        let r = deletion_qec(&o.state, &p, t)?;
        let q = qfi_pure(&r.corrected);
        avg += o.weight * q;
        mass += o.weight;
        rows.push(vec![
            o.shift.to_string(),
            num(o.weight),
            r.syndrome.to_string(),
            r.code.s().to_string(),
            num(r.leak),
            num(q),
            num(target),
        ]);
    }
    let uncorrected = match deletion_qfi(&p, t) {
        Ok(q) => num(q),
        Err(_) => "NA".into(),
    };
    let summary = record(
        "qec_delete",
        code_fields(&p),
        vec![
            ("t", t.to_string()),
            ("qfi_uncorrected", uncorrected),
            ("qfi_corrected_avg", num(avg / mass)),
            ("qfi_target", num(target)),
        ],
    );
    Ok(Output { tables: vec![summary, rows], ..Default::default() })
}

fn protocol_config(args: &ProtocolArgs) -> CliResult<ProtocolConfig> {
    let p = build_params(&args.code, true)?;
    Ok(ProtocolConfig::new(p, args.r, args.q, args.theta, args.ndel, args.seed)?.with_syn1_boost(args.boost)?)
}

fn summary_fields(args: &ProtocolArgs, s: &EnsembleSummary) -> Vec<(&'static str, String)> {
    vec![
        ("r", args.r.to_string()),
        ("q", num(args.q)),
        ("theta", num(args.theta)),
        ("ndel", num(args.ndel)),
        ("seed", args.seed.to_string()),
        ("boost", num(args.boost)),
        ("trials", s.trials.to_string()),
        ("mean_FI", num(s.mean_fi)),
        ("se_FI", num(s.se_fi)),
        ("mean_FI_success", num(s.mean_fi_success)),
        ("p_flag_emp", num(s.p_flag_emp)),
        ("se_p_flag", num(s.se_p_flag)),
        ("p_flag_bound", num(s.p_flag_bound)),
        ("syn1_trajectories", s.syn1_trajectories.to_string()),
        ("successes", s.successes.to_string()),
        ("invalid_regime", s.invalid_regime.to_string()),
    ]
}

fn protocol(args: &ProtocolArgs, repeated: bool) -> CliResult<Output> {
    if args.trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let config = protocol_config(args)?;
    let sim = Simulator::new(config);
    let (summary, records) = run_ensemble(&sim, args.trials, args.trajectories)?;
    let analytic = expected_fi_p1(&config)?;
    let mut fields = summary_fields(args, &summary);
    fields.extend([
        ("analytic_scale", num(analytic.scale)),
        ("analytic_published", num(analytic.published)),
        ("analytic_arbitrated", num(analytic.arbitrated)),
        ("analytic_no_event", num(analytic.no_event)),
        ("analytic_rare_event", num(analytic.rare_event)),
        ("analytic_exact_clean", num(analytic.exact_clean)),
    ]);
    if repeated {
        let est = run_protocol2(&config, &summary);
        fields.extend([
            ("repetitions", num(est.repetitions)),
            ("failure_rate_P2", num(est.failure_rate)),
            ("FI_P2", num(est.fi)),
        ]);
    }
    let name = if repeated { "protocol2" } else { "protocol1" };
    let table = record(name, code_fields(&config.params), fields);
    let jsonl = if args.trajectories {
        let lines = records
            .iter()
            .map(|r| serde_json::to_string(r).map_err(|e| CliError::Internal(e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
        vec![("trajectories".to_string(), lines)]
    } else {
        Vec::new()
    };
    Ok(Output { tables: vec![table], jsonl, failed: false })
}

fn protocol3(c1: &str, k: u32, q: &str, e1: &str, e2: &str) -> CliResult<Output> {
    let (c1, q, e1, e2) = (parse_rational(c1)?, parse_rational(q)?, parse_rational(e1)?, parse_rational(e2)?);
    let cs = run_protocol3(&c1, k, &q, &e1, &e2)?;
    let mut t = Table::new("protocol3", &["j", "c_j", "c_j_exact"]);
    for (j, c) in cs.iter().enumerate() {
        t.push(vec![(j + 1).to_string(), num(to_f64(c)), c.to_string()]);
    }
    Ok(Output { tables: vec![t], ..Default::default() })
}

fn polytope(args: &LpArgs) -> CliResult<Output> {
    let ghz = match args.ghz_variant {
        GhzChoice::Record => GhzVariant::Record,
        GhzChoice::Proof => GhzVariant::Proof,
    };
    let inst = LPInstance::parse(&args.c, &args.q, &args.eta, &args.e1, &args.e2)?.with_ghz_variant(ghz);
    let mut grid = Table::new("polytope", &["alpha", "gamma", "feasible", "objective"]);
    for pt in polytope_grid(&inst, args.steps) {
        grid.push(vec![num(pt.alpha), num(pt.gamma), pt.feasible.to_string(), num(pt.objective)]);
    }
    let mut verts = Table::new("polytope_vertices", &["alpha", "gamma", "alpha_exact", "gamma_exact"]);
    let (cf_alpha, cf_gamma) = closed_form(&inst);
    let cf_feasible = polytope_membership_exact(&inst, &cf_alpha, &cf_gamma).feasible;
    let solution = match solve_lp(&inst) {
        Ok(sol) => {
            for (a, g) in &sol.vertices {
                verts.push(vec![num(to_f64(a)), num(to_f64(g)), a.to_string(), g.to_string()]);
            }
            vec![
                ("feasible", "true".to_string()),
                ("alpha_opt", sol.alpha.to_string()),
                ("gamma_opt", sol.gamma.to_string()),
                ("objective_opt", sol.objective.to_string()),
                ("objective_opt_f64", num(sol.objective_f64())),
            ]
        }
        Err(SymError::Infeasible) => vec![
            ("feasible", "false".to_string()),
            ("alpha_opt", String::new()),
            ("gamma_opt", String::new()),
            ("objective_opt", String::new()),
            ("objective_opt_f64", String::new()),
        ],
        Err(e) => return Err(e.into()),
    };
    let mut fields = solution;
    fields.extend([
        ("alpha_closed_form", cf_alpha.to_string()),
        ("gamma_closed_form", cf_gamma.to_string()),
        ("closed_form_feasible", cf_feasible.to_string()),
        ("p2_exponent", p2_exponent(&inst).to_string()),
        ("p2_exponent_f64", num(to_f64(&p2_exponent(&inst)))),
    ]);
    let sol = Table::record("polytope_solution", &fields);
    Ok(Output { tables: vec![grid, verts, sol], ..Default::default() })
}

fn fqec_scan(qs: &[String], e1: &str, e2: &str, c_grid: &str) -> CliResult<Output> {
    let (e1, e2) = (parse_rational(e1)?, parse_rational(e2)?);
    let cs = parse_grid(c_grid)?;
    let mut t = Table::new("fqec_vs_c", &["q", "c", "alpha", "gamma", "exponent", "feasible"]);
    for q in qs {
        let q = parse_rational(q)?;
        for pt in fqec_curve(&q, &e1, &e2, &cs)? {
            t.push(vec![num(pt.q), num(pt.c), num(pt.alpha), num(pt.gamma), num(pt.exponent), pt.feasible.to_string()]);
        }
    }
    Ok(Output { tables: vec![t], ..Default::default() })
}
