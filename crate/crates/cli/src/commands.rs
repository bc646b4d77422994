use std::fmt;
use std::fs;
use std::path::Path;

use itertools::Itertools;
use rts_core::audit::{
    audit_enrollment, audit_rts_secrecy, comparison_table, count_communication, default_corpus,
    enrollment_coalitions, glf_bound, glf_t, render_table, CoalitionShape, EnrollmentAudit,
    SecrecyReport, Verdict, DEFAULT_AUDIT_GUARD,
};
use rts_core::designs::{
    self, as_1_design, complement_design, compute_profile_with_guard, dual_complete_graph,
    find_basic_repairing_set, is_repairable, kirkman_sts9, load_design, pg2, save_design,
    sts9_scheme_design, sts_bose, Design, DEFAULT_GUARD,
};
use rts_core::enrollment::repair_share;
use rts_core::ramp::{deal, reconstruct};
use rts_core::rts::{
    base_params, execute_repair, plan_repair, reconstruct_secret, scheme_metrics, setup,
    DonorStrategy,
};
use rts_core::{Phase, PrimeField, RampParams, Secret, SeededRng, Share, Transcript};
use serde_json::{json, Value};

use crate::{Case, Cli, Command, DesignSource, Format, Protocol, SchemeArgs, SecretArgs, Strategy};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(rts_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<rts_core::Error> for CliError {
    fn from(e: rts_core::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn combinations<T: Clone>(items: &[T], size: usize) -> Vec<Vec<T>> {
    items.iter().cloned().combinations(size).collect()
}

fn field_or_default(q: Option<u64>, min_size: u64) -> CliResult<PrimeField> {
    Ok(match q {
        Some(q) => PrimeField::new(q)?,
        None => PrimeField::at_least(min_size)?,
    })
}

fn ramp_params(args: &SchemeArgs) -> CliResult<RampParams> {
    if args.k == 0 {
        return usage("--k must be at least 1");
    }
    let k1 = args.k1.unwrap_or(args.k - 1);
    let field = field_or_default(args.q, args.n as u64 + 1)?;
    Ok(RampParams::new(k1, args.k, args.n, field)?)
}

fn secret_for(params: &RampParams, args: &SecretArgs, rng: &mut SeededRng) -> CliResult<Secret> {
    match (&args.secret, args.random_secret) {
        (Some(values), false) => {
            if let Some(v) = values.iter().find(|&&v| v >= params.field.modulus()) {
                return usage(format!(
                    "secret element {v} is not below the modulus {}",
                    params.field.modulus()
                ));
            }
            Ok(Secret::from_values(params, values)?)
        }
        (None, true) => Ok(Secret::random(params, rng)),
        _ => usage("give either --secret or --random-secret"),
    }
}

pub fn builtin_design(name: &str) -> CliResult<Design> {
    let (family, arg) = match name.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (name, None),
    };
    let num = |what: &str| -> CliResult<usize> {
        arg.and_then(|a| a.parse().ok()).ok_or_else(|| {
            CliError::Usage(format!(
                "builtin '{family}' needs a numeric {what}, e.g. {family}:9"
            ))
        })
    };
    Ok(match family {
        "sts9" | "kirkman" => kirkman_sts9().0,
        "sts9-n" => sts9_scheme_design(num("player count")?)?,
        "sts" => sts_bose(num("order")?)?,
        "pg2" => pg2(num("order")? as u64)?,
        "fano" => pg2(2)?,
        "fano-complement" => complement_design(&pg2(2)?)?,
        "dualk" => dual_complete_graph(num("vertex count")?)?,
        _ => return usage(format!("unknown builtin design '{name}'")),
    })
}

fn load_source(builtin: &Option<String>, path: &Option<std::path::PathBuf>) -> CliResult<Design> {
    match (builtin, path) {
        (Some(name), None) => builtin_design(name),
        (None, Some(p)) => Ok(load_design(&read(p)?)?),
        _ => usage("give exactly one of --builtin or --design"),
    }
}

fn design_from(source: &DesignSource) -> CliResult<Design> {
    load_source(&source.builtin, &source.design)
}

pub fn run(cli: &Cli) -> CliResult<String> {
    let mut rng = SeededRng::new(cli.seed);
    let json_default = cli.format.unwrap_or(Format::Json);
    let text_default = cli.format.unwrap_or(Format::Text);
    match &cli.command {
        Command::Deal { scheme, secret } => cmd_deal(json_default, scheme, secret, &mut rng),
        Command::Reconstruct { input, players } => {
            cmd_reconstruct(json_default, input, players.as_deref())
        }
        Command::RepairEnroll {
            scheme,
            secret,
            target,
            helpers,
            transcript_out,
        } => cmd_repair_enroll(
            scheme,
            secret,
            *target,
            helpers.as_deref(),
            transcript_out.as_deref(),
            &mut rng,
        ),
        Command::RtsDemo {
            source,
            k,
            q,
            secret,
            target,
            strategy,
        } => cmd_rts_demo(source, *k, *q, secret, *target, *strategy, &mut rng),
        Command::VerifyDesign { source, k, guard } => {
            cmd_verify_design(json_default, source, *k, *guard)
        }
        Command::GenDesign { builtin } => Ok(save_design(&builtin_design(builtin)?)),
        Command::Audit {
            protocol,
            q,
            k,
            k1,
            n,
            case,
            coalition,
            sweep,
            builtin,
            design,
            guard,
            transcript,
            lambda,
        } => {
            let guard = guard.unwrap_or(DEFAULT_AUDIT_GUARD);
            if let Some(path) = transcript {
                return cmd_recount(path, *q, *lambda);
            }
            let Some(k) = *k else {
                return usage("audit needs --k");
            };
            match protocol {
                Protocol::Enrollment => {
                    let Some(n) = *n else {
                        return usage("enrollment audit needs --n");
                    };
                    cmd_audit_enrollment(*q, k, *k1, n, *case, coalition.clone(), *sweep, guard)
                }
                Protocol::Rts => {
                    let d = load_source(builtin, design)?;
                    cmd_audit_rts(&d, k, *q, coalition.clone(), *sweep, guard)
                }
            }
        }
        Command::Bounds { k, d, alpha, beta } => {
            let rho = glf_bound(*k, *d, *alpha, *beta)?;
            let t = glf_t(*k, *d, *alpha, *beta)?;
            Ok(match text_default {
                Format::Text => format!("{rho}\n"),
                Format::Json => pretty(&json!({
                    "k": k, "d": d, "alpha": alpha, "beta": beta, "t": t,
                    "rho_max": rho.to_string(),
                })),
            })
        }
        Command::Compare => {
            let rows = comparison_table(&default_corpus())?;
            Ok(match text_default {
                Format::Text => render_table(&rows),
                Format::Json => pretty(&serde_json::to_value(&rows).expect("rows serialize")),
            })
        }
    }
}

fn cmd_deal(
    format: Format,
    scheme: &SchemeArgs,
    secret: &SecretArgs,
    rng: &mut SeededRng,
) -> CliResult<String> {
    let params = ramp_params(scheme)?;
    let secret = secret_for(&params, secret, rng)?;
    let (shares, _) = deal(&params, &secret, rng)?;
    Ok(match format {
        Format::Json => pretty(&json!({ "params": params, "secret": secret, "shares": shares })),
        Format::Text => shares
            .iter()
            .map(|s| format!("{} {}\n", s.x, s.y))
            .collect(),
    })
}

fn field_of(v: &Value, key: &str) -> CliResult<u64> {
    v.get(key).and_then(Value::as_u64).ok_or_else(|| {
        CliError::Domain(rts_core::Error::Parse {
            line: 1,
            message: format!("missing integer '{key}'"),
        })
    })
}

fn cmd_reconstruct(format: Format, input: &Path, players: Option<&[u64]>) -> CliResult<String> {
    let text = read(input)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Domain(rts_core::Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    })?;
    let p = doc.get("params").ok_or_else(|| {
        CliError::Domain(rts_core::Error::Parse {
            line: 1,
            message: "missing 'params'".into(),
        })
    })?;
    let field = PrimeField::new(field_of(p, "q")?)?;
    let params = RampParams::new(
        field_of(p, "k1")? as usize,
        field_of(p, "k2")? as usize,
        field_of(p, "n")? as usize,
        field,
    )?;
    let raw = doc.get("shares").and_then(Value::as_array).ok_or_else(|| {
        CliError::Domain(rts_core::Error::Parse {
            line: 1,
            message: "missing 'shares' array".into(),
        })
    })?;
    let mut shares = Vec::with_capacity(raw.len());
    for s in raw {
        let (x, y) = (field_of(s, "x")?, field_of(s, "y")?);
        if x >= field.modulus() || y >= field.modulus() {
            return Err(
                rts_core::Error::Parameter(format!("share ({x}, {y}) out of range")).into(),
            );
        }
        shares.push(Share {
            x: field.element(x),
            y: field.element(y),
        });
    }
    if let Some(ids) = players {
        shares.retain(|s| ids.contains(&s.x.value()));
    }
    let secret = reconstruct(&params, &shares)?;
    Ok(match format {
        Format::Json => pretty(&json!({ "secret": secret, "shares_used": shares.len() })),
        Format::Text => format!(
            "{}\n",
            secret
                .values()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        ),
    })
}

fn cmd_repair_enroll(
    scheme: &SchemeArgs,
    secret: &SecretArgs,
    target: Option<usize>,
    helpers: Option<&[usize]>,
    transcript_out: Option<&Path>,
    rng: &mut SeededRng,
) -> CliResult<String> {
    let params = ramp_params(scheme)?;
    let secret = secret_for(&params, secret, rng)?;
    let (shares, _) = deal(&params, &secret, rng)?;
    let target = target.unwrap_or(params.n);
    if target == 0 || target > params.n {
        return usage(format!("--target must be in 1..={}", params.n));
    }
    let helper_ids: Vec<usize> = match helpers {
        Some(h) => h.to_vec(),
        None => (1..=params.n)
            .filter(|&i| i != target)
            .take(params.k2)
            .collect(),
    };
    if helper_ids.iter().any(|&h| h == 0 || h > params.n) {
        return usage(format!("helpers must be in 1..={}", params.n));
    }
    let helper_shares: Vec<Share> = helper_ids.iter().map(|&h| shares[h - 1]).collect();
    let run = repair_share(&params, &helper_shares, params.point(target), rng)?;
    let comm = count_communication(&run.transcript, params.secret_len())?;
    if let Some(path) = transcript_out {
        fs::write(path, run.transcript.to_json())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let original = shares[target - 1];
    Ok(pretty(&json!({
        "params": params,
        "target": target,
        "helpers": run.matrix.helpers,
        "original": original,
        "repaired": run.repaired,
        "matches": original == run.repaired,
        "gammas": run.gammas,
        "matrix": run.matrix.entries,
        "sigmas": run.sigmas,
        "transcript": run.transcript,
        "communication": comm,
    })))
}

fn cmd_rts_demo(
    source: &DesignSource,
    k: usize,
    q: Option<u64>,
    secret: &SecretArgs,
    target: usize,
    strategy: Strategy,
    rng: &mut SeededRng,
) -> CliResult<String> {
    let design = design_from(source)?;
    let field = field_or_default(q, design.m() as u64 + 1)?;
    let (_, base) = base_params(&design, k, field)?;
    let secret = secret_for(&base, secret, rng)?;
    let scheme = setup(&design, k, field, &secret, rng)?;
    let strategy = match strategy {
        Strategy::LowestIndex => DonorStrategy::LowestIndex,
        Strategy::Spread => DonorStrategy::Spread,
    };
    let plan = plan_repair(&scheme, target, strategy)?;
    let outcome = execute_repair(&scheme, &plan)?;
    let comm = count_communication(&outcome.transcript, base.secret_len())?;

    const MAX_SUBSETS: usize = 20_000;
    let players: Vec<usize> = (0..design.n()).collect();
    let subsets = combinations(&players, k);
    let checked = subsets.len().min(MAX_SUBSETS);
    let mut recovered = 0;
    for s in subsets.iter().take(MAX_SUBSETS) {
        if reconstruct_secret(&scheme, s)? == secret {
            recovered += 1;
        }
    }
    let below = combinations(&players, k - 1);
    let rejected = below
        .iter()
        .take(MAX_SUBSETS)
        .filter(|s| {
            matches!(
                reconstruct_secret(&scheme, s),
                Err(rts_core::Error::InsufficientShares { .. })
            )
        })
        .count();

    Ok(pretty(&json!({
        "design": { "m": design.m(), "n": design.n(), "d": design.block_size() },
        "q": field.modulus(),
        "secret": secret,
        "metrics": scheme_metrics(&scheme),
        "repair": {
            "target": target,
            "plan": plan.assignments,
            "distinct_donors": outcome.distinct_donors,
            "restored_ok": outcome.restored == scheme.share(target),
            "transcript": outcome.transcript,
            "communication": comm,
        },
        "reconstruction": {
            "k_subsets_checked": checked,
            "k_subsets_recovered": recovered,
            "all_recovered": recovered == checked,
            "smaller_subsets_rejected": rejected == below.len().min(MAX_SUBSETS),
        },
    })))
}

fn cmd_verify_design(
    format: Format,
    source: &DesignSource,
    k: usize,
    guard: Option<u128>,
) -> CliResult<String> {
    let design = design_from(source)?;
    let profile = compute_profile_with_guard(&design, k, guard.unwrap_or(DEFAULT_GUARD))?;
    let basic = find_basic_repairing_set(&design);
    let repairable = is_repairable(&design);
    Ok(match format {
        Format::Json => pretty(&json!({
            "k": profile.k,
            "ell1": profile.ell1,
            "ell2": profile.ell2,
            "usable": profile.is_usable(),
            "repairable": repairable,
            "basic_set_size": basic.as_ref().map(Vec::len),
            "basic_set": basic,
            "m": design.m(),
            "n": design.n(),
            "d": design.block_size(),
            "one_design": as_1_design(&design),
            "universally_repairable": as_1_design(&design).map(|p| designs::universal_repairability_1design(&p)),
        })),
        Format::Text => format!(
            "k={} ell1={} ell2={} repairable={} basic_set_size={}\n",
            profile.k,
            profile.ell1,
            profile.ell2,
            repairable,
            basic.map_or("-".to_string(), |b| b.len().to_string())
        ),
    })
}

fn overall(reports: &[SecrecyReport]) -> Verdict {
    if reports.iter().all(|r| r.verdict == Verdict::Uniform) {
        Verdict::Uniform
    } else {
        Verdict::Leaky
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_audit_enrollment(
    q: Option<u64>,
    k: usize,
    k1: Option<usize>,
    n: usize,
    case: Case,
    coalition: Option<Vec<usize>>,
    sweep: bool,
    guard: u128,
) -> CliResult<String> {
    if k == 0 {
        return usage("--k must be at least 1");
    }
    let field = field_or_default(q, n as u64 + 1)?;
    let params = RampParams::new(k1.unwrap_or(k - 1), k, n, field)?;
    let shape = match case {
        Case::I => CoalitionShape::CaseI,
        Case::Ii => CoalitionShape::CaseII,
    };
    let coalitions = match (coalition, sweep) {
        (Some(c), _) => vec![c],
        (None, true) => {
            let participants: Vec<usize> = (1..=params.k2).chain([params.n]).collect();
            (1..=params.k1)
                .flat_map(|size| combinations(&participants, size))
                .collect()
        }
        (None, false) => enrollment_coalitions(&params, shape)?,
    };
    let reports = coalitions
        .into_iter()
        .map(|c| audit_enrollment(&EnrollmentAudit::canonical(params, c)?, guard))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pretty(&json!({
        "protocol": "enrollment",
        "params": params,
        "target": params.n,
        "helpers": (1..=params.k2).collect::<Vec<_>>(),
        "case": if sweep { Value::Null } else { serde_json::to_value(shape).unwrap() },
        "verdict": overall(&reports),
        "reports": reports,
    })))
}

fn cmd_audit_rts(
    design: &Design,
    k: usize,
    q: Option<u64>,
    coalition: Option<Vec<usize>>,
    sweep: bool,
    guard: u128,
) -> CliResult<String> {
    if k < 2 {
        return usage("--k must be at least 2 for expanded schemes");
    }
    let field = field_or_default(q, design.m() as u64 + 1)?;
    let players: Vec<usize> = (0..design.n()).collect();
    let coalitions = match (coalition, sweep) {
        (Some(c), _) => vec![c],
        (None, true) => (1..k).flat_map(|s| combinations(&players, s)).collect(),
        (None, false) => combinations(&players, k - 1),
    };
    let reports = coalitions
        .iter()
        .map(|c| audit_rts_secrecy(design, k, field, c, guard))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pretty(&json!({
        "protocol": "rts",
        "k": k,
        "q": field.modulus(),
        "verdict": overall(&reports),
        "reports": reports,
    })))
}

fn cmd_recount(path: &Path, q: Option<u64>, lambda: usize) -> CliResult<String> {
    let Some(q) = q else {
        return usage("re-counting a transcript needs --q");
    };
    let field = PrimeField::new(q)?;
    let transcript = Transcript::from_json(&read(path)?, field)?;
    let comm = count_communication(&transcript, lambda)?;
    Ok(pretty(&json!({
        "messages": comm.messages,
        "exchange_messages": transcript.count_in(Phase::Exchange),
        "repair_messages": transcript.count_in(Phase::Repair),
        "field_elements": comm.field_elements,
        "cc": comm.cc.to_string(),
        "cc_is_integer": comm.cc.is_integer(),
        "lambda": lambda,
    })))
}
