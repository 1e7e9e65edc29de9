use std::fmt::Write as _;
use std::fs;

use patpos::consecutive::{bifix_info, sw_mobius_trace};
use patpos::embedding::{embeddings, normal_embeddings, representative_embeddings, Embedding, NormalPolicy};
use patpos::fibration::{build_space, mobius_decomposition, verify_fibration, walker_identity_check, Equation, Variant};
use patpos::fixtures;
use patpos::poset::{check_rao, find_rao, LinearOrder, RaoOutcome};
use patpos::report::VerificationReport;
use patpos::sweep::{run_sweep, SweepSummary, Theorem};
use patpos::system::PatternSystem;
use patpos::topology::{disconnection_check, equivalence_suite, position_word, satcond2_analysis, SplitMode};
use patpos::word::Word;
use patpos::{Error, FinitePoset, Limits, Result};
use serde::Serialize;
use serde_json::json;

use crate::args::{element, flag, required, Command, ConsecAction, ExportArgs, Format, OutputArgs, PairArgs, RaoArgs, SystemArgs};

/// Runs one subcommand; `Ok(false)` means some report did not pass.
pub fn run(command: Command) -> Result<bool> {
    let limits = Limits::from_env();
    match command {
        Command::Interval { system, pair, output } => interval(&system, &pair, &output),
        Command::Mobius {
            system,
            pair,
            equation,
            output,
        } => mobius(&system, &pair, equation.as_deref(), &output),
        Command::Embeddings {
            system,
            pair,
            normal,
            representative,
            policy,
            output,
        } => list_embeddings(&system, &pair, normal, representative, &policy, &output),
        Command::Fibration {
            system,
            pair,
            variant,
            hatted,
            output,
        } => fibration(&system, &pair, &variant, hatted, &output),
        Command::Zerosplit {
            system,
            pair,
            mode,
            check,
            output,
        } => zerosplit(&system, &pair, &mode, check, &output),
        Command::Rao(args) => rao(&args, &limits),
        Command::Consec { action } => consec(action, &limits),
        Command::Verify {
            system,
            theorem,
            max_n,
            output,
        } => {
            let sys = system.build()?;
            let theorem: Theorem = theorem.parse().map_err(|e| flag("theorem", e))?;
            let summary = run_sweep(theorem, &sys, max_n, &limits)?;
            emit_sweep(&summary, &output)
        }
        Command::Export(args) => export(&args),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Input(format!("--out {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn no_dot(output: &OutputArgs, what: &str) -> Result<()> {
    if output.format == Format::Dot {
        return Err(Error::Input(format!("--format: dot is not available for {what}")));
    }
    Ok(())
}

fn pair(sys: &PatternSystem, pair: &PairArgs) -> Result<(Word, Word)> {
    Ok((element(sys, "sigma", &pair.sigma)?, element(sys, "pi", &pair.pi)?))
}

fn poset_output(poset: &FinitePoset, name: &str, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => poset.to_text(),
        Format::Json => poset.to_json()? + "\n",
        Format::Dot => poset.to_dot(name),
    })
}

fn interval(system: &SystemArgs, p: &PairArgs, output: &OutputArgs) -> Result<bool> {
    let sys = system.build()?;
    let (a, b) = pair(&sys, p)?;
    let iv = sys.build_interval(&a, &b)?;
    emit(output, &poset_output(&iv.poset, &format!("[{a},{b}]"), output.format)?)?;
    Ok(true)
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} on {} ({})", r.equation, r.interval, r.system);
    let _ = writeln!(out, "lhs {}", r.lhs);
    for t in &r.terms {
        let _ = writeln!(out, "  {:>4}  {}", t.value, t.label);
    }
    let _ = writeln!(out, "rhs {}", r.rhs);
    let _ = writeln!(out, "{}", if r.pass { "pass" } else { "FAIL" });
    out
}

fn mobius(system: &SystemArgs, p: &PairArgs, equation: Option<&str>, output: &OutputArgs) -> Result<bool> {
    no_dot(output, "mobius")?;
    let sys = system.build()?;
    let (a, b) = pair(&sys, p)?;
    if let Some(eq) = equation {
        let eq: Equation = eq.parse().map_err(|e| flag("equation", e))?;
        let r = mobius_decomposition(&sys, &a, &b, eq)?;
        let text = match output.format {
            Format::Json => r.to_json()? + "\n",
            _ => report_text(&r),
        };
        emit(output, &text)?;
        return Ok(r.pass);
    }
    let iv = sys.build_interval(&a, &b)?;
    let mu = match (iv.id(&a), iv.id(&b)) {
        (Some(x), Some(y)) => iv.poset.mobius(x, y)?,
        _ => 0,
    };
    let text = match output.format {
        Format::Json => to_json(&json!({ "interval": format!("[{a},{b}]"), "mobius": mu }))?,
        _ => format!("{mu}\n"),
    };
    emit(output, &text)?;
    Ok(true)
}

/// Position-lexicographic, then by text.
fn sort_embeddings(es: &mut [Embedding]) {
    es.sort_by(|x, y| position_word(x).cmp(&position_word(y)).then_with(|| x.to_string().cmp(&y.to_string())));
}

fn list_embeddings(
    system: &SystemArgs,
    p: &PairArgs,
    normal: bool,
    representative: bool,
    policy: &str,
    output: &OutputArgs,
) -> Result<bool> {
    no_dot(output, "embeddings")?;
    let sys = system.build()?;
    let (a, b) = pair(&sys, p)?;
    let policy: NormalPolicy = policy.parse().map_err(|e| flag("policy", e))?;
    let mut es = if normal {
        normal_embeddings(&sys, &a, &b, policy)?
    } else if representative {
        representative_embeddings(&sys, &a, &b)?
    } else {
        embeddings(&sys, &a, &b)?
    };
    sort_embeddings(&mut es);
    let texts: Vec<String> = es.iter().map(Embedding::to_string).collect();
    let text = match output.format {
        Format::Json => to_json(&json!({ "count": texts.len(), "embeddings": texts }))?,
        _ => texts.iter().map(|t| format!("{t}\n")).collect(),
    };
    emit(output, &text)?;
    Ok(true)
}

fn parse_variant(s: &str) -> Result<Variant> {
    s.parse().map_err(|e| flag("variant", e))
}

fn fibration(system: &SystemArgs, p: &PairArgs, variant: &str, hatted: bool, output: &OutputArgs) -> Result<bool> {
    let sys = system.build()?;
    let (a, b) = pair(&sys, p)?;
    let variant = parse_variant(variant)?;
    let space = build_space(&sys, &a, &b, variant, false)?;
    let check = verify_fibration(&space)?;
    let walker = walker_identity_check(&sys, &space)?;
    let pass = check.pass && walker.pass;
    let text = match output.format {
        Format::Dot => {
            let shown = if hatted { build_space(&sys, &a, &b, variant, true)? } else { space };
            shown.poset.to_dot(&format!("{variant}({a},{b})"))
        }
        Format::Json => to_json(&json!({
            "variant": variant.to_string(),
            "interval": format!("[{a},{b}]"),
            "elements": space.poset.len(),
            "fibration": check,
            "walker": walker,
        }))?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{variant}({a},{b}): {} embeddings", space.poset.len());
            let _ = writeln!(
                out,
                "fibration: surjective={} order-preserving={} rank-preserving={}",
                check.surjective, check.order_preserving, check.rank_preserving
            );
            if let Some(v) = &check.first_violation {
                let _ = writeln!(out, "  {v}");
            }
            let _ = writeln!(out, "walker: lhs {} rhs {}", walker.lhs, walker.rhs);
            let _ = writeln!(out, "{}", if pass { "pass" } else { "FAIL" });
            out
        }
    };
    emit(output, &text)?;
    Ok(pass)
}

fn zerosplit(system: &SystemArgs, p: &PairArgs, mode: &str, check: bool, output: &OutputArgs) -> Result<bool> {
    no_dot(output, "zerosplit")?;
    let sys = system.build()?;
    let (a, b) = pair(&sys, p)?;
    let mode: SplitMode = mode.parse().map_err(|e| flag("mode", e))?;
    let split = patpos::topology::find_zero_split(&sys, &a, &b, mode)?;
    let iv = sys.build_interval(&a, &b)?;
    let rank = iv.ranks()[iv.poset.top().expect("bounded")];
    let mut pass = true;
    let (mut equivalences, mut disconnection) = (None, None);
    if check {
        if rank >= 2 {
            let r = equivalence_suite(&sys, &a, &b)?;
            pass &= r.pass;
            equivalences = Some(r);
        }
        if rank >= 3 {
            let r = disconnection_check(&sys, &a, &b)?;
            pass &= r.pass;
            disconnection = Some(r);
        }
    }
    let text = match output.format {
        Format::Json => to_json(&json!({
            "interval": format!("[{a},{b}]"),
            "split": split,
            "equivalences": equivalences,
            "disconnection": disconnection,
        }))?,
        _ => {
            let mut out = String::new();
            match &split {
                None => out.push_str("no zero split\n"),
                Some(s) => {
                    for (i, part) in [&s.part_one, &s.part_two].into_iter().enumerate() {
                        let mut part = part.clone();
                        sort_embeddings(&mut part);
                        let texts: Vec<String> = part.iter().map(Embedding::to_string).collect();
                        let _ = writeln!(out, "part {}: {}", i + 1, texts.join(" "));
                    }
                }
            }
            if let Some(r) = &equivalences {
                for (name, value) in &r.conditions {
                    let _ = writeln!(out, "{name}: {value}");
                }
            }
            if let Some(d) = &disconnection {
                let _ = writeln!(
                    out,
                    "disconnected: {} strongly zero split: {} components: {}",
                    d.disconnected,
                    d.strongly_zero_split,
                    d.components.len()
                );
            }
            if check {
                let _ = writeln!(out, "{}", if pass { "pass" } else { "FAIL" });
            }
            out
        }
    };
    emit(output, &text)?;
    Ok(pass)
}

fn fixture(name: &str) -> Result<FinitePoset> {
    match name {
        "disconnected-rank-four" => Ok(fixtures::disconnected_rank_four()),
        "shelling-source" => Ok(fixtures::shelling_source()),
        "shelling-target" => Ok(fixtures::shelling_target()),
        other => Err(Error::Input(format!(
            "--fixture: unknown fixture {other:?}; use disconnected-rank-four, shelling-source or shelling-target"
        ))),
    }
}

fn rao(args: &RaoArgs, limits: &Limits) -> Result<bool> {
    no_dot(&args.output, "rao")?;
    let poset = match (&args.fixture, &args.input) {
        (Some(name), _) => Some(fixture(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("--input {}: {e}", path.display())))?;
            Some(FinitePoset::from_json(&text)?)
        }
        (None, None) => None,
    };
    let Some(poset) = poset else {
        let sys = args.system.build()?;
        let a = element(&sys, "sigma", required("sigma", &args.sigma)?)?;
        let b = element(&sys, "pi", required("pi", &args.pi)?)?;
        let r = satcond2_analysis(&sys, &a, &b, limits)?;
        let text = match args.output.format {
            Format::Json => to_json(&r)?,
            _ => {
                let mut out = format!("{} order {}\n", r.interval, r.order.join(" "));
                match (&r.r2_violation, &r.rao_violation) {
                    (Some(v), _) | (None, Some(v)) => {
                        let _ = writeln!(out, "{v}");
                    }
                    (None, None) => {
                        let _ = writeln!(out, "recursive atom ordering verified");
                    }
                }
                let _ = writeln!(out, "V: {}", if r.v_set.is_empty() { "empty".into() } else { r.v_set.join(" ") });
                let _ = writeln!(out, "mu {}{}", r.mu_r_star, r.formula.map(|f| format!(" formula {f}")).unwrap_or_default());
                let _ = writeln!(out, "{}", if r.pass { "pass" } else { "FAIL" });
                out
            }
        };
        emit(&args.output, &text)?;
        return Ok(r.pass);
    };
    let (pass, text) = match &args.order {
        Some(labels) => {
            let mut seq = Vec::with_capacity(labels.len());
            for l in labels {
                seq.push(poset.find_label(l).ok_or_else(|| Error::Input(format!("--order: unknown label {l:?}")))?);
            }
            let order = LinearOrder::new(&seq, poset.len()).map_err(|e| flag("order", e))?;
            let outcome = check_rao(&poset, &order, limits)?;
            let line = match &outcome {
                RaoOutcome::Pass(c) => format!("pass ({} rooted intervals)", c.rooted_intervals),
                RaoOutcome::Violation(v) => v.describe(&poset),
            };
            let text = match args.output.format {
                Format::Json => to_json(&json!({ "pass": outcome.passed(), "detail": line }))?,
                _ => format!("{line}\n"),
            };
            (outcome.passed(), text)
        }
        None => {
            let found = find_rao(&poset, limits)?.is_some();
            let line = if found {
                "a recursive atom ordering exists"
            } else {
                "no recursive atom ordering exists"
            };
            let text = match args.output.format {
                Format::Json => to_json(&json!({ "pass": found, "detail": line }))?,
                _ => format!("{line}\n"),
            };
            (found, text)
        }
    };
    emit(&args.output, &text)?;
    Ok(pass)
}

fn emit_sweep(summary: &SweepSummary, output: &OutputArgs) -> Result<bool> {
    no_dot(output, "verify")?;
    let text = match output.format {
        Format::Json => to_json(summary)?,
        _ => {
            let mut out = String::new();
            for o in &summary.outcomes {
                let _ = writeln!(out, "{} {} {}", if o.pass { "pass" } else { "FAIL" }, o.interval, o.detail);
            }
            let _ = writeln!(out, "{}", summary.tally());
            out
        }
    };
    emit(output, &text)?;
    Ok(summary.pass)
}

fn consec(action: ConsecAction, limits: &Limits) -> Result<bool> {
    let sys = PatternSystem::consecutive();
    match action {
        ConsecAction::Mobius {
            sigma,
            pi,
            verify,
            max_n,
            output,
        } => {
            if verify {
                let summary = run_sweep(Theorem::Consecutive, &sys, max_n, limits)?;
                return emit_sweep(&summary, &output);
            }
            no_dot(&output, "consec mobius")?;
            let a = element(&sys, "sigma", required("sigma", &sigma)?)?;
            let b = element(&sys, "pi", required("pi", &pi)?)?;
            let (formula, cases) = sw_mobius_trace(&sys, &a, &b)?;
            let recursive = if sys.leq(&a, &b)? {
                let iv = sys.build_interval(&a, &b)?;
                iv.poset.mobius(iv.poset.bottom().expect("bounded"), iv.poset.top().expect("bounded"))?
            } else {
                0
            };
            let pass = formula == recursive;
            let text = match output.format {
                Format::Json => to_json(&json!({
                    "interval": format!("[{a},{b}]"),
                    "formula": formula,
                    "recursive": recursive,
                    "cases": cases,
                    "pass": pass,
                }))?,
                _ => format!("{formula}\n"),
            };
            emit(&output, &text)?;
            Ok(pass)
        }
        ConsecAction::Bifix { pi, output } => {
            no_dot(&output, "consec bifix")?;
            let p = element(&sys, "pi", &pi)?;
            let info = bifix_info(&p)?;
            let text = match output.format {
                Format::Json => to_json(&info)?,
                _ => {
                    let all: Vec<String> = info.all_bifixes.iter().map(Word::to_string).collect();
                    format!(
                        "exterior {}\ninterior {}\nmonotone {}\nbifixes {}\n",
                        info.exterior,
                        info.interior,
                        info.is_monotone,
                        all.join(" ")
                    )
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
    }
}

fn export(args: &ExportArgs) -> Result<bool> {
    let (poset, name) = match &args.fixture {
        Some(f) => (fixture(f)?, f.clone()),
        None => {
            let sys = args.system.build()?;
            let a = element(&sys, "sigma", required("sigma", &args.sigma)?)?;
            let b = element(&sys, "pi", required("pi", &args.pi)?)?;
            match &args.variant {
                Some(v) => {
                    let variant = parse_variant(v)?;
                    (build_space(&sys, &a, &b, variant, args.hatted)?.poset, format!("{variant}({a},{b})"))
                }
                None => (sys.build_interval(&a, &b)?.poset, format!("[{a},{b}]")),
            }
        }
    };
    emit(&args.output, &poset_output(&poset, &name, args.output.format)?)?;
    Ok(true)
}
