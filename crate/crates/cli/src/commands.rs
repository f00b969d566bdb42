use std::fmt::Write;
use std::fs;
use std::path::Path;

use mwsplit::curve::{Section, WeierstrassSurface};
use mwsplit::expr::parse_ratfunc;
use mwsplit::fibers::incidence;
use mwsplit::mw::{gram, halve, meets_o, HalfSection, MWContext, Verdict};
use mwsplit::qfield::{ExtensionRoots, QRatFunc, TowerElem};
use mwsplit::split::{
    base_change, decompose_unchecked, pullback_factor_check, theorem_crosscheck, validate_branch,
    validate_tangency, Agreement, CrosscheckReport, SplitInstance, SplitVerdict,
};
use serde_json::{json, Value};

use crate::combo::Combo;
use crate::instance::{Delta, Instance, InstanceFile, OptionsBlock, PointBlock, SurfaceBlock};
use crate::report::{line, point, point_lines, rat, ratfunc, yes_no, Report};
use crate::{Cli, CliError, Command, EXIT_INTERNAL, EXIT_USER};

/// Options shared by all commands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Opts {
    pub tower_cap: Option<usize>,
    pub verify: bool,
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let opts = Opts {
        tower_cap: cli.tower_cap,
        verify: cli.verify,
    };
    match &cli.command {
        Command::Analyze { file } => analyze(&Instance::load(file)?, opts),
        Command::Arith { file, expr } => arith(&Instance::load(file)?, expr, opts),
        Command::Divisible { file, expr } => divisible(&Instance::load(file)?, expr, opts),
        Command::Split { file, delta } => split(&Instance::load(file)?, delta.as_deref(), opts),
        Command::Zariski {
            file1,
            file2,
            delta1,
            delta2,
        } => zariski(
            &Instance::load(file1)?,
            &Instance::load(file2)?,
            delta1.as_deref(),
            delta2.as_deref(),
            opts,
        ),
        Command::Basechange { file, nu, out } => basechange(&Instance::load(file)?, nu, out, opts),
    }
}

fn verification(out: &mut String, failures: &[String]) -> Value {
    if failures.is_empty() {
        line(out, 0, "verification", "passed");
    } else {
        line(out, 0, "verification", "FAILED");
        for f in failures {
            line(out, 2, "failure", f);
        }
    }
    json!({ "passed": failures.is_empty(), "failures": failures })
}

/// Compares printed coordinates with the computed combinations.
fn expectations(
    inst: &Instance,
    s: &WeierstrassSurface,
    only: Option<&Combo>,
    out: &mut String,
) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let selected: Vec<_> = inst
        .expects
        .iter()
        .filter(|e| only.is_none_or(|c| c.terms() == e.combo.terms()))
        .collect();
    if selected.is_empty() {
        return Ok(json!([]));
    }
    let _ = writeln!(out, "expected values:");
    for e in selected {
        let computed = inst.evaluate(&e.combo)?;
        let printed = Section::affine(e.x.clone(), e.y.clone());
        let x_ok = computed.x() == Some(&e.x);
        let y_ok = computed.y() == Some(&e.y);
        let printed_on = s.on_curve(&printed);
        let status = match (x_ok, y_ok) {
            (true, true) => "match".to_string(),
            (x, y) => {
                let which: Vec<&str> = [(!x, "x"), (!y, "y")]
                    .iter()
                    .filter(|p| p.0)
                    .map(|p| p.1)
                    .collect();
                format!("MISMATCH in {}", which.join(" and "))
            }
        };
        line(out, 2, e.combo.source(), &status);
        if !(x_ok && y_ok) {
            line(
                out,
                4,
                "computed point on surface",
                yes_no(s.on_curve(&computed)),
            );
            line(out, 4, "expected point on surface", yes_no(printed_on));
            point_lines(out, 4, &computed);
        }
        rows.push(json!({
            "combination": e.combo.source(),
            "x_matches": x_ok,
            "y_matches": y_ok,
            "computed_on_surface": s.on_curve(&computed),
            "expected_on_surface": printed_on,
            "computed": point(&computed),
        }));
    }
    Ok(Value::Array(rows))
}

pub fn analyze(inst: &Instance, opts: Opts) -> Result<Report, CliError> {
    let s = inst.surface()?;
    let cap = inst.cap(opts.tower_cap);
    let ctx = MWContext::new(s.clone(), Vec::new(), cap)?;
    let cfg = ctx.config();
    let mut t = String::new();
    line(&mut t, 0, "instance", &inst.name);
    line(&mut t, 0, "surface", s);
    line(&mut t, 0, "chi", cfg.chi);
    line(&mut t, 0, "euler sum", cfg.euler_total);
    let _ = writeln!(t, "fibers:");
    let mut fibers = Vec::new();
    for f in &cfg.fibers {
        let place = f.place.to_string();
        let ty = f.kodaira.to_string();
        let _ = writeln!(
            t,
            "  {ty:<5} v(disc) = {:<3} components = {:<3} at {place}",
            f.v_disc, f.components
        );
        fibers.push(
            json!({ "place": place, "type": ty, "v_disc": f.v_disc, "components": f.components }),
        );
    }
    let mut doc = json!({
        "instance": inst.name,
        "surface": surface_json(s),
        "chi": cfg.chi,
        "euler_sum": cfg.euler_total,
        "fibers": fibers,
    });
    if inst.torsion {
        let tor = ctx.two_torsion();
        let mut found: Vec<String> = tor.rational.iter().map(ToString::to_string).collect();
        found.extend(tor.over_tower.iter().map(|(k, p)| format!("{p} over {k}")));
        let status = if let Some(r) = &tor.undecided {
            format!("undecided ({r})")
        } else if found.is_empty() {
            format!("none over quadratic towers of height <= {cap}")
        } else {
            found.join(", ")
        };
        line(&mut t, 0, "two-torsion", &status);
        doc["two_torsion"] =
            json!({ "sections": found, "undecided": tor.undecided, "tower_cap": cap });
    }

    let mut failures = Vec::new();
    if opts.verify && cfg.euler_total != 12 * cfg.chi {
        failures.push(format!("Euler sum {} != 12 chi", cfg.euler_total));
    }
    let _ = writeln!(
        t,
        "sections:{}",
        if inst.sections.is_empty() {
            " none"
        } else {
            ""
        }
    );
    let mut rows = Vec::new();
    let mut good = Vec::new();
    for (name, p) in &inst.sections {
        let _ = writeln!(t, "  {name} = {p}");
        let on = s.on_curve(p);
        line(&mut t, 4, "on surface", yes_no(on));
        let mut row = json!({ "name": name, "point": point(p), "on_surface": on });
        if on {
            let po = meets_o(&ctx, p)?;
            let mut inc = Vec::new();
            let mut inc_json = Vec::new();
            for f in cfg.reducible() {
                let c = incidence(s, cfg, p, &f.place)?;
                let far = if c.far { " (far)" } else { "" };
                inc.push(format!("{} -> {}{far}", f.place, c.component));
                inc_json.push(
                    json!({ "place": f.place.to_string(), "component": c.component, "far": c.far }),
                );
            }
            let h = ctx.height(p, p)?;
            line(&mut t, 4, "(P.O)", po);
            line(
                &mut t,
                4,
                "components",
                if inc.is_empty() {
                    "none".into()
                } else {
                    inc.join(", ")
                },
            );
            line(&mut t, 4, "height", &h);
            row["meets_o"] = json!(po);
            row["components"] = json!(inc_json);
            row["height"] = json!(rat(&h));
            good.push((name.clone(), p.clone()));
        }
        rows.push(row);
    }
    doc["sections"] = json!(rows);
    if !good.is_empty() {
        let secs: Vec<Section> = good.iter().map(|(_, p)| p.clone()).collect();
        let g = gram(&ctx, &secs)?;
        let names: Vec<&str> = good.iter().map(|(n, _)| n.as_str()).collect();
        let _ = writeln!(t, "height matrix ({}):", names.join(", "));
        for row in &g {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "  [{}]", cells.join(", "));
        }
        doc["gram"] = json!({
            "sections": names,
            "matrix": g.iter().map(|r| r.iter().map(rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        if opts.verify {
            for i in 0..secs.len() {
                for j in 0..i {
                    if ctx.height(&secs[i], &secs[j])? != g[j][i] {
                        failures.push(format!(
                            "height pairing not symmetric at ({}, {})",
                            names[j], names[i]
                        ));
                    }
                }
            }
        }
    }
    doc["expected"] = expectations(inst, s, None, &mut t)?;
    let code = verify_tail(&mut t, &mut doc, opts, &failures);
    Ok(Report::new(t, doc).with_code(code))
}

fn verify_tail(t: &mut String, doc: &mut Value, opts: Opts, failures: &[String]) -> u8 {
    if !opts.verify {
        return 0;
    }
    doc["verification"] = verification(t, failures);
    if failures.is_empty() {
        0
    } else {
        EXIT_INTERNAL
    }
}

fn surface_json(s: &WeierstrassSurface) -> Value {
    json!({
        "d": s.d(),
        "a2": s.a2().to_string(),
        "a4": s.a4().to_string(),
        "a6": s.a6().to_string(),
    })
}

pub fn arith(inst: &Instance, expr: &str, opts: Opts) -> Result<Report, CliError> {
    let s = inst.surface()?;
    let combo = Combo::parse(expr)?;
    let p = inst.evaluate(&combo)?;
    let mut t = String::new();
    let _ = writeln!(t, "{} = {p}", combo.source());
    point_lines(&mut t, 2, &p);
    let mut doc =
        json!({ "instance": inst.name, "combination": combo.source(), "point": point(&p) });
    doc["expected"] = expectations(inst, s, Some(&combo), &mut t)?;
    let mut failures = Vec::new();
    if opts.verify && !s.on_curve(&p) {
        failures.push("result is not on the surface".into());
    }
    let code = verify_tail(&mut t, &mut doc, opts, &failures);
    Ok(Report::new(t, doc).with_code(code))
}

fn roots_summary(r: &ExtensionRoots) -> (String, Value) {
    match r {
        ExtensionRoots::Rootless(ev) => (
            format!("no root over any constant extension: {ev}"),
            json!({ "rootless": ev.to_string() }),
        ),
        ExtensionRoots::Quadratic { tower, roots } => {
            let list: Vec<String> = roots.iter().map(ToString::to_string).collect();
            (
                format!("roots over {tower}: {}", list.join(", ")),
                json!({ "tower": tower.to_string(), "roots": list }),
            )
        }
        ExtensionRoots::Undecided { reason } => (
            format!("undecided: {reason}"),
            json!({ "undecided": reason }),
        ),
    }
}

pub fn divisible(inst: &Instance, expr: &str, opts: Opts) -> Result<Report, CliError> {
    let s = inst.surface()?;
    let combo = Combo::parse(expr)?;
    let target = inst.evaluate(&combo)?;
    let ctx = MWContext::new(s.clone(), Vec::new(), inst.cap(opts.tower_cap))?;
    let cert = halve(&ctx, &target)?;
    let mut t = String::new();
    let _ = writeln!(t, "target {} = {target}", combo.source());
    let mut doc =
        json!({ "instance": inst.name, "combination": combo.source(), "target": point(&target) });
    if !target.is_zero() {
        line(
            &mut t,
            0,
            "halving polynomial",
            cert.halving_poly.display_var("x"),
        );
        doc["halving_polynomial"] = json!(cert.halving_poly.display_var("x").to_string());
    }
    if let Some(fac) = &cert.factorization {
        let _ = writeln!(t, "factors over Q(t):");
        let mut roots = Vec::new();
        for (r, m) in &fac.roots {
            let _ = writeln!(t, "  x - ({r})  multiplicity {m}");
            roots.push(json!({ "root": r.to_string(), "multiplicity": m }));
        }
        let mut factors = Vec::new();
        for ev in &cert.evidence {
            let (summary, j) = roots_summary(&ev.roots);
            let _ = writeln!(
                t,
                "  {}  multiplicity {}: {summary}",
                ev.factor.display_var("x"),
                ev.multiplicity
            );
            factors.push(json!({ "factor": ev.factor.display_var("x").to_string(), "multiplicity": ev.multiplicity, "roots": j }));
        }
        doc["factorization"] =
            json!({ "leading": ratfunc(&fac.leading), "roots": roots, "nonlinear": factors });
    }
    let _ = writeln!(
        t,
        "halves:{}",
        if cert.halves.is_empty() { " none" } else { "" }
    );
    let mut halves = Vec::new();
    for h in &cert.halves {
        let rel = if h.sign > 0 {
            "2P = target"
        } else {
            "2P = -target"
        };
        let _ = writeln!(t, "  {rel}: {}", h.section);
        let (p, tower) = match &h.section {
            HalfSection::Rational(p) => (point(p), "Q".to_string()),
            HalfSection::Tower(k, p) => (point(p), k.to_string()),
        };
        halves.push(json!({ "sign": h.sign, "point": p, "field": tower }));
    }
    doc["halves"] = json!(halves);
    line(&mut t, 0, "verdict", &cert.verdict);
    doc["verdict"] = json!(verdict_tag(&cert.verdict));
    if let Verdict::UndecidedOverTower(r) = &cert.verdict {
        doc["undecided_reason"] = json!(r);
    }

    let mut failures = Vec::new();
    if opts.verify {
        if let Some(fac) = &cert.factorization {
            if fac.expand() != cert.halving_poly {
                failures.push("factorization does not expand to the halving polynomial".into());
            }
        }
        for h in &cert.halves {
            let ok = match &h.section {
                HalfSection::Rational(p) => {
                    let want = if h.sign > 0 {
                        target.clone()
                    } else {
                        target.neg()
                    };
                    s.double(p).ok() == Some(want)
                }
                HalfSection::Tower(k, p) => {
                    let tgt = target.embed(k);
                    let want = if h.sign > 0 { tgt } else { tgt.neg() };
                    s.double::<TowerElem>(p).ok() == Some(want)
                }
            };
            if !ok {
                failures.push(format!("doubling {} does not give the target", h.section));
            }
        }
    }
    let code = verify_tail(&mut t, &mut doc, opts, &failures);
    Ok(Report::new(t, doc).with_code(code))
}

fn verdict_tag(v: &Verdict) -> &'static str {
    match v {
        Verdict::Divisible => "Divisible",
        Verdict::NotDivisible => "NotDivisible",
        Verdict::UndecidedOverTower(_) => "UndecidedOverTower",
    }
}

fn split_tag(v: &SplitVerdict) -> &'static str {
    match v {
        SplitVerdict::Splits(_) => "Splits",
        SplitVerdict::DoesNotSplit(_) => "DoesNotSplit",
        SplitVerdict::Undecided(_) => "Undecided",
    }
}

fn agreement_tag(a: Agreement) -> &'static str {
    match a {
        Agreement::Agree => "AGREE",
        Agreement::Disagree => "DISAGREE",
        Agreement::Undecided => "UNDECIDED",
    }
}

fn delta_json(d: &Delta) -> Value {
    json!({
        "name": d.name,
        "section": d.combo.as_ref().map(|c| c.source().to_string()),
        "f": d.f.to_string(),
    })
}

pub fn split(inst: &Instance, delta: Option<&str>, opts: Opts) -> Result<Report, CliError> {
    let delta = inst.delta(delta)?;
    let cap = inst.cap(opts.tower_cap);
    let branch = inst.branch();
    let mut t = String::new();
    line(&mut t, 0, "instance", &inst.name);
    line(&mut t, 0, "branch curve", &branch);
    let origin = delta
        .combo
        .as_ref()
        .map(|c| format!(" (x of {c})"))
        .unwrap_or_default();
    line(
        &mut t,
        0,
        &format!("delta {}", delta.name),
        format!("x = {}{origin}", delta.f),
    );
    let mut doc =
        json!({ "instance": inst.name, "branch": branch.to_string(), "delta": delta_json(delta) });

    let br = validate_branch(&branch);
    let _ = write!(t, "branch report: {br}");
    doc["branch_report"] = json!({
        "valid": br.is_valid(),
        "violations": br.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "irreducible": br.irreducible,
        "singularities": br.singularities.as_ref().map(|v| v.iter().map(|(p, l)| json!({ "place": p.to_string(), "type": l })).collect::<Vec<_>>()),
        "nodes": br.nodes,
    });
    if !br.is_valid() {
        line(&mut t, 0, "verdict", "invalid instance: branch curve");
        doc["verdict"] = json!("Invalid");
        return Ok(Report::new(t, doc).with_code(EXIT_USER));
    }

    let sinst = SplitInstance::new(branch.clone(), delta.f.clone())?;
    let tan = validate_tangency(&sinst)?;
    let _ = write!(t, "tangency: {tan}");
    doc["tangency"] = json!({
        "pass": tan.pass(),
        "c0": tan.c0.to_string(),
        "points": tan.points.iter().map(|p| json!({ "place": p.place.to_string(), "multiplicity": p.multiplicity, "smooth": p.smooth })).collect::<Vec<_>>(),
        "failures": tan.failures(),
    });
    if !tan.pass() {
        line(
            &mut t,
            0,
            "verdict",
            "invalid instance: tangency conditions fail",
        );
        doc["verdict"] = json!("Invalid");
        return Ok(Report::new(t, doc).with_code(EXIT_USER));
    }

    let (verdict, cross) = match (&inst.model, &delta.section) {
        (crate::instance::Model::Surface(s), Some(p)) => {
            let c = theorem_crosscheck(s, p, cap)?;
            (c.split.clone(), Some(c))
        }
        _ => (decompose_unchecked(&sinst, cap)?, None),
    };
    line(&mut t, 0, "verdict", &verdict);
    doc["verdict"] = json!(split_tag(&verdict));
    let mut code = 0;
    let mut failures = Vec::new();
    match &verdict {
        SplitVerdict::Splits(dec) => {
            doc["certificate"] = json!({
                "sigma": dec.sigma,
                "field": dec.tower.to_string(),
                "F": dec.f_in_x().display_var("x").to_string(),
                "G": dec.g_in_x().display_var("x").to_string(),
            });
            let pulled = pullback_factor_check(&sinst, dec);
            line(
                &mut t,
                0,
                "pullback factors",
                if pulled { "yes" } else { "NO" },
            );
            doc["pullback_factors"] = json!(pulled);
            if !pulled {
                code = EXIT_INTERNAL;
            }
            if opts.verify {
                if !dec.verify(&sinst) {
                    failures.push("certificate does not re-expand to p".to_string());
                }
                if !dec.within_bounds(branch.d()) {
                    failures.push("certificate violates the degree bounds".to_string());
                }
            }
        }
        SplitVerdict::DoesNotSplit(ob) => doc["obstruction"] = json!(ob.to_string()),
        SplitVerdict::Undecided(r) => doc["undecided_reason"] = json!(r),
    }
    if let Some(c) = cross {
        code = code.max(crosscheck_lines(&mut t, &mut doc, &c));
    }
    let code = code.max(verify_tail(&mut t, &mut doc, opts, &failures));
    Ok(Report::new(t, doc).with_code(code))
}

fn crosscheck_lines(t: &mut String, doc: &mut Value, c: &CrosscheckReport) -> u8 {
    line(t, 0, "section divisibility", &c.halving);
    line(t, 0, "cross-check", c.agreement);
    doc["divisibility"] = json!(verdict_tag(&c.halving));
    doc["crosscheck"] = json!(agreement_tag(c.agreement));
    if c.agreement == Agreement::Disagree {
        EXIT_INTERNAL
    } else {
        0
    }
}

/// The section attached to a delta: its defining combination, else a
/// square root of the cubic over `Q(t)`.
fn delta_section(inst: &Instance, s: &WeierstrassSurface, d: &Delta) -> Result<Section, CliError> {
    if let Some(p) = &d.section {
        return Ok(p.clone());
    }
    let x = QRatFunc::from_poly(d.f.clone());
    let y = s.cubic_at(&x).sqrt().ok_or_else(|| {
        CliError::Invalid(format!(
            "{}: delta {} is not the x-coordinate of a section over Q(t)",
            inst.name, d.name
        ))
    })?;
    Ok(Section::affine(x, y))
}

pub fn zariski(
    a: &Instance,
    b: &Instance,
    da: Option<&str>,
    db: Option<&str>,
    opts: Opts,
) -> Result<Report, CliError> {
    let (sa, sb) = (a.surface()?, b.surface()?);
    if a.branch() != b.branch() {
        return Err(CliError::Invalid(format!(
            "mismatched instances: {} and {} have different branch curves",
            a.name, b.name
        )));
    }
    let mut t = String::new();
    line(&mut t, 0, "branch curve", a.branch());
    let mut sides = Vec::new();
    let mut rows = Vec::new();
    let mut code = 0;
    for (inst, s, dn) in [(a, sa, da), (b, sb, db)] {
        let delta = inst.delta(dn)?;
        let sec = delta_section(inst, s, delta)?;
        let cross = theorem_crosscheck(s, &sec, inst.cap(opts.tower_cap))?;
        let exists = match cross.halving {
            Verdict::Divisible => "yes",
            Verdict::NotDivisible => "no",
            Verdict::UndecidedOverTower(_) => "undecided",
        };
        let _ = writeln!(t, "{} / delta {} (x = {}):", inst.name, delta.name, delta.f);
        line(&mut t, 2, "splitting", split_tag(&cross.split));
        line(&mut t, 2, "divisibility", verdict_tag(&cross.halving));
        line(&mut t, 2, "cross-check", cross.agreement);
        line(&mut t, 2, "D_2n cover for every odd n", exists);
        if cross.agreement == Agreement::Disagree {
            code = EXIT_INTERNAL;
        }
        if opts.verify {
            if let SplitVerdict::Splits(dec) = &cross.split {
                let sinst = SplitInstance::from_section(s, &sec)?;
                if !dec.verify(&sinst) || !pullback_factor_check(&sinst, dec) {
                    code = EXIT_INTERNAL;
                    line(&mut t, 2, "verification", "FAILED");
                }
            }
        }
        rows.push(json!({
            "instance": inst.name,
            "delta": delta_json(delta),
            "splitting": split_tag(&cross.split),
            "divisibility": verdict_tag(&cross.halving),
            "crosscheck": agreement_tag(cross.agreement),
            "d2n_cover_all_odd_n": exists,
        }));
        sides.push(cross.halving);
    }
    let conclusion = match (&sides[0], &sides[1]) {
        (Verdict::Divisible, Verdict::NotDivisible)
        | (Verdict::NotDivisible, Verdict::Divisible) => "Distinguished",
        (Verdict::Divisible, Verdict::Divisible)
        | (Verdict::NotDivisible, Verdict::NotDivisible) => "NotDistinguished",
        _ => "Undecided",
    };
    let criterion = "a D_2n cover branched at 2(Delta_0 + Delta) + nT exists for every odd n iff the section of Delta is 2-divisible";
    line(&mut t, 0, "criterion", criterion);
    line(&mut t, 0, "conclusion", conclusion);
    if conclusion == "Distinguished" {
        line(
            &mut t,
            2,
            "consequence",
            "no homeomorphism of Sigma_d maps Delta_0, Delta_1, T onto Delta_0, Delta_2, T",
        );
    }
    let doc = json!({
        "instances": rows,
        "criterion": criterion,
        "conclusion": conclusion,
    });
    Ok(Report::new(t, doc).with_code(code))
}

pub fn basechange(
    inst: &Instance,
    nu_src: &str,
    out: &Path,
    opts: Opts,
) -> Result<Report, CliError> {
    let s = inst.surface()?;
    let nu = parse_ratfunc(nu_src).map_err(|source| CliError::Expr {
        file: "command line".into(),
        field: "nu".into(),
        source,
    })?;
    let secs: Vec<Section> = inst.sections.iter().map(|(_, p)| p.clone()).collect();
    for p in &secs {
        s.check(p)?;
    }
    let bc = base_change(s, &nu, &secs)?;
    let ns = &bc.surface;
    let mut file = InstanceFile {
        surface: Some(SurfaceBlock {
            g: 1,
            d: ns.d(),
            a2: ns.a2().to_string(),
            a4: ns.a4().to_string(),
            a6: ns.a6().to_string(),
        }),
        ..InstanceFile::default()
    };
    for ((name, _), p) in inst.sections.iter().zip(&bc.sections) {
        let (Some(x), Some(y)) = (p.x(), p.y()) else {
            return Err(CliError::Internal(format!(
                "section {name} became the zero section"
            )));
        };
        file.section.insert(
            name.clone(),
            PointBlock {
                x: x.to_string(),
                y: y.to_string(),
            },
        );
    }
    for d in &inst.deltas {
        let block = match &d.combo {
            Some(c) => crate::instance::DeltaBlock {
                section: Some(c.source().to_string()),
                f: None,
            },
            None => {
                let x = bc.transport_x(&QRatFunc::from_poly(d.f.clone()));
                let f = x.as_poly().ok_or_else(|| {
                    CliError::Invalid(format!(
                        "delta {}: pulled back x = {x} is not a polynomial",
                        d.name
                    ))
                })?;
                crate::instance::DeltaBlock {
                    section: None,
                    f: Some(f.to_string()),
                }
            }
        };
        file.delta.insert(d.name.clone(), block);
    }
    if inst.tower_cap.is_some() || !inst.torsion {
        file.options = Some(OptionsBlock {
            tower_cap: inst.tower_cap,
            torsion: (!inst.torsion).then_some(false),
        });
    }
    let body = toml::to_string_pretty(&file).map_err(|e| CliError::Internal(e.to_string()))?;
    let text = format!("# {} pulled back along t -> {nu}\n{body}", inst.name);
    // The written file must load as a valid instance.
    let reread = Instance::parse(&out.display().to_string(), &text)?;
    let mut failures = Vec::new();
    if opts.verify {
        let rs = reread.surface()?;
        for (name, p) in &reread.sections {
            if !rs.on_curve(p) {
                failures.push(format!("section {name} is off the new surface"));
            }
        }
    }
    fs::write(out, &text).map_err(|source| CliError::Write {
        path: out.to_path_buf(),
        source,
    })?;

    let mut t = String::new();
    line(&mut t, 0, "wrote", out.display());
    line(&mut t, 0, "nu", &nu);
    line(&mut t, 0, "surface", ns);
    let shifts: Vec<String> = bc.shifts.iter().map(|(p, e)| format!("{p}^{e}")).collect();
    line(
        &mut t,
        0,
        "minimalization",
        if shifts.is_empty() {
            "none".into()
        } else {
            shifts.join(", ")
        },
    );
    let mut doc = json!({
        "output": out.display().to_string(),
        "nu": nu.to_string(),
        "surface": surface_json(ns),
        "shifts": bc.shifts.iter().map(|(p, e)| json!({ "place": p.to_string(), "power": e })).collect::<Vec<_>>(),
        "sections": file.section.keys().collect::<Vec<_>>(),
    });
    if !inst.expects.is_empty() {
        line(
            &mut t,
            0,
            "note",
            "expected-value blocks refer to the old coordinates and were dropped",
        );
    }
    let code = verify_tail(&mut t, &mut doc, opts, &failures);
    Ok(Report::new(t, doc).with_code(code))
}
