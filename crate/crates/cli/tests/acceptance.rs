//! Exit gate: one PASS/FAIL line per acceptance criterion.
//!
//! Criterion 3 cannot pass as stated: the second surface has
//! `<s1, s2> = 1/4`, not `-1/4` (see `heights_second_surface` in the core
//! tests). It is reported as FAIL and listed in `KNOWN_FAILURES`; the run
//! exits nonzero if any other criterion fails or if criterion 3 starts
//! passing.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::ExitCode;

use common::props;
use common::*;
use mwsplit::curve::{Section, WeierstrassSurface};
use mwsplit::fibers::{classify_fibers, KodairaType};
use mwsplit::mw::{gram, halve, MWContext, Verdict};
use mwsplit::qfield::{embed_ratfunc, ratio, Place, Poly, QPoly, QRatFunc, QuadTower, Rat};
use mwsplit::qfield::{RatFunc, TowerRatFunc};
use mwsplit::split::{
    base_change, decompose, pullback_factor_check, theorem_crosscheck, validate_tangency,
    Agreement, SplitError, SplitInstance, SplitVerdict,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use serde_json::Value;

const KNOWN_FAILURES: &[usize] = &[3];

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config::with_cases(cases),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn x_poly(s: &Section) -> QPoly {
    s.x().unwrap().as_poly().unwrap().clone()
}

fn lift(cs: &[QRatFunc], tower: &QuadTower) -> Poly<TowerRatFunc> {
    Poly::new(cs.iter().map(|c| embed_ratfunc(c, tower)).collect())
}

fn group_law() -> Check {
    let (s, [s0, s1, s2]) = surface_a();
    let two = s.double(&s0).unwrap();
    let sum = s.add(&s1, &s2).unwrap();
    let printed = [
        (two.x(), pr(&[(-5143775, 144), (1231, 72), (1, 144)])),
        (
            two.y(),
            pr(&[
                (-29962489375, 1728),
                (13493375, 576),
                (-2335, 576),
                (-1, 1728),
            ]),
        ),
        (sum.x(), pr(&[(-921375, 4), (435, 2), (1, 36)])),
        (
            sum.y(),
            pr(&[(373156875, 8), (-41625, 8), (-1181, 24), (-1, 216)]),
        ),
    ];
    for (k, (got, want)) in printed.iter().enumerate() {
        ensure(
            *got == Some(want),
            format!("first surface coordinate {k} differs"),
        )?;
    }

    let (s, [s0, s1, s2]) = surface_b();
    let two = s.double(&s0).unwrap();
    let sum = s.add(&s1, &s2).unwrap();
    ensure(
        two.x() == Some(&pr(&[(315, 1), (-41, 2), (1, 64)])),
        "x(2 s0) on the second surface differs",
    )?;
    ensure(
        sum.x() == Some(&ip(&[8640, 192, 1])),
        "x(s1 + s2) on the second surface differs",
    )?;
    ensure(
        s.on_curve(&two) && s.on_curve(&sum),
        "second surface sums are off the curve",
    )?;
    // The printed y of 2 s0 lacks the t in 2637/8 t.
    let printed_y = pr(&[(2637 - 8 * 5670, 8), (0, 1), (-55, 32), (-1, 512)]);
    let printed = Section::affine(two.x().unwrap().clone(), printed_y);
    ensure(
        !s.on_curve(&printed) && printed != two,
        "printed y of 2 s0 should be off the curve",
    )?;
    let out = mwsplit_cli::run([
        "mwsplit",
        "--format",
        "structured",
        "analyze",
        &data("ex2_b1.toml"),
    ]);
    let v: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let exp = &v["expected"][0];
    ensure(
        exp["combination"] == "2*s0"
            && exp["y_matches"] == false
            && exp["computed_on_surface"] == true,
        "analyze does not flag the printed y of 2 s0",
    )?;
    Ok("4 coordinates exact; second surface x exact, printed y flagged".into())
}

fn fiber_classification() -> Check {
    let t = place(&[0, 1]);
    let cases = [
        (
            surface_a().0,
            vec![
                (t.clone(), KodairaType::I(2)),
                (place(&[-2025, 1]), KodairaType::I(2)),
                (Place::Infinity, KodairaType::III),
            ],
        ),
        (
            surface_b().0,
            vec![(t, KodairaType::I(4)), (Place::Infinity, KodairaType::III)],
        ),
    ];
    for (s, want) in cases {
        let cfg = classify_fibers(&s).map_err(|e| e.to_string())?;
        for (pl, ty) in &want {
            let got = cfg.fiber(pl).map(|f| f.kodaira);
            ensure(
                got == Some(*ty),
                format!("fiber at {pl}: {got:?}, expected {ty}"),
            )?;
        }
        ensure(
            cfg.reducible().count() == want.len(),
            "unexpected reducible fibers",
        )?;
        ensure(
            cfg.chi == 1 && cfg.euler_total == 12,
            format!("chi = {}, euler sum = {}", cfg.chi, cfg.euler_total),
        )?;
    }
    Ok("I2, I2, III and I4, III; chi = 1, Euler sum 12".into())
}

fn heights() -> Check {
    let stated = [
        (
            surface_a(),
            [ratio(1, 2), ratio(1, 1), ratio(1, 1), ratio(0, 1)],
        ),
        (
            surface_b(),
            [ratio(1, 2), ratio(3, 4), ratio(3, 4), ratio(-1, 4)],
        ),
    ];
    let mut bad = Vec::new();
    for (k, ((s, secs), want)) in stated.into_iter().enumerate() {
        let ctx = MWContext::new(s, vec![], 3).map_err(|e| e.to_string())?;
        let g = gram(&ctx, &secs).map_err(|e| e.to_string())?;
        let got: [Rat; 4] = [
            g[0][0].clone(),
            g[1][1].clone(),
            g[2][2].clone(),
            g[1][2].clone(),
        ];
        let labels = ["<s0,s0>", "<s1,s1>", "<s2,s2>", "<s1,s2>"];
        for i in 0..4 {
            if got[i] != want[i] {
                bad.push(format!(
                    "surface {}: {} = {}, stated {}",
                    k + 1,
                    labels[i],
                    got[i],
                    want[i]
                ));
            }
        }
    }
    if bad.is_empty() {
        Ok("all eight Gram entries exact".into())
    } else {
        Err(bad.join("; "))
    }
}

fn divisibility() -> Check {
    for (s, [s0, s1, s2]) in [surface_a(), surface_b()] {
        let ctx = MWContext::new(s.clone(), vec![], 3).map_err(|e| e.to_string())?;
        let cert = halve(&ctx, &s.double(&s0).unwrap()).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::Divisible, "2 s0 not divisible")?;
        let mut halves: Vec<Section> = cert
            .halves
            .iter()
            .filter_map(|h| h.section.rational().cloned())
            .collect();
        ensure(
            halves.len() == cert.halves.len(),
            "a half of 2 s0 is not rational",
        )?;
        halves.dedup();
        ensure(
            halves.len() == 2 && halves.contains(&s0) && halves.contains(&s0.neg()),
            "halves of 2 s0 are not {s0, -s0}",
        )?;
        let sum = halve(&ctx, &s.add(&s1, &s2).unwrap()).map_err(|e| e.to_string())?;
        ensure(
            sum.verdict == Verdict::NotDivisible,
            "s1 + s2 should not be divisible",
        )?;
    }
    Ok("2 s0 halves to {s0, -s0}; s1 + s2 not divisible; both surfaces".into())
}

fn splitting() -> Check {
    let expected = [
        (
            surface_a(),
            [ip(&[0, -12150, 6]), pr(&[(-5825, 12), (1, 12)])],
        ),
        (surface_b(), [ip(&[0, 0, 4]), pr(&[(18, 1), (1, 8)])]),
    ];
    for (k, ((s, [s0, s1, s2]), f_coeffs)) in expected.into_iter().enumerate() {
        let inst = SplitInstance::new(s.branch_curve(), x_poly(&s.double(&s0).unwrap()))
            .map_err(|e| e.to_string())?;
        let SplitVerdict::Splits(dec) = decompose(&inst, 3).map_err(|e| e.to_string())? else {
            return Err(format!("surface {}: D1 does not split", k + 1));
        };
        ensure(
            dec.sigma == 1,
            format!("surface {}: sigma {}", k + 1, dec.sigma),
        )?;
        ensure(
            dec.f_in_x() == lift(&f_coeffs, &dec.tower),
            format!("surface {}: F differs", k + 1),
        )?;
        ensure(
            dec.g_in_x() == lift(&[ip(&[0]), ip(&[1])], &dec.tower),
            format!("surface {}: G differs", k + 1),
        )?;
        ensure(
            dec.verify(&inst) && pullback_factor_check(&inst, &dec),
            format!("surface {}: certificate does not re-verify", k + 1),
        )?;
        let inst = SplitInstance::new(s.branch_curve(), x_poly(&s.add(&s1, &s2).unwrap()))
            .map_err(|e| e.to_string())?;
        ensure(
            matches!(
                decompose(&inst, 3).map_err(|e| e.to_string())?,
                SplitVerdict::DoesNotSplit(_)
            ),
            format!("surface {}: D2 should not split", k + 1),
        )?;
    }
    Ok("both identities with sigma = +1; D2 does not split on either surface".into())
}

/// Pulls the pool back along `nu` and cross-checks each image; returns
/// (agreements, undecided, skipped) or the first disagreement.
fn crosscheck_derived(
    s: &WeierstrassSurface,
    pool: &[Section],
    nu: &QRatFunc,
) -> Result<(usize, usize, usize), String> {
    let bc = match base_change(s, nu, pool) {
        Ok(bc) => bc,
        Err(_) => return Ok((0, 0, pool.len())),
    };
    let (mut agree, mut undecided, mut skipped) = (0, 0, 0);
    for sp in &bc.sections {
        match theorem_crosscheck(&bc.surface, sp, 3) {
            Ok(r) => match r.agreement {
                Agreement::Agree => agree += 1,
                Agreement::Undecided => undecided += 1,
                Agreement::Disagree => {
                    return Err(format!("DISAGREE after t -> {nu} on {sp}"));
                }
            },
            Err(SplitError::OutsideHypotheses(_)) => skipped += 1,
            Err(e) => return Err(format!("t -> {nu}: {e}")),
        }
    }
    Ok((agree, undecided, skipped))
}

fn crosscheck() -> Check {
    for (s, [s0, s1, s2]) in [surface_a(), surface_b()] {
        for sp in [s.double(&s0).unwrap(), s.add(&s1, &s2).unwrap()] {
            let r = theorem_crosscheck(&s, &sp, 3).map_err(|e| e.to_string())?;
            ensure(
                r.agreement == Agreement::Agree,
                format!("example instance: {}", r.agreement),
            )?;
        }
    }
    // Derived instances: pull back along t -> a t + b and t -> t^2 + c.
    let nu = (0usize..2, 1i64..=3, -3i64..=3).prop_map(|(kind, a, b)| match kind {
        0 => RatFunc::from_poly(p(&[b, a])),
        _ => RatFunc::from_poly(p(&[b, 0, 1])),
    });
    let mut run = runner(1);
    let surfaces = [surface_a(), surface_b()];
    let (mut agree, mut undecided, mut skipped, mut tried) = (0, 0, 0, 0);
    while agree < 24 && tried < 40 {
        let (s, [s0, s1, s2]) = &surfaces[tried % 2];
        let nu = nu.new_tree(&mut run).map_err(|e| e.to_string())?.current();
        let pool = [
            s.double(s0).unwrap(),
            s.add(s1, s2).unwrap(),
            s.double(s1).unwrap(),
        ];
        let (a, u, k) = crosscheck_derived(s, &pool, &nu)?;
        agree += a;
        undecided += u;
        skipped += k;
        tried += 1;
    }
    ensure(
        agree >= 20,
        format!("only {agree} derived AGREE ({undecided} undecided, {skipped} skipped)"),
    )?;
    Ok(format!(
        "4 example instances AGREE; {agree} derived AGREE over {tried} base changes, \
         {undecided} undecided, {skipped} outside hypotheses, no DISAGREE"
    ))
}

fn run_prop<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn properties() -> Check {
    use props::*;
    let triple = (surface_index(), coeffs(), coeffs(), coeffs());
    run_prop(50, triple, |(w, a, b, c)| bilinear(w, a, b, c))?;
    run_prop(50, (surface_index(), coeffs(), coeffs()), |(w, a, b)| {
        symmetric(w, a, b)
    })?;
    run_prop(50, (surface_index(), coeffs()), |(w, a)| positive(w, a))?;
    run_prop(10, (surface_index(), coeffs()), |(w, a)| {
        double_height(w, a)
    })?;
    run_prop(10, (surface_index(), coeffs()), |(w, a)| halve_double(w, a))?;
    let small = proptest::collection::vec(-5i64..=5, 1..6);
    run_prop(100, (small.clone(), small.clone()), |(n, d)| {
        valuation_degree(&n, &d)
    })?;
    run_prop(100, small.clone(), |cs| factor_roundtrip(&cs))?;
    for ty in fiber_types() {
        neg_inverse_positive(ty)?;
    }
    Ok(format!(
        "50 bilinearity triples, symmetry, positivity, doubling, halving, valuations, \
         factorization, -A^-1 for {} fiber types",
        fiber_types().len()
    ))
}

fn tangency() -> Check {
    let (s, [s0, s1, s2]) = surface_a();
    for (name, sec) in [
        ("D1", s.double(&s0).unwrap()),
        ("D2", s.add(&s1, &s2).unwrap()),
    ] {
        let inst = SplitInstance::new(s.branch_curve(), x_poly(&sec)).map_err(|e| e.to_string())?;
        let r = validate_tangency(&inst).map_err(|e| e.to_string())?;
        let points: usize = r.points.iter().map(|pt| pt.place.degree()).sum();
        ensure(
            r.pass() && points == 3 && r.points.iter().all(|pt| pt.multiplicity == 2 && pt.smooth),
            format!("{name}: {} places, pass = {}", points, r.pass()),
        )?;
    }
    // x^3 - (t - 1)...(t - 6) with f = 0: c0 = -(t - 1)...(t - 6).
    let roots: Vec<i64> = (1..=6).collect();
    let a6 = roots.iter().fold(p(&[-1]), |acc, &r| &acc * &p(&[-r, 1]));
    let model = WeierstrassSurface::new(p(&[]), p(&[]), a6, 2).map_err(|e| e.to_string())?;
    let inst = SplitInstance::new(model.branch_curve(), p(&[])).map_err(|e| e.to_string())?;
    let r = validate_tangency(&inst).map_err(|e| e.to_string())?;
    // Brute force: c0 vanishes at each root, and its derivative does not.
    let c0 = inst.c0();
    let dc0 = c0.derivative();
    for &a in &roots {
        let at = ratio(a, 1);
        ensure(
            c0.eval(&at) == ratio(0, 1) && dc0.eval(&at) != ratio(0, 1),
            format!("c0 is not simple at t = {a}"),
        )?;
    }
    ensure(
        !r.pass() && r.points.len() == 6 && r.points.iter().all(|pt| pt.multiplicity == 1),
        "the f = 0 model should fail with six simple intersections",
    )?;
    Ok("D1, D2 meet T at 3 smooth points with multiplicity 2; f = 0 model fails".into())
}

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    root.join(name).display().to_string()
}

fn zariski() -> Check {
    let compare = |a: &str, b: &str| -> Result<Value, String> {
        let out = mwsplit_cli::run(["mwsplit", "--format", "structured", "zariski", a, b]);
        ensure(out.code == 0, out.stderr.clone())?;
        serde_json::from_str(&out.stdout).map_err(|e| e.to_string())
    };
    let (b1, b2) = (data("ex1_b1.toml"), data("ex1_b2.toml"));
    let pair = compare(&b1, &b2)?;
    let same = compare(&b1, &b1)?;
    ensure(
        pair["conclusion"] == "Distinguished",
        format!("(B1, B2): {}", pair["conclusion"]),
    )?;
    ensure(
        same["conclusion"] == "NotDistinguished",
        format!("(B1, B1): {}", same["conclusion"]),
    )?;
    for v in [&pair, &same] {
        ensure(
            v["criterion"]
                .as_str()
                .is_some_and(|c| c.contains("every odd n")),
            "report does not state the D_2n criterion",
        )?;
        for side in v["instances"].as_array().into_iter().flatten() {
            let divisible = side["divisibility"] == "Divisible";
            let cover = side["d2n_cover_all_odd_n"] == "yes";
            ensure(
                divisible == cover && side["crosscheck"] == "AGREE",
                format!(
                    "{}: cover flag disagrees with divisibility",
                    side["instance"]
                ),
            )?;
        }
    }
    Ok("(B1, B2) Distinguished; (B1, B1) NotDistinguished; cover flags match".into())
}

/// Runs without the libtest harness so the criterion lines always print.
fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("group law golden values", group_law),
        ("fiber classification", fiber_classification),
        ("heights", heights),
        ("divisibility verdicts", divisibility),
        ("splitting certificates", splitting),
        ("decomposition and halving agree", crosscheck),
        ("property suites", properties),
        ("tangency validation", tangency),
        ("Zariski comparator", zariski),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let n = k + 1;
        match check() {
            Ok(detail) => println!("criterion {n}: PASS - {name}: {detail}"),
            Err(detail) => {
                println!("criterion {n}: FAIL - {name}: {detail}");
                failed.push(n);
            }
        }
    }
    if failed == KNOWN_FAILURES {
        println!("acceptance: failures match the known list {KNOWN_FAILURES:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}, known {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
