mod common;

use common::*;
use mwsplit::curve::Section;
use mwsplit::mw::{halve, MWContext, Verdict};
use mwsplit::qfield::{embed_ratfunc, Poly, QRatFunc, RatFunc, TowerRatFunc};
use mwsplit::split::{
    base_change, decompose, pullback_factor_check, theorem_crosscheck, validate_branch,
    validate_tangency, Agreement, SplitInstance, SplitVerdict,
};

fn x_poly(sec: &Section) -> mwsplit::qfield::QPoly {
    sec.x().unwrap().as_poly().unwrap().clone()
}

#[test]
fn branch_report_first_surface() {
    let (s, _) = surface_a();
    let r = validate_branch(&s.branch_curve());
    assert!(r.is_valid());
    assert_eq!(r.irreducible, Some(true));
    assert_eq!(r.nodes, Some(3));
    assert_eq!(r.only_nodes(), Some(true));
}

#[test]
fn tangency_first_surface() {
    let (s, [s0, _, _]) = surface_a();
    let f = x_poly(&s.double(&s0).unwrap());
    let inst = SplitInstance::new(s.branch_curve(), f).unwrap();
    let r = validate_tangency(&inst).unwrap();
    assert!(r.pass());
    let total: u32 = r
        .points
        .iter()
        .map(|pt| pt.multiplicity * pt.place.degree() as u32)
        .sum();
    assert_eq!(total, 6);
    assert!(r.points.iter().all(|pt| pt.multiplicity == 2));
}

fn lift(cs: &[QRatFunc], dec_tower: &mwsplit::qfield::QuadTower) -> Poly<TowerRatFunc> {
    Poly::new(cs.iter().map(|c| embed_ratfunc(c, dec_tower)).collect())
}

#[test]
fn decomposition_first_surface() {
    let (s, [s0, s1, s2]) = surface_a();
    let inst = SplitInstance::new(s.branch_curve(), x_poly(&s.double(&s0).unwrap())).unwrap();
    let SplitVerdict::Splits(dec) = decompose(&inst, 3).unwrap() else {
        panic!("expected a split")
    };
    assert_eq!(dec.sigma, 1);
    assert_eq!(dec.tower.height(), 0);
    assert_eq!(
        dec.f_in_x(),
        lift(
            &[ip(&[0, -12150, 6]), pr(&[(-5825, 12), (1, 12)])],
            &dec.tower
        )
    );
    assert_eq!(dec.g_in_x(), lift(&[ip(&[0]), ip(&[1])], &dec.tower));
    assert!(dec.within_bounds(2));
    assert!(pullback_factor_check(&inst, &dec));

    let sum = s.add(&s1, &s2).unwrap();
    let inst = SplitInstance::new(s.branch_curve(), x_poly(&sum)).unwrap();
    assert!(validate_tangency(&inst).unwrap().pass());
    assert!(matches!(
        decompose(&inst, 3).unwrap(),
        SplitVerdict::DoesNotSplit(_)
    ));
}

#[test]
fn decomposition_second_surface() {
    let (s, [s0, s1, s2]) = surface_b();
    let inst = SplitInstance::new(s.branch_curve(), x_poly(&s.double(&s0).unwrap())).unwrap();
    let SplitVerdict::Splits(dec) = decompose(&inst, 3).unwrap() else {
        panic!("expected a split")
    };
    assert_eq!(dec.sigma, 1);
    assert_eq!(
        dec.f_in_x(),
        lift(&[ip(&[0, 0, 4]), pr(&[(18, 1), (1, 8)])], &dec.tower)
    );
    assert_eq!(dec.g_in_x(), lift(&[ip(&[0]), ip(&[1])], &dec.tower));
    let sum = s.add(&s1, &s2).unwrap();
    let inst = SplitInstance::new(s.branch_curve(), x_poly(&sum)).unwrap();
    assert!(matches!(
        decompose(&inst, 3).unwrap(),
        SplitVerdict::DoesNotSplit(_)
    ));
}

#[test]
fn crosscheck_agrees_on_both_surfaces() {
    for (s, [s0, s1, s2]) in [surface_a(), surface_b()] {
        let yes = theorem_crosscheck(&s, &s.double(&s0).unwrap(), 3).unwrap();
        assert_eq!(yes.agreement, Agreement::Agree);
        assert_eq!(yes.halving, Verdict::Divisible);
        let no = theorem_crosscheck(&s, &s.add(&s1, &s2).unwrap(), 3).unwrap();
        assert_eq!(no.agreement, Agreement::Agree);
        assert_eq!(no.halving, Verdict::NotDivisible);
    }
}

#[test]
fn base_change_by_square() {
    let (s, [s0, s1, s2]) = surface_a();
    let pool = [s.double(&s0).unwrap(), s.add(&s1, &s2).unwrap()];
    let bc = base_change(&s, &RatFunc::from_poly(p(&[0, 0, 1])), &pool).unwrap();
    assert_eq!(bc.surface.d(), 4);
    let ctx = MWContext::new(bc.surface.clone(), vec![], 3).unwrap();
    assert_eq!(ctx.chi(), 2);
    assert_eq!(
        halve(&ctx, &bc.sections[0]).unwrap().verdict,
        Verdict::Divisible
    );
    assert_eq!(
        halve(&ctx, &bc.sections[1]).unwrap().verdict,
        Verdict::NotDivisible
    );
    for sp in &bc.sections {
        assert_eq!(
            theorem_crosscheck(&bc.surface, sp, 3).unwrap().agreement,
            Agreement::Agree
        );
    }
}

#[test]
fn base_change_by_inversion() {
    let (s, secs) = surface_b();
    let bc = base_change(&s, &RatFunc::new(p(&[1]), p(&[0, 1])), &secs).unwrap();
    let ctx = MWContext::new(bc.surface.clone(), vec![], 3).unwrap();
    assert_eq!(ctx.config().euler_total, 12);
    for sp in &bc.sections {
        assert!(bc.surface.on_curve(sp));
    }
}
