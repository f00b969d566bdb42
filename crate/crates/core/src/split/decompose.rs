use std::fmt;

use crate::qfield::{
    constant_extension_roots, embed_ratfunc, factor_over_qt, rat, ExtensionRoots, Poly, QPoly,
    QRatFunc, QtPoly, QuadTower, Rat, RatFunc, Ring, RootlessEvidence, TowerElem, TowerRatFunc,
};

use super::{validate_branch, validate_tangency, SplitError, SplitInstance};

type UPoly = Poly<TowerRatFunc>;

/// `p(x, t) = (x - f) G^2 + sigma F^2` with `F`, `G` written in
/// `u = x - f` and coefficients over `K(t)` for a quadratic tower `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDecomposition {
    pub f: QPoly,
    /// Coefficients of `F` in `u`, low degree first.
    pub big_f: Vec<TowerRatFunc>,
    /// Coefficients of `G` in `u`, low degree first; monic of degree `g`.
    pub big_g: Vec<TowerRatFunc>,
    pub sigma: i8,
    pub tower: QuadTower,
}

impl SplitDecomposition {
    pub fn f_in_u(&self) -> UPoly {
        Poly::new(self.big_f.clone())
    }

    pub fn g_in_u(&self) -> UPoly {
        Poly::new(self.big_g.clone())
    }

    /// `u G^2 + sigma F^2` as a polynomial in `u`.
    pub fn expand(&self) -> UPoly {
        let g = self.g_in_u();
        let f = self.f_in_u();
        let s = TowerRatFunc::constant(TowerElem::from_int(self.sigma as i64));
        let ug2 = (&g * &g).shift(1);
        &ug2 + &(&f * &f).scale(&s)
    }

    fn to_x(&self, q: &UPoly) -> UPoly {
        let f = embed_ratfunc(&QRatFunc::from_poly(self.f.clone()), &self.tower);
        q.compose(&Poly::new(vec![f.neg_ref(), TowerRatFunc::one()]))
    }

    pub fn f_in_x(&self) -> UPoly {
        self.to_x(&self.f_in_u())
    }

    pub fn g_in_x(&self) -> UPoly {
        self.to_x(&self.g_in_u())
    }

    /// Re-expands the certificate and compares with `p(u + f, t)`.
    pub fn verify(&self, inst: &SplitInstance) -> bool {
        self.f == inst.f && self.expand() == u_adic_over(inst, &self.tower)
    }

    /// Coefficients are polynomials within the degree bounds
    /// `deg a_{2l} <= d l` and `deg a_{2l+1} <= d (2l+1)/2`.
    pub fn within_bounds(&self, d: u32) -> bool {
        let g = self.big_g.len() - 1;
        let ok = |c: &TowerRatFunc, twice_bound: usize| {
            c.is_poly() && c.num().degree().is_none_or(|deg| 2 * deg <= twice_bound)
        };
        let d = d as usize;
        let f_ok = self
            .big_f
            .iter()
            .enumerate()
            .all(|(k, c)| ok(c, d * (2 * (g - k) + 1)));
        let g_ok = self
            .big_g
            .iter()
            .enumerate()
            .all(|(k, c)| ok(c, 2 * d * (g - k)));
        f_ok && g_ok
    }

    /// The certificate of the conjugate component: `F -> -F`.
    pub fn conjugate(&self) -> Self {
        SplitDecomposition {
            big_f: self.big_f.iter().map(RatFunc::neg_ref).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for SplitDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sigma > 0 { "+" } else { "-" };
        writeln!(f, "p = (x - f) G^2 {sign} F^2 over {}", self.tower)?;
        writeln!(f, "  f = {}", self.f)?;
        writeln!(f, "  F = {}", self.f_in_x().display_var("x"))?;
        write!(f, "  G = {}", self.g_in_x().display_var("x"))
    }
}

/// Why no decomposition exists over any constant extension.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// `p(f, t)` is not a constant times a square.
    OddTangency { c0: QPoly },
    /// The equation for the `u`-coefficient of `F` has no root over any
    /// constant extension.
    NoSolution {
        equation: QtPoly,
        factors: Vec<(QtPoly, RootlessEvidence)>,
    },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::OddTangency { c0 } => {
                write!(f, "p(f, t) = {c0} is not a constant times a square")
            }
            Obstruction::NoSolution { equation, factors } => {
                write!(f, "no solution of {} = 0", equation.display_var("a"))?;
                for (g, ev) in factors {
                    write!(f, "; factor {} rootless: {}", g.display_var("a"), ev)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitVerdict {
    Splits(SplitDecomposition),
    DoesNotSplit(Obstruction),
    Undecided(String),
}

impl SplitVerdict {
    pub fn splits(&self) -> Option<bool> {
        match self {
            SplitVerdict::Splits(_) => Some(true),
            SplitVerdict::DoesNotSplit(_) => Some(false),
            SplitVerdict::Undecided(_) => None,
        }
    }
}

impl fmt::Display for SplitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitVerdict::Splits(dec) => write!(f, "splits\n{dec}"),
            SplitVerdict::DoesNotSplit(ob) => write!(f, "does not split: {ob}"),
            SplitVerdict::Undecided(r) => write!(f, "undecided: {r}"),
        }
    }
}

fn u_adic_over(inst: &SplitInstance, tower: &QuadTower) -> UPoly {
    Poly::new(
        inst.branch
            .u_adic(&inst.f)
            .into_iter()
            .map(|c| embed_ratfunc(&QRatFunc::from_poly(c), tower))
            .collect(),
    )
}

/// Decides the decomposition after checking the branch curve and the
/// tangency conditions.
pub fn decompose(inst: &SplitInstance, cap: usize) -> Result<SplitVerdict, SplitError> {
    let report = validate_branch(&inst.branch);
    if !report.is_valid() {
        return Err(SplitError::Branch(report.violations));
    }
    let tangency = validate_tangency(inst)?;
    if !tangency.pass() {
        return Err(SplitError::Tangency(tangency.failures().join("; ")));
    }
    decompose_unchecked(inst, cap)
}

/// [`decompose`] without the validation step.
pub fn decompose_unchecked(inst: &SplitInstance, cap: usize) -> Result<SplitVerdict, SplitError> {
    let c = inst.branch.u_adic(&inst.f);
    let c0 = c[0].clone();
    if c0.is_zero() {
        return Err(SplitError::Component);
    }
    let Some((kappa, h)) = c0.square_up_to_constant() else {
        return Ok(SplitVerdict::DoesNotSplit(Obstruction::OddTangency { c0 }));
    };
    if inst.branch.genus() != 1 {
        return Ok(SplitVerdict::Undecided(format!(
            "genus {} decomposition beyond the tangency obstruction is not implemented",
            inst.branch.genus()
        )));
    }
    // sigma a0^2 = kappa h^2 with a0 = lambda h, lambda^2 = |kappa|
    let sigma: i8 = if kappa > Rat::from_integer(0.into()) {
        1
    } else {
        -1
    };
    let abs_kappa = if sigma > 0 {
        kappa.clone()
    } else {
        -kappa.clone()
    };
    let (base, lambda) = match QuadTower::rational().sqrt(&abs_kappa, cap) {
        Ok(r) => r,
        Err(e) => return Ok(SplitVerdict::Undecided(e.to_string())),
    };
    let lift = |p: &QPoly| QRatFunc::from_poly(p.clone());
    let (c1, c2, h) = (lift(&c[1]), lift(&c[2]), lift(&h));
    let equation = quartic(&kappa, &c1, &c2, &h);
    let fac = factor_over_qt(&equation)?;

    let mut candidates: Vec<TowerRatFunc> = fac
        .roots
        .iter()
        .map(|(r, _)| embed_ratfunc(r, &base))
        .collect();
    let mut rootless = Vec::new();
    let mut undecided = None;
    for (g, _) in &fac.nonlinear {
        match constant_extension_roots(g, &base, cap) {
            ExtensionRoots::Rootless(ev) => rootless.push((g.clone(), ev)),
            ExtensionRoots::Quadratic { roots, .. } => candidates.extend(roots),
            ExtensionRoots::Undecided { reason } => undecided = Some(reason),
        }
    }
    for a in candidates {
        let dec = build(inst, &base, &lambda, &kappa, sigma, &a, &c2, &h);
        if dec.verify(inst) {
            return Ok(SplitVerdict::Splits(dec));
        }
    }
    if let Some(r) = undecided {
        return Ok(SplitVerdict::Undecided(r));
    }
    Ok(SplitVerdict::DoesNotSplit(Obstruction::NoSolution {
        equation,
        factors: rootless,
    }))
}

/// `kappa^2 a^4 - 2 kappa c2 a^2 + 8 kappa h a + c2^2 - 4 c1`, obtained by
/// eliminating `g0` from `c2 = 2 g0 + kappa a^2`, `c1 = g0^2 + 2 kappa a h`.
fn quartic(kappa: &Rat, c1: &QRatFunc, c2: &QRatFunc, h: &QRatFunc) -> QtPoly {
    let k = QRatFunc::constant(kappa.clone());
    let n = |v: i64| QRatFunc::constant(rat(v));
    Poly::new(vec![
        &(c2 * c2) - &(&n(4) * c1),
        &(&n(8) * &k) * h,
        &(&n(-2) * &k) * c2,
        QRatFunc::zero(),
        &k * &k,
    ])
}

/// Positive when the first nonzero coordinate of the leading coefficient
/// is positive.
fn is_positive(c: &TowerRatFunc) -> bool {
    let lc = c.num().lc();
    lc.coords()
        .iter()
        .find(|x| !Ring::is_zero(*x))
        .is_none_or(|x| *x > Rat::from_integer(0.into()))
}

#[allow(clippy::too_many_arguments)]
fn build(
    inst: &SplitInstance,
    base: &QuadTower,
    lambda: &TowerElem,
    kappa: &Rat,
    sigma: i8,
    a: &TowerRatFunc,
    c2: &QRatFunc,
    h: &QRatFunc,
) -> SplitDecomposition {
    let tower = if base.height() >= a.num().lc().tower().height() {
        base.clone()
    } else {
        a.num().lc().tower()
    };
    let c2 = embed_ratfunc(c2, &tower);
    let h = embed_ratfunc(h, &tower);
    let k = TowerRatFunc::constant(tower.embed(kappa));
    let half = TowerRatFunc::constant(tower.embed(&Rat::new(1.into(), 2.into())));
    let g0 = &(&c2 - &(&k * &(a * a))) * &half;
    let l = TowerRatFunc::constant(lambda.clone());
    let mut a1 = &l * a;
    let mut a0 = &l * &h;
    let lead = if a1.is_zero() { &a0 } else { &a1 };
    if !is_positive(lead) {
        a1 = a1.neg_ref();
        a0 = a0.neg_ref();
    }
    SplitDecomposition {
        f: inst.f.clone(),
        big_f: vec![a0, a1],
        big_g: vec![g0, TowerRatFunc::one()],
        sigma,
        tower,
    }
}

/// Substitutes `x = zeta^2 + f` and checks
/// `p = sigma (F + w zeta G)(F - w zeta G)` with `w^2 = -sigma`, each factor
/// of `zeta`-degree `2g + 1`.
pub fn pullback_factor_check(inst: &SplitInstance, dec: &SplitDecomposition) -> bool {
    let minus_sigma = Rat::from_integer((-(dec.sigma as i64)).into());
    let Ok((tower, w)) = dec.tower.sqrt(&minus_sigma, dec.tower.height() + 1) else {
        return false;
    };
    let spread = |cs: &[TowerRatFunc], odd: bool| -> UPoly {
        let mut out = vec![TowerRatFunc::zero(); 2 * cs.len() + 1];
        for (k, c) in cs.iter().enumerate() {
            out[2 * k + odd as usize] = c.clone();
        }
        Poly::new(out)
    };
    let f = spread(&dec.big_f, false);
    let zg = spread(&dec.big_g, true).scale(&TowerRatFunc::constant(w));
    let plus = &f + &zg;
    let minus = &f - &zg;
    let target = spread(u_adic_over(inst, &tower).coeffs(), false);
    let sigma = TowerRatFunc::constant(tower.embed(&Rat::from_integer((dec.sigma as i64).into())));
    let expected_degree = 2 * inst.branch.genus() as usize + 1;
    plus.degree() == Some(expected_degree) && (&plus * &minus).scale(&sigma) == target
}
