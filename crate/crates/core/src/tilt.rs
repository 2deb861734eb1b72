//! The tilting correspondence: `p`-power-root sequences and the limit
//! addition formula, tilting of seminorms and of monomial ideals, and the
//! approximation lemma.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charp::CharPSeries;
use crate::error::{Error, Result};
use crate::gauss::{gauss_eval, GaussAlgebra, GaussElement, MultiExp, SeminormDescriptor};
use crate::par::{self, Exec};
use crate::ring::{CharPField, NormedRing, Side, UntiltField};
use crate::untilt::{UntiltCtx, UntiltElement};
use crate::values::{ExpJson, NormValue, PExponent, Reading};

/// `f^{(m)} = sharp(f^{1/p^m})`, materialized on demand.
#[derive(Clone, Debug)]
pub struct TiltSequence {
    ctx: UntiltCtx,
    f: CharPSeries,
}

impl TiltSequence {
    pub fn new(ctx: &UntiltCtx, f: &CharPSeries) -> Result<Self> {
        if !f.is_integral() {
            return Err(Error::NotIntegral(f.to_string()));
        }
        Ok(TiltSequence { ctx: ctx.clone(), f: f.clone() })
    }

    pub fn base(&self) -> &CharPSeries {
        &self.f
    }

    pub fn term(&self, m: u32) -> Result<UntiltElement> {
        self.ctx.sharp(&self.f.pth_root_iter(m))
    }

    /// `(f^{(m+1)})^p = f^{(m)}` for all `m < m_max`.
    pub fn frobenius_compatible(&self, m_max: u32) -> Result<bool> {
        let p = self.ctx.p() as u64;
        let mut prev = self.term(0)?;
        for m in 1..=m_max {
            let cur = self.term(m)?;
            if self.ctx.pow(&cur, p)? != prev {
                return Ok(false);
            }
            prev = cur;
        }
        Ok(true)
    }

    /// `‖f^{(0)}‖ = |f|` whenever `|f|` is above the precision `p^{-n}`.
    pub fn norm_identity(&self) -> Result<bool> {
        let got = self.ctx.norm(&self.term(0)?);
        let floor = NormValue::p_pow(self.ctx.p(), self.ctx.n() as i64);
        Ok(match self.f.norm().exact() {
            Some(v) if v > floor => got == Reading::Exact(v),
            _ => got.bound() <= floor,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddLimitReport {
    /// `s_m = (f^{(n+m)} + g^{(n+m)})^{p^m}` for `m = 0..=m_max`.
    pub values: Vec<UntiltElement>,
    /// First `m` from which the computed values are constant.
    pub stable_from: Option<u32>,
    /// `sharp((f + g)^{1/p^n})`.
    pub expected: UntiltElement,
    pub matches: bool,
}

/// The limit formula for `(f + g)^{(n)}`.
pub fn tilt_add_limit(ctx: &UntiltCtx, f: &CharPSeries, g: &CharPSeries, n: u32, m_max: u32) -> Result<AddLimitReport> {
    tilt_add_limit_with(ctx, f, g, n, m_max, Exec::default())
}

pub fn tilt_add_limit_with(
    ctx: &UntiltCtx,
    f: &CharPSeries,
    g: &CharPSeries,
    n: u32,
    m_max: u32,
    exec: Exec,
) -> Result<AddLimitReport> {
    let sf = TiltSequence::new(ctx, f)?;
    let sg = TiltSequence::new(ctx, g)?;
    let p = ctx.p() as u64;
    let values = par::map_range(exec, 0..m_max as usize + 1, |m| {
        let m = m as u32;
        let mut s = ctx.add(&sf.term(n + m)?, &sg.term(n + m)?)?;
        for _ in 0..m {
            s = ctx.pow(&s, p)?;
        }
        Ok(s)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let last = values.len() - 1;
    let mut j = last;
    while j > 0 && values[j - 1] == values[last] {
        j -= 1;
    }
    let stable_from = (j < last).then_some(j as u32);
    let expected = TiltSequence::new(ctx, &f.add(g)?)?.term(n)?;
    let matches = stable_from.is_some() && values[last] == expected;
    Ok(AddLimitReport { values, stable_from, expected, matches })
}

/// `φ ↦ φ♭` with `φ♭(f) = φ(f^#)`: same radius or point data.
pub fn seminorm_tilt(phi: &SeminormDescriptor) -> Result<SeminormDescriptor> {
    match phi {
        SeminormDescriptor::GaussRadius(_) | SeminormDescriptor::EvalPoint(_) => Ok(phi.clone()),
        other => Err(Error::Unsupported(format!("tilting the {} family", other.family()))),
    }
}

/// Termwise Teichmüller image `Σ d_ν^# X^ν`. It differs from `g^#` but has the
/// same value under every `φ_r`, since both are computed termwise.
pub fn termwise_sharp(
    alg: &GaussAlgebra<UntiltField>,
    g: &GaussElement<CharPSeries>,
) -> Result<GaussElement<UntiltElement>> {
    let ctx = alg.field().ctx();
    let terms = g.terms().map(|(nu, c)| Ok((nu.clone(), ctx.sharp(c)?))).collect::<Result<Vec<_>>>()?;
    alg.from_terms(terms)
}

/// Sharp of a monomial `c·X^ν`, exact since sharp is multiplicative.
pub fn monomial_sharp(alg: &GaussAlgebra<UntiltField>, c: &CharPSeries, nu: MultiExp) -> Result<GaussElement<UntiltElement>> {
    alg.monomial(alg.field().ctx().sharp(c)?, nu)
}

// ----- monomial ideals -----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// Generated by `X_i^a`, `a > 0`: terms with `ν_i ≥ a`.
    Principal(PExponent),
    /// Closure of `(X_i^{1/p^k} : k ≥ 0)`: terms with `ν_i > 0`.
    Augmentation,
}

impl Bound {
    fn holds(&self, e: &PExponent) -> bool {
        match self {
            Bound::Principal(a) => e >= a,
            Bound::Augmentation => !e.is_zero(),
        }
    }

    /// `self ⊆ other` as ideals in one variable.
    fn within(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::Principal(a), Bound::Principal(b)) => a >= b,
            (Bound::Principal(_), Bound::Augmentation) => true,
            (Bound::Augmentation, Bound::Principal(_)) => false,
            (Bound::Augmentation, Bound::Augmentation) => true,
        }
    }
}

/// A closed monomial ideal `Σ_i I_i` where each `I_i` involves only `X_i`.
/// The empty sum is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    side: Side,
    d: usize,
    gens: BTreeMap<usize, Bound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum IdealGenJson {
    Principal {
        #[serde(default)]
        var: usize,
        bound: ExpJson,
    },
    Augmentation {
        #[serde(default)]
        var: usize,
    },
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealJson {
    One(IdealGenJson),
    Sum(Vec<IdealGenJson>),
}

impl MonomialIdeal {
    pub fn zero(side: Side, d: usize) -> Self {
        MonomialIdeal { side, d, gens: BTreeMap::new() }
    }

    fn check_var(d: usize, var: usize) -> Result<()> {
        if var >= d {
            return Err(Error::Invalid(format!("variable {var} outside 0..{d}")));
        }
        Ok(())
    }

    /// `(X_var^a)`, `a > 0`.
    pub fn principal(side: Side, d: usize, var: usize, a: PExponent) -> Result<Self> {
        Self::check_var(d, var)?;
        if a.is_negative() || a.is_zero() {
            return Err(Error::Unsupported(format!("principal bound {a} must be positive")));
        }
        Ok(MonomialIdeal { side, d, gens: BTreeMap::from([(var, Bound::Principal(a))]) })
    }

    pub fn augmentation(side: Side, d: usize, var: usize) -> Result<Self> {
        Self::check_var(d, var)?;
        Ok(MonomialIdeal { side, d, gens: BTreeMap::from([(var, Bound::Augmentation)]) })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gens(&self) -> impl Iterator<Item = (&usize, &Bound)> {
        self.gens.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.side != other.side || self.d != other.d {
            return Err(Error::Invalid(format!(
                "ideals in different algebras ({} d={} vs {} d={})",
                self.side, self.d, other.side, other.d
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let mut gens = self.gens.clone();
        for (v, b) in &other.gens {
            let merged = match gens.get(v) {
                Some(a) if b.within(a) => *a,
                _ => *b,
            };
            gens.insert(*v, merged);
        }
        Ok(MonomialIdeal { side: self.side, d: self.d, gens })
    }

    pub fn contains_term(&self, nu: &[PExponent]) -> bool {
        self.gens.iter().any(|(v, b)| nu.get(*v).is_some_and(|e| b.holds(e)))
    }

    /// Termwise: `f ∈ I` iff every term of `f` lies in `I`.
    pub fn contains<E>(&self, f: &GaussElement<E>) -> bool {
        f.terms().all(|(nu, _)| self.contains_term(nu))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.gens.iter().all(|(v, b)| other.gens.get(v).is_some_and(|o| b.within(o))))
    }

    /// Zero and sums of augmentation ideals are kernels of evaluation-type
    /// seminorms; principal ideals are not radical.
    pub fn is_spectrally_reduced(&self) -> bool {
        self.gens.values().all(|b| *b == Bound::Augmentation)
    }

    pub fn to_json(&self) -> IdealJson {
        let gens: Vec<IdealGenJson> = self
            .gens
            .iter()
            .map(|(v, b)| match b {
                Bound::Principal(a) => IdealGenJson::Principal { var: *v, bound: a.to_json() },
                Bound::Augmentation => IdealGenJson::Augmentation { var: *v },
            })
            .collect();
        match gens.len() {
            0 => IdealJson::One(IdealGenJson::Zero),
            1 => IdealJson::One(gens.into_iter().next().expect("one generator")),
            _ => IdealJson::Sum(gens),
        }
    }

    pub fn from_json(side: Side, d: usize, p: u32, j: &IdealJson) -> Result<Self> {
        let gens = match j {
            IdealJson::One(g) => vec![g.clone()],
            IdealJson::Sum(gs) => gs.clone(),
        };
        let mut acc = MonomialIdeal::zero(side, d);
        for g in gens {
            let next = match g {
                IdealGenJson::Zero => MonomialIdeal::zero(side, d),
                IdealGenJson::Augmentation { var } => MonomialIdeal::augmentation(side, d, var)?,
                IdealGenJson::Principal { var, bound } => {
                    MonomialIdeal::principal(side, d, var, PExponent::from_json(p, &bound))?
                }
            };
            acc = acc.sum(&next)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|(v, b)| match b {
                Bound::Principal(a) => format!("(X{}^({a}))", v + 1),
                Bound::Augmentation => format!("m_X{}", v + 1),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `I ↦ I♭ = {f : f^{(n)} ∈ I for all n}`. For `(X^a)` the condition forces
/// `ν ≥ a·p^n` for all `n`, so only `0` survives.
pub fn ideal_tilt(i: &MonomialIdeal) -> Result<MonomialIdeal> {
    if i.side != Side::Untilt {
        return Err(Error::Invalid("ideal_tilt takes an untilt-side ideal".into()));
    }
    let gens = i.gens.iter().filter(|(_, b)| **b == Bound::Augmentation).map(|(v, b)| (*v, *b)).collect();
    Ok(MonomialIdeal { side: Side::Tilt, d: i.d, gens })
}

/// `J ↦ J^#` on spectrally reduced monomial ideals.
pub fn ideal_sharp(j: &MonomialIdeal) -> Result<MonomialIdeal> {
    if j.side != Side::Tilt {
        return Err(Error::Invalid("ideal_sharp takes a tilt-side ideal".into()));
    }
    if !j.is_spectrally_reduced() {
        return Err(Error::Unsupported(format!("{j} is not spectrally reduced")));
    }
    Ok(MonomialIdeal { side: Side::Untilt, d: j.d, gens: j.gens.clone() })
}

/// A bounded power-multiplicative seminorm killing `X^a` kills every
/// `X^{a/p^k}`, so `(X^a)` has spectral radical `m_X`.
pub fn spectral_radical(i: &MonomialIdeal) -> MonomialIdeal {
    let gens = i.gens.keys().map(|v| (*v, Bound::Augmentation)).collect();
    MonomialIdeal { side: i.side, d: i.d, gens }
}

/// `{(0)} ∪ {Σ_{i ∈ S} m_{X_i}}` for all nonempty `S`.
pub fn supported_lattice(side: Side, d: usize) -> Vec<MonomialIdeal> {
    (0..1usize << d)
        .map(|mask| MonomialIdeal {
            side,
            d,
            gens: (0..d).filter(|v| mask >> v & 1 == 1).map(|v| (v, Bound::Augmentation)).collect(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalityReport {
    /// Decided from the shape of the generators.
    pub prime_by_structure: bool,
    /// Monomials `x, y ∉ I` with `xy ∈ I`, if found on the search grid.
    pub witness: Option<(MultiExp, MultiExp)>,
}

impl PrimalityReport {
    pub fn consistent(&self) -> bool {
        self.prime_by_structure == self.witness.is_none()
    }
}

/// Searches for a non-primality witness among monomials with exponents
/// `k/p`, `0 ≤ k ≤ 2p·B`, where `B` bounds the principal generators.
pub fn primality_check(i: &MonomialIdeal, p: u32) -> PrimalityReport {
    let b = i
        .gens
        .values()
        .filter_map(|g| match g {
            Bound::Principal(a) => Some(a.floor() + 1),
            Bound::Augmentation => None,
        })
        .max()
        .unwrap_or(1);
    let axis: Vec<PExponent> = (0..=2 * p as i64 * b).map(|k| PExponent::new(p, k, 1)).collect();
    let mut monos: Vec<MultiExp> = vec![Vec::new()];
    for _ in 0..i.d {
        monos = monos
            .into_iter()
            .flat_map(|m| {
                axis.iter().map(move |e| {
                    let mut m = m.clone();
                    m.push(*e);
                    m
                })
            })
            .collect();
    }
    let outside: Vec<&MultiExp> = monos.iter().filter(|m| !i.contains_term(m)).collect();
    let mut witness = None;
    'search: for (k, x) in outside.iter().enumerate() {
        for y in &outside[k..] {
            let xy: Option<MultiExp> = x.iter().zip(y.iter()).map(|(a, b)| a.checked_add(b).ok()).collect();
            if xy.is_some_and(|xy| i.contains_term(&xy)) {
                witness = Some(((*x).clone(), (*y).clone()));
                break 'search;
            }
        }
    }
    PrimalityReport { prime_by_structure: i.is_spectrally_reduced(), witness }
}

// ----- approximation -----

/// Digit-dominant monomial `κ t^{e+i}` of `c = Σ [a_i] p^i`: the smallest `i`
/// maximizing `p^{-i}|a_i|`, and the leading term `κ t^e` of `a_i`.
pub fn dominant_monomial(c: &UntiltElement) -> Option<CharPSeries> {
    let p = c.digits().first().map(|d| d.p())?;
    let mut best: Option<PExponent> = None;
    let mut pick = None;
    for (i, a) in c.digits().iter().enumerate() {
        if let Some((e, k)) = a.leading_term() {
            let w = e.checked_add(&PExponent::int(p, i as i64)).ok()?;
            if best.is_none_or(|b| w < b) {
                best = Some(w);
                pick = Some((w, k));
            }
        }
    }
    pick.map(|(w, k)| CharPSeries::monomial(p, k as i64, w))
}

/// Termwise tilt approximation: keeps terms with `|c_ν| ≥ ε`, replacing each
/// coefficient by its digit-dominant monomial.
pub fn approx_construct(
    alg: &GaussAlgebra<UntiltField>,
    f: &GaussElement<UntiltElement>,
    eps: &NormValue,
) -> Result<GaussElement<CharPSeries>> {
    let field = alg.field();
    let tilt = GaussAlgebra::new(CharPField::exact(alg.p()), alg.d());
    let mut terms = Vec::new();
    for (nu, c) in f.terms() {
        let keep = match field.norm(c) {
            Reading::Exact(v) => v >= *eps,
            Reading::Below(_) => false,
        };
        if keep {
            if let Some(d) = dominant_monomial(c) {
                terms.push((nu.clone(), d));
            }
        }
    }
    tilt.from_terms(terms)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxRow {
    pub r: NormValue,
    pub phi_f: Reading,
    pub phi_g_sharp: Reading,
    pub ok: bool,
}

/// For each radius: `φ_r(f) = φ_r(g^#)` or both are `< ε`.
pub fn approx_check(
    alg: &GaussAlgebra<UntiltField>,
    f: &GaussElement<UntiltElement>,
    g: &GaussElement<CharPSeries>,
    eps: &NormValue,
    grid: &[NormValue],
) -> Result<Vec<ApproxRow>> {
    let gs = termwise_sharp(alg, g)?;
    grid.iter()
        .map(|r| {
            let phi = SeminormDescriptor::GaussRadius(vec![*r; alg.d()]);
            let phi_f = gauss_eval(alg, &phi, f)?;
            let phi_g_sharp = gauss_eval(alg, &phi, &gs)?;
            let ok = phi_f == phi_g_sharp || (phi_f.bound() < *eps && phi_g_sharp.bound() < *eps);
            Ok(ApproxRow { r: *r, phi_f, phi_g_sharp, ok })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Left side below precision with a bound above the right side.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRow {
    pub phi: SeminormDescriptor,
    pub lhs: Reading,
    pub rhs: NormValue,
    pub verdict: Verdict,
}

/// Checks `φ(f − g^#) ≤ p^{-1} max(φ(g^#), ε)` for each `φ` on constants.
pub fn approx_verify(
    ctx: &UntiltCtx,
    f: &UntiltElement,
    g: &CharPSeries,
    eps: &NormValue,
    phis: &[SeminormDescriptor],
) -> Result<Vec<VerifyRow>> {
    approx_verify_with(ctx, f, g, eps, phis, Exec::default())
}

pub fn approx_verify_with(
    ctx: &UntiltCtx,
    f: &UntiltElement,
    g: &CharPSeries,
    eps: &NormValue,
    phis: &[SeminormDescriptor],
    exec: Exec,
) -> Result<Vec<VerifyRow>> {
    let field = UntiltField::new(ctx.clone());
    let gs = ctx.sharp(g)?;
    let diff = ctx.sub(f, &gs)?;
    let p_inv = NormValue::p_pow(ctx.p(), 1);
    par::map(exec, phis, |phi| {
        let d = match phi {
            SeminormDescriptor::GaussRadius(r) => r.len(),
            SeminormDescriptor::EvalPoint(mu) => mu.len(),
            other => return Err(Error::DescriptorMismatch(format!("{} on the untilt field", other.family()))),
        };
        let alg = GaussAlgebra::new(field.clone(), d);
        let lhs = gauss_eval(&alg, phi, &alg.constant(diff.clone()))?;
        let at_g = gauss_eval(&alg, phi, &alg.constant(gs.clone()))?;
        let rhs = p_inv.mul(&std::cmp::max(at_g.lossy(), *eps))?;
        let verdict = match lhs {
            _ if lhs.bound() <= rhs => Verdict::Pass,
            Reading::Exact(_) => Verdict::Fail,
            Reading::Below(_) => Verdict::Inconclusive,
        };
        Ok(VerifyRow { phi: phi.clone(), lhs, rhs, verdict })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32, n: i64, k: u32) -> CharPSeries {
        CharPSeries::t_pow(p, n, k)
    }

    #[test]
    fn char_two_doubling_vanishes() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let rep = tilt_add_limit(&ctx, &t(2, 1, 0), &t(2, 1, 0), 0, 4).unwrap();
        assert!(rep.expected.is_zero());
        assert!(rep.matches);
        // s_1 = 4·p = 8 = 0 mod 8
        assert_eq!(rep.stable_from, Some(1));
        assert_eq!(ctx.norm(&rep.values[0]), Reading::Exact(NormValue::p_pow(2, 2)));
    }

    #[test]
    fn add_zero_is_identity() {
        let ctx = UntiltCtx::minimal(3, 2).unwrap();
        let f = t(3, 2, 1).add(&t(3, 1, 0)).unwrap();
        let rep = tilt_add_limit(&ctx, &f, &CharPSeries::zero(3), 1, 2).unwrap();
        assert_eq!(rep.values[0], TiltSequence::new(&ctx, &f).unwrap().term(1).unwrap());
        assert_eq!(rep.stable_from, Some(0));
        assert!(rep.matches);
    }

    #[test]
    fn p3_t_plus_t2() {
        let ctx = UntiltCtx::minimal(3, 3).unwrap();
        let rep = tilt_add_limit(&ctx, &t(3, 1, 0), &t(3, 2, 0), 0, 4).unwrap();
        assert!(rep.matches);
        assert!(rep.stable_from.unwrap() <= 3);
        assert_eq!(rep.expected, ctx.sharp(&t(3, 1, 0).add(&t(3, 2, 0)).unwrap()).unwrap());
    }

    #[test]
    fn sequence_properties() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let f = CharPSeries::new(2, [(PExponent::new(2, 1, 1), 1), (PExponent::int(2, 2), 1)], None).unwrap();
        let s = TiltSequence::new(&ctx, &f).unwrap();
        assert!(s.frobenius_compatible(3).unwrap());
        assert!(s.norm_identity().unwrap());
        assert!(TiltSequence::new(&ctx, &t(2, -1, 0)).is_err());
    }

    #[test]
    fn ideal_examples() {
        let u = Side::Untilt;
        let x = MonomialIdeal::principal(u, 1, 0, PExponent::int(2, 1)).unwrap();
        let zero_t = MonomialIdeal::zero(Side::Tilt, 1);
        assert_eq!(ideal_tilt(&x).unwrap(), zero_t);
        let m = MonomialIdeal::augmentation(u, 1, 0).unwrap();
        let mt = ideal_tilt(&m).unwrap();
        assert_eq!(mt, MonomialIdeal::augmentation(Side::Tilt, 1, 0).unwrap());
        assert_eq!(ideal_sharp(&mt).unwrap(), m);
        assert_eq!(ideal_tilt(&MonomialIdeal::zero(u, 1)).unwrap(), zero_t);
        for a in [PExponent::int(2, 1), PExponent::int(2, 2), PExponent::new(2, 1, 1)] {
            assert_eq!(spectral_radical(&MonomialIdeal::principal(u, 1, 0, a).unwrap()), m);
        }
        assert_eq!(spectral_radical(&m), m);
        assert!(ideal_sharp(&MonomialIdeal::principal(Side::Tilt, 1, 0, PExponent::int(2, 1)).unwrap()).is_err());
        assert!(x.is_subset(&m).unwrap() && !m.is_subset(&x).unwrap());
    }

    #[test]
    fn ideal_json() {
        let j: IdealJson = serde_json::from_str(r#"{"kind":"principal","var":0,"bound":{"num":1,"kpow":0}}"#).unwrap();
        let i = MonomialIdeal::from_json(Side::Untilt, 1, 2, &j).unwrap();
        assert_eq!(serde_json::to_string(&ideal_tilt(&i).unwrap().to_json()).unwrap(), r#"{"kind":"zero"}"#);
        let j: IdealJson = serde_json::from_str(r#"[{"kind":"augmentation","var":1},{"kind":"augmentation"}]"#).unwrap();
        let i = MonomialIdeal::from_json(Side::Untilt, 2, 2, &j).unwrap();
        assert_eq!(i.to_string(), "m_X1 + m_X2");
        assert_eq!(
            serde_json::to_string(&i.to_json()).unwrap(),
            r#"[{"kind":"augmentation","var":0},{"kind":"augmentation","var":1}]"#
        );
    }

    #[test]
    fn primality() {
        let u = Side::Untilt;
        let x = MonomialIdeal::principal(u, 1, 0, PExponent::int(3, 1)).unwrap();
        let r = primality_check(&x, 3);
        assert!(!r.prime_by_structure && r.witness.is_some() && r.consistent());
        for i in supported_lattice(u, 2) {
            assert!(primality_check(&i, 2).consistent(), "{i}");
        }
    }

    #[test]
    fn approx_example() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let alg = GaussAlgebra::new(UntiltField::new(ctx.clone()), 1);
        let p = ctx.p_elem();
        let f = alg
            .from_terms([(vec![PExponent::zero(2)], p.clone()), (vec![PExponent::int(2, 1)], ctx.mul(&p, &p).unwrap())])
            .unwrap();
        let eps = NormValue::p_pow(2, 3);
        let g = approx_construct(&alg, &f, &eps).unwrap();
        let tilt = GaussAlgebra::new(CharPField::exact(2), 1);
        let want = tilt
            .from_terms([(vec![PExponent::zero(2)], t(2, 1, 0)), (vec![PExponent::int(2, 1)], t(2, 2, 0))])
            .unwrap();
        assert_eq!(g, want);
        let grid = [NormValue::one(2), NormValue::p_pow(2, 1), NormValue::p_pow(2, 2)];
        assert!(approx_check(&alg, &f, &g, &eps, &grid).unwrap().iter().all(|r| r.ok));
        let g0 = approx_construct(&alg, &f, &NormValue::one(2)).unwrap();
        assert!(g0.is_empty());
    }

    #[test]
    fn verify_fixtures() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let phis = [
            SeminormDescriptor::gauss_one(2, 1),
            SeminormDescriptor::EvalPoint(vec![t(2, 1, 1)]),
        ];
        let st = ctx.sharp(&t(2, 1, 0)).unwrap();
        let all_pass = |rows: Vec<VerifyRow>| rows.iter().all(|r| r.verdict == Verdict::Pass);
        assert!(all_pass(approx_verify(&ctx, &st, &t(2, 1, 0), &NormValue::p_pow(2, 3), &phis).unwrap()));
        let f = ctx.add(&st, &ctx.mul(&ctx.p_elem(), &ctx.one()).unwrap()).unwrap();
        let rows = approx_verify(&ctx, &f, &t(2, 1, 0), &NormValue::one(2), &phis).unwrap();
        assert_eq!(rows[0].lhs, Reading::Exact(NormValue::p_pow(2, 1)));
        assert_eq!(rows[0].rhs, NormValue::p_pow(2, 1));
        assert!(all_pass(rows));
        let rows = approx_verify(&ctx, &ctx.p_elem(), &t(2, 1, 0), &NormValue::p_pow(2, 2), &phis).unwrap();
        assert!(all_pass(rows));
    }
}
