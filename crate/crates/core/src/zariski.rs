//! Geometric-series inversion of `1 + x`, sample-based Zariskian checks, and
//! the fraction ring `(1 + A_{<1})^{-1} A` with `‖a/s‖ = ‖a‖`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::ring::NormedRing;
use crate::values::{NormValue, Reading};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvertStatus {
    /// `‖(1 + x)s_m − 1‖ ≤ target`.
    Converged { residual: Reading },
    /// Partial sums grow in support and `1 + x` is provably not a unit.
    DivergedSupport { supports: Vec<usize>, reason: String },
    Inconclusive { residual: Reading },
}

impl InvertStatus {
    pub fn name(&self) -> &'static str {
        match self {
            InvertStatus::Converged { .. } => "converged",
            InvertStatus::DivergedSupport { .. } => "diverged-support",
            InvertStatus::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertReport<E> {
    /// `s_m = Σ_{k<m} (−x)^k`.
    pub approx: E,
    pub terms: usize,
    pub status: InvertStatus,
}

pub fn invert_one_plus<R: NormedRing>(ring: &R, x: &R::Elem, term_max: usize, target: &NormValue) -> Result<InvertReport<R::Elem>> {
    if term_max == 0 {
        return Err(Error::Invalid("termMax must be positive".into()));
    }
    let one = ring.one();
    let one_plus = ring.add(&one, x)?;
    let neg_x = ring.neg(x)?;
    let obstruction = if ring.is_complete() { None } else { ring.unit_obstruction(&one_plus) };
    let mut s = ring.zero();
    let mut power = one.clone();
    let mut supports = Vec::new();
    let mut residual = Reading::Exact(NormValue::one(ring.p()));
    for m in 1..=term_max {
        s = ring.add(&s, &power)?;
        power = ring.mul(&power, &neg_x)?;
        residual = ring.norm(&ring.sub(&ring.mul(&one_plus, &s)?, &one)?);
        if let Some(k) = ring.support_size(&s) {
            supports.push(k);
        }
        if obstruction.is_none() && residual.bound() <= *target {
            return Ok(InvertReport { approx: s, terms: m, status: InvertStatus::Converged { residual } });
        }
    }
    let growing = supports.len() >= 2 && supports.windows(2).all(|w| w[1] > w[0]);
    let status = match obstruction {
        Some(reason) if growing => InvertStatus::DivergedSupport { supports, reason },
        _ => InvertStatus::Inconclusive { residual },
    };
    Ok(InvertReport { approx: s, terms: term_max, status })
}

/// Terms needed for `|x|^m ≤ target`: `⌈v(target)/v(x)⌉`.
pub fn terms_needed(x: &NormValue, target: &NormValue) -> Option<u64> {
    let (vx, vt) = (x.exponent()?.to_ratio(), target.exponent()?.to_ratio());
    if vx <= 0.into() {
        return None;
    }
    Some((vt / vx).ceil().to_integer().max(1) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRow {
    pub index: usize,
    pub norm: Reading,
    /// `None` when the sample is not of norm `< 1`.
    pub status: Option<InvertStatus>,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ZariskianVerdict {
    /// Sound: `1 + x` is a non-unit for this sample.
    NotZariskian { witness: usize },
    /// Evidence only.
    NoCounterexampleFound,
}

impl ZariskianVerdict {
    pub fn wording(&self) -> String {
        match self {
            ZariskianVerdict::NotZariskian { witness } => format!("not Zariskian (witness: sample {witness})"),
            ZariskianVerdict::NoCounterexampleFound => "no counterexample found".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskianReport {
    pub rows: Vec<SampleRow>,
    pub verdict: ZariskianVerdict,
}

pub fn is_zariskian_sample<R: NormedRing>(
    ring: &R,
    samples: &[R::Elem],
    term_max: usize,
    target: &NormValue,
) -> Result<ZariskianReport> {
    is_zariskian_sample_with(ring, samples, term_max, target, Exec::default())
}

pub fn is_zariskian_sample_with<R: NormedRing>(
    ring: &R,
    samples: &[R::Elem],
    term_max: usize,
    target: &NormValue,
    exec: Exec,
) -> Result<ZariskianReport> {
    let indexed: Vec<(usize, &R::Elem)> = samples.iter().enumerate().collect();
    let rows = par::map(exec, &indexed, |(i, x)| {
        let norm = ring.norm(x);
        if norm.bound() >= NormValue::one(ring.p()) {
            return Ok(SampleRow { index: *i, norm, status: None, terms: 0 });
        }
        let rep = invert_one_plus(ring, x, term_max, target)?;
        Ok(SampleRow { index: *i, norm, status: Some(rep.status), terms: rep.terms })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verdict = rows
        .iter()
        .find(|r| matches!(r.status, Some(InvertStatus::DivergedSupport { .. })))
        .map(|r| ZariskianVerdict::NotZariskian { witness: r.index })
        .unwrap_or(ZariskianVerdict::NoCounterexampleFound);
    Ok(ZariskianReport { rows, verdict })
}

/// `a / s` with `s = 1 + x`, `‖x‖ < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZarFraction<E> {
    num: E,
    den: E,
}

impl<E: Clone> ZarFraction<E> {
    pub fn new<R: NormedRing<Elem = E>>(ring: &R, num: E, den: E) -> Result<Self> {
        let x = ring.sub(&den, &ring.one())?;
        if ring.norm(&x).bound() >= NormValue::one(ring.p()) {
            return Err(Error::InvalidFraction(format!(
                "denominator {} is not 1 + (norm < 1)",
                ring.render(&den)
            )));
        }
        Ok(ZarFraction { num, den })
    }

    pub fn from_elem<R: NormedRing<Elem = E>>(ring: &R, a: E) -> Self {
        ZarFraction { num: a, den: ring.one() }
    }

    pub fn num(&self) -> &E {
        &self.num
    }

    pub fn den(&self) -> &E {
        &self.den
    }
}

pub fn zar_add<R: NormedRing>(ring: &R, a: &ZarFraction<R::Elem>, b: &ZarFraction<R::Elem>) -> Result<ZarFraction<R::Elem>> {
    let num = ring.add(&ring.mul(&a.num, &b.den)?, &ring.mul(&b.num, &a.den)?)?;
    Ok(ZarFraction { num, den: ring.mul(&a.den, &b.den)? })
}

pub fn zar_mul<R: NormedRing>(ring: &R, a: &ZarFraction<R::Elem>, b: &ZarFraction<R::Elem>) -> Result<ZarFraction<R::Elem>> {
    Ok(ZarFraction { num: ring.mul(&a.num, &b.num)?, den: ring.mul(&a.den, &b.den)? })
}

/// `‖a/s‖_Zar = ‖a‖`.
pub fn zar_norm<R: NormedRing>(ring: &R, fr: &ZarFraction<R::Elem>) -> Reading {
    ring.norm(&fr.num)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZarEq {
    True,
    False,
    Undecided,
}

/// `a/s = b/t` iff `u(at − bs) = 0` for some `u ∈ 1 + A_{<1}`. Decided exactly
/// in domains; otherwise `multipliers` are tried before giving up.
pub fn zar_eq<R: NormedRing>(
    ring: &R,
    x: &ZarFraction<R::Elem>,
    y: &ZarFraction<R::Elem>,
    multipliers: &[R::Elem],
) -> Result<ZarEq> {
    let cross = ring.sub(&ring.mul(&x.num, &y.den)?, &ring.mul(&y.num, &x.den)?)?;
    if ring.is_zero(&cross) {
        return Ok(ZarEq::True);
    }
    if ring.is_domain() {
        return Ok(ZarEq::False);
    }
    for u in multipliers {
        let small = ring.sub(u, &ring.one())?;
        if ring.norm(&small).bound() < NormValue::one(ring.p()) && ring.is_zero(&ring.mul(u, &cross)?) {
            return Ok(ZarEq::True);
        }
    }
    Ok(ZarEq::Undecided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charp::CharPSeries;
    use crate::ring::{CharPField, CoeffField, UntiltField};
    use crate::rings::{CustomTable, PolyGaussC};
    use crate::untilt::UntiltCtx;

    #[test]
    fn field_converges() {
        let k = UntiltField::new(UntiltCtx::minimal(3, 3).unwrap());
        let target = NormValue::p_pow(3, 3);
        let rep = invert_one_plus(&k, &k.uniformizer(), 3, &target).unwrap();
        assert!(matches!(rep.status, InvertStatus::Converged { .. }));
        assert_eq!(k.mul(&rep.approx, &k.add(&k.one(), &k.uniformizer()).unwrap()).unwrap(), k.one());
        let rep = invert_one_plus(&k, &k.zero(), 5, &target).unwrap();
        assert_eq!((rep.terms, rep.approx), (1, k.one()));
    }

    #[test]
    fn polynomial_ring_diverges() {
        let k = CharPField::exact(2);
        let r = PolyGaussC::new(k, NormValue::p_pow(2, 1)).unwrap();
        let rep = invert_one_plus(&r, &r.t(), 6, &NormValue::p_pow(2, 3)).unwrap();
        match rep.status {
            InvertStatus::DivergedSupport { supports, .. } => assert_eq!(supports, vec![1, 2, 3, 4, 5, 6]),
            other => panic!("{other:?}"),
        }
        let rep = is_zariskian_sample(&r, &[r.one(), r.t()], 6, &NormValue::p_pow(2, 3)).unwrap();
        assert_eq!(rep.verdict, ZariskianVerdict::NotZariskian { witness: 1 });
        assert!(rep.rows[0].status.is_none());
    }

    #[test]
    fn fraction_norms() {
        let k = CharPField::exact(2);
        let r = PolyGaussC::new(k.clone(), NormValue::p_pow(2, 1)).unwrap();
        let one_t = r.add(&r.one(), &r.t()).unwrap();
        let fr = ZarFraction::new(&r, r.t(), one_t.clone()).unwrap();
        assert_eq!(zar_norm(&r, &fr), Reading::Exact(r.c()));
        let a = r.poly(vec![k.one(), k.one(), k.one()]);
        assert_eq!(zar_norm(&r, &ZarFraction::from_elem(&r, a.clone())), r.norm(&a));
        let wa = r.mul(&r.poly(vec![k.uniformizer()]), &a).unwrap();
        let fr2 = ZarFraction::new(&r, wa, one_t.clone()).unwrap();
        assert_eq!(zar_norm(&r, &fr2), r.norm(&a).scale(&NormValue::p_pow(2, 1)).unwrap());
        assert!(ZarFraction::new(&r, r.t(), r.poly(vec![CharPSeries::zero(2), k.one()])).is_err());
    }

    #[test]
    fn fraction_equality() {
        let k = CharPField::exact(2);
        let r = PolyGaussC::new(k, NormValue::p_pow(2, 1)).unwrap();
        let s1 = r.add(&r.one(), &r.t()).unwrap();
        let s2 = r.add(&r.one(), &r.mul(&r.t(), &r.t()).unwrap()).unwrap();
        let a = ZarFraction::new(&r, r.t(), s1.clone()).unwrap();
        let b = ZarFraction::new(&r, r.t(), s2.clone()).unwrap();
        assert_eq!(zar_eq(&r, &a, &b, &[]).unwrap(), ZarEq::False);
        let ta = ZarFraction::new(&r, r.mul(&s2, &r.t()).unwrap(), r.mul(&s2, &s1).unwrap()).unwrap();
        assert_eq!(zar_eq(&r, &a, &ta, &[]).unwrap(), ZarEq::True);
        let z1 = ZarFraction::new(&r, r.zero(), s1).unwrap();
        let z2 = ZarFraction::new(&r, r.zero(), s2).unwrap();
        assert_eq!(zar_eq(&r, &z1, &z2, &[]).unwrap(), ZarEq::True);
    }

    #[test]
    fn non_domain_multiplier_search() {
        // Z/4: 2/1 vs 0/3, with 3 = 1 + 2 and |2| < 1; 3·2 = 2 ≠ 0, so undecided
        let r = CustomTable::zmod(2, 2).unwrap();
        let a = ZarFraction::new(&r, 2, 1).unwrap();
        let b = ZarFraction::new(&r, 0, 3).unwrap();
        assert_eq!(zar_eq(&r, &a, &b, &[3]).unwrap(), ZarEq::Undecided);
        let c = ZarFraction::new(&r, 2, 3).unwrap();
        assert_eq!(zar_eq(&r, &a, &c, &[3]).unwrap(), ZarEq::True);
    }

    #[test]
    fn terms_bound() {
        let t = NormValue::p_pow(2, 3);
        assert_eq!(terms_needed(&NormValue::p_pow(2, 1), &t), Some(3));
        assert_eq!(terms_needed(&NormValue::Pow(crate::values::PExponent::new(2, 1, 1)), &t), Some(6));
    }
}
