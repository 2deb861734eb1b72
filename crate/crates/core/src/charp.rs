//! Truncated elements of `F_p((t^{1/p^∞}))`.
//!
//! A [`CharPSeries`] is a finite sum `Σ c_e t^e` with exponents in `Z[1/p]`
//! and coefficients in `F_p`, together with an optional precision: when
//! `prec = Some(N)` the element is only known modulo `t^N`; `None` means the
//! finite sum is exact.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::values::{ExpJson, NormValue, PExponent, Reading};

pub const DEFAULT_TERM_CAP: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CharPSeries {
    p: u32,
    terms: BTreeMap<PExponent, u32>,
    prec: Option<PExponent>,
}

fn min_prec(a: Option<PExponent>, b: Option<PExponent>) -> Option<PExponent> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Common-denominator integer view of a term list.
fn scaled(terms: &BTreeMap<PExponent, u32>, k: u32) -> Vec<(i64, u32)> {
    terms
        .iter()
        .map(|(e, &c)| {
            let f = (e.p() as i64).pow(k - e.kpow());
            (e.num() * f, c)
        })
        .collect()
}

impl CharPSeries {
    /// Builds a series, reducing coefficients mod `p` and dropping terms at or
    /// beyond the precision.
    pub fn new(
        p: u32,
        terms: impl IntoIterator<Item = (PExponent, i64)>,
        prec: Option<PExponent>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.p() != p {
                return Err(Error::PrimeMismatch(p, e.p()));
            }
            let slot: &mut u32 = map.entry(e).or_default();
            *slot = ((*slot as i64 + c).rem_euclid(p as i64)) as u32;
        }
        if let Some(pe) = prec {
            if pe.p() != p {
                return Err(Error::PrimeMismatch(p, pe.p()));
            }
        }
        let mut s = CharPSeries { p, terms: map, prec };
        s.clean();
        Ok(s)
    }

    fn from_map(p: u32, terms: BTreeMap<PExponent, u32>, prec: Option<PExponent>) -> Self {
        let mut s = CharPSeries { p, terms, prec };
        s.clean();
        s
    }

    fn clean(&mut self) {
        self.terms.retain(|_, c| *c != 0);
        if let Some(n) = self.prec {
            self.terms.retain(|e, _| *e < n);
        }
    }

    pub fn zero(p: u32) -> Self {
        CharPSeries { p, terms: BTreeMap::new(), prec: None }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::monomial(p, c, PExponent::zero(p))
    }

    /// `c · t^e`, exact.
    pub fn monomial(p: u32, c: i64, e: PExponent) -> Self {
        let c = c.rem_euclid(p as i64) as u32;
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        CharPSeries { p, terms, prec: None }
    }

    /// `t^e` for `e = num / p^kpow`.
    pub fn t_pow(p: u32, num: i64, kpow: u32) -> Self {
        Self::monomial(p, 1, PExponent::new(p, num, kpow))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn prec(&self) -> Option<PExponent> {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PExponent, &u32)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &PExponent) -> u32 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// No stored terms (possibly only zero at the current precision).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest term exponent; `None` when no term survives.
    pub fn valuation(&self) -> Option<PExponent> {
        self.terms.keys().next().copied()
    }

    /// Lowest term with its coefficient.
    pub fn leading_term(&self) -> Option<(PExponent, u32)> {
        self.terms.iter().next().map(|(e, c)| (*e, *c))
    }

    /// Lower bound for the valuation: the valuation, or the precision when empty.
    fn val_bound(&self) -> Option<PExponent> {
        self.valuation().or(self.prec)
    }

    pub fn is_integral(&self) -> bool {
        match self.val_bound() {
            Some(v) => !v.is_negative(),
            None => true,
        }
    }

    fn check_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Re-truncates modulo `t^n` (never raises precision).
    pub fn truncate(&self, n: PExponent) -> Self {
        Self::from_map(self.p, self.terms.clone(), min_prec(self.prec, Some(n)))
    }

    /// Forgets precision bookkeeping: asserts the stored terms are the exact element.
    pub fn as_exact(&self) -> Self {
        CharPSeries { p: self.p, terms: self.terms.clone(), prec: None }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = map.entry(*e).or_insert(0);
            *slot = (*slot + c) % self.p;
        }
        Ok(Self::from_map(self.p, map, min_prec(self.prec, other.prec)))
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        let terms = self.terms.iter().map(|(e, c)| (*e, (p - c) % p)).collect();
        Self::from_map(p, terms, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplication by a constant in `F_p`.
    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u32;
        let p = self.p;
        let terms = self.terms.iter().map(|(e, x)| (*e, (x * c) % p)).collect();
        Self::from_map(p, terms, self.prec)
    }

    /// Multiplication by `t^e`; precision shifts along.
    pub fn shift(&self, e: &PExponent) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (x, c) in &self.terms {
            terms.insert(x.checked_add(e)?, *c);
        }
        let prec = match self.prec {
            Some(n) => Some(n.checked_add(e)?),
            None => None,
        };
        Ok(Self::from_map(self.p, terms, prec))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, DEFAULT_TERM_CAP)
    }

    /// Product; the result precision is `min(v(f) + N_g, v(g) + N_f)`.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_p(other)?;
        let p = self.p;
        let prec = {
            let a = match (self.val_bound(), other.prec) {
                (Some(v), Some(n)) => Some(v.checked_add(&n)?),
                _ => None,
            };
            let b = match (other.val_bound(), self.prec) {
                (Some(v), Some(n)) => Some(v.checked_add(&n)?),
                _ => None,
            };
            min_prec(a, b)
        };
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(CharPSeries { p, terms: BTreeMap::new(), prec });
        }
        let k = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .map(|e| e.kpow())
            .max()
            .unwrap_or(0);
        (p as i64)
            .checked_pow(k)
            .ok_or(Error::Overflow("series exponent denominator"))?;
        let limit = match prec {
            Some(n) => Some(
                n.num()
                    .checked_mul((p as i64).pow(k.saturating_sub(n.kpow())))
                    .ok_or(Error::Overflow("series precision"))?,
            ),
            None => None,
        };
        // precision with a finer denominator than the terms: compare exactly
        let limit_exact = prec.filter(|n| n.kpow() > k);
        let a = scaled(&self.terms, k);
        let b = scaled(&other.terms, k);
        let mut acc: HashMap<i64, u32> = HashMap::with_capacity(a.len() * b.len());
        for &(ea, ca) in &a {
            for &(eb, cb) in &b {
                let e = ea.checked_add(eb).ok_or(Error::Overflow("series exponent"))?;
                if limit_exact.is_none() {
                    if let Some(l) = limit {
                        if e >= l {
                            continue;
                        }
                    }
                }
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + ca * cb) % p;
            }
        }
        let mut terms = BTreeMap::new();
        for (e, c) in acc {
            if c != 0 {
                terms.insert(PExponent::new(p, e, k), c);
            }
        }
        if terms.len() > cap {
            return Err(Error::TermCapExceeded { count: terms.len(), cap });
        }
        Ok(Self::from_map(p, terms, prec))
    }

    pub fn pow(&self, mut k: u64, cap: usize) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = CharPSeries::one(self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_capped(&base, cap)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_capped(&base, cap)?;
            }
        }
        Ok(acc)
    }

    /// `f^p`: exponents and precision scale by `p`, coefficients are fixed.
    pub fn frobenius(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(e.mul_p()?, *c);
        }
        let prec = match self.prec {
            Some(n) => Some(n.mul_p()?),
            None => None,
        };
        Ok(CharPSeries { p: self.p, terms, prec })
    }

    /// The unique `p`-th root; inverse of [`frobenius`](Self::frobenius).
    pub fn pth_root(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.div_p(), *c)).collect();
        CharPSeries { p: self.p, terms, prec: self.prec.map(|n| n.div_p()) }
    }

    pub fn pth_root_iter(&self, m: u32) -> Self {
        (0..m).fold(self.clone(), |acc, _| acc.pth_root())
    }

    /// `|f| = p^{-v(f)}`, with `|t| = p^{-1}`.
    pub fn norm(&self) -> Reading {
        match (self.valuation(), self.prec) {
            (Some(v), _) => Reading::Exact(NormValue::Pow(v)),
            (None, None) => Reading::Exact(NormValue::Zero),
            (None, Some(n)) => Reading::Below(NormValue::Pow(n)),
        }
    }

    /// Splits an integral series as `low + t · high` where `low` has all
    /// exponents in `[0, 1)`.
    pub fn split_at_one(&self) -> Result<(Self, Self)> {
        let p = self.p;
        let one = PExponent::int(p, 1);
        let mut low = BTreeMap::new();
        let mut high = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.is_negative() {
                return Err(Error::NotIntegral(e.to_string()));
            }
            if *e < one {
                low.insert(*e, *c);
            } else {
                high.insert(e.checked_sub(&one)?, *c);
            }
        }
        let high_prec = match self.prec {
            Some(n) => Some(n.checked_sub(&one)?),
            None => None,
        };
        Ok((
            CharPSeries { p, terms: low, prec: None },
            CharPSeries::from_map(p, high, high_prec),
        ))
    }

    pub fn to_json(&self) -> CharPJson {
        CharPJson {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { num: e.num(), kpow: e.kpow(), coeff: *c as i64 })
                .collect(),
            prec: self.prec.map(|n| n.to_json()),
        }
    }

    pub fn from_json(j: &CharPJson) -> Result<Self> {
        if !crate::config::is_prime(j.p) {
            return Err(Error::Invalid(format!("{} is not prime", j.p)));
        }
        let p = j.p;
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::new();
        for t in &j.terms {
            let e = PExponent::new(p, t.num, t.kpow);
            if !seen.insert(e) {
                return Err(Error::Invalid(format!("duplicate exponent {e}")));
            }
            terms.push((e, t.coeff));
        }
        CharPSeries::new(p, terms, j.prec.map(|n| PExponent::from_json(p, &n)))
    }
}

impl fmt::Display for CharPSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e.is_zero(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => write!(f, "t^({e})")?,
                (false, c) => write!(f, "{c}*t^({e})")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.prec {
            write!(f, " + O(t^({n}))")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub num: i64,
    pub kpow: u32,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPJson {
    pub p: u32,
    pub terms: Vec<TermJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prec: Option<ExpJson>,
}

pub fn cps_add(f: &CharPSeries, g: &CharPSeries) -> Result<CharPSeries> {
    f.add(g)
}

pub fn cps_mul(f: &CharPSeries, g: &CharPSeries) -> Result<CharPSeries> {
    f.mul(g)
}

pub fn frobenius(f: &CharPSeries) -> Result<CharPSeries> {
    f.frobenius()
}

pub fn pth_root(f: &CharPSeries) -> CharPSeries {
    f.pth_root()
}

pub fn cps_norm(f: &CharPSeries) -> Reading {
    f.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(p: u32, n: i64, k: u32) -> PExponent {
        PExponent::new(p, n, k)
    }

    fn series(p: u32, terms: &[(i64, u32, i64)]) -> CharPSeries {
        CharPSeries::new(p, terms.iter().map(|&(n, k, c)| (ex(p, n, k), c)), None).unwrap()
    }

    #[test]
    fn char_two_addition() {
        let t = CharPSeries::t_pow(2, 1, 0).truncate(PExponent::int(2, 8));
        let s = cps_add(&t, &t).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.prec(), Some(PExponent::int(2, 8)));
    }

    #[test]
    fn products() {
        let h = CharPSeries::t_pow(2, 1, 1);
        assert_eq!(cps_mul(&h, &h).unwrap(), CharPSeries::t_pow(2, 1, 0));
        // (1+t)^2 over F_3, checked against schoolbook coefficients 1,2,1
        let f = series(3, &[(0, 0, 1), (1, 0, 1)]);
        assert_eq!(cps_mul(&f, &f).unwrap(), series(3, &[(0, 0, 1), (1, 0, 2), (2, 0, 1)]));
    }

    #[test]
    fn mul_precision_rule() {
        // (1 + O(t^4)) · (t + O(t^3)) is known mod t^{min(0+3, 1+4)} = t^3
        let f = CharPSeries::one(2).truncate(PExponent::int(2, 4));
        let g = CharPSeries::t_pow(2, 1, 0).truncate(PExponent::int(2, 3));
        assert_eq!(f.mul(&g).unwrap().prec(), Some(PExponent::int(2, 3)));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius(&CharPSeries::t_pow(3, 1, 1)).unwrap(), CharPSeries::t_pow(3, 1, 0));
        let f = series(2, &[(0, 0, 1), (1, 1, 1)]);
        assert_eq!(frobenius(&f).unwrap(), series(2, &[(0, 0, 1), (1, 0, 1)]));
        assert_eq!(frobenius(&f).unwrap(), cps_mul(&f, &f).unwrap());
        assert!(frobenius(&CharPSeries::zero(5)).unwrap().is_empty());
    }

    #[test]
    fn root_examples() {
        assert_eq!(pth_root(&CharPSeries::t_pow(5, 1, 0)), CharPSeries::t_pow(5, 1, 1));
        let r = pth_root(&series(2, &[(0, 0, 1), (1, 0, 1)]));
        assert_eq!(r, series(2, &[(0, 0, 1), (1, 1, 1)]));
        assert_eq!(cps_mul(&r, &r).unwrap(), series(2, &[(0, 0, 1), (1, 0, 1)]));
        assert_eq!(pth_root(&CharPSeries::t_pow(3, 3, 0)), CharPSeries::t_pow(3, 1, 0));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(
            cps_norm(&CharPSeries::t_pow(2, 3, 1)),
            Reading::Exact(NormValue::Pow(ex(2, 3, 1)))
        );
        assert_eq!(cps_norm(&series(2, &[(0, 0, 1), (1, 0, 1)])), Reading::Exact(NormValue::one(2)));
        let z = CharPSeries::zero(2).truncate(PExponent::int(2, 8));
        assert_eq!(cps_norm(&z), Reading::Below(NormValue::p_pow(2, 8)));
    }

    #[test]
    fn term_cap() {
        let f = CharPSeries::new(2, (0..40).map(|i| (ex(2, i, 3), 1)), None).unwrap();
        let g = CharPSeries::new(2, (0..40).map(|i| (ex(2, 1000 * i + 1, 5), 1)), None).unwrap();
        assert!(matches!(f.mul_capped(&g, 100), Err(Error::TermCapExceeded { .. })));
    }

    #[test]
    fn json_shape() {
        let s = CharPSeries::t_pow(2, 1, 1).truncate(PExponent::int(2, 8));
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(j, r#"{"p":2,"terms":[{"num":1,"kpow":1,"coeff":1}],"prec":{"num":8,"kpow":0}}"#);
        let back = CharPSeries::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    fn arb_series(p: u32) -> impl Strategy<Value = CharPSeries> {
        (
            prop::collection::vec((0i64..40, 0u32..3, 1i64..p as i64), 0..6),
            prop::option::of(10i64..20),
        )
            .prop_map(move |(ts, prec)| {
                CharPSeries::new(
                    p,
                    ts.into_iter().map(|(n, k, c)| (PExponent::new(p, n, k), c)),
                    prec.map(|n| PExponent::int(p, n)),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn root_frobenius_inverse(f in arb_series(3)) {
            prop_assert_eq!(f.frobenius().unwrap().pth_root(), f.clone());
            prop_assert_eq!(f.pth_root().frobenius().unwrap(), f);
        }

        #[test]
        fn norm_multiplicative(f in arb_series(2), g in arb_series(2)) {
            let fg = f.mul(&g).unwrap();
            if let (Reading::Exact(a), Reading::Exact(b)) = (f.norm(), g.norm()) {
                if !a.is_zero() && !b.is_zero() {
                    prop_assert_eq!(fg.norm(), Reading::Exact(a.mul(&b).unwrap()));
                }
            }
        }

        #[test]
        fn norm_ultrametric(f in arb_series(5), g in arb_series(5)) {
            let s = f.add(&g).unwrap();
            if let (Reading::Exact(a), Reading::Exact(b), Reading::Exact(c)) = (f.norm(), g.norm(), s.norm()) {
                prop_assert!(c <= std::cmp::max(a, b));
                if a != b {
                    prop_assert_eq!(c, std::cmp::max(a, b));
                }
            }
        }

        #[test]
        fn frobenius_is_pth_power(f in arb_series(3)) {
            let f = f.as_exact();
            prop_assert_eq!(f.frobenius().unwrap(), f.pow(3, DEFAULT_TERM_CAP).unwrap());
        }
    }
}
