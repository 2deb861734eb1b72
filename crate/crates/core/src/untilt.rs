//! The characteristic-zero perfectoid field modelled as
//! `W_n(O_F / t^N) / ([t] − p)`, i.e. the ring `O_C / p^n` for the completion
//! `C` of `Q_p(p^{1/p^∞})`.
//!
//! Elements are kept in canonical Teichmüller-digit form
//! `x = Σ_{i<n} [a_i] p^i` where every digit `a_i` is a finite `F_p`-sum of
//! powers `t^e` with `0 ≤ e < 1`. This is a set-theoretic section of
//! `O_C → O_C / p ≅ O_F / t`, applied digit by digit, so the form is unique.
//!
//! Canonicalization of a Witt vector `w` repeats
//!
//! ```text
//! w_0 = a + t·r          (a has exponents in [0, 1))
//! w − [a] − [t r] = V(y)  and  V(y) = p · F^{-1}(y)
//! w ≡ [a] + p·([r] + F^{-1}(y))   (mod z, using [t] ≡ p)
//! ```
//!
//! one digit per step. The precision `N` must be at least
//! `max_{i<n} p^i (n − i)` so that truncating Witt components mod `t^N`
//! is invisible mod `p^n`; each step then needs only `t^{N/p}` at the
//! next length, which the bound also guarantees.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charp::{CharPJson, CharPSeries};
use crate::config::{min_t_prec, GlobalConfig};
use crate::error::{Error, Result};
use crate::values::{ExpJson, NormValue, PExponent, Reading};
use crate::witt::{WittPolyCache, WittRing, WittVector};

#[derive(Clone, Debug)]
pub struct UntiltCtx {
    witt: WittRing,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UntiltElement {
    digits: Vec<CharPSeries>,
}

impl UntiltCtx {
    pub fn new(cache: Arc<WittPolyCache>, n: usize, prec: PExponent) -> Result<Self> {
        let p = cache.p();
        let need = PExponent::int(p, min_t_prec(p, n));
        if prec < need {
            return Err(Error::InsufficientPrecision { need: need.to_string(), got: prec.to_string() });
        }
        Ok(UntiltCtx { witt: WittRing::new(cache, n, prec)? })
    }

    pub fn from_config(cfg: &GlobalConfig) -> Result<Self> {
        cfg.validate()?;
        let cache = WittPolyCache::get(cfg.p, cfg.witt_len, cfg.cache_dir().as_deref())?;
        Ok(UntiltCtx { witt: WittRing::new(cache, cfg.witt_len, cfg.t_prec())?.with_term_cap(cfg.term_cap) })
    }

    /// Convenience constructor with the minimal admissible precision.
    pub fn minimal(p: u32, n: usize) -> Result<Self> {
        let cache = WittPolyCache::get(p, n, None)?;
        Self::new(cache, n, PExponent::int(p, min_t_prec(p, n)))
    }

    pub fn p(&self) -> u32 {
        self.witt.p()
    }

    /// Witt length, i.e. the element is known mod `p^n`.
    pub fn n(&self) -> usize {
        self.witt.len()
    }

    pub fn t_prec(&self) -> PExponent {
        self.witt.prec()
    }

    pub fn witt(&self) -> &WittRing {
        &self.witt
    }

    fn digit_zero(&self) -> CharPSeries {
        CharPSeries::zero(self.p())
    }

    pub fn zero(&self) -> UntiltElement {
        UntiltElement { digits: vec![self.digit_zero(); self.n()] }
    }

    pub fn one(&self) -> UntiltElement {
        let mut z = self.zero();
        z.digits[0] = CharPSeries::one(self.p());
        z
    }

    /// The element `p` (equal to `sharp(t)`).
    pub fn p_elem(&self) -> UntiltElement {
        let mut z = self.zero();
        if self.n() > 1 {
            z.digits[1] = CharPSeries::one(self.p());
        }
        z
    }

    /// `k · 1` for a small integer `k`.
    pub fn from_int(&self, k: i64) -> Result<UntiltElement> {
        let mut acc = self.zero();
        let mut base = self.one();
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            m >>= 1;
            if m > 0 {
                base = self.add(&base, &base)?;
            }
        }
        if k < 0 {
            acc = self.neg(&acc)?;
        }
        Ok(acc)
    }

    /// Reduces a Witt vector modulo `z = [t] − p` into digit form.
    pub fn canonicalize(&self, w: &WittVector) -> Result<UntiltElement> {
        let p = self.p();
        let mut ring = self.witt.clone();
        let mut cur = w.clone();
        let mut digits = Vec::with_capacity(self.n());
        loop {
            let x0 = cur.comps()[0].clone();
            let (a, r) = x0.split_at_one()?;
            digits.push(a.clone());
            if ring.len() == 1 {
                break;
            }
            let ta = ring.teichmuller(&a)?;
            let tr = ring.teichmuller(&x0.sub(&a)?)?;
            let d = ring.sub(&cur, &ring.add(&ta, &tr)?)?;
            debug_assert!(d.comps()[0].is_empty(), "zeroth component must cancel");
            let next_prec = ring.prec().div_p();
            let next = ring.reshape(ring.len() - 1, next_prec)?;
            let y: Vec<CharPSeries> = d.comps()[1..].iter().map(|c| c.pth_root()).collect();
            let fy = next.vector(y)?;
            let tr = next.teichmuller(&r.truncate(next_prec))?;
            cur = next.add(&tr, &fy)?;
            ring = next;
        }
        while digits.len() < self.n() {
            digits.push(CharPSeries::zero(p));
        }
        Ok(UntiltElement { digits })
    }

    /// Witt vector `(a_0, a_1^p, a_2^{p^2}, …) = Σ p^i [a_i]`.
    pub fn lift(&self, x: &UntiltElement) -> Result<WittVector> {
        let comps = x
            .digits
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut c = a.truncate(self.t_prec());
                for _ in 0..i {
                    c = c.frobenius()?.truncate(self.t_prec());
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        self.witt.vector(comps)
    }

    /// Digits may be any integral series; the result is canonical.
    pub fn from_digits(&self, digits: Vec<CharPSeries>) -> Result<UntiltElement> {
        if digits.len() > self.n() {
            return Err(Error::Invalid(format!("{} digits for length {}", digits.len(), self.n())));
        }
        let mut d = digits;
        d.resize(self.n(), self.digit_zero());
        let x = UntiltElement { digits: d };
        self.canonicalize(&self.lift(&x)?)
    }

    pub fn add(&self, x: &UntiltElement, y: &UntiltElement) -> Result<UntiltElement> {
        if x.is_zero() {
            return Ok(y.clone());
        }
        if y.is_zero() {
            return Ok(x.clone());
        }
        self.canonicalize(&self.witt.add(&self.lift(x)?, &self.lift(y)?)?)
    }

    pub fn mul(&self, x: &UntiltElement, y: &UntiltElement) -> Result<UntiltElement> {
        if x.is_zero() || y.is_zero() {
            return Ok(self.zero());
        }
        self.canonicalize(&self.witt.mul(&self.lift(x)?, &self.lift(y)?)?)
    }

    pub fn neg(&self, x: &UntiltElement) -> Result<UntiltElement> {
        if x.is_zero() {
            return Ok(x.clone());
        }
        self.canonicalize(&self.witt.neg(&self.lift(x)?)?)
    }

    pub fn sub(&self, x: &UntiltElement, y: &UntiltElement) -> Result<UntiltElement> {
        self.add(x, &self.neg(y)?)
    }

    pub fn pow(&self, x: &UntiltElement, mut k: u64) -> Result<UntiltElement> {
        let mut base = x.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `f ↦ f^#`: Teichmüller lift followed by reduction mod `z`.
    pub fn sharp(&self, f: &CharPSeries) -> Result<UntiltElement> {
        if !f.is_integral() {
            return Err(Error::NotIntegral(f.to_string()));
        }
        self.canonicalize(&self.witt.teichmuller(f)?)
    }

    /// `max_i p^{-i} |a_i|`; below precision when every digit vanishes.
    pub fn norm(&self, x: &UntiltElement) -> Reading {
        let p = self.p();
        for (i, a) in x.digits.iter().enumerate() {
            if let Some(v) = a.valuation() {
                let e = v.checked_add(&PExponent::int(p, i as i64)).expect("small exponent");
                return Reading::Exact(NormValue::Pow(e));
            }
        }
        Reading::Below(NormValue::p_pow(p, self.n() as i64))
    }

    pub fn to_json(&self, x: &UntiltElement) -> UntiltJson {
        UntiltJson {
            digits: x.digits.iter().map(|d| d.to_json()).collect(),
            n: Some(self.n()),
            prec: Some(self.t_prec().to_json()),
        }
    }

    /// `n` and `N` may be omitted; when present they must match the context.
    pub fn from_json(&self, j: &UntiltJson) -> Result<UntiltElement> {
        let n = j.n.unwrap_or(self.n());
        let prec = j.prec.as_ref().map(|e| PExponent::from_json(self.p(), e)).unwrap_or(self.t_prec());
        if n != self.n() || prec != self.t_prec() {
            return Err(Error::PrecisionMismatch(format!(
                "element for (n={n}, N={prec}) used in context (n={}, N={})",
                self.n(),
                self.t_prec()
            )));
        }
        let digits = j.digits.iter().map(CharPSeries::from_json).collect::<Result<Vec<_>>>()?;
        if digits.iter().any(|d| d.p() != self.p()) {
            return Err(Error::Invalid("digit over a different prime".into()));
        }
        self.from_digits(digits.into_iter().map(|d| d.as_exact()).collect())
    }
}

impl UntiltElement {
    pub fn digits(&self) -> &[CharPSeries] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|d| d.is_empty())
    }

    /// `a_0`; satisfies `x ≡ sharp(a_0) mod p`.
    pub fn digit0(&self) -> &CharPSeries {
        &self.digits[0]
    }

    /// Effective `p`-adic length of the stored information.
    pub fn precision(&self) -> usize {
        self.digits.len()
    }
}

impl fmt::Display for UntiltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, d) in self.digits.iter().enumerate() {
            if d.is_empty() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{d}]")?;
            if i > 0 {
                write!(f, "*p^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(p^{})", self.digits.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UntiltJson {
    pub digits: Vec<CharPJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<ExpJson>,
}

pub fn canonicalize(ctx: &UntiltCtx, w: &WittVector) -> Result<UntiltElement> {
    ctx.canonicalize(w)
}

pub fn untilt_add(ctx: &UntiltCtx, x: &UntiltElement, y: &UntiltElement) -> Result<UntiltElement> {
    ctx.add(x, y)
}

pub fn untilt_mul(ctx: &UntiltCtx, x: &UntiltElement, y: &UntiltElement) -> Result<UntiltElement> {
    ctx.mul(x, y)
}

pub fn untilt_norm(ctx: &UntiltCtx, x: &UntiltElement) -> Reading {
    ctx.norm(x)
}

pub fn sharp(ctx: &UntiltCtx, f: &CharPSeries) -> Result<UntiltElement> {
    ctx.sharp(f)
}

pub fn digit0(x: &UntiltElement) -> CharPSeries {
    x.digit0().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32, num: i64, k: u32) -> CharPSeries {
        CharPSeries::t_pow(p, num, k)
    }

    fn digits_of(x: &UntiltElement) -> Vec<CharPSeries> {
        x.digits().to_vec()
    }

    #[test]
    fn sharp_t_is_p() {
        for (p, n) in [(2, 3), (3, 3), (5, 2)] {
            let ctx = UntiltCtx::minimal(p, n).unwrap();
            assert_eq!(ctx.sharp(&t(p, 1, 0)).unwrap(), ctx.p_elem());
            assert_eq!(ctx.sharp(&CharPSeries::one(p)).unwrap(), ctx.one());
        }
    }

    #[test]
    fn small_teichmuller_is_its_own_digit() {
        let ctx = UntiltCtx::minimal(3, 3).unwrap();
        let a = CharPSeries::new(3, [(PExponent::new(3, 1, 1), 2), (PExponent::new(3, 2, 2), 1)], None).unwrap();
        let x = ctx.canonicalize(&ctx.witt().teichmuller(&a).unwrap()).unwrap();
        assert_eq!(x.digits()[0], a);
        assert!(x.digits()[1..].iter().all(|d| d.is_empty()));
        assert!(ctx.canonicalize(&ctx.witt().zero()).unwrap().is_zero());
    }

    #[test]
    fn two_p_in_char_two_model() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let s = ctx.sharp(&t(2, 1, 0)).unwrap();
        let sum = ctx.add(&s, &s).unwrap();
        let want = vec![CharPSeries::zero(2), CharPSeries::zero(2), CharPSeries::one(2)];
        assert_eq!(digits_of(&sum), want);
        assert_eq!(ctx.norm(&sum), Reading::Exact(NormValue::p_pow(2, 2)));
        assert_eq!(ctx.add(&s, &ctx.zero()).unwrap(), s);
    }

    #[test]
    fn sharp_of_root_raised() {
        for p in [2, 3] {
            let ctx = UntiltCtx::minimal(p, 3).unwrap();
            let r = ctx.sharp(&t(p, 1, 1)).unwrap();
            assert_eq!(ctx.pow(&r, p as u64).unwrap(), ctx.p_elem());
        }
    }

    #[test]
    fn norm_examples() {
        let ctx = UntiltCtx::minimal(2, 2).unwrap();
        let x = ctx.from_digits(vec![CharPSeries::zero(2), CharPSeries::one(2)]).unwrap();
        assert_eq!(ctx.norm(&x), Reading::Exact(NormValue::p_pow(2, 1)));
        let y = ctx.from_digits(vec![t(2, 1, 1), CharPSeries::one(2)]).unwrap();
        assert_eq!(ctx.norm(&y), Reading::Exact(NormValue::Pow(PExponent::new(2, 1, 1))));
        assert_eq!(ctx.norm(&ctx.zero()), Reading::Below(NormValue::p_pow(2, 2)));
    }

    #[test]
    fn digit0_examples() {
        let ctx = UntiltCtx::minimal(3, 2).unwrap();
        let f = CharPSeries::new(3, [(PExponent::new(3, 1, 1), 1), (PExponent::int(3, 2), 1)], None).unwrap();
        assert_eq!(digit0(&ctx.sharp(&f).unwrap()), t(3, 1, 1));
        assert!(digit0(&ctx.p_elem()).is_empty());
        let x = ctx.sharp(&t(3, 1, 1)).unwrap();
        let py = ctx.mul(&ctx.p_elem(), &ctx.sharp(&t(3, 2, 1)).unwrap()).unwrap();
        assert_eq!(digit0(&ctx.add(&x, &py).unwrap()), digit0(&x));
    }

    #[test]
    fn minus_one_plus_one() {
        let ctx = UntiltCtx::minimal(2, 3).unwrap();
        let m = ctx.from_int(-1).unwrap();
        assert!(ctx.add(&m, &ctx.one()).unwrap().is_zero());
        // p^n vanishes
        assert!(ctx.from_int(8).unwrap().is_zero());
        assert_eq!(ctx.from_int(2).unwrap(), ctx.p_elem());
    }

    #[test]
    fn insufficient_precision_rejected() {
        let cache = WittPolyCache::get(3, 3, None).unwrap();
        assert!(matches!(
            UntiltCtx::new(cache, 3, PExponent::int(3, 8)),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let ctx = UntiltCtx::minimal(2, 2).unwrap();
        let j = serde_json::to_string(&ctx.to_json(&ctx.p_elem())).unwrap();
        assert_eq!(
            j,
            r#"{"digits":[{"p":2,"terms":[]},{"p":2,"terms":[{"num":0,"kpow":0,"coeff":1}]}],"n":2,"N":{"num":2,"kpow":0}}"#
        );
        let back = ctx.from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, ctx.p_elem());
    }
}
