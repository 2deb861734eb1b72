//! Common interface for the normed rings in the workbench, and the two
//! coefficient fields: the char-`p` field `F` and its untilt `C`.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::charp::{CharPJson, CharPSeries, DEFAULT_TERM_CAP};
use crate::error::{Error, Result};
use crate::untilt::{UntiltCtx, UntiltElement, UntiltJson};
use crate::values::{PExponent, Reading};

pub trait NormedRing: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn p(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn norm(&self, a: &Self::Elem) -> Reading;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b)?)
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Result<Self::Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
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

    /// `‖fg‖ = ‖f‖‖g‖` for all `f, g`.
    fn is_multiplicative(&self) -> bool {
        false
    }

    /// `‖f^n‖ = ‖f‖^n` for all `f`.
    fn is_power_multiplicative(&self) -> bool {
        self.is_multiplicative()
    }

    /// Whether Cauchy sequences of the presentation have limits in it.
    fn is_complete(&self) -> bool {
        false
    }

    fn is_domain(&self) -> bool {
        false
    }

    /// Size of the support (degree for polynomial presentations).
    fn support_size(&self, _a: &Self::Elem) -> Option<usize> {
        None
    }

    /// A proof sketch that `a` is not a unit, when the presentation has one.
    fn unit_obstruction(&self, _a: &Self::Elem) -> Option<String> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Characteristic `p` (coefficients in `F`).
    Tilt,
    /// Characteristic `0` (coefficients in the untilt `C`).
    Untilt,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Tilt => "tilt",
            Side::Untilt => "untilt",
        })
    }
}

/// A complete nonarchimedean field with pseudo-uniformizer of norm `p^{-1}`.
pub trait CoeffField: NormedRing + Clone {
    fn side(&self) -> Side;
    /// Identity on the tilt side, `f ↦ f^#` on the untilt side.
    fn from_tilt(&self, f: &CharPSeries) -> Result<Self::Elem>;
    /// `t` or `p`.
    fn uniformizer(&self) -> Self::Elem;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

#[derive(Clone, Debug)]
pub struct CharPField {
    p: u32,
    prec: Option<PExponent>,
    term_cap: usize,
}

impl CharPField {
    /// Exact arithmetic on finite sums.
    pub fn exact(p: u32) -> Self {
        CharPField { p, prec: None, term_cap: DEFAULT_TERM_CAP }
    }

    /// Results truncated mod `t^N`.
    pub fn truncated(p: u32, prec: PExponent) -> Self {
        CharPField { p, prec: Some(prec), term_cap: DEFAULT_TERM_CAP }
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn prec(&self) -> Option<PExponent> {
        self.prec
    }

    fn cut(&self, f: CharPSeries) -> CharPSeries {
        match self.prec {
            Some(n) => f.truncate(n),
            None => f,
        }
    }
}

impl NormedRing for CharPField {
    type Elem = CharPSeries;

    fn p(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> CharPSeries {
        self.cut(CharPSeries::zero(self.p))
    }
    fn one(&self) -> CharPSeries {
        self.cut(CharPSeries::one(self.p))
    }
    fn add(&self, a: &CharPSeries, b: &CharPSeries) -> Result<CharPSeries> {
        Ok(self.cut(a.add(b)?))
    }
    fn neg(&self, a: &CharPSeries) -> Result<CharPSeries> {
        Ok(a.neg())
    }
    fn mul(&self, a: &CharPSeries, b: &CharPSeries) -> Result<CharPSeries> {
        Ok(self.cut(a.mul_capped(b, self.term_cap)?))
    }
    fn norm(&self, a: &CharPSeries) -> Reading {
        a.norm()
    }
    fn is_zero(&self, a: &CharPSeries) -> bool {
        a.is_empty()
    }
    fn render(&self, a: &CharPSeries) -> String {
        a.to_string()
    }
    fn is_multiplicative(&self) -> bool {
        true
    }
    fn is_complete(&self) -> bool {
        true
    }
    fn is_domain(&self) -> bool {
        self.prec.is_none()
    }
    fn support_size(&self, a: &CharPSeries) -> Option<usize> {
        Some(a.term_count())
    }
}

impl CoeffField for CharPField {
    fn side(&self) -> Side {
        Side::Tilt
    }
    fn from_tilt(&self, f: &CharPSeries) -> Result<CharPSeries> {
        if f.p() != self.p {
            return Err(Error::PrimeMismatch(self.p, f.p()));
        }
        Ok(self.cut(f.clone()))
    }
    fn uniformizer(&self) -> CharPSeries {
        self.cut(CharPSeries::t_pow(self.p, 1, 0))
    }
    fn elem_to_json(&self, a: &CharPSeries) -> Value {
        serde_json::to_value(a.to_json()).expect("series serializes")
    }
    fn elem_from_json(&self, v: &Value) -> Result<CharPSeries> {
        let j: CharPJson = serde_json::from_value(v.clone())?;
        let f = CharPSeries::from_json(&j)?;
        self.from_tilt(&f)
    }
}

#[derive(Clone, Debug)]
pub struct UntiltField {
    ctx: UntiltCtx,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SharpJson {
    sharp: CharPJson,
}

impl UntiltField {
    pub fn new(ctx: UntiltCtx) -> Self {
        UntiltField { ctx }
    }

    pub fn ctx(&self) -> &UntiltCtx {
        &self.ctx
    }
}

impl NormedRing for UntiltField {
    type Elem = UntiltElement;

    fn p(&self) -> u32 {
        self.ctx.p()
    }
    fn zero(&self) -> UntiltElement {
        self.ctx.zero()
    }
    fn one(&self) -> UntiltElement {
        self.ctx.one()
    }
    fn add(&self, a: &UntiltElement, b: &UntiltElement) -> Result<UntiltElement> {
        self.ctx.add(a, b)
    }
    fn neg(&self, a: &UntiltElement) -> Result<UntiltElement> {
        self.ctx.neg(a)
    }
    fn mul(&self, a: &UntiltElement, b: &UntiltElement) -> Result<UntiltElement> {
        self.ctx.mul(a, b)
    }
    fn norm(&self, a: &UntiltElement) -> Reading {
        self.ctx.norm(a)
    }
    fn is_zero(&self, a: &UntiltElement) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &UntiltElement) -> String {
        a.to_string()
    }
    fn is_multiplicative(&self) -> bool {
        true
    }
    fn is_complete(&self) -> bool {
        true
    }
}

impl CoeffField for UntiltField {
    fn side(&self) -> Side {
        Side::Untilt
    }
    fn from_tilt(&self, f: &CharPSeries) -> Result<UntiltElement> {
        self.ctx.sharp(f)
    }
    fn uniformizer(&self) -> UntiltElement {
        self.ctx.p_elem()
    }
    fn elem_to_json(&self, a: &UntiltElement) -> Value {
        serde_json::to_value(self.ctx.to_json(a)).expect("element serializes")
    }
    /// Accepts the digit form, or `{"sharp": <series>}`.
    fn elem_from_json(&self, v: &Value) -> Result<UntiltElement> {
        if v.get("sharp").is_some() {
            let j: SharpJson = serde_json::from_value(v.clone())?;
            return self.ctx.sharp(&CharPSeries::from_json(&j.sharp)?.as_exact());
        }
        let j: UntiltJson = serde_json::from_value(v.clone())?;
        self.ctx.from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::NormValue;

    #[test]
    fn default_pow() {
        let k = CharPField::exact(3);
        let t = k.uniformizer();
        assert_eq!(k.pow(&t, 4).unwrap(), CharPSeries::t_pow(3, 4, 0));
        assert_eq!(k.pow(&t, 0).unwrap(), k.one());
    }

    #[test]
    fn untilt_json_forms() {
        let c = UntiltField::new(UntiltCtx::minimal(2, 3).unwrap());
        let v: Value = serde_json::from_str(r#"{"sharp":{"p":2,"terms":[{"num":1,"kpow":0,"coeff":1}]}}"#).unwrap();
        let x = c.elem_from_json(&v).unwrap();
        assert_eq!(x, c.uniformizer());
        assert_eq!(c.elem_from_json(&c.elem_to_json(&x)).unwrap(), x);
        assert_eq!(c.norm(&x), Reading::Exact(NormValue::p_pow(2, 1)));
    }

    #[test]
    fn truncated_field_cuts() {
        let k = CharPField::truncated(2, PExponent::int(2, 3));
        let t = k.uniformizer();
        assert!(k.pow(&t, 3).unwrap().is_empty());
        assert_eq!(k.norm(&k.pow(&t, 3).unwrap()), Reading::Below(NormValue::p_pow(2, 3)));
    }
}
