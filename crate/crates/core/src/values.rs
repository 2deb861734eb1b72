//! Exact exponents in `Z[1/p]` and multiplicative norm values `p^{-e}`.
//!
//! Every norm in the crate lives in `{0} ∪ p^{Z[1/p]}` and is stored in the
//! log domain, so comparisons and products are exact integer arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational `num / p^kpow`, normalized so that `p ∤ num` when `kpow > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PExponent {
    p: u32,
    num: i64,
    kpow: u32,
}

fn pow_i128(p: u32, k: u32) -> Option<i128> {
    (p as i128).checked_pow(k)
}

impl PExponent {
    pub fn new(p: u32, num: i64, kpow: u32) -> Self {
        let mut e = PExponent { p, num, kpow };
        e.normalize();
        e
    }

    pub fn zero(p: u32) -> Self {
        PExponent { p, num: 0, kpow: 0 }
    }

    pub fn int(p: u32, k: i64) -> Self {
        PExponent { p, num: k, kpow: 0 }
    }

    /// `num / den`, rejected unless `den` is a power of `p` up to sign.
    pub fn from_ratio(p: u32, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num_integer::gcd(num.abs(), den).max(1);
        num /= g;
        den /= g;
        let mut k = 0u32;
        let mut d = den;
        while d % p as i64 == 0 {
            d /= p as i64;
            k += 1;
        }
        if d != 1 {
            return Err(Error::NotInValueGroup { p, num, den });
        }
        Ok(PExponent::new(p, num, k))
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.kpow = 0;
            return;
        }
        while self.kpow > 0 && self.num % self.p as i64 == 0 {
            self.num /= self.p as i64;
            self.kpow -= 1;
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn kpow(&self) -> u32 {
        self.kpow
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_integer(&self) -> bool {
        self.kpow == 0
    }

    fn check_p(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    fn scaled_num(&self, k: u32) -> Option<i64> {
        let f = (self.p as i64).checked_pow(k - self.kpow)?;
        self.num.checked_mul(f)
    }

    /// Exact normalized sum.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let k = self.kpow.max(other.kpow);
        let a = self.scaled_num(k).ok_or(Error::Overflow("exponent add"))?;
        let b = other.scaled_num(k).ok_or(Error::Overflow("exponent add"))?;
        let s = a.checked_add(b).ok_or(Error::Overflow("exponent add"))?;
        Ok(PExponent::new(self.p, s, k))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Product of two exponents (used for `r^ν` with both in `Z[1/p]`).
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_p(other)?;
        let n = self
            .num
            .checked_mul(other.num)
            .ok_or(Error::Overflow("exponent mul"))?;
        Ok(PExponent::new(self.p, n, self.kpow + other.kpow))
    }

    pub fn mul_int(&self, k: i64) -> Result<Self> {
        let n = self.num.checked_mul(k).ok_or(Error::Overflow("exponent scale"))?;
        Ok(PExponent::new(self.p, n, self.kpow))
    }

    /// `e / p`, always exact.
    pub fn div_p(&self) -> Self {
        if self.num == 0 {
            return *self;
        }
        PExponent::new(self.p, self.num, self.kpow + 1)
    }

    /// `e · p`.
    pub fn mul_p(&self) -> Result<Self> {
        self.mul_int(self.p as i64)
    }

    pub fn neg(&self) -> Self {
        PExponent { p: self.p, num: -self.num, kpow: self.kpow }
    }

    /// Largest integer `≤ e`.
    pub fn floor(&self) -> i64 {
        let d = (self.p as i64).pow(self.kpow);
        self.num.div_euclid(d)
    }

    pub fn to_ratio(&self) -> Ratio<i128> {
        let d = pow_i128(self.p, self.kpow).expect("exponent denominator fits i128");
        Ratio::new(self.num as i128, d)
    }

    pub fn to_big_ratio(&self) -> Ratio<BigInt> {
        let d = BigInt::from(self.p).pow(self.kpow);
        Ratio::new(BigInt::from(self.num), d)
    }

    pub fn to_json(&self) -> ExpJson {
        ExpJson { num: self.num, kpow: self.kpow }
    }

    pub fn from_json(p: u32, j: &ExpJson) -> Self {
        PExponent::new(p, j.num, j.kpow)
    }
}

impl Ord for PExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.p, other.p, "comparing exponents over different primes");
        if self.kpow == other.kpow {
            return self.num.cmp(&other.num);
        }
        let k = self.kpow.max(other.kpow);
        let lhs = pow_i128(self.p, k - self.kpow).and_then(|f| (self.num as i128).checked_mul(f));
        let rhs = pow_i128(other.p, k - other.kpow).and_then(|f| (other.num as i128).checked_mul(f));
        match (lhs, rhs) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.to_big_ratio().cmp(&other.to_big_ratio()),
        }
    }
}

impl PartialOrd for PExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_ratio(f: &mut fmt::Formatter<'_>, n: i128, d: i128) -> fmt::Result {
    if d == 1 {
        write!(f, "{n}")
    } else {
        write!(f, "{n}/{d}")
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_ratio();
        fmt_ratio(f, *r.numer(), *r.denom())
    }
}

/// Wire form of an exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpJson {
    pub num: i64,
    pub kpow: u32,
}

/// Multiplicative value: `Zero` or `p^{-e}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NormValue {
    Zero,
    Pow(PExponent),
}

impl NormValue {
    pub fn one(p: u32) -> Self {
        NormValue::Pow(PExponent::zero(p))
    }

    /// `p^{-k}` for integer `k`.
    pub fn p_pow(p: u32, k: i64) -> Self {
        NormValue::Pow(PExponent::int(p, k))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn exponent(&self) -> Option<PExponent> {
        match self {
            NormValue::Zero => None,
            NormValue::Pow(e) => Some(*e),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        norm_mul(self, other)
    }

    pub fn sup(&self, other: &Self) -> Result<Self> {
        norm_max(self, other)
    }

    /// `self^ν` for an exponent `ν ≥ 0`; `0^0 = 1`.
    pub fn pow_exp(&self, nu: &PExponent) -> Result<Self> {
        match self {
            NormValue::Zero if nu.is_zero() => Ok(NormValue::one(nu.p())),
            NormValue::Zero => Ok(NormValue::Zero),
            NormValue::Pow(e) => Ok(NormValue::Pow(e.checked_mul(nu)?)),
        }
    }

    pub fn pow_int(&self, k: u64) -> Result<Self> {
        match self {
            NormValue::Zero if k == 0 => Err(Error::Invalid("0^0 without ambient prime".into())),
            NormValue::Zero => Ok(NormValue::Zero),
            NormValue::Pow(e) => Ok(NormValue::Pow(e.mul_int(k as i64)?)),
        }
    }

    pub fn to_ext(&self) -> ExtNorm {
        match self {
            NormValue::Zero => ExtNorm::Zero,
            NormValue::Pow(e) => ExtNorm::Pow(e.to_ratio()),
        }
    }

    pub fn to_json(&self) -> NormJson {
        match self {
            NormValue::Zero => NormJson { zero: Some(true), exp: None },
            NormValue::Pow(e) => NormJson { zero: None, exp: Some(e.to_json()) },
        }
    }

    pub fn from_json(p: u32, j: &NormJson) -> Result<Self> {
        match (j.zero, &j.exp) {
            (Some(true), None) => Ok(NormValue::Zero),
            (None | Some(false), Some(e)) => Ok(NormValue::Pow(PExponent::from_json(p, e))),
            _ => Err(Error::Invalid("norm value needs exactly one of zero/exp".into())),
        }
    }

    /// Renders as `p^(-e)` with the ambient prime, never as a decimal.
    pub fn render(&self, p: u32) -> String {
        match self {
            NormValue::Zero => "0".into(),
            NormValue::Pow(e) if e.is_zero() => "1".into(),
            NormValue::Pow(e) => format!("{p}^({})", e.neg()),
        }
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Zero, NormValue::Zero) => Ordering::Equal,
            (NormValue::Zero, _) => Ordering::Less,
            (_, NormValue::Zero) => Ordering::Greater,
            (NormValue::Pow(a), NormValue::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exp: Option<ExpJson>,
}

pub fn exp_add(a: &PExponent, b: &PExponent) -> Result<PExponent> {
    a.checked_add(b)
}

pub fn norm_mul(a: &NormValue, b: &NormValue) -> Result<NormValue> {
    match (a, b) {
        (NormValue::Zero, _) | (_, NormValue::Zero) => Ok(NormValue::Zero),
        (NormValue::Pow(x), NormValue::Pow(y)) => Ok(NormValue::Pow(x.checked_add(y)?)),
    }
}

pub fn norm_max(a: &NormValue, b: &NormValue) -> Result<NormValue> {
    if let (NormValue::Pow(x), NormValue::Pow(y)) = (a, b) {
        if x.p() != y.p() {
            return Err(Error::PrimeMismatch(x.p(), y.p()));
        }
    }
    Ok(std::cmp::max(*a, *b))
}

/// Exponent carrier for values outside the value group: `p^{-r}` with `r ∈ Q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExtNorm {
    Zero,
    Pow(Ratio<i128>),
}

impl ExtNorm {
    pub fn render(&self, p: u32) -> String {
        match self {
            ExtNorm::Zero => "0".into(),
            ExtNorm::Pow(r) if r.is_zero() => "1".into(),
            ExtNorm::Pow(r) => {
                let r = -r;
                if r.denom() == &1 {
                    format!("{p}^({})", r.numer())
                } else {
                    format!("{p}^({}/{})", r.numer(), r.denom())
                }
            }
        }
    }

    /// Back into the value group when the exponent has a `p`-power denominator.
    pub fn to_norm(&self, p: u32) -> Option<NormValue> {
        match self {
            ExtNorm::Zero => Some(NormValue::Zero),
            ExtNorm::Pow(r) => {
                let n = i64::try_from(*r.numer()).ok()?;
                let d = i64::try_from(*r.denom()).ok()?;
                PExponent::from_ratio(p, n, d).ok().map(NormValue::Pow)
            }
        }
    }
}

impl Ord for ExtNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNorm::Zero, ExtNorm::Zero) => Ordering::Equal,
            (ExtNorm::Zero, _) => Ordering::Less,
            (_, ExtNorm::Zero) => Ordering::Greater,
            (ExtNorm::Pow(a), ExtNorm::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for ExtNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of `‖f‖^{1/n}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NthRoot {
    Exact(NormValue),
    /// Exponent `e/n` left `Z[1/p]`; comparisons stay exact.
    Inexact(Ratio<i128>),
}

impl NthRoot {
    pub fn to_ext(&self) -> ExtNorm {
        match self {
            NthRoot::Exact(v) => v.to_ext(),
            NthRoot::Inexact(r) => ExtNorm::Pow(*r),
        }
    }

    pub fn in_value_group(&self) -> bool {
        matches!(self, NthRoot::Exact(_))
    }
}

pub fn norm_nth_root(a: &NormValue, n: u64) -> Result<NthRoot> {
    if n == 0 {
        return Err(Error::Invalid("root index must be positive".into()));
    }
    match a {
        NormValue::Zero => Ok(NthRoot::Exact(NormValue::Zero)),
        NormValue::Pow(e) => {
            let r = e.to_ratio() / Ratio::from_integer(n as i128);
            match ExtNorm::Pow(r).to_norm(e.p()) {
                Some(v) => Ok(NthRoot::Exact(v)),
                None => Ok(NthRoot::Inexact(r)),
            }
        }
    }
}

/// A norm reading at finite precision: exact, or only bounded above.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reading {
    Exact(NormValue),
    /// Indistinguishable from zero; the true value is at most the bound.
    Below(NormValue),
}

impl Reading {
    pub fn exact(&self) -> Option<NormValue> {
        match self {
            Reading::Exact(v) => Some(*v),
            Reading::Below(_) => None,
        }
    }

    /// Upper bound for the true value.
    pub fn bound(&self) -> NormValue {
        match self {
            Reading::Exact(v) | Reading::Below(v) => *v,
        }
    }

    /// Exact value, or zero when below precision.
    pub fn lossy(&self) -> NormValue {
        match self {
            Reading::Exact(v) => *v,
            Reading::Below(_) => NormValue::Zero,
        }
    }

    pub fn is_below(&self) -> bool {
        matches!(self, Reading::Below(_))
    }

    pub fn max(&self, other: &Reading) -> Reading {
        match (self, other) {
            (Reading::Exact(a), Reading::Exact(b)) => Reading::Exact(std::cmp::max(*a, *b)),
            (Reading::Exact(a), Reading::Below(b)) | (Reading::Below(b), Reading::Exact(a)) => {
                if a >= b {
                    Reading::Exact(*a)
                } else {
                    Reading::Below(*b)
                }
            }
            (Reading::Below(a), Reading::Below(b)) => Reading::Below(std::cmp::max(*a, *b)),
        }
    }

    pub fn scale(&self, by: &NormValue) -> Result<Reading> {
        Ok(match self {
            Reading::Exact(v) => Reading::Exact(v.mul(by)?),
            Reading::Below(v) => match by {
                NormValue::Zero => Reading::Exact(NormValue::Zero),
                _ => Reading::Below(v.mul(by)?),
            },
        })
    }

    pub fn render(&self, p: u32) -> String {
        match self {
            Reading::Exact(v) => v.render(p),
            Reading::Below(b) => format!("<= {} (below precision)", b.render(p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(p: u32, n: i64, k: u32) -> PExponent {
        PExponent::new(p, n, k)
    }

    #[test]
    fn add_examples() {
        assert_eq!(exp_add(&e(2, 1, 1), &e(2, 1, 1)).unwrap(), PExponent::int(2, 1));
        let a = e(3, 7, 2);
        assert_eq!(exp_add(&PExponent::zero(3), &a).unwrap(), a);
        assert_eq!(exp_add(&e(2, 3, 2), &e(2, 1, 1)).unwrap(), e(2, 5, 2));
    }

    #[test]
    fn normalization() {
        let x = e(2, 4, 3);
        assert_eq!((x.num(), x.kpow()), (1, 1));
        assert_eq!(e(3, 0, 5).kpow(), 0);
        assert!(PExponent::from_ratio(2, 1, 3).is_err());
        assert_eq!(PExponent::from_ratio(2, 6, 8).unwrap(), e(2, 3, 2));
        assert_eq!(PExponent::from_ratio(3, 2, -9).unwrap(), e(3, -2, 2));
    }

    #[test]
    fn mul_examples() {
        let one = NormValue::p_pow(2, 1);
        let half = NormValue::Pow(e(2, 1, 1));
        assert_eq!(norm_mul(&one, &half).unwrap(), NormValue::Pow(e(2, 3, 1)));
        assert_eq!(norm_mul(&NormValue::Zero, &half).unwrap(), NormValue::Zero);
        assert_eq!(
            norm_mul(&NormValue::p_pow(5, -1), &NormValue::p_pow(5, 1)).unwrap(),
            NormValue::one(5)
        );
    }

    #[test]
    fn max_examples() {
        let a = NormValue::p_pow(3, 1);
        let b = NormValue::p_pow(3, 2);
        assert_eq!(norm_max(&a, &b).unwrap(), a);
        assert_eq!(norm_max(&NormValue::Zero, &b).unwrap(), b);
        assert!(norm_max(&NormValue::p_pow(2, 1), &NormValue::p_pow(3, 1)).is_err());
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(
            norm_nth_root(&NormValue::p_pow(2, 2), 2).unwrap(),
            NthRoot::Exact(NormValue::p_pow(2, 1))
        );
        assert_eq!(
            norm_nth_root(&NormValue::Zero, 7).unwrap(),
            NthRoot::Exact(NormValue::Zero)
        );
        // 1/3 has no 2-power denominator
        assert_eq!(
            norm_nth_root(&NormValue::p_pow(2, 1), 3).unwrap(),
            NthRoot::Inexact(Ratio::new(1, 3))
        );
        assert_eq!(
            norm_nth_root(&NormValue::p_pow(2, 1), 4).unwrap(),
            NthRoot::Exact(NormValue::Pow(e(2, 1, 2)))
        );
    }

    #[test]
    fn render() {
        assert_eq!(NormValue::Pow(e(2, 3, 1)).render(2), "2^(-3/2)");
        assert_eq!(NormValue::Zero.render(2), "0");
        assert_eq!(NormValue::one(3).render(3), "1");
        assert_eq!(NormValue::p_pow(3, -1).render(3), "3^(1)");
        assert_eq!(
            Reading::Below(NormValue::p_pow(2, 8)).render(2),
            "<= 2^(-8) (below precision)"
        );
        assert_eq!(ExtNorm::Pow(Ratio::new(1, 3)).render(2), "2^(-1/3)");
    }

    #[test]
    fn json_shapes() {
        let v = NormValue::Pow(e(2, 3, 1));
        let s = serde_json::to_string(&v.to_json()).unwrap();
        assert_eq!(s, r#"{"exp":{"num":3,"kpow":1}}"#);
        assert_eq!(serde_json::to_string(&NormValue::Zero.to_json()).unwrap(), r#"{"zero":true}"#);
        let back: NormJson = serde_json::from_str(&s).unwrap();
        assert_eq!(NormValue::from_json(2, &back).unwrap(), v);
    }

    fn arb_exp(p: u32) -> impl Strategy<Value = PExponent> {
        (-500i64..500, 0u32..5).prop_map(move |(n, k)| PExponent::new(p, n, k))
    }

    proptest! {
        #[test]
        fn ordered_group(a in arb_exp(3), b in arb_exp(3), c in arb_exp(3)) {
            let ab = a.checked_add(&b).unwrap();
            prop_assert_eq!(ab, b.checked_add(&a).unwrap());
            prop_assert_eq!(
                ab.checked_add(&c).unwrap(),
                a.checked_add(&b.checked_add(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.checked_add(&a.neg()).unwrap(), PExponent::zero(3));
            if a <= b {
                prop_assert!(a.checked_add(&c).unwrap() <= b.checked_add(&c).unwrap());
            }
            prop_assert_eq!(a.cmp(&b), a.to_ratio().cmp(&b.to_ratio()));
        }

        #[test]
        fn norm_monoid(a in arb_exp(2), b in arb_exp(2), zero_a in any::<bool>()) {
            let x = if zero_a { NormValue::Zero } else { NormValue::Pow(a) };
            let y = NormValue::Pow(b);
            prop_assert_eq!(norm_mul(&x, &y).unwrap(), norm_mul(&y, &x).unwrap());
            prop_assert_eq!(norm_mul(&x, &NormValue::one(2)).unwrap(), x);
            prop_assert_eq!(norm_max(&x, &x).unwrap(), x);
            prop_assert_eq!(norm_max(&x, &NormValue::Zero).unwrap(), x);
        }
    }
}
