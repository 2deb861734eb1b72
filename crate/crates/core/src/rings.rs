//! Small normed rings used as test beds: products of fields, dual numbers,
//! `K[T]` with the `c`-norm, and finite rings given by tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{CoeffField, NormedRing};
use crate::values::{NormJson, NormValue, Reading};

/// `K^k` with the sup norm.
#[derive(Clone, Debug)]
pub struct ProductOfFields<K> {
    field: K,
    k: usize,
}

impl<K: CoeffField> ProductOfFields<K> {
    pub fn new(field: K, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("empty product".into()));
        }
        Ok(ProductOfFields { field, k })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `e_i`, the `i`-th idempotent.
    pub fn idempotent(&self, i: usize) -> Vec<K::Elem> {
        (0..self.k).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect()
    }

    pub fn elem(&self, xs: Vec<K::Elem>) -> Result<Vec<K::Elem>> {
        if xs.len() != self.k {
            return Err(Error::Invalid(format!("{} coordinates for a product of {}", xs.len(), self.k)));
        }
        Ok(xs)
    }

    pub fn coordinate_norm(&self, i: usize, x: &[K::Elem]) -> Result<Reading> {
        x.get(i)
            .map(|c| self.field.norm(c))
            .ok_or_else(|| Error::DescriptorMismatch(format!("coordinate {i} of {}", self.k)))
    }

    fn zip(&self, a: &[K::Elem], b: &[K::Elem], f: impl Fn(&K::Elem, &K::Elem) -> Result<K::Elem>) -> Result<Vec<K::Elem>> {
        a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
    }
}

impl<K: CoeffField> NormedRing for ProductOfFields<K> {
    type Elem = Vec<K::Elem>;

    fn p(&self) -> u32 {
        self.field.p()
    }
    fn zero(&self) -> Self::Elem {
        vec![self.field.zero(); self.k]
    }
    fn one(&self) -> Self::Elem {
        vec![self.field.one(); self.k]
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.zip(a, b, |x, y| self.field.add(x, y))
    }
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        a.iter().map(|x| self.field.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.zip(a, b, |x, y| self.field.mul(x, y))
    }
    fn norm(&self, a: &Self::Elem) -> Reading {
        a.iter().fold(Reading::Exact(NormValue::Zero), |acc, x| acc.max(&self.field.norm(x)))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.field.is_zero(x))
    }
    fn render(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.field.render(x)).collect();
        format!("({})", parts.join(", "))
    }
    fn is_power_multiplicative(&self) -> bool {
        self.field.is_multiplicative()
    }
    fn is_complete(&self) -> bool {
        self.field.is_complete()
    }
    fn is_domain(&self) -> bool {
        self.k == 1 && self.field.is_domain()
    }
}

/// `K[ε]/(ε²)` with `‖a + bε‖ = max(|a|, p·|b|)`.
#[derive(Clone, Debug)]
pub struct DualNumbers<K> {
    field: K,
}

impl<K: CoeffField> DualNumbers<K> {
    pub fn new(field: K) -> Self {
        DualNumbers { field }
    }

    pub fn epsilon(&self) -> (K::Elem, K::Elem) {
        (self.field.zero(), self.field.one())
    }

    pub fn field(&self) -> &K {
        &self.field
    }
}

impl<K: CoeffField> NormedRing for DualNumbers<K> {
    type Elem = (K::Elem, K::Elem);

    fn p(&self) -> u32 {
        self.field.p()
    }
    fn zero(&self) -> Self::Elem {
        (self.field.zero(), self.field.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.field.one(), self.field.zero())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.field.add(&a.0, &b.0)?, self.field.add(&a.1, &b.1)?))
    }
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        Ok((self.field.neg(&a.0)?, self.field.neg(&a.1)?))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let f = &self.field;
        Ok((f.mul(&a.0, &b.0)?, f.add(&f.mul(&a.0, &b.1)?, &f.mul(&a.1, &b.0)?)?))
    }
    fn norm(&self, a: &Self::Elem) -> Reading {
        let p_up = NormValue::p_pow(self.p(), -1);
        let b = self.field.norm(&a.1).scale(&p_up).expect("small exponent");
        self.field.norm(&a.0).max(&b)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.field.is_zero(&a.0) && self.field.is_zero(&a.1)
    }
    fn render(&self, a: &Self::Elem) -> String {
        format!("({}) + ({})*eps", self.field.render(&a.0), self.field.render(&a.1))
    }
    fn is_complete(&self) -> bool {
        self.field.is_complete()
    }
}

/// `K[T]` with `‖Σ a_i T^i‖ = max |a_i| c^i`, `0 < c < 1`. Elements are
/// coefficient vectors without trailing zeros.
#[derive(Clone, Debug)]
pub struct PolyGaussC<K> {
    field: K,
    c: NormValue,
}

impl<K: CoeffField> PolyGaussC<K> {
    pub fn new(field: K, c: NormValue) -> Result<Self> {
        if c.is_zero() || c >= NormValue::one(field.p()) {
            return Err(Error::Invalid(format!("c = {} must satisfy 0 < c < 1", c.render(field.p()))));
        }
        Ok(PolyGaussC { field, c })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn c(&self) -> NormValue {
        self.c
    }

    pub fn poly(&self, coeffs: Vec<K::Elem>) -> Vec<K::Elem> {
        let mut v = coeffs;
        while v.last().is_some_and(|x| self.field.is_zero(x)) {
            v.pop();
        }
        v
    }

    /// `T`.
    pub fn t(&self) -> Vec<K::Elem> {
        vec![self.field.zero(), self.field.one()]
    }

    /// `T − λ`.
    pub fn linear(&self, lambda: &K::Elem) -> Result<Vec<K::Elem>> {
        Ok(self.poly(vec![self.field.neg(lambda)?, self.field.one()]))
    }

    pub fn degree(&self, f: &[K::Elem]) -> Option<usize> {
        f.len().checked_sub(1)
    }

    /// Horner evaluation at `λ`.
    pub fn eval(&self, f: &[K::Elem], lambda: &K::Elem) -> Result<K::Elem> {
        let mut acc = self.field.zero();
        for a in f.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, lambda)?, a)?;
        }
        Ok(acc)
    }

    /// `max |a_i| r^i`.
    pub fn radius_norm(&self, f: &[K::Elem], r: &NormValue) -> Result<Reading> {
        let mut acc = Reading::Exact(NormValue::Zero);
        for (i, a) in f.iter().enumerate() {
            let s = match r {
                NormValue::Zero if i == 0 => NormValue::one(self.p()),
                _ => r.pow_int(i as u64)?,
            };
            acc = acc.max(&self.field.norm(a).scale(&s)?);
        }
        Ok(acc)
    }
}

impl<K: CoeffField> NormedRing for PolyGaussC<K> {
    type Elem = Vec<K::Elem>;

    fn p(&self) -> u32 {
        self.field.p()
    }
    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        self.poly(vec![self.field.one()])
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let n = a.len().max(b.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.poly(v))
    }
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.poly(a.iter().map(|x| self.field.neg(x)).collect::<Result<_>>()?))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let mut v = vec![self.field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = self.field.add(&v[i + j], &self.field.mul(x, y)?)?;
            }
        }
        Ok(self.poly(v))
    }
    fn norm(&self, a: &Self::Elem) -> Reading {
        self.radius_norm(a, &self.c).expect("c is a valid radius")
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn render(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, x)| !self.field.is_zero(x))
            .map(|(i, x)| match i {
                0 => format!("({})", self.field.render(x)),
                _ => format!("({})*T^{i}", self.field.render(x)),
            })
            .collect();
        parts.join(" + ")
    }
    fn is_multiplicative(&self) -> bool {
        self.field.is_multiplicative()
    }
    fn is_domain(&self) -> bool {
        self.field.is_domain()
    }
    fn support_size(&self, a: &Self::Elem) -> Option<usize> {
        Some(a.len())
    }
    fn unit_obstruction(&self, a: &Self::Elem) -> Option<String> {
        match self.degree(a) {
            Some(d) if d >= 1 => Some(format!("degree {d} >= 1: units of K[T] are the nonzero constants")),
            None => Some("zero is not a unit".into()),
            _ => None,
        }
    }
}

/// A finite commutative ring given by tables, with a norm table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomTable {
    p: u32,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    norms: Vec<NormValue>,
    negs: Vec<usize>,
    zero: usize,
    one: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTableJson {
    pub p: u32,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub norms: Vec<NormJson>,
    pub zero: usize,
    pub one: usize,
}

impl CustomTable {
    /// Validates closure, identities and the seminorm axioms.
    pub fn new(
        p: u32,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        norms: Vec<NormValue>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = norms.len();
        let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|x| *x < n));
        if n == 0 || !square(&add) || !square(&mul) || zero >= n || one >= n {
            return Err(Error::Invalid("tables must be square over the element set".into()));
        }
        let bad = |what: &str| Err(Error::Invalid(format!("table violates {what}")));
        if !norms[zero].is_zero() {
            return bad("|0| = 0");
        }
        let mut negs = vec![0; n];
        for a in 0..n {
            if add[a][zero] != a || mul[a][one] != a {
                return bad("identities");
            }
            match (0..n).find(|b| add[a][*b] == zero) {
                Some(b) => negs[a] = b,
                None => return bad("additive inverses"),
            }
            for b in 0..n {
                if add[a][b] != add[b][a] || mul[a][b] != mul[b][a] {
                    return bad("commutativity");
                }
                if norms[add[a][b]] > std::cmp::max(norms[a], norms[b]) {
                    return bad("the ultrametric inequality");
                }
                if norms[mul[a][b]] > norms[a].mul(&norms[b])? {
                    return bad("submultiplicativity");
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]]
                        || mul[mul[a][b]][c] != mul[a][mul[b][c]]
                        || mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]
                    {
                        return bad("ring axioms");
                    }
                }
            }
        }
        if n > 1 && norms[one] != NormValue::one(p) {
            return bad("|1| = 1");
        }
        Ok(CustomTable { p, add, mul, norms, negs, zero, one })
    }

    /// `Z/p^k` with `|x| = p^{-v_p(x)}`.
    pub fn zmod(p: u32, k: u32) -> Result<Self> {
        let m = (p as usize).pow(k);
        let add = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        let mul = (0..m).map(|a| (0..m).map(|b| (a * b) % m).collect()).collect();
        let norms = (0..m)
            .map(|a| {
                if a == 0 {
                    return NormValue::Zero;
                }
                let mut v = 0;
                let mut x = a;
                while x % p as usize == 0 {
                    x /= p as usize;
                    v += 1;
                }
                NormValue::p_pow(p, v)
            })
            .collect();
        CustomTable::new(p, add, mul, norms, 0, 1 % m)
    }

    pub fn size(&self) -> usize {
        self.norms.len()
    }

    pub fn norms(&self) -> &[NormValue] {
        &self.norms
    }

    pub fn to_json(&self) -> CustomTableJson {
        CustomTableJson {
            p: self.p,
            add: self.add.clone(),
            mul: self.mul.clone(),
            norms: self.norms.iter().map(|v| v.to_json()).collect(),
            zero: self.zero,
            one: self.one,
        }
    }

    pub fn from_json(j: &CustomTableJson) -> Result<Self> {
        let norms = j.norms.iter().map(|v| NormValue::from_json(j.p, v)).collect::<Result<_>>()?;
        CustomTable::new(j.p, j.add.clone(), j.mul.clone(), norms, j.zero, j.one)
    }

    fn check(&self, a: usize) -> Result<usize> {
        if a < self.size() {
            Ok(a)
        } else {
            Err(Error::Invalid(format!("element {a} outside table of size {}", self.size())))
        }
    }
}

impl NormedRing for CustomTable {
    type Elem = usize;

    fn p(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, a: &usize, b: &usize) -> Result<usize> {
        Ok(self.add[self.check(*a)?][self.check(*b)?])
    }
    fn neg(&self, a: &usize) -> Result<usize> {
        Ok(self.negs[self.check(*a)?])
    }
    fn mul(&self, a: &usize, b: &usize) -> Result<usize> {
        Ok(self.mul[self.check(*a)?][self.check(*b)?])
    }
    fn norm(&self, a: &usize) -> Reading {
        Reading::Exact(self.norms.get(*a).copied().unwrap_or(NormValue::Zero))
    }
    fn is_zero(&self, a: &usize) -> bool {
        *a == self.zero
    }
    fn render(&self, a: &usize) -> String {
        format!("#{a}")
    }
    fn is_complete(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charp::CharPSeries;
    use crate::gauss::spectral_seminorm;
    use crate::ring::{CharPField, UntiltField};
    use crate::untilt::UntiltCtx;
    use crate::values::ExtNorm;

    #[test]
    fn dual_epsilon_spectral_zero() {
        let r = DualNumbers::new(CharPField::exact(2));
        let eps = r.epsilon();
        assert_eq!(r.norm(&eps), Reading::Exact(NormValue::p_pow(2, -1)));
        let rep = spectral_seminorm(&r, &eps, 8).unwrap();
        assert_eq!(rep.bound, ExtNorm::Zero);
        assert_eq!(rep.attained_at, 2);
        assert!(rep.is_monotone());
    }

    #[test]
    fn zmod_nilpotent() {
        let r = CustomTable::zmod(3, 2).unwrap();
        assert_eq!(r.norm(&3), Reading::Exact(NormValue::p_pow(3, 1)));
        assert_eq!(spectral_seminorm(&r, &3, 4).unwrap().bound, ExtNorm::Zero);
        assert_eq!(r.neg(&4).unwrap(), 5);
        let j = r.to_json();
        assert_eq!(CustomTable::from_json(&j).unwrap(), r);
    }

    #[test]
    fn bad_table_rejected() {
        let r = CustomTable::zmod(2, 2).unwrap();
        let mut j = r.to_json();
        j.norms[2] = NormValue::one(2).to_json();
        j.norms[1] = NormValue::p_pow(2, 1).to_json();
        assert!(CustomTable::from_json(&j).is_err());
    }

    #[test]
    fn poly_c_norm() {
        let k = UntiltField::new(UntiltCtx::minimal(2, 3).unwrap());
        let r = PolyGaussC::new(k.clone(), NormValue::p_pow(2, 1)).unwrap();
        let t = r.t();
        assert_eq!(r.norm(&t), Reading::Exact(NormValue::p_pow(2, 1)));
        let p = k.uniformizer();
        let tp = r.linear(&p).unwrap();
        assert!(k.is_zero(&r.eval(&tp, &p).unwrap()));
        assert!(r.unit_obstruction(&r.add(&r.one(), &t).unwrap()).is_some());
        assert!(r.unit_obstruction(&r.one()).is_none());
        assert!(PolyGaussC::new(k, NormValue::one(2)).is_err());
    }

    #[test]
    fn product_norm() {
        let r = ProductOfFields::new(CharPField::exact(2), 2).unwrap();
        let x = vec![CharPSeries::t_pow(2, 1, 0), CharPSeries::t_pow(2, 3, 1)];
        assert_eq!(r.norm(&x), Reading::Exact(NormValue::p_pow(2, 1)));
        assert_eq!(r.mul(&r.idempotent(0), &r.idempotent(1)).unwrap(), r.zero());
    }
}
