//! Perfectoid Gauss algebras `K⟨X_1^{1/p^∞}, …, X_d^{1/p^∞}⟩` (finite support),
//! the seminorm descriptors, and the spectral seminorm engine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::charp::{CharPJson, CharPSeries, DEFAULT_TERM_CAP};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::ring::{CoeffField, NormedRing};
use crate::values::{norm_nth_root, ExpJson, ExtNorm, NormJson, NormValue, PExponent, Reading};

/// Multi-exponent `ν ∈ (Z[1/p]_{≥0})^d`.
pub type MultiExp = Vec<PExponent>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussElement<E> {
    d: usize,
    terms: BTreeMap<MultiExp, E>,
}

impl<E> GaussElement<E> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiExp, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, nu: &MultiExp) -> Option<&E> {
        self.terms.get(nu)
    }
}

#[derive(Clone, Debug)]
pub struct GaussAlgebra<K> {
    field: K,
    d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussTermJson {
    pub exp: Vec<ExpJson>,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussJson {
    pub d: usize,
    pub terms: Vec<GaussTermJson>,
}

impl<K: CoeffField> GaussAlgebra<K> {
    pub fn new(field: K, d: usize) -> Self {
        GaussAlgebra { field, d }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    fn check_exp(&self, nu: &MultiExp) -> Result<()> {
        if nu.len() != self.d {
            return Err(Error::Invalid(format!("exponent of length {} in {} variables", nu.len(), self.d)));
        }
        for e in nu {
            if e.p() != self.p() {
                return Err(Error::PrimeMismatch(self.p(), e.p()));
            }
            if e.is_negative() {
                return Err(Error::Invalid(format!("negative exponent {e}")));
            }
        }
        Ok(())
    }

    fn check(&self, f: &GaussElement<K::Elem>) -> Result<()> {
        if f.d != self.d {
            return Err(Error::Invalid(format!("element in {} variables, algebra has {}", f.d, self.d)));
        }
        Ok(())
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (MultiExp, K::Elem)>) -> Result<GaussElement<K::Elem>> {
        let mut map: BTreeMap<MultiExp, K::Elem> = BTreeMap::new();
        for (nu, c) in terms {
            self.check_exp(&nu)?;
            let c = match map.remove(&nu) {
                Some(old) => self.field.add(&old, &c)?,
                None => c,
            };
            map.insert(nu, c);
        }
        map.retain(|_, c| !self.field.is_zero(c));
        Ok(GaussElement { d: self.d, terms: map })
    }

    pub fn zero_exp(&self) -> MultiExp {
        vec![PExponent::zero(self.p()); self.d]
    }

    pub fn constant(&self, c: K::Elem) -> GaussElement<K::Elem> {
        self.from_terms([(self.zero_exp(), c)]).expect("zero exponent is valid")
    }

    pub fn monomial(&self, c: K::Elem, nu: MultiExp) -> Result<GaussElement<K::Elem>> {
        self.from_terms([(nu, c)])
    }

    /// `X_i^e`.
    pub fn var_pow(&self, i: usize, e: PExponent) -> Result<GaussElement<K::Elem>> {
        if i >= self.d {
            return Err(Error::Invalid(format!("variable {i} out of range")));
        }
        let mut nu = self.zero_exp();
        nu[i] = e;
        self.monomial(self.field.one(), nu)
    }

    pub fn var(&self, i: usize) -> Result<GaussElement<K::Elem>> {
        self.var_pow(i, PExponent::int(self.p(), 1))
    }

    pub fn to_json(&self, f: &GaussElement<K::Elem>) -> GaussJson {
        GaussJson {
            d: f.d,
            terms: f
                .terms
                .iter()
                .map(|(nu, c)| GaussTermJson {
                    exp: nu.iter().map(|e| e.to_json()).collect(),
                    coeff: self.field.elem_to_json(c),
                })
                .collect(),
        }
    }

    pub fn from_json(&self, j: &GaussJson) -> Result<GaussElement<K::Elem>> {
        if j.d != self.d {
            return Err(Error::Invalid(format!("element in {} variables, algebra has {}", j.d, self.d)));
        }
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let nu = t.exp.iter().map(|e| PExponent::from_json(self.p(), e)).collect();
                Ok((nu, self.field.elem_from_json(&t.coeff)?))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_terms(terms)
    }
}

impl<K: CoeffField> NormedRing for GaussAlgebra<K> {
    type Elem = GaussElement<K::Elem>;

    fn p(&self) -> u32 {
        self.field.p()
    }

    fn zero(&self) -> Self::Elem {
        GaussElement { d: self.d, terms: BTreeMap::new() }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.field.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.check(a)?;
        self.check(b)?;
        let terms = a.terms.iter().chain(b.terms.iter()).map(|(nu, c)| (nu.clone(), c.clone()));
        self.from_terms(terms)
    }

    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.check(a)?;
        let terms = a
            .terms
            .iter()
            .map(|(nu, c)| Ok((nu.clone(), self.field.neg(c)?)))
            .collect::<Result<Vec<_>>>()?;
        self.from_terms(terms)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.check(a)?;
        self.check(b)?;
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (nu, c) in &a.terms {
            for (mu, e) in &b.terms {
                let sum = nu.iter().zip(mu).map(|(x, y)| x.checked_add(y)).collect::<Result<Vec<_>>>()?;
                terms.push((sum, self.field.mul(c, e)?));
            }
        }
        if terms.len() > DEFAULT_TERM_CAP * 16 {
            return Err(Error::TermCapExceeded { count: terms.len(), cap: DEFAULT_TERM_CAP * 16 });
        }
        self.from_terms(terms)
    }

    /// Gauss norm `max_ν |a_ν|`.
    fn norm(&self, a: &Self::Elem) -> Reading {
        gauss_radius_eval(&self.field, &vec![NormValue::one(self.p()); self.d], a).expect("radius matches algebra")
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }

    fn render(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|(nu, c)| {
                let mono: Vec<String> = nu
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(i, e)| format!("X{}^({e})", i + 1))
                    .collect();
                if mono.is_empty() {
                    format!("({})", self.field.render(c))
                } else {
                    format!("({})*{}", self.field.render(c), mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn is_multiplicative(&self) -> bool {
        self.field.is_multiplicative()
    }

    fn is_complete(&self) -> bool {
        self.field.is_complete()
    }

    fn is_domain(&self) -> bool {
        self.field.is_domain()
    }

    fn support_size(&self, a: &Self::Elem) -> Option<usize> {
        Some(a.len())
    }
}

/// Members of the implemented seminorm families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeminormDescriptor {
    /// `φ_r(Σ a_ν X^ν) = max |a_ν| r^ν`.
    GaussRadius(Vec<NormValue>),
    /// Evaluation at a point `μ` with `|μ_i| ≤ 1`, given on the tilt side;
    /// on the untilt side the point is `μ^#`.
    EvalPoint(Vec<CharPSeries>),
    /// `|x_i|` on a product of fields.
    ProductCoordinate(usize),
    /// Explicit value table on a finite ring.
    CustomTable(Vec<NormValue>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DescriptorJson {
    GaussRadius { r: Vec<NormJson> },
    EvalPoint { point: Vec<CharPJson> },
    ProductCoordinate { index: usize },
    CustomTable { values: Vec<NormJson> },
}

impl SeminormDescriptor {
    pub fn gauss_one(p: u32, d: usize) -> Self {
        SeminormDescriptor::GaussRadius(vec![NormValue::one(p); d])
    }

    pub fn family(&self) -> &'static str {
        match self {
            SeminormDescriptor::GaussRadius(_) => "gauss_radius",
            SeminormDescriptor::EvalPoint(_) => "eval_point",
            SeminormDescriptor::ProductCoordinate(_) => "product_coordinate",
            SeminormDescriptor::CustomTable(_) => "custom_table",
        }
    }

    pub fn to_json(&self) -> DescriptorJson {
        match self {
            SeminormDescriptor::GaussRadius(r) => DescriptorJson::GaussRadius { r: r.iter().map(|v| v.to_json()).collect() },
            SeminormDescriptor::EvalPoint(mu) => {
                DescriptorJson::EvalPoint { point: mu.iter().map(|m| m.to_json()).collect() }
            }
            SeminormDescriptor::ProductCoordinate(i) => DescriptorJson::ProductCoordinate { index: *i },
            SeminormDescriptor::CustomTable(v) => {
                DescriptorJson::CustomTable { values: v.iter().map(|x| x.to_json()).collect() }
            }
        }
    }

    pub fn from_json(p: u32, j: &DescriptorJson) -> Result<Self> {
        Ok(match j {
            DescriptorJson::GaussRadius { r } => {
                SeminormDescriptor::GaussRadius(r.iter().map(|v| NormValue::from_json(p, v)).collect::<Result<_>>()?)
            }
            DescriptorJson::EvalPoint { point } => SeminormDescriptor::EvalPoint(
                point
                    .iter()
                    .map(|m| {
                        let s = CharPSeries::from_json(m)?;
                        if s.p() != p {
                            return Err(Error::PrimeMismatch(p, s.p()));
                        }
                        Ok(s.as_exact())
                    })
                    .collect::<Result<_>>()?,
            ),
            DescriptorJson::ProductCoordinate { index } => SeminormDescriptor::ProductCoordinate(*index),
            DescriptorJson::CustomTable { values } => SeminormDescriptor::CustomTable(
                values.iter().map(|v| NormValue::from_json(p, v)).collect::<Result<_>>()?,
            ),
        })
    }

    /// Human-readable label with exact values.
    pub fn label(&self, p: u32) -> String {
        match self {
            SeminormDescriptor::GaussRadius(r) => {
                let rs: Vec<String> = r.iter().map(|v| v.render(p)).collect();
                format!("phi_r(r=[{}])", rs.join(","))
            }
            SeminormDescriptor::EvalPoint(mu) => {
                let ms: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
                format!("eval([{}])", ms.join(","))
            }
            SeminormDescriptor::ProductCoordinate(i) => format!("coord({i})"),
            SeminormDescriptor::CustomTable(_) => "table".into(),
        }
    }
}

fn gauss_radius_eval<K: CoeffField>(field: &K, r: &[NormValue], f: &GaussElement<K::Elem>) -> Result<Reading> {
    if r.len() != f.d {
        return Err(Error::DescriptorMismatch(format!("radius of length {} on {} variables", r.len(), f.d)));
    }
    let p = field.p();
    let mut acc = Reading::Exact(NormValue::Zero);
    for (nu, c) in &f.terms {
        let mut scale = NormValue::one(p);
        for (ri, e) in r.iter().zip(nu) {
            scale = scale.mul(&ri.pow_exp(e)?)?;
        }
        acc = acc.max(&field.norm(c).scale(&scale)?);
    }
    Ok(acc)
}

/// `μ^ν` in `F` for `ν ∈ Z[1/p]_{≥0}`, using the unique `p`-power roots.
pub fn tilt_power(mu: &CharPSeries, nu: &PExponent) -> Result<CharPSeries> {
    let m = mu.pow(nu.num() as u64, DEFAULT_TERM_CAP)?;
    Ok(m.pth_root_iter(nu.kpow()))
}

fn check_point(mu: &[CharPSeries]) -> Result<()> {
    for m in mu {
        if !m.is_integral() {
            return Err(Error::BoundednessViolation(format!(
                "|{m}| = {} > 1",
                m.norm().render(m.p())
            )));
        }
    }
    Ok(())
}

fn eval_point<K: CoeffField>(field: &K, mu: &[CharPSeries], f: &GaussElement<K::Elem>) -> Result<Reading> {
    if mu.len() != f.d {
        return Err(Error::DescriptorMismatch(format!("point of length {} on {} variables", mu.len(), f.d)));
    }
    check_point(mu)?;
    let p = field.p();
    let mut sum: Option<K::Elem> = None;
    'terms: for (nu, c) in &f.terms {
        let mut m = CharPSeries::one(p);
        for (mi, e) in mu.iter().zip(nu) {
            if e.is_zero() {
                continue;
            }
            if mi.is_empty() {
                continue 'terms;
            }
            m = m.mul(&tilt_power(mi, e)?)?;
        }
        let v = field.mul(c, &field.from_tilt(&m)?)?;
        sum = Some(match sum {
            Some(s) => field.add(&s, &v)?,
            None => v,
        });
    }
    Ok(match sum {
        None => Reading::Exact(NormValue::Zero),
        Some(s) => field.norm(&s),
    })
}

/// `φ(f)` for a descriptor of the Gauss family.
pub fn gauss_eval<K: CoeffField>(
    alg: &GaussAlgebra<K>,
    phi: &SeminormDescriptor,
    f: &GaussElement<K::Elem>,
) -> Result<Reading> {
    alg.check(f)?;
    match phi {
        SeminormDescriptor::GaussRadius(r) => {
            if r.iter().any(|x| *x > NormValue::one(alg.p())) {
                return Err(Error::BoundednessViolation("Gauss radius above 1".into()));
            }
            gauss_radius_eval(&alg.field, r, f)
        }
        SeminormDescriptor::EvalPoint(mu) => eval_point(&alg.field, mu, f),
        other => Err(Error::DescriptorMismatch(format!("{} on a Gauss algebra", other.family()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralEntry {
    pub n: u64,
    pub power_norm: Reading,
    /// `‖f^n‖^{1/n}` (an upper bound when the reading is below precision).
    pub root: ExtNorm,
    pub running_min: ExtNorm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralReport {
    pub bound: ExtNorm,
    /// First `n` attaining the bound.
    pub attained_at: u64,
    pub entries: Vec<SpectralEntry>,
}

impl SpectralReport {
    /// Running minimum never increases.
    pub fn is_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].running_min <= w[0].running_min)
    }

    /// `a_{2n} ≤ a_n` wherever both readings are exact.
    pub fn fekete_holds(&self) -> bool {
        self.entries.iter().all(|e| {
            let n2 = 2 * e.n;
            match self.entries.get(n2 as usize - 1) {
                Some(e2) if !e.power_norm.is_below() && !e2.power_norm.is_below() => e2.root <= e.root,
                _ => true,
            }
        })
    }
}

/// `min_{1 ≤ n ≤ maxN} ‖f^n‖^{1/n}`, an upper bound for `|f|_spc`, together
/// with the sequence it was taken over.
pub fn spectral_seminorm<R: NormedRing>(ring: &R, f: &R::Elem, max_n: u64) -> Result<SpectralReport> {
    spectral_seminorm_with(ring, f, max_n, Exec::default())
}

pub fn spectral_seminorm_with<R: NormedRing>(ring: &R, f: &R::Elem, max_n: u64, exec: Exec) -> Result<SpectralReport> {
    if max_n == 0 {
        return Err(Error::Invalid("maxN must be positive".into()));
    }
    let norms: Vec<Reading> = if exec.is_parallel() {
        par::map_range(exec, 1..max_n as usize + 1, |n| ring.pow(f, n as u64).map(|x| ring.norm(&x)))
            .into_iter()
            .collect::<Result<_>>()?
    } else {
        let mut out = Vec::with_capacity(max_n as usize);
        let mut acc = f.clone();
        out.push(ring.norm(&acc));
        for _ in 1..max_n {
            acc = ring.mul(&acc, f)?;
            out.push(ring.norm(&acc));
        }
        out
    };
    let mut entries = Vec::with_capacity(norms.len());
    let mut best: Option<(ExtNorm, u64)> = None;
    for (i, r) in norms.into_iter().enumerate() {
        let n = i as u64 + 1;
        let root = norm_nth_root(&r.bound(), n)?.to_ext();
        if best.is_none_or(|(b, _)| root < b) {
            best = Some((root, n));
        }
        entries.push(SpectralEntry { n, power_norm: r, root, running_min: best.expect("set above").0 });
    }
    let (bound, attained_at) = best.expect("maxN ≥ 1");
    Ok(SpectralReport { bound, attained_at, entries })
}

/// `A° = {f : ‖f‖ ≤ 1}`, valid for power-multiplicative norms only.
pub fn is_power_bounded<R: NormedRing>(ring: &R, f: &R::Elem) -> Result<bool> {
    if !ring.is_power_multiplicative() {
        return Err(Error::NotPowerMultiplicative(
            "use the spectral seminorm bound instead (heuristic)".into(),
        ));
    }
    Ok(ring.norm(f).bound() <= NormValue::one(ring.p()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyRow {
    pub m: u64,
    /// `‖s_{m+1} − s_m‖`.
    pub diff_norm: Reading,
}

/// Successive differences of `s_m = Σ_{k ≤ m} ϖ^k X^{1/p^k}` in one variable.
pub fn cauchy_gap_demo<K: CoeffField>(field: &K, m_max: u64) -> Result<Vec<CauchyRow>> {
    let alg = GaussAlgebra::new(field.clone(), 1);
    let p = field.p();
    let w = field.uniformizer();
    let term = |k: u64| -> Result<(GaussElement<K::Elem>, Reading)> {
        let c = field.pow(&w, k)?;
        let cn = field.norm(&c);
        Ok((alg.monomial(c, vec![PExponent::new(p, 1, k as u32)])?, cn))
    };
    let mut s = term(0)?.0;
    let mut rows = Vec::with_capacity(m_max as usize);
    for m in 0..m_max {
        let (t, cn) = term(m + 1)?;
        let next = alg.add(&s, &t)?;
        let diff = alg.sub(&next, &s)?;
        // a coefficient lost to precision still bounds the step
        let diff_norm = if alg.is_zero(&diff) { cn } else { alg.norm(&diff) };
        rows.push(CauchyRow { m, diff_norm });
        s = next;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CharPField, UntiltField};
    use crate::untilt::UntiltCtx;
    use proptest::prelude::*;

    fn e(p: u32, n: i64, k: u32) -> PExponent {
        PExponent::new(p, n, k)
    }

    fn alg(p: u32) -> GaussAlgebra<CharPField> {
        GaussAlgebra::new(CharPField::exact(p), 1)
    }

    #[test]
    fn gauss_norm_examples() {
        let a = alg(2);
        let k = a.field().clone();
        let f = a.add(&a.var_pow(0, e(2, 1, 1)).unwrap(), &a.constant(k.uniformizer())).unwrap();
        assert_eq!(a.norm(&f), Reading::Exact(NormValue::one(2)));
        let r = NormValue::p_pow(2, 1);
        let g = a.mul(&a.var(0).unwrap(), &a.var_pow(0, e(2, 1, 1)).unwrap()).unwrap();
        let v = gauss_eval(&a, &SeminormDescriptor::GaussRadius(vec![r]), &g).unwrap();
        assert_eq!(v, Reading::Exact(NormValue::Pow(e(2, 3, 1))));
        let z = a.zero();
        assert_eq!(gauss_eval(&a, &SeminormDescriptor::gauss_one(2, 1), &z).unwrap(), Reading::Exact(NormValue::Zero));
    }

    #[test]
    fn eval_point_both_sides() {
        let c = UntiltField::new(UntiltCtx::minimal(2, 3).unwrap());
        let a = GaussAlgebra::new(c.clone(), 1);
        // X^{1/2} + 1 at X = t: t^{1/2}^# + 1 has norm 1
        let f = a.add(&a.var_pow(0, e(2, 1, 1)).unwrap(), &a.one()).unwrap();
        let at_t = SeminormDescriptor::EvalPoint(vec![CharPSeries::t_pow(2, 1, 0)]);
        assert_eq!(gauss_eval(&a, &at_t, &f).unwrap(), Reading::Exact(NormValue::one(2)));
        let x = a.var_pow(0, e(2, 3, 1)).unwrap();
        assert_eq!(gauss_eval(&a, &at_t, &x).unwrap(), Reading::Exact(NormValue::Pow(e(2, 3, 1))));
        let at0 = SeminormDescriptor::EvalPoint(vec![CharPSeries::zero(2)]);
        assert_eq!(gauss_eval(&a, &at0, &x).unwrap(), Reading::Exact(NormValue::Zero));
        assert_eq!(gauss_eval(&a, &at0, &f).unwrap(), Reading::Exact(NormValue::one(2)));
        let far = SeminormDescriptor::EvalPoint(vec![CharPSeries::t_pow(2, -1, 0)]);
        assert!(matches!(gauss_eval(&a, &far, &f), Err(Error::BoundednessViolation(_))));
        assert!(matches!(
            gauss_eval(&a, &SeminormDescriptor::ProductCoordinate(0), &f),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn spectral_one_plus_x() {
        let a = alg(3);
        let f = a.add(&a.one(), &a.var(0).unwrap()).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let rep = spectral_seminorm_with(&a, &f, 8, exec).unwrap();
            assert_eq!(rep.bound, ExtNorm::Pow(0.into()));
            assert_eq!(rep.attained_at, 1);
            assert!(rep.entries.iter().all(|x| x.root == rep.bound));
            assert!(rep.is_monotone() && rep.fekete_holds());
        }
    }

    #[test]
    fn power_bounded_examples() {
        let a = alg(2);
        let k = a.field().clone();
        assert!(is_power_bounded(&a, &a.var_pow(0, e(2, 1, 1)).unwrap()).unwrap());
        let inv = a.constant(CharPSeries::t_pow(2, -1, 0));
        assert!(!is_power_bounded(&a, &inv).unwrap());
        let w = a.mul(&a.constant(k.uniformizer()), &a.var(0).unwrap()).unwrap();
        assert!(is_power_bounded(&a, &a.add(&a.one(), &w).unwrap()).unwrap());
    }

    #[test]
    fn cauchy_table() {
        let rows = cauchy_gap_demo(&CharPField::exact(2), 10).unwrap();
        for r in &rows {
            assert_eq!(r.diff_norm, Reading::Exact(NormValue::p_pow(2, r.m as i64 + 1)));
        }
        assert!(rows.windows(2).all(|w| w[1].diff_norm.bound() < w[0].diff_norm.bound()));
    }

    #[test]
    fn descriptor_json_round_trip() {
        let d = SeminormDescriptor::GaussRadius(vec![NormValue::Pow(e(3, 1, 1)), NormValue::one(3)]);
        let j = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(j, r#"{"kind":"gauss_radius","r":[{"exp":{"num":1,"kpow":1}},{"exp":{"num":0,"kpow":0}}]}"#);
        let back = SeminormDescriptor::from_json(3, &serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, d);
    }

    fn elem(p: u32) -> impl Strategy<Value = GaussElement<CharPSeries>> {
        let term = (0i64..6, 0u32..2, -2i64..4, 1u32..p);
        prop::collection::vec(term, 0..4).prop_map(move |ts| {
            alg(p)
                .from_terms(ts.into_iter().map(|(xn, xk, tn, c)| {
                    (vec![PExponent::new(p, xn, xk)], CharPSeries::monomial(p, c as i64, PExponent::int(p, tn)))
                }))
                .unwrap()
        })
    }

    fn radius(p: u32) -> impl Strategy<Value = NormValue> {
        (0i64..4, 0u32..2).prop_map(move |(n, k)| NormValue::Pow(PExponent::new(p, n, k)))
    }

    proptest! {
        #[test]
        fn radius_norm_multiplicative(f in elem(2), g in elem(2), r in radius(2)) {
            let a = alg(2);
            let phi = SeminormDescriptor::GaussRadius(vec![r]);
            let lhs = gauss_eval(&a, &phi, &a.mul(&f, &g).unwrap()).unwrap();
            let rhs = gauss_eval(&a, &phi, &f).unwrap().exact().unwrap().mul(&gauss_eval(&a, &phi, &g).unwrap().exact().unwrap()).unwrap();
            prop_assert_eq!(lhs, Reading::Exact(rhs));
        }

        #[test]
        fn spectral_equals_gauss_norm(f in elem(3)) {
            let a = alg(3);
            let rep = spectral_seminorm(&a, &f, 6).unwrap();
            prop_assert_eq!(rep.bound, a.norm(&f).bound().to_ext());
            prop_assert!(rep.is_monotone() && rep.fekete_holds());
        }
    }
}
