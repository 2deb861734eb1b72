//! Toy Berkovich and topological spectra. Every computation is relative to a
//! declared candidate family of seminorms, named in each report.
//!
//! Families per presentation:
//! - product `K^k`: the coordinate seminorms, which are all bounded
//!   multiplicative seminorms since each kills all but one idempotent;
//! - `K[T]` with the `c`-norm: `φ_r` for grid radii `r ≤ c` and evaluations at
//!   supplied points with `|λ| ≤ c`;
//! - Gauss algebras: `φ_r` on a radius grid and evaluations at supplied points;
//! - quotients by monomial ideals: the residue Gauss norm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::charp::{CharPJson, CharPSeries};
use crate::error::{Error, Result};
use crate::gauss::{gauss_eval, GaussAlgebra, GaussElement, SeminormDescriptor};
use crate::par::{self, Exec};
use crate::ring::{CoeffField, NormedRing};
use crate::rings::{PolyGaussC, ProductOfFields};
use crate::tilt::{IdealJson, MonomialIdeal};
use crate::values::{NormValue, PExponent, Reading};

pub type Elem<T> = <<T as SpectralToy>::Ring as NormedRing>::Elem;

/// Symbolic prime ideal of a toy presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidatePrime {
    Zero,
    /// Kernel of the `i`-th projection of a product.
    CoordinateKernel(usize),
    /// `(T − μ^#)` for a tilt-side point `μ` (just `T − μ` in characteristic `p`).
    Linear(CharPSeries),
    Monomial(MonomialIdeal),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CandidateJson {
    Zero,
    Coordinate { index: usize },
    Linear { lambda: CharPJson },
    Monomial { ideal: IdealJson },
}

impl CandidatePrime {
    pub fn label(&self) -> String {
        match self {
            CandidatePrime::Zero => "(0)".into(),
            CandidatePrime::CoordinateKernel(i) => format!("ker(pr_{i})"),
            CandidatePrime::Linear(mu) => format!("(T - sharp({mu}))"),
            CandidatePrime::Monomial(i) => i.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Kernel of this family member.
    In(SeminormDescriptor),
    Out(String),
    Undecided(String),
}

impl Membership {
    pub fn name(&self) -> &'static str {
        match self {
            Membership::In(_) => "in",
            Membership::Out(_) => "out",
            Membership::Undecided(_) => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectTdz {
    /// Constant witness sequence `x` with `‖x‖ > 0` and `x·f = 0`.
    Tdz { witness: String },
    NotTdz { certificate: String },
    Undecided,
}

pub trait SpectralToy: Sync {
    type Ring: NormedRing;

    fn ring(&self) -> &Self::Ring;
    fn family_id(&self) -> String;
    fn points(&self) -> Result<Vec<SeminormDescriptor>>;
    fn eval(&self, phi: &SeminormDescriptor, f: &Elem<Self>) -> Result<Reading>;
    /// Test elements used to locate the Shilov boundary for Escassut's criterion.
    fn shilov_tests(&self) -> Vec<Elem<Self>>;
    fn direct_tdz(&self, f: &Elem<Self>, budget: usize) -> Result<DirectTdz>;
    fn classify(&self, c: &CandidatePrime) -> Result<Membership>;
    fn contains(&self, c: &CandidatePrime, f: &Elem<Self>) -> Result<bool>;
    /// `a ⊆ b`.
    fn included(&self, a: &CandidatePrime, b: &CandidatePrime) -> Result<bool>;
}

fn mismatch(c: &CandidatePrime, what: &str) -> Error {
    Error::DescriptorMismatch(format!("candidate {} on {what}", c.label()))
}

fn vanishes(r: &Reading) -> bool {
    r.lossy().is_zero()
}

/// Multiplicative norms admit no topological divisors of zero except `0`.
fn multiplicative_verdict<R: NormedRing>(ring: &R, f: &R::Elem) -> DirectTdz {
    if ring.is_zero(f) {
        DirectTdz::Tdz { witness: "x = 1, x·0 = 0".into() }
    } else if ring.is_multiplicative() {
        DirectTdz::NotTdz { certificate: format!("multiplicative norm: ‖xf‖ = ‖x‖·{}", ring.norm(f).render(ring.p())) }
    } else {
        DirectTdz::Undecided
    }
}

// ----- products -----

#[derive(Clone, Debug)]
pub struct ProductToy<K> {
    ring: ProductOfFields<K>,
}

impl<K: CoeffField> ProductToy<K> {
    pub fn new(ring: ProductOfFields<K>) -> Self {
        ProductToy { ring }
    }
}

impl<K: CoeffField> SpectralToy for ProductToy<K> {
    type Ring = ProductOfFields<K>;

    fn ring(&self) -> &Self::Ring {
        &self.ring
    }

    fn family_id(&self) -> String {
        format!("coordinates of K^{}", self.ring.k())
    }

    fn points(&self) -> Result<Vec<SeminormDescriptor>> {
        Ok((0..self.ring.k()).map(SeminormDescriptor::ProductCoordinate).collect())
    }

    fn eval(&self, phi: &SeminormDescriptor, f: &Elem<Self>) -> Result<Reading> {
        match phi {
            SeminormDescriptor::ProductCoordinate(i) => self.ring.coordinate_norm(*i, f),
            other => Err(Error::DescriptorMismatch(format!("{} on a product", other.family()))),
        }
    }

    fn shilov_tests(&self) -> Vec<Elem<Self>> {
        let mut v: Vec<_> = (0..self.ring.k()).map(|i| self.ring.idempotent(i)).collect();
        v.push(self.ring.one());
        v
    }

    fn direct_tdz(&self, f: &Elem<Self>, _budget: usize) -> Result<DirectTdz> {
        let field = self.ring.field();
        if let Some(i) = f.iter().position(|x| field.is_zero(x)) {
            let e = self.ring.idempotent(i);
            if self.ring.is_zero(&self.ring.mul(&e, f)?) {
                return Ok(DirectTdz::Tdz { witness: format!("x = e_{i} (constant), ‖x‖ = 1, x·f = 0") });
            }
        }
        let min = f.iter().map(|x| field.norm(x).lossy()).min().unwrap_or(NormValue::Zero);
        Ok(DirectTdz::NotTdz { certificate: format!("‖xf‖ ≥ {}·‖x‖", min.render(self.ring.p())) })
    }

    fn classify(&self, c: &CandidatePrime) -> Result<Membership> {
        match c {
            CandidatePrime::CoordinateKernel(i) if *i < self.ring.k() => {
                Ok(Membership::In(SeminormDescriptor::ProductCoordinate(*i)))
            }
            CandidatePrime::Zero if self.ring.k() > 1 => Ok(Membership::Out("not prime: e_0·e_1 = 0".into())),
            CandidatePrime::Zero => Ok(Membership::In(SeminormDescriptor::ProductCoordinate(0))),
            _ => Err(mismatch(c, "a product")),
        }
    }

    fn contains(&self, c: &CandidatePrime, f: &Elem<Self>) -> Result<bool> {
        let field = self.ring.field();
        match c {
            CandidatePrime::CoordinateKernel(i) => {
                Ok(field.is_zero(f.get(*i).ok_or_else(|| mismatch(c, "a product"))?))
            }
            CandidatePrime::Zero => Ok(self.ring.is_zero(f)),
            _ => Err(mismatch(c, "a product")),
        }
    }

    fn included(&self, a: &CandidatePrime, b: &CandidatePrime) -> Result<bool> {
        Ok(matches!(a, CandidatePrime::Zero) || a == b)
    }
}

// ----- K[T] with the c-norm -----

#[derive(Clone, Debug)]
pub struct PolyToy<K> {
    ring: PolyGaussC<K>,
    grid: Vec<NormValue>,
    lambdas: Vec<CharPSeries>,
}

impl<K: CoeffField> PolyToy<K> {
    pub fn new(ring: PolyGaussC<K>, grid: Vec<NormValue>, lambdas: Vec<CharPSeries>) -> Self {
        PolyToy { ring, grid, lambdas }
    }

    fn lambda(&self, mu: &CharPSeries) -> Result<(K::Elem, Reading)> {
        let field = self.ring.field();
        let l = field.from_tilt(mu)?;
        let n = field.norm(&l);
        Ok((l, n))
    }
}

impl<K: CoeffField> SpectralToy for PolyToy<K> {
    type Ring = PolyGaussC<K>;

    fn ring(&self) -> &Self::Ring {
        &self.ring
    }

    fn family_id(&self) -> String {
        let p = self.ring.p();
        format!("phi_r (r <= c) and eval at |lambda| <= c on K[T], c = {}", self.ring.c().render(p))
    }

    fn points(&self) -> Result<Vec<SeminormDescriptor>> {
        let c = self.ring.c();
        let mut out: Vec<SeminormDescriptor> =
            self.grid.iter().filter(|r| **r <= c).map(|r| SeminormDescriptor::GaussRadius(vec![*r])).collect();
        for mu in &self.lambdas {
            if self.lambda(mu)?.1.bound() <= c {
                out.push(SeminormDescriptor::EvalPoint(vec![mu.clone()]));
            }
        }
        Ok(out)
    }

    fn eval(&self, phi: &SeminormDescriptor, f: &Elem<Self>) -> Result<Reading> {
        let c = self.ring.c();
        match phi {
            SeminormDescriptor::GaussRadius(r) if r.len() == 1 => {
                if r[0] > c {
                    return Err(Error::BoundednessViolation(format!("radius above c = {}", c.render(self.ring.p()))));
                }
                self.ring.radius_norm(f, &r[0])
            }
            SeminormDescriptor::EvalPoint(mu) if mu.len() == 1 => {
                let (l, n) = self.lambda(&mu[0])?;
                if n.bound() > c {
                    return Err(Error::BoundednessViolation(format!("|lambda| = {} > c", n.render(self.ring.p()))));
                }
                Ok(self.ring.field().norm(&self.ring.eval(f, &l)?))
            }
            other => Err(Error::DescriptorMismatch(format!("{} on K[T]", other.family()))),
        }
    }

    fn shilov_tests(&self) -> Vec<Elem<Self>> {
        vec![self.ring.one(), self.ring.t()]
    }

    fn direct_tdz(&self, f: &Elem<Self>, _budget: usize) -> Result<DirectTdz> {
        Ok(multiplicative_verdict(&self.ring, f))
    }

    fn classify(&self, cand: &CandidatePrime) -> Result<Membership> {
        let c = self.ring.c();
        match cand {
            CandidatePrime::Zero => Ok(Membership::In(SeminormDescriptor::GaussRadius(vec![c]))),
            CandidatePrime::Linear(mu) => {
                let n = self.lambda(mu)?.1;
                if n.bound() <= c {
                    Ok(Membership::In(SeminormDescriptor::EvalPoint(vec![mu.clone()])))
                } else {
                    let p = self.ring.p();
                    Ok(Membership::Out(format!(
                        "phi(T) = |lambda| = {} > c = ‖T‖ contradicts phi <= ‖.‖",
                        n.render(p),
                    )))
                }
            }
            _ => Err(mismatch(cand, "K[T]")),
        }
    }

    fn contains(&self, cand: &CandidatePrime, f: &Elem<Self>) -> Result<bool> {
        match cand {
            CandidatePrime::Zero => Ok(self.ring.is_zero(f)),
            CandidatePrime::Linear(mu) => {
                let (l, _) = self.lambda(mu)?;
                Ok(self.ring.field().is_zero(&self.ring.eval(f, &l)?))
            }
            _ => Err(mismatch(cand, "K[T]")),
        }
    }

    fn included(&self, a: &CandidatePrime, b: &CandidatePrime) -> Result<bool> {
        Ok(matches!(a, CandidatePrime::Zero) || a == b)
    }
}

// ----- Gauss algebras and monomial quotients -----

#[derive(Clone, Debug)]
pub struct GaussToy<K> {
    alg: GaussAlgebra<K>,
    grid: Vec<NormValue>,
    eval_points: Vec<Vec<CharPSeries>>,
}

impl<K: CoeffField> GaussToy<K> {
    pub fn new(alg: GaussAlgebra<K>, grid: Vec<NormValue>, eval_points: Vec<Vec<CharPSeries>>) -> Self {
        GaussToy { alg, grid, eval_points }
    }

    fn origin(&self) -> SeminormDescriptor {
        SeminormDescriptor::EvalPoint(vec![CharPSeries::zero(self.alg.p()); self.alg.d()])
    }
}

impl<K: CoeffField> SpectralToy for GaussToy<K> {
    type Ring = GaussAlgebra<K>;

    fn ring(&self) -> &Self::Ring {
        &self.alg
    }

    fn family_id(&self) -> String {
        format!("phi_r grid and eval points on the Gauss algebra, d = {}", self.alg.d())
    }

    fn points(&self) -> Result<Vec<SeminormDescriptor>> {
        let d = self.alg.d();
        let mut out: Vec<_> = self.grid.iter().map(|r| SeminormDescriptor::GaussRadius(vec![*r; d])).collect();
        out.extend(self.eval_points.iter().map(|m| SeminormDescriptor::EvalPoint(m.clone())));
        Ok(out)
    }

    fn eval(&self, phi: &SeminormDescriptor, f: &Elem<Self>) -> Result<Reading> {
        gauss_eval(&self.alg, phi, f)
    }

    fn shilov_tests(&self) -> Vec<Elem<Self>> {
        let mut v = vec![self.alg.one()];
        v.extend((0..self.alg.d()).filter_map(|i| self.alg.var(i).ok()));
        v
    }

    /// Multiplication by candidate witnesses `X^{k/p}` is checked to be isometric
    /// up to the norm of `f`, on top of the multiplicativity certificate.
    fn direct_tdz(&self, f: &Elem<Self>, budget: usize) -> Result<DirectTdz> {
        let p = self.alg.p();
        let nf = self.alg.norm(f);
        for k in 0..budget {
            let mut nu = self.alg.zero_exp();
            if let Some(first) = nu.first_mut() {
                *first = PExponent::new(p, k as i64, 1);
            }
            let x = self.alg.monomial(self.alg.field().one(), nu)?;
            let lhs = self.alg.norm(&self.alg.mul(&x, f)?);
            if lhs != nf.scale(&self.alg.norm(&x).bound())? {
                return Ok(DirectTdz::Undecided);
            }
        }
        Ok(multiplicative_verdict(&self.alg, f))
    }

    fn classify(&self, c: &CandidatePrime) -> Result<Membership> {
        match c {
            CandidatePrime::Zero => Ok(Membership::In(SeminormDescriptor::gauss_one(self.alg.p(), self.alg.d()))),
            CandidatePrime::Monomial(i) if i.is_zero() => self.classify(&CandidatePrime::Zero),
            CandidatePrime::Monomial(i) if !i.is_spectrally_reduced() => {
                Ok(Membership::Out("not radical: X^(a/p) is outside while its p-th power is inside".into()))
            }
            CandidatePrime::Monomial(i) if i.gens().count() == self.alg.d() => Ok(Membership::In(self.origin())),
            CandidatePrime::Monomial(_) => {
                Ok(Membership::Undecided("no family member has this kernel".into()))
            }
            _ => Err(mismatch(c, "a Gauss algebra")),
        }
    }

    fn contains(&self, c: &CandidatePrime, f: &Elem<Self>) -> Result<bool> {
        match c {
            CandidatePrime::Zero => Ok(f.is_empty()),
            CandidatePrime::Monomial(i) => Ok(i.contains(f)),
            _ => Err(mismatch(c, "a Gauss algebra")),
        }
    }

    fn included(&self, a: &CandidatePrime, b: &CandidatePrime) -> Result<bool> {
        match (a, b) {
            (CandidatePrime::Zero, _) => Ok(true),
            (CandidatePrime::Monomial(x), CandidatePrime::Monomial(y)) => x.is_subset(y),
            (CandidatePrime::Monomial(x), CandidatePrime::Zero) => Ok(x.is_zero()),
            _ => Err(mismatch(a, "a Gauss algebra")),
        }
    }
}

/// `A / I` for a monomial ideal `I`; elements are reduced representatives
/// (no term in `I`), and the residue norm is the Gauss norm of those.
#[derive(Clone, Debug)]
pub struct QuotientByMonomial<K> {
    alg: GaussAlgebra<K>,
    ideal: MonomialIdeal,
}

impl<K: CoeffField> QuotientByMonomial<K> {
    pub fn new(alg: GaussAlgebra<K>, ideal: MonomialIdeal) -> Result<Self> {
        if ideal.d() != alg.d() || ideal.side() != alg.field().side() {
            return Err(Error::Invalid("ideal does not live in this algebra".into()));
        }
        Ok(QuotientByMonomial { alg, ideal })
    }

    pub fn reduce(&self, f: &GaussElement<K::Elem>) -> Result<GaussElement<K::Elem>> {
        let kept = f.terms().filter(|(nu, _)| !self.ideal.contains_term(nu)).map(|(nu, c)| (nu.clone(), c.clone()));
        self.alg.from_terms(kept)
    }
}

impl<K: CoeffField> NormedRing for QuotientByMonomial<K> {
    type Elem = GaussElement<K::Elem>;

    fn p(&self) -> u32 {
        self.alg.p()
    }
    fn zero(&self) -> Self::Elem {
        self.alg.zero()
    }
    fn one(&self) -> Self::Elem {
        self.reduce(&self.alg.one()).expect("one reduces")
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.reduce(&self.alg.add(a, b)?)
    }
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        self.alg.neg(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.reduce(&self.alg.mul(a, b)?)
    }
    fn norm(&self, a: &Self::Elem) -> Reading {
        self.alg.norm(a)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn render(&self, a: &Self::Elem) -> String {
        format!("[{}] mod {}", self.alg.render(a), self.ideal)
    }
    fn is_multiplicative(&self) -> bool {
        self.ideal.is_spectrally_reduced() && self.alg.is_multiplicative()
    }
    fn is_complete(&self) -> bool {
        self.alg.is_complete()
    }
}

#[derive(Clone, Debug)]
pub struct QuotientToy<K> {
    ring: QuotientByMonomial<K>,
}

impl<K: CoeffField> QuotientToy<K> {
    pub fn new(ring: QuotientByMonomial<K>) -> Self {
        QuotientToy { ring }
    }
}

impl<K: CoeffField> SpectralToy for QuotientToy<K> {
    type Ring = QuotientByMonomial<K>;

    fn ring(&self) -> &Self::Ring {
        &self.ring
    }

    fn family_id(&self) -> String {
        format!("residue Gauss norm on the quotient by {}", self.ring.ideal)
    }

    fn points(&self) -> Result<Vec<SeminormDescriptor>> {
        Ok(vec![SeminormDescriptor::gauss_one(self.ring.p(), self.ring.alg.d())])
    }

    fn eval(&self, phi: &SeminormDescriptor, f: &Elem<Self>) -> Result<Reading> {
        gauss_eval(&self.ring.alg, phi, &self.ring.reduce(f)?)
    }

    fn shilov_tests(&self) -> Vec<Elem<Self>> {
        vec![self.ring.one()]
    }

    fn direct_tdz(&self, f: &Elem<Self>, _budget: usize) -> Result<DirectTdz> {
        Ok(multiplicative_verdict(&self.ring, f))
    }

    fn classify(&self, c: &CandidatePrime) -> Result<Membership> {
        let kernel_zero = || Membership::In(SeminormDescriptor::gauss_one(self.ring.p(), self.ring.alg.d()));
        match c {
            CandidatePrime::Zero if self.ring.is_multiplicative() => Ok(kernel_zero()),
            CandidatePrime::Monomial(i) if i.is_zero() && self.ring.is_multiplicative() => Ok(kernel_zero()),
            _ => Ok(Membership::Undecided("outside the declared family".into())),
        }
    }

    fn contains(&self, c: &CandidatePrime, f: &Elem<Self>) -> Result<bool> {
        match c {
            CandidatePrime::Zero => Ok(self.ring.reduce(f)?.is_empty()),
            CandidatePrime::Monomial(i) if i.is_zero() => Ok(self.ring.reduce(f)?.is_empty()),
            _ => Err(mismatch(c, "a quotient")),
        }
    }

    fn included(&self, a: &CandidatePrime, b: &CandidatePrime) -> Result<bool> {
        Ok(a == b)
    }
}

// ----- operations -----

pub fn berkovich_points<T: SpectralToy>(toy: &T) -> Result<Vec<SeminormDescriptor>> {
    toy.points()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShilovReport {
    pub family: String,
    pub points: Vec<SeminormDescriptor>,
    /// Inclusion-minimal boundaries, as sorted index lists, in mask order.
    pub minimal: Vec<Vec<usize>>,
    pub unique: bool,
}

pub const MAX_SHILOV_POINTS: usize = 20;

pub fn shilov_bruteforce<T: SpectralToy>(toy: &T, tests: &[Elem<T>]) -> Result<ShilovReport> {
    shilov_bruteforce_with(toy, tests, Exec::default())
}

pub fn shilov_bruteforce_with<T: SpectralToy>(toy: &T, tests: &[Elem<T>], exec: Exec) -> Result<ShilovReport> {
    let points = toy.points()?;
    let k = points.len();
    if k > MAX_SHILOV_POINTS {
        return Err(Error::CapExceeded(format!("{k} candidate points (max {MAX_SHILOV_POINTS})")));
    }
    let ring = toy.ring();
    let mut attain: Vec<u32> = Vec::with_capacity(tests.len());
    for f in tests {
        let nf = ring.norm(f);
        let mut mask = 0u32;
        for (i, phi) in points.iter().enumerate() {
            let v = toy.eval(phi, f)?;
            if !nf.is_below() && v == nf {
                mask |= 1 << i;
            }
        }
        if mask == 0 {
            return Err(Error::FamilyIncomplete(ring.render(f)));
        }
        attain.push(mask);
    }
    let is_boundary = |s: u32| attain.iter().all(|a| a & s != 0);
    let found = par::map_range(exec, 1..1usize << k, |m| {
        let s = m as u32;
        let minimal = is_boundary(s) && (0..k).filter(|i| s >> i & 1 == 1).all(|i| !is_boundary(s & !(1 << i)));
        minimal.then_some(s)
    });
    let minimal: Vec<Vec<usize>> =
        found.into_iter().flatten().map(|s| (0..k).filter(|i| s >> i & 1 == 1).collect()).collect();
    let unique = minimal.len() == 1;
    Ok(ShilovReport { family: toy.family_id(), points, minimal, unique })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdzReport {
    pub direct: DirectTdz,
    /// `∃ψ` in the Shilov boundary with `ψ(f) = 0`; `None` without a unique one.
    pub escassut: Option<bool>,
    pub shilov: Vec<SeminormDescriptor>,
    pub agree: bool,
}

pub fn is_topological_zero_divisor<T: SpectralToy>(toy: &T, f: &Elem<T>, budget: usize) -> Result<TdzReport> {
    let direct = toy.direct_tdz(f, budget)?;
    let sh = shilov_bruteforce(toy, &toy.shilov_tests())?;
    let (escassut, shilov) = if sh.unique {
        let pts: Vec<SeminormDescriptor> = sh.minimal[0].iter().map(|i| sh.points[*i].clone()).collect();
        let mut hit = false;
        for psi in &pts {
            hit |= vanishes(&toy.eval(psi, f)?);
        }
        (Some(hit), pts)
    } else {
        (None, Vec::new())
    };
    let agree = match (&direct, escassut) {
        (DirectTdz::Tdz { .. }, Some(true)) | (DirectTdz::NotTdz { .. }, Some(false)) => true,
        _ => false,
    };
    Ok(TdzReport { direct, escassut, shilov, agree })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSpecRow {
    pub candidate: CandidatePrime,
    pub membership: Membership,
    /// For members: `φ(f) = 0 ⟺ f ∈ 𝔭` on every sample.
    pub kernel_ok: Option<bool>,
    /// For members: `φ(f) ≤ ‖f‖` on every sample.
    pub bounded_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSpecReport {
    pub family: String,
    pub rows: Vec<TopSpecRow>,
}

impl TopSpecReport {
    pub fn members(&self) -> Vec<&CandidatePrime> {
        self.rows.iter().filter(|r| matches!(r.membership, Membership::In(_))).map(|r| &r.candidate).collect()
    }
}

pub fn topspec_enumerate<T: SpectralToy>(toy: &T, candidates: &[CandidatePrime], samples: &[Elem<T>]) -> Result<TopSpecReport> {
    topspec_enumerate_with(toy, candidates, samples, Exec::default())
}

pub fn topspec_enumerate_with<T: SpectralToy>(
    toy: &T,
    candidates: &[CandidatePrime],
    samples: &[Elem<T>],
    exec: Exec,
) -> Result<TopSpecReport> {
    let ring = toy.ring();
    let rows = par::map(exec, candidates, |c| {
        let membership = toy.classify(c)?;
        let (kernel_ok, bounded_ok) = match &membership {
            Membership::In(phi) => {
                let mut k_ok = true;
                let mut b_ok = true;
                for f in samples {
                    let v = toy.eval(phi, f)?;
                    k_ok &= vanishes(&v) == toy.contains(c, f)?;
                    b_ok &= v.lossy() <= ring.norm(f).bound();
                }
                (Some(k_ok), Some(b_ok))
            }
            _ => (None, None),
        };
        Ok(TopSpecRow { candidate: c.clone(), membership, kernel_ok, bounded_ok })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(TopSpecReport { family: toy.family_id(), rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZarCompareRow {
    pub candidate: CandidatePrime,
    pub member: bool,
    /// No denominator `1 + x` lies in `𝔭`.
    pub denominators_avoid: bool,
    /// `b·s ∈ 𝔭 ⟺ b ∈ 𝔭` on all samples and denominators, i.e. `𝔭A^Zar ∩ A = 𝔭`.
    pub contraction_ok: bool,
    /// For non-members: a generator that becomes a unit, `u = 1 + x`, `‖x‖ < 1`.
    pub unit_witness: Option<String>,
}

/// Pairs each candidate with its extension to `A^Zar` for `K[T]` with the `c`-norm.
pub fn topspec_zar_compare<K: CoeffField>(
    toy: &PolyToy<K>,
    candidates: &[CandidatePrime],
    samples: &[Vec<K::Elem>],
    denominators: &[Vec<K::Elem>],
) -> Result<Vec<ZarCompareRow>> {
    let r = &toy.ring;
    let one = NormValue::one(r.p());
    for s in denominators {
        if r.norm(&r.sub(s, &r.one())?).bound() >= one {
            return Err(Error::InvalidFraction(format!("{} is not 1 + (norm < 1)", r.render(s))));
        }
    }
    candidates
        .iter()
        .map(|c| {
            let member = matches!(toy.classify(c)?, Membership::In(_));
            let mut avoid = true;
            for s in denominators {
                avoid &= !toy.contains(c, s)?;
            }
            let mut contraction_ok = true;
            for b in samples {
                let inside = toy.contains(c, b)?;
                for s in denominators {
                    contraction_ok &= toy.contains(c, &r.mul(b, s)?)? == inside;
                }
            }
            let unit_witness = match c {
                CandidatePrime::Linear(mu) if !member => {
                    let (l, _) = toy.lambda(mu)?;
                    let g = r.linear(&l)?;
                    let u = r.neg(&g)?;
                    let x = r.sub(&u, &r.one())?;
                    (r.norm(&x).bound() < one).then(|| {
                        format!("-(T - lambda) = 1 + x with ‖x‖ = {} < 1", r.norm(&x).render(r.p()))
                    })
                }
                _ => None,
            };
            Ok(ZarCompareRow { candidate: c.clone(), member, denominators_avoid: avoid, contraction_ok, unit_witness })
        })
        .collect()
}

/// Every cover of the members by basic opens `D(f) = {𝔭 : f ∉ 𝔭}` drawn from
/// `fs` has a subcover with at most `|members|` opens. Returns
/// `(covers checked, all passed)`.
pub fn quasi_compact_check<T: SpectralToy>(toy: &T, members: &[CandidatePrime], fs: &[Elem<T>]) -> Result<(usize, bool)> {
    let m = members.len();
    if fs.len() > 16 {
        return Err(Error::CapExceeded(format!("{} opens (max 16)", fs.len())));
    }
    let mut opens = Vec::with_capacity(fs.len());
    for f in fs {
        let mut set = 0u64;
        for (j, c) in members.iter().enumerate() {
            if !toy.contains(c, f)? {
                set |= 1 << j;
            }
        }
        opens.push(set);
    }
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let union = |mask: usize| (0..opens.len()).filter(|i| mask >> i & 1 == 1).fold(0u64, |a, i| a | opens[i]);
    let mut checked = 0;
    let mut ok = true;
    for cover in 1..1usize << opens.len() {
        if union(cover) != full {
            continue;
        }
        checked += 1;
        let sub = (1..1usize << opens.len())
            .filter(|s| s & !cover == 0 && (s.count_ones() as usize) <= m.max(1))
            .any(|s| union(s) == full);
        ok &= sub;
    }
    Ok((checked, ok))
}

/// In the finite specialization order (`V(𝔭) = {𝔮 ⊇ 𝔭}`), every irreducible
/// closed subset has exactly one generic point. Returns
/// `(irreducible closed sets checked, all passed)`.
pub fn sobriety_check<T: SpectralToy>(toy: &T, members: &[CandidatePrime]) -> Result<(usize, bool)> {
    let m = members.len();
    if m > 16 {
        return Err(Error::CapExceeded(format!("{m} points (max 16)")));
    }
    let mut le = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            le[i][j] = toy.included(&members[i], &members[j])?;
        }
    }
    let closure = |i: usize| (0..m).filter(|j| le[i][*j]).fold(0u32, |a, j| a | 1 << j);
    let closed: Vec<u32> = (1..1u32 << m).filter(|s| (0..m).all(|i| s >> i & 1 == 0 || closure(i) & !s == 0)).collect();
    let mut checked = 0;
    let mut ok = true;
    for s in &closed {
        let proper: Vec<u32> = closed.iter().copied().filter(|t| t & !s == 0 && t != s).collect();
        let reducible = proper.iter().any(|a| proper.iter().any(|b| a | b == *s));
        if reducible {
            continue;
        }
        checked += 1;
        let generic: Vec<usize> = (0..m).filter(|i| s >> i & 1 == 1 && closure(*i) == *s).collect();
        ok &= generic.len() == 1;
    }
    Ok((checked, ok))
}

/// Candidates from JSON; monomial ideals live on the side of `field`.
pub fn candidate_from_json<K: CoeffField>(field: &K, d: usize, j: &CandidateJson) -> Result<CandidatePrime> {
    Ok(match j {
        CandidateJson::Zero => CandidatePrime::Zero,
        CandidateJson::Coordinate { index } => CandidatePrime::CoordinateKernel(*index),
        CandidateJson::Linear { lambda } => CandidatePrime::Linear(CharPSeries::from_json(lambda)?.as_exact()),
        CandidateJson::Monomial { ideal } => {
            CandidatePrime::Monomial(MonomialIdeal::from_json(field.side(), d, field.p(), ideal)?)
        }
    })
}

/// Stable per-family summary used by reports: membership name by label.
pub fn membership_table(rep: &TopSpecReport) -> BTreeMap<String, &'static str> {
    rep.rows.iter().map(|r| (r.candidate.label(), r.membership.name())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CharPField, UntiltField};
    use crate::tilt::Bound;
    use crate::untilt::UntiltCtx;
    use crate::ring::Side;

    fn k2() -> ProductToy<CharPField> {
        ProductToy::new(ProductOfFields::new(CharPField::exact(2), 2).unwrap())
    }

    fn vec_of(p: u32, xs: &[i64]) -> Vec<CharPSeries> {
        xs.iter().map(|c| CharPSeries::constant(p, *c)).collect()
    }

    #[test]
    fn shilov_products() {
        let t = k2();
        let tests = [vec_of(2, &[1, 0]), vec_of(2, &[0, 1]), vec_of(2, &[1, 1])];
        let rep = shilov_bruteforce(&t, &tests).unwrap();
        assert_eq!(rep.minimal, vec![vec![0, 1]]);
        assert!(rep.unique);
        let t3 = ProductToy::new(ProductOfFields::new(CharPField::exact(2), 3).unwrap());
        let tests = [vec_of(2, &[1, 0, 0]), vec_of(2, &[0, 1, 1])];
        let rep = shilov_bruteforce(&t3, &tests).unwrap();
        assert_eq!(rep.minimal, vec![vec![0, 1], vec![0, 2]]);
        assert!(!rep.unique);
    }

    #[test]
    fn tdz_products() {
        let t = k2();
        let r = is_topological_zero_divisor(&t, &vec_of(2, &[1, 0]), 4).unwrap();
        assert!(matches!(r.direct, DirectTdz::Tdz { .. }) && r.escassut == Some(true) && r.agree);
        let r = is_topological_zero_divisor(&t, &vec_of(2, &[1, 1]), 4).unwrap();
        assert!(matches!(r.direct, DirectTdz::NotTdz { .. }) && r.escassut == Some(false) && r.agree);
    }

    #[test]
    fn gauss_shilov_and_tdz() {
        let alg = GaussAlgebra::new(CharPField::exact(2), 1);
        let grid = vec![NormValue::one(2), NormValue::p_pow(2, 1)];
        let toy = GaussToy::new(alg.clone(), grid, vec![vec![CharPSeries::zero(2)], vec![CharPSeries::t_pow(2, 1, 0)]]);
        let monos: Vec<_> = (0..4).map(|k| alg.var_pow(0, PExponent::new(2, k, 1)).unwrap()).collect();
        let rep = shilov_bruteforce(&toy, &monos).unwrap();
        assert_eq!(rep.minimal, vec![vec![0]]);
        let r = is_topological_zero_divisor(&toy, &alg.var(0).unwrap(), 6).unwrap();
        assert!(matches!(r.direct, DirectTdz::NotTdz { .. }) && r.escassut == Some(false) && r.agree);
    }

    fn poly_toy() -> (PolyToy<UntiltField>, Vec<CandidatePrime>) {
        let k = UntiltField::new(UntiltCtx::minimal(2, 3).unwrap());
        let c = NormValue::p_pow(2, 1);
        let ring = PolyGaussC::new(k, c).unwrap();
        let lams = vec![CharPSeries::zero(2), CharPSeries::t_pow(2, 1, 0), CharPSeries::one(2)];
        let cands = lams.iter().cloned().map(CandidatePrime::Linear).collect();
        (PolyToy::new(ring, vec![c, NormValue::p_pow(2, 2)], lams), cands)
    }

    #[test]
    fn topspec_poly() {
        let (toy, cands) = poly_toy();
        let r = toy.ring();
        let k = r.field();
        let samples = vec![
            r.t(),
            r.add(&r.t(), &r.one()).unwrap(),
            r.linear(&k.uniformizer()).unwrap(),
            r.mul(&r.t(), &r.linear(&k.one()).unwrap()).unwrap(),
        ];
        let rep = topspec_enumerate(&toy, &cands, &samples).unwrap();
        let names: Vec<_> = rep.rows.iter().map(|r| r.membership.name()).collect();
        assert_eq!(names, ["in", "in", "out"]);
        assert!(rep.rows.iter().all(|r| r.kernel_ok != Some(false) && r.bounded_ok != Some(false)));
        let pts = berkovich_points(&toy).unwrap();
        assert_eq!(pts.len(), 4);
        let dens = vec![r.add(&r.one(), &r.t()).unwrap(), r.add(&r.one(), &r.poly(vec![k.uniformizer()])).unwrap()];
        let rows = topspec_zar_compare(&toy, &cands, &samples, &dens).unwrap();
        assert!(rows[..2].iter().all(|r| r.member && r.denominators_avoid && r.contraction_ok && r.unit_witness.is_none()));
        assert!(!rows[2].member && rows[2].unit_witness.is_some());
    }

    #[test]
    fn finite_topology_checks() {
        let (toy, mut cands) = poly_toy();
        cands.insert(0, CandidatePrime::Zero);
        cands.pop();
        let r = toy.ring();
        let k = r.field();
        let fs = vec![r.t(), r.linear(&k.uniformizer()).unwrap(), r.one()];
        let (covers, ok) = quasi_compact_check(&toy, &cands, &fs).unwrap();
        assert!(ok && covers > 0);
        let (irr, ok) = sobriety_check(&toy, &cands).unwrap();
        // V(0) is irreducible with generic point (0); V(T), V(T − p) are points
        assert!(ok && irr == 3);
    }

    #[test]
    fn quotient_zero_ideal() {
        let alg = GaussAlgebra::new(CharPField::exact(3), 1);
        let m = MonomialIdeal::augmentation(Side::Tilt, 1, 0).unwrap();
        let q = QuotientToy::new(QuotientByMonomial::new(alg.clone(), m).unwrap());
        let rep = topspec_enumerate(&q, &[CandidatePrime::Zero], &[alg.var(0).unwrap(), alg.one()]).unwrap();
        assert_eq!(rep.rows[0].membership.name(), "in");
        assert_eq!(rep.rows[0].kernel_ok, Some(true));
    }

    #[test]
    fn gauss_monomial_candidates() {
        let alg = GaussAlgebra::new(CharPField::exact(2), 1);
        let toy = GaussToy::new(alg, vec![NormValue::one(2)], vec![]);
        let x = MonomialIdeal::principal(Side::Tilt, 1, 0, PExponent::int(2, 1)).unwrap();
        let m = MonomialIdeal::augmentation(Side::Tilt, 1, 0).unwrap();
        assert_eq!(toy.classify(&CandidatePrime::Monomial(x)).unwrap().name(), "out");
        assert_eq!(toy.classify(&CandidatePrime::Monomial(m.clone())).unwrap().name(), "in");
        assert!(m.gens().all(|(_, b)| *b == Bound::Augmentation));
    }
}
