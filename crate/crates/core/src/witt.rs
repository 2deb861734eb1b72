//! Finite-length `p`-typical Witt vectors over `O_F / t^N`.
//!
//! The universal sum and product polynomials `S_k`, `P_k` are obtained by
//! solving the ghost equations `w_k(S) = w_k(X) + w_k(Y)`,
//! `w_k(P) = w_k(X) · w_k(Y)` over the integers (each step divides by
//! `p^k`, and that division is checked to be exact), then reduced mod `p`
//! for evaluation on `F_p`-algebras.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::charp::{CharPSeries, DEFAULT_TERM_CAP};
use crate::error::{Error, Result};
use crate::values::PExponent;

/// Polynomial size cap used while solving the ghost equations.
pub const POLY_TERM_CAP: usize = 400_000;

type Mono = Vec<u32>;

/// Multivariate polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Mono, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = IntPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    fn insert_add(&mut self, e: Mono, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPoly::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc: HashMap<Mono, BigInt> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Mono = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
            if acc.len() > POLY_TERM_CAP {
                return Err(Error::CapExceeded(format!(
                    "Witt polynomial exceeds {POLY_TERM_CAP} terms"
                )));
            }
        }
        Ok(IntPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = IntPoly::constant(self.nvars, BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact division by an integer, `None` when some coefficient is not divisible.
    pub fn exact_div(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(IntPoly { nvars: self.nvars, terms })
    }

    /// Coefficients reduced to `{0..p-1}`, zero terms dropped.
    fn reduce_mod(&self, p: u32) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let r = c.mod_floor(&pb).to_u32().expect("residue fits u32");
            if r != 0 {
                let sparse: Vec<(usize, u32)> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| (i, x))
                    .collect();
                terms.push((sparse, r));
            }
        }
        ModPoly { terms }
    }
}

/// Sparse polynomial with coefficients in `F_p`, used for evaluation.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: Vec<(Vec<(usize, u32)>, u32)>,
}

impl ModPoly {
    fn eval_const(&self, p: u32, vals: &[u32]) -> u32 {
        let mut acc = 0u64;
        for (mono, c) in &self.terms {
            let mut t = *c as u64;
            for &(v, e) in mono {
                t = t * (vals[v] as u64).pow(e) % p as u64;
            }
            acc = (acc + t) % p as u64;
        }
        acc as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyRole {
    Sum,
    Prod,
}

/// Ghost polynomial `w_k(Z) = Σ_{i≤k} p^i Z_i^{p^{k−i}}` on variables `offset..`.
fn ghost_poly(p: u32, k: usize, nvars: usize, offset: usize) -> IntPoly {
    let mut w = IntPoly::zero(nvars);
    for i in 0..=k {
        let mut e = vec![0u32; nvars];
        e[offset + i] = p.pow((k - i) as u32);
        let mut m = IntPoly::zero(nvars);
        m.terms.insert(e, BigInt::from(p).pow(i as u32));
        w = w.add(&m);
    }
    w
}

/// Write-once table of universal Witt polynomials for `(p, n)`.
///
/// Variables are `X_0..X_{n−1}` (indices `0..n`) then `Y_0..Y_{n−1}`
/// (indices `n..2n`).
#[derive(Debug)]
pub struct WittPolyCache {
    p: u32,
    n: usize,
    sum: Vec<IntPoly>,
    prod: Vec<IntPoly>,
    sum_mod: Vec<ModPoly>,
    prod_mod: Vec<ModPoly>,
    neg_one: Vec<u32>,
}

fn check_params(p: u32, n: usize) -> Result<()> {
    if !crate::config::is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Unsupported("Witt length must be at least 1".into()));
    }
    // Largest ghost exponent p^{n-1} must stay in u32.
    if (p as u64).checked_pow(n as u32).map_or(true, |v| v > u32::MAX as u64) {
        return Err(Error::CapExceeded(format!("p^n too large for p={p}, n={n}")));
    }
    Ok(())
}

impl WittPolyCache {
    /// Solves the ghost equations over the integers.
    pub fn build(p: u32, n: usize) -> Result<Self> {
        check_params(p, n)?;
        let nv = 2 * n;
        let pb = BigInt::from(p);
        let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
        let mut prod: Vec<IntPoly> = Vec::with_capacity(n);
        for k in 0..n {
            let wx = ghost_poly(p, k, nv, 0);
            let wy = ghost_poly(p, k, nv, n);
            let mut rs = wx.add(&wy);
            let mut rp = wx.mul(&wy)?;
            for i in 0..k {
                let e = (p as u64).pow((k - i) as u32);
                let w = pb.pow(i as u32);
                rs = rs.sub(&sum[i].pow(e)?.scale(&w));
                rp = rp.sub(&prod[i].pow(e)?.scale(&w));
            }
            let d = pb.pow(k as u32);
            let s = rs.exact_div(&d).ok_or_else(|| {
                Error::WittCache(format!("S_{k} has a non-integral coefficient"))
            })?;
            let m = rp.exact_div(&d).ok_or_else(|| {
                Error::WittCache(format!("P_{k} has a non-integral coefficient"))
            })?;
            sum.push(s);
            prod.push(m);
        }
        Self::from_polys(p, n, sum, prod)
    }

    fn from_polys(p: u32, n: usize, sum: Vec<IntPoly>, prod: Vec<IntPoly>) -> Result<Self> {
        let sum_mod: Vec<ModPoly> = sum.iter().map(|s| s.reduce_mod(p)).collect();
        let prod_mod = prod.iter().map(|s| s.reduce_mod(p)).collect();
        let neg_one = solve_neg_one(p, n, &sum_mod);
        Ok(WittPolyCache { p, n, sum, prod, sum_mod, prod_mod, neg_one })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sum_poly(&self, k: usize) -> &IntPoly {
        &self.sum[k]
    }

    pub fn prod_poly(&self, k: usize) -> &IntPoly {
        &self.prod[k]
    }

    /// Witt components of `−1` in `W_n(F_p)`.
    pub fn neg_one(&self) -> &[u32] {
        &self.neg_one
    }

    /// Checks both ghost identities symbolically for every index.
    pub fn verify_ghost(&self) -> Result<()> {
        let (p, n) = (self.p, self.n);
        let nv = 2 * n;
        let pb = BigInt::from(p);
        for k in 0..n {
            let wx = ghost_poly(p, k, nv, 0);
            let wy = ghost_poly(p, k, nv, n);
            let mut gs = IntPoly::zero(nv);
            let mut gp = IntPoly::zero(nv);
            for i in 0..=k {
                let e = (p as u64).pow((k - i) as u32);
                let w = pb.pow(i as u32);
                gs = gs.add(&self.sum[i].pow(e)?.scale(&w));
                gp = gp.add(&self.prod[i].pow(e)?.scale(&w));
            }
            if gs != wx.add(&wy) {
                return Err(Error::WittCache(format!("ghost identity fails for S_{k}")));
            }
            if gp != wx.mul(&wy)? {
                return Err(Error::WittCache(format!("ghost identity fails for P_{k}")));
            }
        }
        Ok(())
    }

    /// Location of the `(p, n)` table inside a cache directory.
    pub fn file_path(dir: &Path, p: u32, n: usize) -> PathBuf {
        dir.join(Self::file_name(p, n))
    }

    fn file_name(p: u32, n: usize) -> String {
        format!("witt_p{p}_n{n}.json")
    }

    pub fn to_file_json(&self) -> CacheFile {
        let mut polys = Vec::new();
        for (role, list) in [(PolyRole::Sum, &self.sum), (PolyRole::Prod, &self.prod)] {
            for (index, poly) in list.iter().enumerate() {
                polys.push(PolyEntry {
                    role,
                    index,
                    terms: poly
                        .terms
                        .iter()
                        .map(|(e, c)| PolyTerm { exp: e.clone(), coeff: c.to_string() })
                        .collect(),
                });
            }
        }
        CacheFile { p: self.p, n: self.n, polys }
    }

    /// Parses a cache file, asserting integral coefficients and the ghost identities.
    pub fn from_file_json(f: &CacheFile) -> Result<Self> {
        check_params(f.p, f.n)?;
        let nv = 2 * f.n;
        let mut sum = vec![None; f.n];
        let mut prod = vec![None; f.n];
        for entry in &f.polys {
            if entry.index >= f.n {
                return Err(Error::WittCache(format!("index {} out of range", entry.index)));
            }
            let mut poly = IntPoly::zero(nv);
            for t in &entry.terms {
                if t.exp.len() != nv {
                    return Err(Error::WittCache("exponent vector has wrong length".into()));
                }
                let c = parse_coeff(&t.coeff)?;
                if !c.is_integer() {
                    return Err(Error::WittCache(format!(
                        "integrality assertion failed: coefficient {} in {:?}[{}]",
                        t.coeff, entry.role, entry.index
                    )));
                }
                poly.insert_add(t.exp.clone(), c.to_integer());
            }
            let slot = match entry.role {
                PolyRole::Sum => &mut sum[entry.index],
                PolyRole::Prod => &mut prod[entry.index],
            };
            if slot.replace(poly).is_some() {
                return Err(Error::WittCache(format!("duplicate entry {:?}[{}]", entry.role, entry.index)));
            }
        }
        let sum: Option<Vec<IntPoly>> = sum.into_iter().collect();
        let prod: Option<Vec<IntPoly>> = prod.into_iter().collect();
        let (Some(sum), Some(prod)) = (sum, prod) else {
            return Err(Error::WittCache("missing polynomial entries".into()));
        };
        let cache = Self::from_polys(f.p, f.n, sum, prod)?;
        cache.verify_ghost()?;
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let f: CacheFile = serde_json::from_str(&text)
            .map_err(|e| Error::WittCache(format!("{}: {e}", path.display())))?;
        Self::from_file_json(&f)
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(Self::file_name(self.p, self.n));
        let tmp = dir.join(format!(".{}.tmp", Self::file_name(self.p, self.n)));
        fs::write(&tmp, serde_json::to_string(&self.to_file_json())?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Process-wide cache, backed by `dir` when given.
    pub fn get(p: u32, n: usize, dir: Option<&Path>) -> Result<Arc<Self>> {
        static REGISTRY: OnceLock<Mutex<HashMap<(u32, usize), Arc<WittPolyCache>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(Default::default);
        if let Some(c) = reg.lock().expect("witt registry poisoned").get(&(p, n)) {
            return Ok(c.clone());
        }
        let cache = match dir {
            Some(d) if d.join(Self::file_name(p, n)).exists() => {
                Self::load(&d.join(Self::file_name(p, n)))?
            }
            Some(d) => {
                let c = Self::build(p, n)?;
                c.save(d)?;
                c
            }
            None => Self::build(p, n)?,
        };
        let cache = Arc::new(cache);
        let mut guard = reg.lock().expect("witt registry poisoned");
        Ok(guard.entry((p, n)).or_insert(cache).clone())
    }
}

fn parse_coeff(s: &str) -> Result<Ratio<BigInt>> {
    let bad = || Error::WittCache(format!("unparseable coefficient {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(a, b))
        }
        None => Ok(Ratio::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn solve_neg_one(p: u32, n: usize, sum_mod: &[ModPoly]) -> Vec<u32> {
    // S_k(X, Y) = X_k + Y_k + (terms in lower variables); solve S(v, 1) = 0.
    let mut vals = vec![0u32; 2 * n];
    vals[n] = 1;
    for k in 0..n {
        vals[k] = 0;
        let rest = sum_mod[k].eval_const(p, &vals);
        vals[k] = (p - rest % p) % p;
    }
    vals[..n].to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyEntry {
    pub role: PolyRole,
    pub index: usize,
    pub terms: Vec<PolyTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub p: u32,
    pub n: usize,
    pub polys: Vec<PolyEntry>,
}

pub fn build_witt_polys(p: u32, n: usize) -> Result<WittPolyCache> {
    WittPolyCache::build(p, n)
}

/// Witt vector with components in `O_F / t^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    comps: Vec<CharPSeries>,
}

impl WittVector {
    pub fn comps(&self) -> &[CharPSeries] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_empty())
    }
}

/// Arithmetic context: `W_len(O_F / t^prec)` backed by a polynomial cache.
#[derive(Clone, Debug)]
pub struct WittRing {
    cache: Arc<WittPolyCache>,
    len: usize,
    prec: PExponent,
    term_cap: usize,
}

impl WittRing {
    pub fn new(cache: Arc<WittPolyCache>, len: usize, prec: PExponent) -> Result<Self> {
        if len == 0 || len > cache.n {
            return Err(Error::Unsupported(format!(
                "Witt length {len} not covered by cache of length {}",
                cache.n
            )));
        }
        if prec.p() != cache.p || prec.is_negative() || prec.is_zero() {
            return Err(Error::Invalid(format!("bad t-precision {prec}")));
        }
        Ok(WittRing { cache, len, prec, term_cap: DEFAULT_TERM_CAP })
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn p(&self) -> u32 {
        self.cache.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn prec(&self) -> PExponent {
        self.prec
    }

    pub fn cache(&self) -> &Arc<WittPolyCache> {
        &self.cache
    }

    /// Same cache, other length and precision.
    pub fn reshape(&self, len: usize, prec: PExponent) -> Result<Self> {
        Ok(WittRing::new(self.cache.clone(), len, prec)?.with_term_cap(self.term_cap))
    }

    fn reduce(&self, x: &CharPSeries) -> Result<CharPSeries> {
        if x.p() != self.p() {
            return Err(Error::PrimeMismatch(self.p(), x.p()));
        }
        if let Some(n) = x.prec() {
            if n < self.prec {
                return Err(Error::PrecisionMismatch(format!(
                    "component known mod t^{n}, ring needs t^{}",
                    self.prec
                )));
            }
        }
        if !x.is_integral() {
            return Err(Error::NotIntegral(x.to_string()));
        }
        Ok(x.truncate(self.prec))
    }

    /// Builds a vector from components, truncating them mod `t^N`.
    pub fn vector(&self, comps: Vec<CharPSeries>) -> Result<WittVector> {
        if comps.len() != self.len {
            return Err(Error::Invalid(format!(
                "expected {} components, got {}",
                self.len,
                comps.len()
            )));
        }
        let comps = comps.iter().map(|c| self.reduce(c)).collect::<Result<_>>()?;
        Ok(WittVector { comps })
    }

    fn check(&self, a: &WittVector) -> Result<()> {
        if a.comps.len() != self.len {
            return Err(Error::Invalid(format!("vector length {} != {}", a.comps.len(), self.len)));
        }
        for c in &a.comps {
            if c.p() != self.p() {
                return Err(Error::PrimeMismatch(self.p(), c.p()));
            }
            if c.prec() != Some(self.prec) {
                return Err(Error::PrecisionMismatch(format!(
                    "component precision {:?} differs from ring precision t^{}",
                    c.prec().map(|x| x.to_string()),
                    self.prec
                )));
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> WittVector {
        let z = CharPSeries::zero(self.p()).truncate(self.prec);
        WittVector { comps: vec![z; self.len] }
    }

    pub fn one(&self) -> WittVector {
        self.constant(&{
            let mut v = vec![0; self.len];
            v[0] = 1;
            v
        })
    }

    /// Vector with constant components in `F_p`.
    pub fn constant(&self, vals: &[u32]) -> WittVector {
        let p = self.p();
        let comps = (0..self.len)
            .map(|i| CharPSeries::constant(p, *vals.get(i).unwrap_or(&0) as i64).truncate(self.prec))
            .collect();
        WittVector { comps }
    }

    pub fn neg_one(&self) -> WittVector {
        self.constant(self.cache.neg_one())
    }

    /// Teichmüller lift `[a] = (a, 0, …, 0)`.
    pub fn teichmuller(&self, a: &CharPSeries) -> Result<WittVector> {
        let a = self.reduce(a)?;
        let mut v = self.zero();
        v.comps[0] = a;
        Ok(v)
    }

    pub fn verschiebung(&self, a: &WittVector) -> Result<WittVector> {
        self.check(a)?;
        let mut comps = Vec::with_capacity(self.len);
        comps.push(CharPSeries::zero(self.p()).truncate(self.prec));
        comps.extend(a.comps[..self.len - 1].iter().cloned());
        Ok(WittVector { comps })
    }

    /// Frobenius of `W(A)` for an `F_p`-algebra `A`: componentwise `p`-th power.
    pub fn frobenius(&self, a: &WittVector) -> Result<WittVector> {
        self.check(a)?;
        let comps = a
            .comps
            .iter()
            .map(|c| Ok(c.frobenius()?.truncate(self.prec)))
            .collect::<Result<_>>()?;
        Ok(WittVector { comps })
    }

    pub fn add(&self, a: &WittVector, b: &WittVector) -> Result<WittVector> {
        self.check(a)?;
        self.check(b)?;
        if a.is_zero() {
            return Ok(b.clone());
        }
        if b.is_zero() {
            return Ok(a.clone());
        }
        self.eval(&self.cache.sum_mod, a, b)
    }

    pub fn mul(&self, a: &WittVector, b: &WittVector) -> Result<WittVector> {
        self.check(a)?;
        self.check(b)?;
        if let Some(c) = self.const_teichmuller(a) {
            return Ok(self.scale_teichmuller(c, b));
        }
        if let Some(c) = self.const_teichmuller(b) {
            return Ok(self.scale_teichmuller(c, a));
        }
        self.eval(&self.cache.prod_mod, a, b)
    }

    /// Multiplication by the Witt vector of `−1` taken from the cache.
    pub fn neg(&self, a: &WittVector) -> Result<WittVector> {
        self.mul(&self.neg_one(), a)
    }

    pub fn sub(&self, a: &WittVector, b: &WittVector) -> Result<WittVector> {
        self.add(a, &self.neg(b)?)
    }

    /// `[c]` for `c ∈ F_p`, if `a` has that shape.
    fn const_teichmuller(&self, a: &WittVector) -> Option<u32> {
        if a.comps[1..].iter().any(|c| !c.is_empty()) {
            return None;
        }
        let c0 = &a.comps[0];
        match c0.term_count() {
            0 => Some(0),
            1 => {
                let (e, c) = c0.leading_term()?;
                e.is_zero().then_some(c)
            }
            _ => None,
        }
    }

    /// `[c] · (x_0, x_1, …) = (c x_0, c^p x_1, …)` and `c^p = c` in `F_p`.
    fn scale_teichmuller(&self, c: u32, a: &WittVector) -> WittVector {
        WittVector { comps: a.comps.iter().map(|x| x.scale(c as i64)).collect() }
    }

    fn eval(&self, polys: &[ModPoly], a: &WittVector, b: &WittVector) -> Result<WittVector> {
        let n = self.cache.n;
        let mut powers = PowerTable::new(self, a, b, n);
        let mut out = Vec::with_capacity(self.len);
        for poly in &polys[..self.len] {
            let mut acc = CharPSeries::zero(self.p()).truncate(self.prec);
            for (mono, c) in &poly.terms {
                let mut term: Option<CharPSeries> = None;
                for &(var, e) in mono {
                    let f = powers.get(var, e)?;
                    if f.is_empty() {
                        term = Some(f.clone());
                        break;
                    }
                    term = Some(match term {
                        None => f.clone(),
                        Some(t) => t.mul_capped(f, self.term_cap)?.truncate(self.prec),
                    });
                }
                let term = term.unwrap_or_else(|| CharPSeries::one(self.p()).truncate(self.prec));
                if !term.is_empty() {
                    acc = acc.add(&term.scale(*c as i64))?;
                }
            }
            out.push(acc);
        }
        Ok(WittVector { comps: out })
    }
}

/// Memoized powers `x^e`, built from Frobenius iterates by base-`p` digits.
struct PowerTable<'a> {
    ring: &'a WittRing,
    base: Vec<Option<&'a CharPSeries>>,
    frob: HashMap<(usize, u32), CharPSeries>,
    pows: HashMap<(usize, u32), CharPSeries>,
}

impl<'a> PowerTable<'a> {
    fn new(ring: &'a WittRing, a: &'a WittVector, b: &'a WittVector, n: usize) -> Self {
        let mut base = vec![None; 2 * n];
        for i in 0..ring.len {
            base[i] = Some(&a.comps[i]);
            base[n + i] = Some(&b.comps[i]);
        }
        PowerTable { ring, base, frob: HashMap::new(), pows: HashMap::new() }
    }

    fn frob_iter(&mut self, var: usize, j: u32) -> Result<CharPSeries> {
        if let Some(f) = self.frob.get(&(var, j)) {
            return Ok(f.clone());
        }
        let f = if j == 0 {
            self.base[var].expect("variable within vector length").clone()
        } else {
            self.frob_iter(var, j - 1)?.frobenius()?.truncate(self.ring.prec)
        };
        self.frob.insert((var, j), f.clone());
        Ok(f)
    }

    fn get(&mut self, var: usize, e: u32) -> Result<&CharPSeries> {
        if !self.pows.contains_key(&(var, e)) {
            let p = self.ring.p();
            let mut acc = CharPSeries::one(p).truncate(self.ring.prec);
            let (mut rest, mut j) = (e, 0u32);
            while rest > 0 {
                let d = rest % p;
                if d > 0 {
                    let f = self.frob_iter(var, j)?;
                    for _ in 0..d {
                        acc = acc.mul_capped(&f, self.ring.term_cap)?.truncate(self.ring.prec);
                    }
                }
                rest /= p;
                j += 1;
            }
            self.pows.insert((var, e), acc);
        }
        Ok(&self.pows[&(var, e)])
    }
}

/// Integer-coefficient series in `t^{Z[1/p]}`: a torsion-free lift carrier.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntSeries {
    terms: BTreeMap<PExponent, BigInt>,
}

impl IntSeries {
    pub fn zero() -> Self {
        IntSeries::default()
    }

    pub fn monomial(c: i64, e: PExponent) -> Self {
        let mut s = IntSeries::zero();
        if c != 0 {
            s.terms.insert(e, BigInt::from(c));
        }
        s
    }

    /// Lifts coefficients `{0..p-1}` to integers.
    pub fn lift(f: &CharPSeries) -> Self {
        IntSeries { terms: f.terms().map(|(e, c)| (*e, BigInt::from(*c))).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(*e).or_default() += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = IntSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        };
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = IntSeries::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *out.terms.entry(ea.checked_add(eb)?).or_default() += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn pow(&self, k: u64, p: u32) -> Result<Self> {
        let mut acc = IntSeries::monomial(1, PExponent::zero(p));
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Coefficients reduced mod `p`, as a char-`p` series (exact).
    pub fn reduce(&self, p: u32) -> Result<CharPSeries> {
        let pb = BigInt::from(p);
        CharPSeries::new(
            p,
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.mod_floor(&pb).to_i64().expect("residue fits"))),
            None,
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PExponent, &BigInt)> {
        self.terms.iter()
    }
}

/// Ghost components `w_k = Σ_{i≤k} p^i x_i^{p^{k−i}}` of a lifted vector.
pub fn ghost_oracle(p: u32, x: &[IntSeries]) -> Result<Vec<IntSeries>> {
    let pb = BigInt::from(p);
    (0..x.len())
        .map(|k| {
            let mut w = IntSeries::zero();
            for (i, xi) in x.iter().enumerate().take(k + 1) {
                let t = xi.pow((p as u64).pow((k - i) as u32), p)?;
                w = w.add(&t.scale(&pb.pow(i as u32)));
            }
            Ok(w)
        })
        .collect()
}

/// Evaluates an integer polynomial on lifted components `x`, `y`.
pub fn eval_int_poly(p: u32, poly: &IntPoly, x: &[IntSeries], y: &[IntSeries]) -> Result<IntSeries> {
    let n = poly.nvars() / 2;
    let mut acc = IntSeries::zero();
    for (mono, c) in poly.terms() {
        let mut term = IntSeries::monomial(1, PExponent::zero(p));
        for (var, &e) in mono.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if var < n { &x[var] } else { &y[var - n] };
            term = term.mul(&base.pow(e as u64, p)?)?;
        }
        acc = acc.add(&term.scale(c));
    }
    Ok(acc)
}

pub fn witt_add(ring: &WittRing, a: &WittVector, b: &WittVector) -> Result<WittVector> {
    ring.add(a, b)
}

pub fn witt_mul(ring: &WittRing, a: &WittVector, b: &WittVector) -> Result<WittVector> {
    ring.mul(a, b)
}

pub fn teichmuller(ring: &WittRing, a: &CharPSeries) -> Result<WittVector> {
    ring.teichmuller(a)
}

pub fn verschiebung(ring: &WittRing, a: &WittVector) -> Result<WittVector> {
    ring.verschiebung(a)
}

pub fn witt_frobenius(ring: &WittRing, a: &WittVector) -> Result<WittVector> {
    ring.frobenius(a)
}

/// `z = [t] − p`, with `p` formed as `1 + 1 + … + 1`.
pub fn primitive_z(ring: &WittRing) -> Result<WittVector> {
    let one = ring.one();
    let mut p_vec = ring.zero();
    for _ in 0..ring.p() {
        p_vec = ring.add(&p_vec, &one)?;
    }
    let t = ring.teichmuller(&CharPSeries::t_pow(ring.p(), 1, 0))?;
    ring.add(&t, &ring.neg(&p_vec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_from(nv: usize, terms: &[(&[u32], i64)]) -> IntPoly {
        let mut p = IntPoly::zero(nv);
        for (e, c) in terms {
            p.insert_add(e.to_vec(), BigInt::from(*c));
        }
        p
    }

    #[test]
    fn s0_and_s1_for_p2() {
        let c = build_witt_polys(2, 2).unwrap();
        // vars: X0 X1 Y0 Y1
        assert_eq!(c.sum_poly(0), &poly_from(4, &[(&[1, 0, 0, 0], 1), (&[0, 0, 1, 0], 1)]));
        assert_eq!(
            c.sum_poly(1),
            &poly_from(4, &[(&[0, 1, 0, 0], 1), (&[0, 0, 0, 1], 1), (&[1, 0, 1, 0], -1)])
        );
        assert_eq!(
            c.prod_poly(1),
            &poly_from(4, &[(&[2, 0, 0, 1], 1), (&[0, 1, 2, 0], 1), (&[0, 1, 0, 1], 2)])
        );
    }

    #[test]
    fn ghost_identities() {
        for (p, n) in [(2, 3), (3, 3), (5, 2)] {
            build_witt_polys(p, n).unwrap().verify_ghost().unwrap();
        }
    }

    #[test]
    fn neg_one_vectors() {
        // -1 in Z_2 has all Witt components 1; for odd p it is the Teichmüller [p-1]
        assert_eq!(build_witt_polys(2, 3).unwrap().neg_one(), &[1, 1, 1]);
        assert_eq!(build_witt_polys(3, 3).unwrap().neg_one(), &[2, 0, 0]);
    }

    fn ring(p: u32, n: usize, prec: i64) -> WittRing {
        let cache = WittPolyCache::get(p, n, None).unwrap();
        WittRing::new(cache, n, PExponent::int(p, prec)).unwrap()
    }

    #[test]
    fn one_plus_one_is_v1() {
        let r = ring(2, 2, 4);
        let two = r.add(&r.one(), &r.one()).unwrap();
        assert_eq!(two, r.constant(&[0, 1]));
        assert_eq!(r.verschiebung(&r.one()).unwrap(), two);
    }

    #[test]
    fn teichmuller_identity_and_zero() {
        let r = ring(3, 3, 9);
        let t = r.teichmuller(&CharPSeries::t_pow(3, 1, 0)).unwrap();
        assert_eq!(r.add(&t, &r.zero()).unwrap(), t);
        assert!(r.teichmuller(&CharPSeries::zero(3)).unwrap().is_zero());
        assert!(r.teichmuller(&CharPSeries::t_pow(3, -1, 0)).is_err());
    }

    #[test]
    fn teichmuller_multiplicative() {
        let r = ring(2, 3, 4);
        let a = CharPSeries::new(2, [(PExponent::zero(2), 1), (PExponent::new(2, 1, 1), 1)], None).unwrap();
        let b = CharPSeries::new(2, [(PExponent::new(2, 1, 2), 1), (PExponent::int(2, 1), 1)], None).unwrap();
        let lhs = r.mul(&r.teichmuller(&a).unwrap(), &r.teichmuller(&b).unwrap()).unwrap();
        let rhs = r.teichmuller(&a.mul(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitive_element() {
        let r = ring(2, 3, 4);
        let z = primitive_z(&r).unwrap();
        assert_eq!(z.comps()[0], CharPSeries::t_pow(2, 1, 0).truncate(PExponent::int(2, 4)));
        let mut p_vec = r.zero();
        for _ in 0..2 {
            p_vec = r.add(&p_vec, &r.one()).unwrap();
        }
        let t = r.teichmuller(&CharPSeries::t_pow(2, 1, 0)).unwrap();
        assert_eq!(r.add(&z, &p_vec).unwrap(), t);
        // z − [t] = −p = V(−1 shifted): first component 0, then the unit −1
        let d = r.sub(&z, &t).unwrap();
        assert!(d.comps()[0].is_empty());
        let unit = &d.comps()[1];
        assert_eq!(unit.valuation(), Some(PExponent::zero(2)));
    }

    #[test]
    fn frobenius_of_teichmuller() {
        let r = ring(3, 2, 6);
        let a = CharPSeries::new(3, [(PExponent::new(3, 1, 1), 2), (PExponent::int(3, 1), 1)], None).unwrap();
        let fa = r.frobenius(&r.teichmuller(&a).unwrap()).unwrap();
        assert_eq!(fa, r.teichmuller(&a.frobenius().unwrap()).unwrap());
    }

    #[test]
    fn ghost_of_teichmuller_pair() {
        let a = IntSeries::monomial(1, PExponent::new(2, 1, 1));
        let w = ghost_oracle(2, &[a.clone(), IntSeries::zero()]).unwrap();
        assert_eq!(w[0], a);
        assert_eq!(w[1], a.mul(&a).unwrap());
    }

    #[test]
    fn cache_round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let c = build_witt_polys(2, 2).unwrap();
        let path = c.save(dir.path()).unwrap();
        let back = WittPolyCache::load(&path).unwrap();
        assert_eq!(back.sum_poly(1), c.sum_poly(1));

        let mut f = c.to_file_json();
        f.polys[1].terms[0].coeff = "1/2".into();
        let err = WittPolyCache::from_file_json(&f).unwrap_err();
        assert!(err.to_string().contains("integrality"), "{err}");

        let mut f = c.to_file_json();
        f.polys[1].terms[0].coeff = "3".into();
        assert!(matches!(WittPolyCache::from_file_json(&f), Err(Error::WittCache(_))));
    }
}
