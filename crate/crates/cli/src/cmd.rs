use clap::{Args, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use perfectoid_core::charp::{CharPJson, CharPSeries};
use perfectoid_core::config::GlobalConfig;
use perfectoid_core::gauss::{
    cauchy_gap_demo, gauss_eval, is_power_bounded, spectral_seminorm, DescriptorJson, GaussAlgebra, GaussJson,
    SeminormDescriptor,
};
use perfectoid_core::report::{self, Output, Table};
use perfectoid_core::ring::{CharPField, CoeffField, NormedRing, Side, UntiltField};
use perfectoid_core::rings::{CustomTable, CustomTableJson, DualNumbers, PolyGaussC, ProductOfFields};
use perfectoid_core::spectra::{
    berkovich_points, candidate_from_json, is_topological_zero_divisor, shilov_bruteforce, topspec_enumerate,
    topspec_zar_compare, CandidateJson, CandidatePrime, Elem, GaussToy, PolyToy, ProductToy, SpectralToy,
};
use perfectoid_core::tilt::{
    approx_check, approx_construct, approx_verify, ideal_sharp, ideal_tilt, seminorm_tilt, spectral_radical,
    tilt_add_limit, IdealJson, MonomialIdeal,
};
use perfectoid_core::untilt::UntiltCtx;
use perfectoid_core::values::{norm_max, norm_mul, norm_nth_root, NormValue, PExponent};
use perfectoid_core::witt::{primitive_z, WittPolyCache, WittRing, WittVector};
use perfectoid_core::zariski::{invert_one_plus, is_zariskian_sample, terms_needed, zar_norm, ZarFraction};
use perfectoid_core::{Error, Result};

// ----- argument parsing -----

/// `a` or `a/b` with `b` a power of `p`.
pub fn exp_arg(p: u32, s: &str) -> Result<PExponent> {
    let bad = || Error::Invalid(format!("cannot parse exponent {s:?}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    PExponent::from_ratio(p, a, b)
}

/// `zero`, or an exponent `E` for `p^(-E)`.
pub fn norm_arg(p: u32, s: &str) -> Result<NormValue> {
    if s.trim() == "zero" {
        Ok(NormValue::Zero)
    } else {
        Ok(NormValue::Pow(exp_arg(p, s)?))
    }
}

/// Inline JSON, or `@path`.
fn json_arg<T: DeserializeOwned>(s: &str) -> Result<T> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => s.to_string(),
    };
    Ok(serde_json::from_str(&text)?)
}

fn series(s: &str) -> Result<CharPSeries> {
    CharPSeries::from_json(&json_arg::<CharPJson>(s)?)
}

fn required<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Invalid(format!("--{name} is required for this operation")))
}

fn cache(cfg: &GlobalConfig, p: u32, n: usize) -> Result<std::sync::Arc<WittPolyCache>> {
    WittPolyCache::get(p, n, cfg.cache_dir().as_deref())
}

fn ctx(cfg: &GlobalConfig) -> Result<UntiltCtx> {
    UntiltCtx::new(cache(cfg, cfg.p, cfg.witt_len)?, cfg.witt_len, cfg.t_prec())
}

fn charp_field(cfg: &GlobalConfig) -> CharPField {
    CharPField::exact(cfg.p).with_term_cap(cfg.term_cap)
}

fn series_out(f: &CharPSeries) -> Value {
    json!({ "result": f.to_json(), "text": f.to_string() })
}

// ----- values -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ValuesOp {
    /// Sum of two exponents.
    Add,
    /// Product of two norms.
    Mul,
    /// Maximum of two norms.
    Max,
    /// n-th root of a norm.
    Root,
    /// Exact rendering of a norm.
    Render,
}

#[derive(Args, Debug)]
pub struct ValuesArgs {
    op: ValuesOp,
    a: String,
    b: Option<String>,
    #[arg(long)]
    n: Option<u64>,
}

pub fn values(cfg: &GlobalConfig, a: ValuesArgs) -> Result<Output> {
    let p = cfg.p;
    let b = || required(&a.b, "b (second operand)");
    let json = match a.op {
        ValuesOp::Add => {
            let e = exp_arg(p, &a.a)?.checked_add(&exp_arg(p, b()?)?)?;
            json!({ "result": e.to_string(), "exp": e.to_json() })
        }
        ValuesOp::Mul => json!({ "result": norm_mul(&norm_arg(p, &a.a)?, &norm_arg(p, b()?)?)?.render(p) }),
        ValuesOp::Max => json!({ "result": norm_max(&norm_arg(p, &a.a)?, &norm_arg(p, b()?)?)?.render(p) }),
        ValuesOp::Root => {
            let n = a.n.ok_or_else(|| Error::Invalid("--n is required for root".into()))?;
            let r = norm_nth_root(&norm_arg(p, &a.a)?, n)?;
            json!({ "result": r.to_ext().render(p), "in_value_group": r.in_value_group() })
        }
        ValuesOp::Render => json!({ "result": norm_arg(p, &a.a)?.render(p) }),
    };
    Ok(Output::from_json(json))
}

// ----- charp -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CharpOp {
    Add,
    Mul,
    Frobenius,
    /// p-th root, iterated `--m` times.
    Root,
    Norm,
    /// f = a + t·r with a supported in [0, 1).
    Split,
}

#[derive(Args, Debug)]
pub struct CharpArgs {
    op: CharpOp,
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 1)]
    m: u32,
}

pub fn charp(cfg: &GlobalConfig, a: CharpArgs) -> Result<Output> {
    let f = series(&a.f)?;
    let p = f.p();
    let json = match a.op {
        CharpOp::Add => series_out(&f.add(&series(required(&a.g, "g")?)?)?),
        CharpOp::Mul => series_out(&f.mul_capped(&series(required(&a.g, "g")?)?, cfg.term_cap)?),
        CharpOp::Frobenius => series_out(&f.frobenius()?),
        CharpOp::Root => series_out(&f.pth_root_iter(a.m)),
        CharpOp::Norm => json!({ "result": f.norm().render(p) }),
        CharpOp::Split => {
            let (lo, r) = f.split_at_one()?;
            json!({ "a": lo.to_json(), "r": r.to_json(), "text": format!("({lo}) + t*({r})") })
        }
    };
    Ok(Output::from_json(json))
}

// ----- witt -----

#[derive(Subcommand, Debug)]
pub enum WittCmd {
    /// Universal sum and product polynomials S_k, P_k.
    Polys {
        /// Witt length (defaults to --witt-len).
        #[arg(long)]
        n: Option<usize>,
    },
    Add {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Mul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Teichmuller {
        #[arg(long)]
        a: String,
    },
    /// The primitive element z = [t] - p.
    PrimitiveZ,
}

fn witt_ring(cfg: &GlobalConfig) -> Result<WittRing> {
    WittRing::new(cache(cfg, cfg.p, cfg.witt_len)?, cfg.witt_len, cfg.t_prec())
}

fn witt_vec(ring: &WittRing, s: &str) -> Result<WittVector> {
    let comps: Vec<CharPJson> = json_arg(s)?;
    ring.vector(comps.iter().map(CharPSeries::from_json).collect::<Result<_>>()?)
}

fn witt_out(v: &WittVector) -> Output {
    let mut table = Table::new(&["index", "component"]);
    for (i, c) in v.comps().iter().enumerate() {
        table.push(vec![i.to_string(), c.to_string()]);
    }
    let comps: Vec<_> = v.comps().iter().map(|c| c.to_json()).collect();
    Output { json: json!({ "components": comps }), table }
}

pub fn witt(cfg: &GlobalConfig, c: WittCmd) -> Result<Output> {
    match c {
        WittCmd::Polys { n } => {
            let n = n.unwrap_or(cfg.witt_len);
            let cache = cache(cfg, cfg.p, n)?;
            let mut table = Table::new(&["role", "index", "polynomial"]);
            let mut sum = Vec::new();
            let mut prod = Vec::new();
            for k in 0..n {
                let mut s = report::witt_poly_json(cache.sum_poly(k), n);
                s["index"] = json!(k);
                table.push(vec!["S".into(), k.to_string(), report::witt_poly_text(cache.sum_poly(k), n)]);
                sum.push(s);
            }
            for k in 0..n {
                let mut s = report::witt_poly_json(cache.prod_poly(k), n);
                s["index"] = json!(k);
                table.push(vec!["P".into(), k.to_string(), report::witt_poly_text(cache.prod_poly(k), n)]);
                prod.push(s);
            }
            Ok(Output { json: json!({ "p": cfg.p, "n": n, "sum": sum, "prod": prod }), table })
        }
        WittCmd::Add { a, b } => {
            let r = witt_ring(cfg)?;
            Ok(witt_out(&r.add(&witt_vec(&r, &a)?, &witt_vec(&r, &b)?)?))
        }
        WittCmd::Mul { a, b } => {
            let r = witt_ring(cfg)?;
            Ok(witt_out(&r.mul(&witt_vec(&r, &a)?, &witt_vec(&r, &b)?)?))
        }
        WittCmd::Teichmuller { a } => {
            let r = witt_ring(cfg)?;
            Ok(witt_out(&r.teichmuller(&series(&a)?)?))
        }
        WittCmd::PrimitiveZ => Ok(witt_out(&primitive_z(&witt_ring(cfg)?)?)),
    }
}

// ----- untilt -----

#[derive(Subcommand, Debug)]
pub enum UntiltCmd {
    /// Teichmüller lift of a series, reduced to digit form.
    Sharp {
        #[arg(long)]
        f: String,
    },
    Add {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Mul {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Norm {
        #[arg(long)]
        x: String,
    },
    Digit0 {
        #[arg(long)]
        x: String,
    },
}

fn untilt_out(ctx: &UntiltCtx, x: &perfectoid_core::untilt::UntiltElement) -> Output {
    Output::from_json(json!({
        "result": ctx.to_json(x),
        "text": x.to_string(),
        "norm": ctx.norm(x).render(ctx.p()),
    }))
}

pub fn untilt(cfg: &GlobalConfig, c: UntiltCmd) -> Result<Output> {
    let ctx = ctx(cfg)?;
    let field = UntiltField::new(ctx.clone());
    let elem = |s: &str| field.elem_from_json(&json_arg::<Value>(s)?);
    match c {
        UntiltCmd::Sharp { f } => Ok(untilt_out(&ctx, &ctx.sharp(&series(&f)?)?)),
        UntiltCmd::Add { x, y } => Ok(untilt_out(&ctx, &ctx.add(&elem(&x)?, &elem(&y)?)?)),
        UntiltCmd::Mul { x, y } => Ok(untilt_out(&ctx, &ctx.mul(&elem(&x)?, &elem(&y)?)?)),
        UntiltCmd::Norm { x } => Ok(Output::from_json(json!({ "result": ctx.norm(&elem(&x)?).render(ctx.p()) }))),
        UntiltCmd::Digit0 { x } => Ok(Output::from_json(series_out(elem(&x)?.digit0()))),
    }
}

// ----- gauss -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FieldKind {
    Charp,
    Untilt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpectralRing {
    /// Gauss algebra over the exact char-p field.
    Charp,
    /// Gauss algebra over the untilt.
    Untilt,
    /// K[eps]/(eps^2) with |a + b eps| = max(|a|, p|b|).
    Dual,
    /// Finite ring given by a table (`--table`).
    Custom,
}

#[derive(Subcommand, Debug)]
pub enum GaussCmd {
    /// Evaluates one seminorm on a Gauss element.
    Eval {
        #[arg(long, value_enum, default_value_t = FieldKind::Charp)]
        field: FieldKind,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        f: String,
    },
    /// Upper bound min_n ||f^n||^(1/n) with its certificate sequence.
    Spectral {
        #[arg(long, value_enum, default_value_t = SpectralRing::Charp)]
        ring: SpectralRing,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        table: Option<String>,
        /// Element JSON; `epsilon` on dual numbers.
        #[arg(long)]
        f: String,
        #[arg(long)]
        max_n: Option<u64>,
    },
    /// Successive differences of a Cauchy sequence without limit in the
    /// uncompleted algebra.
    Cauchy {
        #[arg(long, default_value_t = 6)]
        m_max: u64,
    },
}

fn eval_on<K: CoeffField>(field: K, d: usize, phi: &str, f: &str) -> Result<Output> {
    let p = field.p();
    let alg = GaussAlgebra::new(field, d);
    let phi = SeminormDescriptor::from_json(p, &json_arg::<DescriptorJson>(phi)?)?;
    let f = alg.from_json(&json_arg::<GaussJson>(f)?)?;
    let v = gauss_eval(&alg, &phi, &f)?;
    Ok(Output::from_json(json!({ "phi": phi.label(p), "value": v.render(p) })))
}

fn spectral_on<R: NormedRing>(ring: &R, f: &R::Elem, max_n: u64) -> Result<Output> {
    let rep = spectral_seminorm(ring, f, max_n)?;
    let pb = is_power_bounded(ring, f).ok();
    Ok(report::spectral(&rep, ring.p(), pb))
}

pub fn gauss(cfg: &GlobalConfig, c: GaussCmd) -> Result<Output> {
    match c {
        GaussCmd::Eval { field, d, phi, f } => match field {
            FieldKind::Charp => eval_on(charp_field(cfg), d, &phi, &f),
            FieldKind::Untilt => eval_on(UntiltField::new(ctx(cfg)?), d, &phi, &f),
        },
        GaussCmd::Spectral { ring, d, table, f, max_n } => {
            let max_n = max_n.unwrap_or(cfg.max_spectral_n);
            match ring {
                SpectralRing::Charp => {
                    let alg = GaussAlgebra::new(charp_field(cfg), d);
                    spectral_on(&alg, &alg.from_json(&json_arg(&f)?)?, max_n)
                }
                SpectralRing::Untilt => {
                    let alg = GaussAlgebra::new(UntiltField::new(ctx(cfg)?), d);
                    spectral_on(&alg, &alg.from_json(&json_arg(&f)?)?, max_n)
                }
                SpectralRing::Dual => {
                    let k = charp_field(cfg);
                    let ring = DualNumbers::new(k.clone());
                    let x = if f.trim() == "epsilon" {
                        ring.epsilon()
                    } else {
                        let (a, b): (Value, Value) = json_arg(&f)?;
                        (k.elem_from_json(&a)?, k.elem_from_json(&b)?)
                    };
                    spectral_on(&ring, &x, max_n)
                }
                SpectralRing::Custom => {
                    let t = CustomTable::from_json(&json_arg::<CustomTableJson>(required(&table, "table")?)?)?;
                    let x: usize = json_arg(&f)?;
                    if x >= t.size() {
                        return Err(Error::Invalid(format!("element {x} outside a table of size {}", t.size())));
                    }
                    spectral_on(&t, &x, max_n)
                }
            }
        }
        GaussCmd::Cauchy { m_max } => Ok(report::cauchy(&cauchy_gap_demo(&UntiltField::new(ctx(cfg)?), m_max)?, cfg.p)),
    }
}

// ----- tilt -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum IdealOp {
    /// I -> I-flat (input on the untilt side).
    Flat,
    /// J -> J-sharp (input on the tilt side).
    Sharp,
    /// Spectral radical (input on the untilt side).
    SpectralRadical,
}

#[derive(Subcommand, Debug)]
pub enum TiltCmd {
    /// s_m = (f^(n+m) + g^(n+m))^(p^m) and its stabilization.
    AddLimit {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Defaults to the Witt length plus one.
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Monomial ideal maps; prints the resulting ideal.
    Ideal {
        #[arg(long, value_enum)]
        op: IdealOp,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Builds a tilt-side approximation of a Gauss element over the untilt.
    Approx {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Radii as norm arguments, comma separated.
        #[arg(long, default_value = "0,1,2")]
        grid: String,
    },
    /// Checks phi(f - g#) <= p^(-1) max(phi(g#), eps) for each phi.
    Verify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        eps: String,
        /// JSON list of descriptors; defaults to the Gauss norm and eval at t^(1/p).
        #[arg(long)]
        phi: Option<String>,
    },
    /// The tilt-side descriptor with the same data.
    Seminorm {
        #[arg(long)]
        phi: String,
    },
}

pub fn tilt(cfg: &GlobalConfig, c: TiltCmd) -> Result<Output> {
    let p = cfg.p;
    match c {
        TiltCmd::AddLimit { f, g, n, m_max } => {
            let ctx = ctx(cfg)?;
            let m_max = m_max.unwrap_or(cfg.witt_len as u32 + 1);
            let rep = tilt_add_limit(&ctx, &series(&f)?, &series(&g)?, n, m_max)?;
            Ok(report::add_limit(&rep, &ctx))
        }
        TiltCmd::Ideal { op, ideal, d } => {
            let j: IdealJson = json_arg(&ideal)?;
            let out = match op {
                IdealOp::Flat => ideal_tilt(&MonomialIdeal::from_json(Side::Untilt, d, p, &j)?)?,
                IdealOp::Sharp => ideal_sharp(&MonomialIdeal::from_json(Side::Tilt, d, p, &j)?)?,
                IdealOp::SpectralRadical => spectral_radical(&MonomialIdeal::from_json(Side::Untilt, d, p, &j)?),
            };
            let json = serde_json::to_value(out.to_json())?;
            let mut table = Table::new(&["ideal"]);
            table.push(vec![out.to_string()]);
            Ok(Output { json, table })
        }
        TiltCmd::Approx { eps, f, d, grid } => {
            let alg = GaussAlgebra::new(UntiltField::new(ctx(cfg)?), d);
            let eps = norm_arg(p, &eps)?;
            let f = alg.from_json(&json_arg(&f)?)?;
            let grid = grid.split(',').map(|s| norm_arg(p, s)).collect::<Result<Vec<_>>>()?;
            let g = approx_construct(&alg, &f, &eps)?;
            let rows = approx_check(&alg, &f, &g, &eps, &grid)?;
            let (rows_json, table) = report::approx_rows(&rows, p);
            let tilt_alg = GaussAlgebra::new(CharPField::exact(p), d);
            let json = json!({
                "g": tilt_alg.to_json(&g),
                "rows": rows_json,
                "ok": rows.iter().all(|r| r.ok),
            });
            Ok(Output { json, table })
        }
        TiltCmd::Verify { f, g, eps, phi } => {
            let ctx = ctx(cfg)?;
            let field = UntiltField::new(ctx.clone());
            let f = field.elem_from_json(&json_arg(&f)?)?;
            let phis = match phi {
                Some(s) => json_arg::<Vec<DescriptorJson>>(&s)?
                    .iter()
                    .map(|j| SeminormDescriptor::from_json(p, j))
                    .collect::<Result<Vec<_>>>()?,
                None => vec![
                    SeminormDescriptor::gauss_one(p, 1),
                    SeminormDescriptor::EvalPoint(vec![CharPSeries::t_pow(p, 1, 1)]),
                ],
            };
            let rows = approx_verify(&ctx, &f, &series(&g)?, &norm_arg(p, &eps)?, &phis)?;
            Ok(report::verify_rows(&rows, p))
        }
        TiltCmd::Seminorm { phi } => {
            let d = seminorm_tilt(&SeminormDescriptor::from_json(p, &json_arg(&phi)?)?)?;
            Ok(Output::from_json(json!({ "result": d.to_json(), "label": d.label(p) })))
        }
    }
}

// ----- zariski -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ZarRing {
    /// The untilt field (complete).
    Untilt,
    /// The exact char-p field (complete).
    Charp,
    /// K[T] over the exact char-p field with |T| = c (not complete).
    Poly,
}

#[derive(Args, Debug)]
pub struct ZarOpts {
    /// Target precision exponent E (target p^(-E)); defaults to the Witt length.
    #[arg(long)]
    prec: Option<String>,
    /// Defaults to the number of terms the norm of x requires, else 64.
    #[arg(long)]
    term_max: Option<usize>,
    /// Exponent of c for the polynomial ring.
    #[arg(long, default_value = "1")]
    c: String,
}

#[derive(Subcommand, Debug)]
pub enum ZariskiCmd {
    /// Geometric-series inverse of 1 + x.
    Invert {
        #[arg(long, value_enum, default_value_t = ZarRing::Untilt)]
        ring: ZarRing,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        opts: ZarOpts,
    },
    /// Sample-based Zariskian check; only a divergence witness is conclusive.
    Check {
        #[arg(value_enum)]
        ring: ZarRing,
        /// JSON list of elements.
        #[arg(long)]
        samples: String,
        #[command(flatten)]
        opts: ZarOpts,
    },
    /// ||a/s|| for a fraction in the polynomial ring.
    Norm {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long, default_value = "1")]
        c: String,
    },
}

fn poly_ring(cfg: &GlobalConfig, c: &str) -> Result<PolyGaussC<CharPField>> {
    PolyGaussC::new(charp_field(cfg), norm_arg(cfg.p, c)?)
}

fn poly_elem(ring: &PolyGaussC<CharPField>, s: &str) -> Result<Vec<CharPSeries>> {
    let coeffs: Vec<Value> = json_arg(s)?;
    Ok(ring.poly(coeffs.iter().map(|v| ring.field().elem_from_json(v)).collect::<Result<_>>()?))
}

fn poly_json(ring: &PolyGaussC<CharPField>, f: &[CharPSeries]) -> Value {
    Value::Array(f.iter().map(|c| ring.field().elem_to_json(c)).collect())
}

fn invert_on<R: NormedRing>(ring: &R, x: &R::Elem, o: &ZarOpts, cfg: &GlobalConfig, to_json: impl Fn(&R::Elem) -> Value) -> Result<Output> {
    let target = match &o.prec {
        Some(s) => norm_arg(cfg.p, s)?,
        None => NormValue::p_pow(cfg.p, cfg.witt_len as i64),
    };
    let term_max = o.term_max.unwrap_or_else(|| {
        terms_needed(&ring.norm(x).lossy(), &target).map_or(64, |k| k as usize)
    });
    let rep = invert_one_plus(ring, x, term_max, &target)?;
    Ok(report::invert(&rep.status, rep.terms, to_json(&rep.approx), ring.render(&rep.approx), cfg.p))
}

fn check_on<R: NormedRing>(ring: &R, samples: &[R::Elem], o: &ZarOpts, cfg: &GlobalConfig) -> Result<Output> {
    let target = match &o.prec {
        Some(s) => norm_arg(cfg.p, s)?,
        None => NormValue::p_pow(cfg.p, cfg.witt_len as i64),
    };
    let rep = is_zariskian_sample(ring, samples, o.term_max.unwrap_or(64), &target)?;
    Ok(report::zariskian(&rep, cfg.p))
}

pub fn zariski(cfg: &GlobalConfig, c: ZariskiCmd) -> Result<Output> {
    match c {
        ZariskiCmd::Invert { ring, x, opts } => match ring {
            ZarRing::Untilt => {
                let k = UntiltField::new(ctx(cfg)?);
                let x = k.elem_from_json(&json_arg(&x)?)?;
                invert_on(&k, &x, &opts, cfg, |e| k.elem_to_json(e))
            }
            ZarRing::Charp => {
                let k = charp_field(cfg);
                let x = k.elem_from_json(&json_arg(&x)?)?;
                invert_on(&k, &x, &opts, cfg, |e| k.elem_to_json(e))
            }
            ZarRing::Poly => {
                let r = poly_ring(cfg, &opts.c)?;
                let x = poly_elem(&r, &x)?;
                invert_on(&r, &x, &opts, cfg, |e| poly_json(&r, e))
            }
        },
        ZariskiCmd::Check { ring, samples, opts } => {
            let raw: Vec<Value> = json_arg(&samples)?;
            match ring {
                ZarRing::Untilt => {
                    let k = UntiltField::new(ctx(cfg)?);
                    let xs = raw.iter().map(|v| k.elem_from_json(v)).collect::<Result<Vec<_>>>()?;
                    check_on(&k, &xs, &opts, cfg)
                }
                ZarRing::Charp => {
                    let k = charp_field(cfg);
                    let xs = raw.iter().map(|v| k.elem_from_json(v)).collect::<Result<Vec<_>>>()?;
                    check_on(&k, &xs, &opts, cfg)
                }
                ZarRing::Poly => {
                    let r = poly_ring(cfg, &opts.c)?;
                    let xs = raw.iter().map(|v| poly_elem(&r, &v.to_string())).collect::<Result<Vec<_>>>()?;
                    check_on(&r, &xs, &opts, cfg)
                }
            }
        }
        ZariskiCmd::Norm { num, den, c } => {
            let r = poly_ring(cfg, &c)?;
            let fr = ZarFraction::new(&r, poly_elem(&r, &num)?, poly_elem(&r, &den)?)?;
            Ok(Output::from_json(json!({ "result": zar_norm(&r, &fr).render(cfg.p) })))
        }
    }
}

// ----- spectra -----

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ToyKind {
    /// K^k over the exact char-p field, sup norm.
    Product,
    /// K[T] over the untilt with |T| = c.
    Poly,
    /// Gauss algebra over the exact char-p field.
    Gauss,
}

#[derive(Args, Debug)]
pub struct ToyArgs {
    #[arg(long, value_enum, default_value_t = ToyKind::Product)]
    ring: ToyKind,
    /// Number of factors (product).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Exponent of c (poly).
    #[arg(long, default_value = "1")]
    c: String,
    /// JSON list of tilt-side points mu, lambda = mu# (poly); defaults to 0, t, 1.
    #[arg(long)]
    lambdas: Option<String>,
    /// Number of variables (gauss).
    #[arg(long, default_value_t = 1)]
    d: usize,
}

#[derive(Subcommand, Debug)]
pub enum SpectraCmd {
    /// The declared candidate family of bounded multiplicative seminorms.
    Points {
        #[command(flatten)]
        toy: ToyArgs,
    },
    /// Inclusion-minimal boundaries for a list of test elements.
    Shilov {
        #[command(flatten)]
        toy: ToyArgs,
        /// JSON list of elements; defaults to the toy's standard tests.
        #[arg(long)]
        tests: Option<String>,
    },
    /// Direct witness search against the Shilov-vanishing criterion.
    Tdz {
        #[command(flatten)]
        toy: ToyArgs,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 4)]
        budget: usize,
    },
    /// Membership of candidate primes in the topological spectrum.
    Topspec {
        #[command(flatten)]
        toy: ToyArgs,
        /// JSON list of candidates; defaults to (T - lambda) for each lambda (poly).
        #[arg(long)]
        candidates: Option<String>,
        /// JSON list of elements used to check kernels and boundedness.
        #[arg(long)]
        samples: Option<String>,
    },
    /// Extensions of candidates to the Zariskisation (poly only).
    CompareZar {
        #[command(flatten)]
        toy: ToyArgs,
        #[arg(long)]
        candidates: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        /// JSON list of denominators 1 + x with |x| < 1.
        #[arg(long)]
        dens: Option<String>,
    },
}

impl SpectraCmd {
    fn toy(&self) -> &ToyArgs {
        match self {
            SpectraCmd::Points { toy }
            | SpectraCmd::Shilov { toy, .. }
            | SpectraCmd::Tdz { toy, .. }
            | SpectraCmd::Topspec { toy, .. }
            | SpectraCmd::CompareZar { toy, .. } => toy,
        }
    }
}

fn list<T>(s: &Option<String>, parse: impl Fn(&Value) -> Result<T>) -> Result<Option<Vec<T>>> {
    match s {
        Some(s) => Ok(Some(json_arg::<Vec<Value>>(s)?.iter().map(parse).collect::<Result<_>>()?)),
        None => Ok(None),
    }
}

fn run_toy<T: SpectralToy>(
    toy: &T,
    cmd: &SpectraCmd,
    p: u32,
    parse: impl Fn(&Value) -> Result<Elem<T>>,
    parse_cand: impl Fn(&Value) -> Result<CandidatePrime>,
    default_cands: Vec<CandidatePrime>,
    default_samples: Vec<Elem<T>>,
) -> Result<Output> {
    match cmd {
        SpectraCmd::Points { .. } => {
            let pts = berkovich_points(toy)?;
            let labels: Vec<String> = pts.iter().map(|d| d.label(p)).collect();
            let mut table = Table::new(&["point"]);
            labels.iter().for_each(|l| table.push(vec![l.clone()]));
            Ok(Output { json: json!({ "family": toy.family_id(), "points": labels }), table })
        }
        SpectraCmd::Shilov { tests, .. } => {
            let tests = list(tests, &parse)?.unwrap_or_else(|| toy.shilov_tests());
            Ok(report::shilov(&shilov_bruteforce(toy, &tests)?, p))
        }
        SpectraCmd::Tdz { f, budget, .. } => {
            let f = parse(&json_arg(f)?)?;
            Ok(report::tdz(&is_topological_zero_divisor(toy, &f, *budget)?, p, &toy.family_id()))
        }
        SpectraCmd::Topspec { candidates, samples, .. } => {
            let cands = list(candidates, &parse_cand)?.unwrap_or(default_cands);
            let samples = list(samples, &parse)?.unwrap_or(default_samples);
            Ok(report::topspec(&topspec_enumerate(toy, &cands, &samples)?, p))
        }
        SpectraCmd::CompareZar { .. } => Err(Error::Unsupported("compare-zar needs --ring poly".into())),
    }
}

pub fn spectra(cfg: &GlobalConfig, c: SpectraCmd) -> Result<Output> {
    let p = cfg.p;
    let a = c.toy();
    let k = charp_field(cfg);
    match a.ring {
        ToyKind::Product => {
            let toy = ProductToy::new(ProductOfFields::new(k.clone(), a.k)?);
            let parse = |v: &Value| -> Result<Vec<CharPSeries>> {
                let xs: Vec<Value> = serde_json::from_value(v.clone())?;
                toy.ring().elem(xs.iter().map(|x| k.elem_from_json(x)).collect::<Result<_>>()?)
            };
            let cands = (0..a.k).map(CandidatePrime::CoordinateKernel).collect();
            let samples = toy.shilov_tests();
            run_toy(&toy, &c, p, parse, |v| cand(&k, 1, v), cands, samples)
        }
        ToyKind::Gauss => {
            let alg = GaussAlgebra::new(k.clone(), a.d);
            let grid = vec![NormValue::one(p), NormValue::p_pow(p, 1), NormValue::p_pow(p, 2)];
            let origin = vec![CharPSeries::zero(p); a.d];
            let toy = GaussToy::new(alg.clone(), grid, vec![origin]);
            let parse = |v: &Value| alg.from_json(&serde_json::from_value(v.clone())?);
            let mut cands = vec![CandidatePrime::Zero];
            for i in 0..a.d {
                cands.push(CandidatePrime::Monomial(MonomialIdeal::augmentation(Side::Tilt, a.d, i)?));
            }
            let samples = toy.shilov_tests();
            run_toy(&toy, &c, p, parse, |v| cand(&k, a.d, v), cands, samples)
        }
        ToyKind::Poly => {
            let field = UntiltField::new(ctx(cfg)?);
            let ring = PolyGaussC::new(field.clone(), norm_arg(p, &a.c)?)?;
            let lams = match &a.lambdas {
                Some(s) => json_arg::<Vec<CharPJson>>(s)?.iter().map(CharPSeries::from_json).collect::<Result<_>>()?,
                None => vec![CharPSeries::zero(p), CharPSeries::t_pow(p, 1, 0), CharPSeries::one(p)],
            };
            let cands: Vec<_> = lams.iter().cloned().map(CandidatePrime::Linear).collect();
            let toy = PolyToy::new(ring.clone(), vec![ring.c(), ring.c().mul(&NormValue::p_pow(p, 1))?], lams.clone());
            let parse = |v: &Value| -> Result<Vec<_>> {
                let xs: Vec<Value> = serde_json::from_value(v.clone())?;
                Ok(ring.poly(xs.iter().map(|x| field.elem_from_json(x)).collect::<Result<_>>()?))
            };
            let pe = field.uniformizer();
            let mut samples = vec![ring.t(), ring.one(), ring.linear(&pe)?];
            for mu in &lams {
                samples.push(ring.mul(&ring.t(), &ring.linear(&field.from_tilt(mu)?)?)?);
            }
            if let SpectraCmd::CompareZar { candidates, samples: s, dens, .. } = &c {
                let cands = list(candidates, |v| cand(&field, 1, v))?.unwrap_or(cands);
                let samples = list(s, parse)?.unwrap_or(samples);
                let dens = match list(dens, parse)? {
                    Some(d) => d,
                    None => {
                        let one_plus = |x: Vec<_>| ring.add(&ring.one(), &x);
                        vec![one_plus(ring.t())?, one_plus(ring.poly(vec![pe.clone()]))?]
                    }
                };
                return Ok(report::zar_compare(&topspec_zar_compare(&toy, &cands, &samples, &dens)?));
            }
            run_toy(&toy, &c, p, parse, |v| cand(&field, 1, v), cands, samples)
        }
    }
}

fn cand<K: CoeffField>(field: &K, d: usize, v: &Value) -> Result<CandidatePrime> {
    candidate_from_json(field, d, &serde_json::from_value::<CandidateJson>(v.clone())?)
}
