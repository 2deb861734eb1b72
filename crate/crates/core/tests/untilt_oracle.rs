//! Cross-checks the Witt-vector model of `O_C / p^n` against a direct model
//! inside `Z_p[π] / p^n` with `π^{p^L} = p`, where `f^#` is computed from
//! `(lift of f^{1/p^m})^{p^m}` for `m = n − 1`.

use perfectoid_core::charp::CharPSeries;
use perfectoid_core::untilt::{UntiltCtx, UntiltElement};
use perfectoid_core::values::PExponent;
use proptest::prelude::*;

struct Eisenstein {
    p: i128,
    n: u32,
    l: u32,
    modulus: i128,
    d: usize,
}

impl Eisenstein {
    fn new(p: u32, n: u32, l: u32) -> Self {
        let p = p as i128;
        Eisenstein { p, n, l, modulus: p.pow(n), d: p.pow(l) as usize }
    }

    fn zero(&self) -> Vec<i128> {
        vec![0; self.d]
    }

    fn add(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(self.modulus)).collect()
    }

    fn mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let k = i + j;
                let (k, c) = if k >= self.d { (k - self.d, x * y * self.p) } else { (k, x * y) };
                out[k] = (out[k] + c).rem_euclid(self.modulus);
            }
        }
        out
    }

    fn pow(&self, a: &[i128], k: u64) -> Vec<i128> {
        let mut acc = self.zero();
        acc[0] = 1;
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `c · π^j` with `π^D = p`.
    fn monomial(&self, c: i128, j: usize) -> Vec<i128> {
        let mut out = self.zero();
        let q = (j / self.d) as u32;
        if q < self.n {
            out[j % self.d] = (c * self.p.pow(q)).rem_euclid(self.modulus);
        }
        out
    }

    fn teichmuller_const(&self, c: u32) -> i128 {
        let mut x = c as i128;
        for _ in 0..self.n - 1 {
            x = x.pow(self.p as u32).rem_euclid(self.modulus);
        }
        x
    }

    fn sharp(&self, f: &CharPSeries) -> Vec<i128> {
        let m = self.n - 1;
        let mut inner = self.zero();
        for (e, c) in f.terms() {
            let shift = self.l.checked_sub(e.kpow() + m).expect("oracle depth too small");
            let j = e.num() as usize * (self.p as usize).pow(shift);
            inner = self.add(&inner, &self.monomial(self.teichmuller_const(*c), j));
        }
        self.pow(&inner, (self.p as u64).pow(m))
    }

    fn image(&self, x: &UntiltElement) -> Vec<i128> {
        let mut acc = self.zero();
        for (i, a) in x.digits().iter().enumerate() {
            let s = self.sharp(a);
            let scaled: Vec<i128> = s.iter().map(|v| (v * self.p.pow(i as u32)).rem_euclid(self.modulus)).collect();
            acc = self.add(&acc, &scaled);
        }
        acc
    }
}

fn series(p: u32, k: u32, max_num: i64) -> impl Strategy<Value = CharPSeries> {
    prop::collection::vec((0..max_num, 1..p as i64), 0..4).prop_map(move |ts| {
        CharPSeries::new(p, ts.into_iter().map(|(num, c)| (PExponent::new(p, num, k), c)), None).unwrap()
    })
}

fn case(p: u32, n: usize, k: u32) -> (UntiltCtx, Eisenstein) {
    let ctx = UntiltCtx::minimal(p, n).unwrap();
    (ctx, Eisenstein::new(p, n as u32, k + 2 * (n as u32 - 1)))
}

fn check_ops(ctx: &UntiltCtx, o: &Eisenstein, f: &CharPSeries, g: &CharPSeries) {
    let x = ctx.sharp(f).unwrap();
    let y = ctx.sharp(g).unwrap();
    assert_eq!(o.image(&x), o.sharp(f), "sharp of {f}");
    assert_eq!(o.image(&ctx.add(&x, &y).unwrap()), o.add(&o.sharp(f), &o.sharp(g)), "{f} + {g}");
    assert_eq!(o.image(&ctx.mul(&x, &y).unwrap()), o.mul(&o.sharp(f), &o.sharp(g)), "{f} * {g}");
    let s = ctx.add(&x, &y).unwrap();
    let sx = ctx.add(&s, &x).unwrap();
    let want = o.add(&o.add(&o.sharp(f), &o.sharp(g)), &o.sharp(f));
    assert_eq!(o.image(&sx), want);
    let neg = ctx.neg(&x).unwrap();
    assert!(o.image(&ctx.add(&neg, &x).unwrap()).iter().all(|c| *c == 0));
}

// exponent numerators range up to 2N·p^k, so truncation at t^N is exercised
proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn p2_len3(f in series(2, 2, 32), g in series(2, 2, 32)) {
        let (ctx, o) = case(2, 3, 2);
        check_ops(&ctx, &o, &f, &g);
    }

    #[test]
    fn p3_len2(f in series(3, 1, 18), g in series(3, 1, 18)) {
        let (ctx, o) = case(3, 2, 1);
        check_ops(&ctx, &o, &f, &g);
    }

    #[test]
    fn p5_len2(f in series(5, 1, 50), g in series(5, 1, 50)) {
        let (ctx, o) = case(5, 2, 1);
        check_ops(&ctx, &o, &f, &g);
    }
}

#[test]
fn pi_is_sharp_of_root() {
    let (ctx, o) = case(2, 3, 2);
    let r = ctx.sharp(&CharPSeries::t_pow(2, 1, 2)).unwrap();
    let want = o.monomial(1, 1usize << (o.l - 2));
    assert_eq!(o.image(&r), want);
}
