//! Brute-force numeric oracle in plain fixed-point arithmetic on `BigInt`
//! (value = m * 2^-p), independent of the library's ball arithmetic.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use extroot::{ComplexBall, Dyadic, IntPolyMulti};

#[derive(Clone, Debug, PartialEq)]
pub struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub p: u32,
}

fn to_f64_scaled(m: &BigInt, shift: i64) -> f64 {
    let bits = m.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (m >> drop as usize).to_f64().unwrap_or(0.0);
    top * 2f64.powi((drop - shift) as i32)
}

impl Ctx {
    pub fn new(p: u32) -> Self {
        Ctx { p }
    }

    pub fn zero(&self) -> Fx {
        Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn int(&self, c: &BigInt) -> Fx {
        Fx {
            re: c << self.p as usize,
            im: BigInt::zero(),
        }
    }

    pub fn from_f64(&self, re: f64, im: f64) -> Fx {
        let s = |v: f64| BigInt::from((v * 2f64.powi(52)).round() as i64) << (self.p - 52) as usize;
        Fx { re: s(re), im: s(im) }
    }

    pub fn dyadic(&self, d: &Dyadic) -> BigInt {
        let sh = self.p as i64 + d.exponent();
        if sh >= 0 {
            d.mantissa() << sh as usize
        } else {
            d.mantissa() >> (-sh) as usize
        }
    }

    /// `floor(v * 2^p)` for a decimal string such as `"-2.4494897"`.
    pub fn decimal(&self, s: &str) -> BigInt {
        let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
        let (ip, fp) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigInt = format!("{ip}{fp}").parse().unwrap();
        let v = (digits << self.p as usize) / BigInt::from(10).pow(fp.len() as u32);
        if neg {
            -v
        } else {
            v
        }
    }

    pub fn add(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }

    pub fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    pub fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        let p = self.p as usize;
        Fx {
            re: (&a.re * &b.re - &a.im * &b.im) >> p,
            im: (&a.re * &b.im + &a.im * &b.re) >> p,
        }
    }

    pub fn scale(&self, a: &Fx, k: i64) -> Fx {
        Fx {
            re: &a.re * k,
            im: &a.im * k,
        }
    }

    pub fn div(&self, a: &Fx, b: &Fx) -> Option<Fx> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let p = self.p as usize;
        Some(Fx {
            re: ((&a.re * &b.re + &a.im * &b.im) << p) / &den,
            im: ((&a.im * &b.re - &a.re * &b.im) << p) / &den,
        })
    }

    /// `|a|^2` scaled by `2^(2p)`.
    pub fn abs2(&self, a: &Fx) -> BigInt {
        &a.re * &a.re + &a.im * &a.im
    }

    pub fn log2_abs(&self, a: &Fx) -> f64 {
        let s = self.abs2(a);
        if s.is_zero() {
            return f64::NEG_INFINITY;
        }
        let drop = (s.bits() as i64 - 60).max(0);
        let top = (s >> drop as usize).to_f64().unwrap_or(0.0);
        0.5 * (top.log2() + drop as f64) - self.p as f64
    }

    pub fn to_f64(&self, a: &Fx) -> (f64, f64) {
        (
            to_f64_scaled(&a.re, self.p as i64),
            to_f64_scaled(&a.im, self.p as i64),
        )
    }

    pub fn horner(&self, a: &[Fx], z: &Fx) -> Fx {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, z), c);
        }
        acc
    }

    pub fn derivative(&self, a: &[Fx]) -> Vec<Fx> {
        a.iter().enumerate().skip(1).map(|(i, c)| self.scale(c, i as i64)).collect()
    }

    /// Durand–Kerner approximations of the roots of `a` (nonzero leading
    /// coefficient), each root repeated by multiplicity.
    pub fn durand_kerner(&self, a: &[Fx]) -> Vec<Fx> {
        let n = a.len() - 1;
        let lc = a[n].clone();
        let monic: Vec<Fx> = a.iter().map(|c| self.div(c, &lc).unwrap()).collect();
        let r = monic[..n].iter().map(|c| self.log2_abs(c)).fold(0f64, f64::max) + 1.0;
        let seed = self.from_f64(0.4, 0.9);
        let mut w = self.int(&BigInt::from(1));
        let big = self.int(&(BigInt::from(1) << r.ceil() as usize));
        let mut z = Vec::with_capacity(n);
        for _ in 0..n {
            w = self.mul(&w, &seed);
            z.push(self.mul(&w, &big));
        }
        let mut best = f64::INFINITY;
        let mut stale = 0;
        for _ in 0..20 * self.p {
            let mut worst = f64::NEG_INFINITY;
            for i in 0..n {
                let num = self.horner(&monic, &z[i]);
                let mut den = self.int(&BigInt::from(1));
                for j in 0..n {
                    if j != i {
                        den = self.mul(&den, &self.sub(&z[i], &z[j]));
                    }
                }
                match self.div(&num, &den) {
                    Some(step) => {
                        worst = worst.max(self.log2_abs(&step));
                        z[i] = self.sub(&z[i], &step);
                    }
                    None => z[i].re += BigInt::from(1) << (self.p / 2) as usize,
                }
            }
            if worst < -(self.p as f64) + r + 8.0 {
                break;
            }
            if worst < best - 1.0 {
                best = worst;
                stale = 0;
            } else {
                stale += 1;
                if stale > 40 {
                    break;
                }
            }
        }
        z
    }

    fn polish(&self, a: &[Fx], mut c: Fx, m: usize) -> Fx {
        let mut d = a.to_vec();
        for _ in 1..m {
            d = self.derivative(&d);
        }
        let dd = self.derivative(&d);
        for _ in 0..200 {
            let Some(step) = self.div(&self.horner(&d, &c), &self.horner(&dd, &c)) else {
                break;
            };
            let small = self.log2_abs(&step) < -(self.p as f64) + 8.0;
            c = self.sub(&c, &step);
            if small {
                break;
            }
        }
        c
    }

    /// Distinct roots with multiplicities: approximations closer than
    /// `2^thr` are merged, and each merged centre is refined by Newton's
    /// method on the `(m-1)`-th derivative.
    pub fn roots_with(&self, a: &[Fx], thr: f64) -> Vec<(Fx, u32)> {
        let z = self.durand_kerner(a);
        let n = z.len();
        let mut label: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in i + 1..n {
                if self.log2_abs(&self.sub(&z[i], &z[j])) < thr {
                    let (li, lj) = (label[i], label[j]);
                    label.iter_mut().filter(|l| **l == lj).for_each(|l| *l = li);
                }
            }
        }
        let mut seen: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for &l in &label {
            if seen.contains(&l) {
                continue;
            }
            seen.push(l);
            let idx: Vec<usize> = (0..n).filter(|&i| label[i] == l).collect();
            let mut c = self.zero();
            for &i in &idx {
                c = self.add(&c, &z[i]);
            }
            let m = idx.len();
            c.re /= m as i64;
            c.im /= m as i64;
            out.push((self.polish(a, c, m), m as u32));
        }
        out
    }

    /// Clustering threshold `2^(-oracle_bits / (2 deg))`.
    pub fn roots(&self, a: &[Fx], oracle_bits: u32) -> Vec<(Fx, u32)> {
        let thr = -(oracle_bits as f64) / (2.0 * (a.len() - 1) as f64);
        self.roots_with(a, thr)
    }

    pub fn int_roots(&self, coeffs: &[BigInt], oracle_bits: u32) -> Vec<(Fx, u32)> {
        let a: Vec<Fx> = coeffs.iter().map(|c| self.int(c)).collect();
        self.roots(&a, oracle_bits)
    }

    /// Cartesian grid of the axis roots with product multiplicities.
    pub fn grid(&self, axes: &[Vec<BigInt>], oracle_bits: u32) -> Vec<(Vec<Fx>, u64)> {
        let mut pts: Vec<(Vec<Fx>, u64)> = vec![(Vec::new(), 1)];
        for ax in axes {
            let rs = self.int_roots(ax, oracle_bits);
            pts = pts
                .iter()
                .flat_map(|(x, m)| {
                    rs.iter().map(move |(r, k)| {
                        let mut x2 = x.clone();
                        x2.push(r.clone());
                        (x2, m * *k as u64)
                    })
                })
                .collect();
        }
        pts
    }

    /// `b(x)` for a polynomial in `x.len()` variables.
    pub fn eval(&self, b: &IntPolyMulti, x: &[Fx]) -> Fx {
        let mut acc = self.zero();
        for (e, c) in b.terms() {
            let mut t = self.int(c);
            for (xi, &k) in x.iter().zip(e.iter()) {
                for _ in 0..k {
                    t = self.mul(&t, xi);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// Coefficients of `F(x, Y)` (last variable `Y`).
    pub fn fiber(&self, f: &IntPolyMulti, x: &[Fx]) -> Vec<Fx> {
        f.y_coefficients().iter().map(|c| self.eval(c, x)).collect()
    }

    /// Highest index whose coefficient exceeds `2^cut` in modulus.
    pub fn degree(&self, coeffs: &[Fx], cut: f64) -> Option<usize> {
        coeffs.iter().rposition(|c| self.log2_abs(c) > cut)
    }

    /// Whether `z` lies in the disc enlarged by `2^tol_log2`.
    pub fn in_disc(&self, disc: &ComplexBall, z: &Fx, tol_log2: i64) -> bool {
        let dr = &z.re - self.dyadic(disc.re());
        let di = &z.im - self.dyadic(disc.im());
        let r = self.dyadic(disc.rad()) + (BigInt::from(1) << (self.p as i64 + tol_log2).max(0) as usize);
        &dr * &dr + &di * &di <= &r * &r
    }
}
