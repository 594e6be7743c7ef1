use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ball_poly::BallPolyUni;
use crate::arith::{div_up, ComplexBall, Dyadic};
use crate::error::{Error, Result};

/// Dense univariate polynomial with arbitrary-size integer coefficients;
/// `coeffs[i]` multiplies `var^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolyUni {
    coeffs: Vec<BigInt>,
    var: String,
}

/// Coefficient norms of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Norms {
    pub l1: BigInt,
    pub l2_sq: BigInt,
    pub linf: BigInt,
    /// `ceil(log2 linf)`, at least 1.
    pub bitsize: u64,
}

/// `ceil(log2 |v|)`, with the convention that values of modulus <= 2 map to 1.
pub fn bitsize_of(v: &BigInt) -> u64 {
    let m = v.magnitude();
    if m.is_zero() {
        return 1;
    }
    let b = m.bits();
    // exact power of two 2^(b-1) has ceil(log2) = b - 1
    let pow2 = m.trailing_zeros() == Some(b - 1);
    let c = if pow2 { b - 1 } else { b };
    c.max(1)
}

impl IntPolyUni {
    pub fn new(mut coeffs: Vec<BigInt>, var: impl Into<String>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolyUni {
            coeffs,
            var: var.into(),
        }
    }

    pub fn from_i64(coeffs: &[i64], var: impl Into<String>) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), var)
    }

    pub fn zero(var: impl Into<String>) -> Self {
        Self::new(Vec::new(), var)
    }

    pub fn constant(c: BigInt, var: impl Into<String>) -> Self {
        Self::new(vec![c], var)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    fn with_coeffs(&self, coeffs: Vec<BigInt>) -> Self {
        IntPolyUni::new(coeffs, self.var.clone())
    }

    pub fn norms(&self) -> Result<Norms> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut l1 = BigInt::zero();
        let mut l2_sq = BigInt::zero();
        let mut linf = BigInt::zero();
        for c in &self.coeffs {
            let a = c.abs();
            l2_sq += &a * &a;
            if a > linf {
                linf = a.clone();
            }
            l1 += a;
        }
        let bitsize = bitsize_of(&linf);
        Ok(Norms {
            l1,
            l2_sq,
            linf,
            bitsize,
        })
    }

    pub fn bitsize(&self) -> u64 {
        self.norms().map_or(1, |n| n.bitsize)
    }

    /// `(2^-d ||f||_1, upper(||f||_2))`, which bracket the Mahler measure.
    pub fn mahler_bracket(&self) -> Result<(Dyadic, Dyadic)> {
        let n = self.norms()?;
        let lower = Dyadic::from_int(n.l1).shl(-(self.degree() as i64));
        let upper = Dyadic::from_int(n.l2_sq).sqrt_upper(64);
        Ok((lower, upper))
    }

    /// `f^(k) / k!`: the coefficient of `X^j` is `C(j+k, k) a_{j+k}`.
    pub fn normalized_derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k > self.degree() || self.is_zero() {
            return self.with_coeffs(Vec::new());
        }
        let out = (0..=self.degree() - k)
            .map(|j| binomial(j + k, k) * &self.coeffs[j + k])
            .collect();
        self.with_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        self.with_coeffs(out)
    }

    /// `1 + ||f||_inf / |lc f|`, rounded up; bounds every root modulus.
    pub fn cauchy_root_radius(&self) -> Dyadic {
        let n = match self.norms() {
            Ok(n) => n,
            Err(_) => return Dyadic::one(),
        };
        let lc = self.lc().abs();
        let (q, r) = n.linf.div_rem(&lc);
        let ratio = if r.is_zero() {
            Dyadic::from_int(q)
        } else {
            div_up(&Dyadic::from_int(n.linf), &Dyadic::from_int(lc))
        };
        &ratio + &Dyadic::one()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.with_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.with_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return self.with_coeffs(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        self.with_coeffs(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = self.with_coeffs(vec![BigInt::one()]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        self.with_coeffs(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-remainder by zero polynomial");
        if self.degree() < b.degree() || self.is_zero() {
            return self.clone();
        }
        let db = b.degree();
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut steps = self.degree() - db + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + j] -= &lr * bc;
            }
            steps -= 1;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        let extra = num_traits::pow(lb, steps);
        self.with_coeffs(r.into_iter().map(|c| c * &extra).collect())
    }

    /// Quotient `self / b` when the division is exact over the integers.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let db = b.degree();
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for i in (0..q.len()).rev() {
            let (t, rem) = r[i + db].div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[i + j] -= &t * bc;
            }
            q[i] = t;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(self.with_coeffs(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.degree() < b.degree() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Yun decomposition: returns `(c, [s1, s2, ...])` with squarefree,
    /// pairwise coprime, primitive `s_i` such that `self = c * Π s_i^i`.
    pub fn squarefree_decomposition(&self) -> Result<(BigInt, Vec<IntPolyUni>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let one = self.with_coeffs(vec![BigInt::one()]);
        if self.degree() == 0 {
            return Ok((self.lc(), Vec::new()));
        }
        let a = self.primitive_part();
        let da = a.derivative();
        let c = a.gcd(&da);
        let mut w = a.div_exact(&c).expect("gcd divides a");
        let mut y = da.div_exact(&c).expect("gcd divides a'");
        let mut z = y.sub(&w.derivative());
        let mut factors = Vec::new();
        while w.degree() > 0 {
            let g = w.gcd(&z);
            w = w.div_exact(&g).expect("gcd divides w");
            y = z.div_exact(&g).expect("gcd divides z");
            z = y.sub(&w.derivative());
            factors.push(g);
        }
        while factors.last().is_some_and(|f| f.degree() == 0) {
            factors.pop();
        }
        let factors: Vec<_> = factors
            .into_iter()
            .map(|f| if f.degree() == 0 { one.clone() } else { f.primitive_part() })
            .collect();
        let mut prod = one.clone();
        for (i, f) in factors.iter().enumerate() {
            prod = prod.mul(&f.pow(i + 1));
        }
        let unit = self.lc() / prod.lc();
        Ok((unit, factors))
    }

    pub fn to_ball_poly(&self) -> BallPolyUni {
        BallPolyUni::new(
            self.coeffs.iter().map(|c| ComplexBall::from_int(c.clone())).collect(),
            true,
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_ball(&self, x: &ComplexBall, prec: u64) -> ComplexBall {
        self.to_ball_poly().eval(x, prec)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k.min(n));
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Display for IntPolyUni {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, i),
            };
            if var.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolyUni {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolyUni({self})")
    }
}
