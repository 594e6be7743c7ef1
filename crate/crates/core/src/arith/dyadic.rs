use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Direction used when discarding low-order mantissa bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Nearest,
    /// Toward +∞.
    Up,
    /// Toward −∞.
    Down,
    TowardZero,
    AwayFromZero,
}

/// Exact binary floating value `mantissa · 2^exponent`.
///
/// The mantissa is kept odd (or zero, with exponent 0), so two equal values
/// always have the same representation.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.magnitude().trailing_zeros().unwrap_or(0);
        if tz == 0 {
            return Dyadic { mant, exp };
        }
        let (sign, mag) = mant.into_parts();
        Dyadic {
            mant: BigInt::from_biguint(sign, mag >> tz as usize),
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Number of significant mantissa bits.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `t` such that `2^(t-1) <= |x| < 2^t`; `None` for zero.
    pub fn top_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    /// Exact integer value, if the dyadic is an integer.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.exp < 0 {
            return None;
        }
        Some(&self.mant << self.exp as usize)
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round_sig(&self, prec: u64, mode: Round) -> Self {
        let prec = prec.max(1);
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let negative = self.mant.is_negative();
        let mag = round_magnitude(self.mant.magnitude(), shift, mode, negative);
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Dyadic::new(BigInt::from_biguint(sign, mag), self.exp + shift as i64)
    }

    /// Round to an integer multiple of `2^(-prec)` in the given direction.
    pub fn round_abs(&self, prec: i64, mode: Round) -> Self {
        let floor_exp = -prec;
        if self.is_zero() || self.exp >= floor_exp {
            return self.clone();
        }
        let shift = (floor_exp - self.exp) as u64;
        let negative = self.mant.is_negative();
        let mag = round_magnitude(self.mant.magnitude(), shift, mode, negative);
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Dyadic::new(BigInt::from_biguint(sign, mag), floor_exp)
    }

    /// Upper bound on the error introduced by `round_sig(prec, _)`, as a
    /// power-of-two exponent; `None` when rounding is exact.
    pub fn round_sig_error_exp(&self, prec: u64) -> Option<i64> {
        let bits = self.mant.bits();
        if bits <= prec.max(1) {
            None
        } else {
            Some(self.exp + (bits - prec.max(1)) as i64)
        }
    }

    /// Approximate `log2 |x|`; `-inf` for zero.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top = (self.mant.magnitude() >> (bits - keep) as usize)
            .to_u64()
            .unwrap_or(u64::MAX) as f64;
        top.log2() + (self.exp + (bits - keep) as i64) as f64
    }

    /// Approximate conversion; saturates to 0 / ±inf outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top = (self.mant.magnitude() >> (bits - keep) as usize)
            .to_u64()
            .unwrap_or(u64::MAX) as f64;
        let e = self.exp + (bits - keep) as i64;
        let v = if e > 2000 {
            f64::INFINITY
        } else if e < -2000 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        };
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Exact conversion of a finite f64.
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Self::zero();
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let m = BigInt::from(m);
        Dyadic::new(if negative { -m } else { m }, e)
    }

    /// Quotient rounded to `prec` significant bits (truncated); the error is
    /// below one unit in the last place, i.e. `< 2^(top_exp - prec + 1)`.
    pub fn div_approx(&self, other: &Dyadic, prec: u64) -> Result<Dyadic> {
        if other.is_zero() {
            return Err(Error::DivisorContainsZero);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let nb = self.mant.bits() as i64;
        let db = other.mant.bits() as i64;
        let k = (prec as i64 + db - nb + 2).max(0);
        let num = &self.mant << k as usize;
        let q = num / &other.mant;
        Ok(Dyadic::new(q, self.exp - other.exp - k))
    }

    /// Upper bound of `sqrt(x)` for `x >= 0`, about `prec` bits accurate.
    pub fn sqrt_upper(&self, prec: u64) -> Dyadic {
        self.sqrt_directed(prec, true)
    }

    /// Lower bound of `sqrt(x)` for `x >= 0`.
    pub fn sqrt_lower(&self, prec: u64) -> Dyadic {
        self.sqrt_directed(prec, false)
    }

    fn sqrt_directed(&self, prec: u64, up: bool) -> Dyadic {
        if self.mant.sign() != Sign::Plus {
            return Dyadic::zero();
        }
        // scale mantissa to an even exponent with at least 2*prec bits
        let mut m = self.mant.magnitude().clone();
        let mut e = self.exp;
        let want = 2 * prec as i64 + 2;
        let have = m.bits() as i64;
        let mut shift = (want - have).max(0);
        if (e - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        m <<= shift as usize;
        e -= shift;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let r = if up && !exact { r + 1u32 } else { r };
        Dyadic::new(BigInt::from_biguint(Sign::Plus, r), e / 2)
    }

    pub fn min<'a>(&'a self, other: &'a Dyadic) -> &'a Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a Dyadic) -> &'a Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// `a + b` rounded to `prec` significant bits. The second component bounds
/// the absolute error as `2^e` (`None` when exact).
///
/// Operands whose magnitudes are far apart are never aligned bit by bit.
pub fn add_rounded(a: &Dyadic, b: &Dyadic, prec: u64) -> (Dyadic, Option<i64>) {
    let (big, small_top) = match (a.top_exp(), b.top_exp()) {
        (None, _) => return (b.round_sig(prec, Round::Nearest), b.round_sig_error_exp(prec)),
        (_, None) => return (a.round_sig(prec, Round::Nearest), a.round_sig_error_exp(prec)),
        (Some(ta), Some(tb)) if ta >= tb => (a, tb),
        (Some(ta), Some(_)) => (b, ta),
    };
    let big_top = big.top_exp().unwrap_or(0);
    if big_top > small_top + prec as i64 + 2 {
        let r = big.round_sig(prec, Round::Nearest);
        let e = big
            .round_sig_error_exp(prec)
            .map_or(small_top, |e| e.max(small_top))
            + 1;
        return (r, Some(e));
    }
    let s = a + b;
    let e = s.round_sig_error_exp(prec);
    (s.round_sig(prec, Round::Nearest), e)
}

fn round_magnitude(mag: &BigUint, shift: u64, mode: Round, negative: bool) -> BigUint {
    let q = mag >> shift as usize;
    let inexact = mag.trailing_zeros().is_some_and(|tz| tz < shift);
    if !inexact {
        return q;
    }
    let bump = match mode {
        Round::Nearest => mag.bit(shift - 1),
        Round::TowardZero => false,
        Round::AwayFromZero => true,
        Round::Up => !negative,
        Round::Down => negative,
    };
    if bump {
        q + 1u32
    } else {
        q
    }
}

/// Round `x` to the nearest multiple of `2^(-prec)`, so `|result - x| < 2^(-prec)`.
pub fn round_to(x: &Dyadic, prec: u32) -> Dyadic {
    x.round_abs(prec.max(1) as i64, Round::Nearest)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.exp + self.mant.bits() as i64;
        let tb = other.exp + other.mant.bits() as i64;
        let mag_order = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let ma = self.mant.magnitude() << (self.exp - e) as usize;
            let mb = other.mant.magnitude() << (other.exp - e) as usize;
            ma.cmp(&mb)
        };
        if sa > 0 {
            mag_order
        } else {
            mag_order.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &'a Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }
}

/// Exact textual form `m*2^e` (plain `m` when `e == 0`).
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:e})", self, self.to_f64())
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("malformed dyadic literal {s:?}"));
        let (m, e) = match s.split_once('*') {
            Some((m, rest)) => {
                let e = rest.trim().strip_prefix("2^").ok_or_else(bad)?;
                (m.trim(), e.trim().parse::<i64>().map_err(|_| bad())?)
            }
            None => (s, 0),
        };
        let m: BigInt = m.parse().map_err(|_| bad())?;
        Ok(Dyadic::new(m, e))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
