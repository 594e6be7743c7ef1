use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::uni::{bitsize_of, IntPolyUni};
use crate::arith::ComplexBall;

/// Sparse multivariate integer polynomial. Exponent vectors have length
/// `nvars`; for system polynomials the last slot is `Y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolyMulti {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolyMulti {
    pub fn zero(nvars: usize) -> Self {
        IntPolyMulti {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// `ceil(log2 ||p||_inf)`, at least 1.
    pub fn bitsize(&self) -> u64 {
        bitsize_of(&self.max_abs_coeff())
    }

    pub fn neg(&self) -> Self {
        IntPolyMulti {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        IntPolyMulti {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPolyMulti {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiply by the monomial `x_var^k`.
    pub fn shift_var(&self, var: usize, k: u32) -> Self {
        IntPolyMulti {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * BigInt::from(e[var]));
            }
        }
        out
    }

    /// Leading term in lexicographic order (first variable most significant).
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// `self / d` when the division is exact over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let (t, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let mono = IntPolyMulti::from_terms(self.nvars, [(e, t)]);
            rem = rem.sub(&mono.mul(d));
            q = q.add(&mono);
        }
        Some(q)
    }

    /// Coefficient of `x_var^i`, as a polynomial in the remaining variables
    /// (the variable slot is removed).
    pub fn coeff_of(&self, var: usize, i: u32) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e[var] == i {
                let mut e2 = e.clone();
                e2.remove(var);
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Coefficients with respect to the last variable (`Y`): `f_0, ..., f_d`.
    pub fn y_coefficients(&self) -> Vec<IntPolyMulti> {
        let y = self.nvars - 1;
        (0..=self.degree_in(y)).map(|i| self.coeff_of(y, i)).collect()
    }

    /// Inverse of [`y_coefficients`](Self::y_coefficients).
    pub fn from_y_coefficients(coeffs: &[IntPolyMulti]) -> Self {
        let n = coeffs.first().map_or(0, |c| c.nvars);
        let mut out = Self::zero(n + 1);
        for (i, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut e2 = e.clone();
                e2.push(i as u32);
                out.add_term(e2, v.clone());
            }
        }
        out
    }

    /// Drop every term whose `Y`-degree exceeds `ell`.
    pub fn truncate_in_y(&self, ell: u32) -> Self {
        let y = self.nvars - 1;
        IntPolyMulti {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[y] <= ell)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Only variable `var` may occur; returns the univariate polynomial.
    pub fn to_univariate(&self, var: usize, name: &str) -> Option<IntPolyUni> {
        let mut coeffs = vec![BigInt::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] += c;
        }
        Some(IntPolyUni::new(coeffs, name))
    }

    pub fn from_univariate(f: &IntPolyUni, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (i, c) in f.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = i as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Substitute integers for the first `values.len()` variables.
    pub fn substitute_prefix(&self, values: &[BigInt]) -> Self {
        let k = values.len();
        let mut out = Self::zero(self.nvars - k);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in values.iter().zip(e) {
                t *= num_traits::pow(x.clone(), p as usize);
            }
            out.add_term(e[k..].to_vec(), t);
        }
        out
    }

    /// Horner-free ball evaluation, term by term (reference path).
    pub fn eval_ball_terms(&self, point: &[ComplexBall], prec: u64) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for (e, c) in &self.terms {
            let mut t = ComplexBall::from_int(c.clone());
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(x, prec);
                }
            }
            acc = acc.add(&t, prec);
        }
        acc
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], k)),
                }
            }
            if factors.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Variable names `X1..Xn, Y` for a system polynomial.
    pub fn system_names(n: usize) -> Vec<String> {
        let mut v: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        v.push("Y".to_string());
        v
    }
}

impl fmt::Display for IntPolyMulti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = IntPolyMulti::system_names(self.nvars.saturating_sub(1));
        write!(f, "{}", self.format_with(&names))
    }
}

impl fmt::Debug for IntPolyMulti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolyMulti[{}]({self})", self.nvars)
    }
}
