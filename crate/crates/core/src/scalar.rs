//! Exact arithmetic in the rational function field Q(q, u, s).
//!
//! [`MultiPoly`] is a sparse polynomial in the three deformation parameters
//! with arbitrary-precision rational coefficients. [`ScalarValue`] is a
//! quotient of two such polynomials kept in canonical reduced form, so
//! structural equality decides mathematical equality and `is_zero` is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{CoreError, Result};

pub type Rat = BigRational;

/// The three deformation parameters, in the fixed variable order used by the
/// lexicographic term order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param {
    Q = 0,
    U = 1,
    S = 2,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::Q, Param::U, Param::S];

    pub fn name(self) -> &'static str {
        match self {
            Param::Q => "q",
            Param::U => "u",
            Param::S => "s",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        match name {
            "q" => Some(Param::Q),
            "u" => Some(Param::U),
            "s" => Some(Param::S),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Exponent triple (e_q, e_u, e_s). The derived array `Ord` is the
/// lexicographic term order; the leading term of a polynomial is the maximal
/// key.
pub type Expo = [u16; 3];

/// Sparse polynomial in q, u, s over the rationals.
///
/// Invariant: no stored coefficient is zero, so the zero polynomial is the
/// empty map and equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Expo, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MultiPoly::zero();
        p.insert_term([0, 0, 0], c);
        p
    }

    pub fn int(n: i64) -> Self {
        MultiPoly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn param(p: Param) -> Self {
        let mut e = [0u16; 3];
        e[p.index()] = 1;
        MultiPoly::monomial(e, Rat::one())
    }

    pub fn monomial(expo: Expo, coef: Rat) -> Self {
        let mut p = MultiPoly::zero();
        p.insert_term(expo, coef);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under lex order: the maximal exponent triple.
    pub fn leading(&self) -> Option<(&Expo, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert_term(&mut self, expo: Expo, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(expo) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly::zero();
        for (e, r) in &self.terms {
            out.terms.insert(*e, r * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn divide_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dlead, dcoef) = d.leading().unwrap();
        let dlead = *dlead;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while !rem.is_zero() {
            let (rlead, rcoef) = rem.leading().unwrap();
            let mut qe = [0u16; 3];
            for i in 0..3 {
                if rlead[i] < dlead[i] {
                    return None;
                }
                qe[i] = rlead[i] - dlead[i];
            }
            let qc = rcoef / dcoef;
            let t = MultiPoly::monomial(qe, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Substitutes scalar values for parameters; unmapped parameters stay
    /// symbolic.
    pub fn substitute(&self, s: &Substitution) -> ScalarValue {
        let mut acc = ScalarValue::zero();
        for (expo, coef) in &self.terms {
            let mut term = ScalarValue::rational(coef.clone());
            for p in Param::ALL {
                let e = expo[p.index()] as u32;
                if e == 0 {
                    continue;
                }
                let base = match s.get(p) {
                    Some(v) => v.clone(),
                    None => ScalarValue::param(p),
                };
                term = &term * &base.pow(e);
            }
            acc = &acc + &term;
        }
        acc
    }

    fn deg_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Coefficient polynomials when read as univariate in variable `v`.
    fn uni_coeffs(&self, v: usize) -> BTreeMap<u16, MultiPoly> {
        let mut out: BTreeMap<u16, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut base = *e;
            let d = base[v];
            base[v] = 0;
            out.entry(d).or_default().insert_term(base, c.clone());
        }
        out
    }

    fn lead_coeff_in(&self, v: usize) -> MultiPoly {
        let d = self.deg_in(v);
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut base = *e;
                base[v] = 0;
                out.insert_term(base, c.clone());
            }
        }
        out
    }

    fn mul_var_pow(&self, v: usize, d: u16) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut shifted = *e;
            shifted[v] += d;
            out.terms.insert(shifted, c.clone());
        }
        out
    }

    /// Monic under lex order (leading coefficient 1). Zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Checks the no-zero-coefficient invariant; used by property tests.
    pub fn invariants_hold(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.insert_term(e, ca * cb);
            }
        }
        out
    }
}

/// Pseudo-remainder of f by g as univariate polynomials in variable v.
/// Requires g nonzero with positive degree in v.
fn prem(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let dg = g.deg_in(v);
    let lcg = g.lead_coeff_in(v);
    let mut r = f.clone();
    while !r.is_zero() && r.deg_in(v) >= dg {
        let dr = r.deg_in(v);
        let lcr = r.lead_coeff_in(v);
        let shifted = &g.mul_var_pow(v, dr - dg) * &lcr;
        r = &(&r * &lcg) - &shifted;
    }
    r
}

fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for coeff in p.uni_coeffs(v).values() {
        acc = gcd_rec(&acc, coeff);
    }
    acc
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.constant_value().is_some() || b.constant_value().is_some() {
        return MultiPoly::one();
    }
    // A monomial's divisors are all monomials, so against a single term the
    // gcd is the largest exponent triple dividing every term on both sides.
    // Denominators here are usually monomials; this keeps them out of the
    // pseudo-remainder machinery entirely.
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let mut e = [u16::MAX; 3];
        for t in a.terms.keys().chain(b.terms.keys()) {
            for v in 0..3 {
                e[v] = e[v].min(t[v]);
            }
        }
        return MultiPoly::monomial(e, Rat::one());
    }
    let v = (0..3)
        .find(|&v| a.uses_var(v) || b.uses_var(v))
        .expect("non-constant polynomial uses a variable");
    if !b.uses_var(v) {
        return gcd_rec(&content_in(a, v), b);
    }
    if !a.uses_var(v) {
        return gcd_rec(a, &content_in(b, v));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let mut f = a.divide_exact(&ca).expect("content divides");
    let mut g = b.divide_exact(&cb).expect("content divides");
    if f.deg_in(v) < g.deg_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    // Primitive Euclid in v; contents recurse on strictly fewer variables.
    let prim = loop {
        if g.deg_in(v) == 0 {
            break MultiPoly::one();
        }
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break g.divide_exact(&content_in(&g, v)).expect("content divides");
        }
        f = g;
        let cr = content_in(&r, v);
        g = r.divide_exact(&cr).expect("content divides");
    };
    &gcd_rec(&ca, &cb) * &prim
}

/// Polynomial gcd, normalized monic under lex order. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_rec(a, b).monic()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (expo, coef) in self.terms.iter().rev() {
            let neg = coef.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coef.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || expo.iter().all(|&e| e == 0) {
                parts.push(rat_string(&mag));
            }
            for p in Param::ALL {
                let e = expo[p.index()];
                match e {
                    0 => {}
                    1 => parts.push(p.name().to_string()),
                    _ => parts.push(format!("{}^{}", p.name(), e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element of Q(q, u, s) in canonical form: numerator and denominator are
/// coprime, the denominator is nonzero and monic under lex order. Structural
/// equality therefore coincides with field equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarValue {
    num: MultiPoly,
    den: MultiPoly,
}

impl ScalarValue {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<ScalarValue> {
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Ok(ScalarValue::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> ScalarValue {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return ScalarValue {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            };
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.divide_exact(&g).expect("gcd divides");
        let mut den = den.divide_exact(&g).expect("gcd divides");
        let lc = den.leading().expect("nonzero").1.clone();
        let inv = lc.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
        ScalarValue { num, den }
    }

    pub fn zero() -> ScalarValue {
        ScalarValue {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> ScalarValue {
        ScalarValue {
            num: MultiPoly::one(),
            den: MultiPoly::one(),
        }
    }

    pub fn int(n: i64) -> ScalarValue {
        ScalarValue {
            num: MultiPoly::int(n),
            den: MultiPoly::one(),
        }
    }

    pub fn rational(r: Rat) -> ScalarValue {
        ScalarValue {
            num: MultiPoly::constant(r),
            den: MultiPoly::one(),
        }
    }

    pub fn big_int(n: BigInt) -> ScalarValue {
        ScalarValue::rational(Rat::from_integer(n))
    }

    pub fn param(p: Param) -> ScalarValue {
        ScalarValue {
            num: MultiPoly::param(p),
            den: MultiPoly::one(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> ScalarValue {
        ScalarValue {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inverse(&self) -> Result<ScalarValue> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Ok(ScalarValue::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &ScalarValue) -> Result<ScalarValue> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, n: u32) -> ScalarValue {
        let mut acc = ScalarValue::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes parameters, failing if a denominator vanishes.
    pub fn substitute(&self, s: &Substitution) -> Result<ScalarValue> {
        let n = self.num.substitute(s);
        let d = self.den.substitute(s);
        if d.is_zero() {
            return Err(CoreError::VanishingDenominator);
        }
        n.div(&d)
    }

    /// Display sign plus a magnitude string safe to glue to a word with `*`.
    pub fn render_factor(&self) -> (bool, String) {
        if self.is_zero() {
            return (false, "0".to_string());
        }
        let neg = self
            .num
            .terms
            .iter()
            .next_back()
            .map_or(false, |(_, c)| c.is_negative());
        let mag = if neg { -self } else { self.clone() };
        (neg, mag.grouped_string())
    }

    fn grouped_string(&self) -> String {
        let num_str = if self.num.term_count() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        if self.den.is_one() {
            return num_str;
        }
        let den_bare = self.den.term_count() == 1 && {
            let (e, c) = self.den.leading().unwrap();
            c.is_one() && e.iter().filter(|&&x| x > 0).count() == 1
        };
        let den_str = if den_bare {
            self.den.to_string()
        } else {
            format!("({})", self.den)
        };
        format!("{}/{}", num_str, den_str)
    }

    pub fn invariants_hold(&self) -> bool {
        if !self.num.invariants_hold() || !self.den.invariants_hold() {
            return false;
        }
        if self.den.is_zero() {
            return false;
        }
        if self.num.is_zero() {
            return self.den.is_one();
        }
        let monic = self.den.leading().map_or(false, |(_, c)| c.is_one());
        monic && poly_gcd(&self.num, &self.den).is_one()
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}", self.grouped_string())
        }
    }
}

impl Add for &ScalarValue {
    type Output = ScalarValue;
    fn add(self, rhs: &ScalarValue) -> ScalarValue {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        ScalarValue::normalized(num, den)
    }
}

impl Sub for &ScalarValue {
    type Output = ScalarValue;
    fn sub(self, rhs: &ScalarValue) -> ScalarValue {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        ScalarValue::normalized(num, den)
    }
}

impl Mul for &ScalarValue {
    type Output = ScalarValue;
    fn mul(self, rhs: &ScalarValue) -> ScalarValue {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        ScalarValue::normalized(num, den)
    }
}

impl Neg for &ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        ScalarValue {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// Partial assignment of scalar values to parameters.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    map: [Option<ScalarValue>; 3],
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn set(mut self, p: Param, v: ScalarValue) -> Substitution {
        self.map[p.index()] = Some(v);
        self
    }

    pub fn get(&self, p: Param) -> Option<&ScalarValue> {
        self.map[p.index()].as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(|m| m.is_none())
    }
}
