//! Towers of quadratic extensions `Q ⊂ Q(s_1) ⊂ Q(s_1, s_2)` and exact
//! arithmetic in them.
//!
//! An element of a depth-`d` tower is stored in the flat basis of products
//! of the adjoined roots: index bit `l - 1` set means the factor `s_l`
//! occurs. For depth 2 the basis is `1, s_1, s_2, s_1 s_2`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const MAX_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub name: String,
    /// `s^2`, as coefficients in the basis of the previous level.
    pub radicand: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldTower {
    levels: Vec<Level>,
}

pub type Tower = Arc<FieldTower>;

impl FieldTower {
    pub fn rationals() -> Tower {
        Arc::new(FieldTower { levels: Vec::new() })
    }

    /// `Q(i)` with `i^2 = -1`.
    pub fn gaussian() -> Tower {
        FieldTower::new(vec![("i".into(), vec![BigRational::from_integer((-1).into())])])
            .expect("-1 is not a rational square")
    }

    /// Builds a tower, checking that every radicand is a non-square in the
    /// field below it.
    pub fn new(levels: Vec<(String, Vec<BigRational>)>) -> Result<Tower> {
        if levels.len() > MAX_DEPTH {
            return Err(Error::Field(format!("tower depth {} exceeds {MAX_DEPTH}", levels.len())));
        }
        let mut tower = FieldTower { levels: Vec::new() };
        for (name, radicand) in levels {
            let below = Arc::new(tower.clone());
            if radicand.len() != 1 << tower.levels.len() {
                return Err(Error::Field(format!("radicand of {name} has wrong length")));
            }
            if tower.levels.iter().any(|l| l.name == name) {
                return Err(Error::Field(format!("duplicate root name {name}")));
            }
            let r = TowerElement { tower: below, c: radicand.clone() };
            if r.is_zero() || r.is_square() {
                return Err(Error::Field(format!("radicand of {name} is a square")));
            }
            tower.levels.push(Level { name, radicand });
        }
        Ok(Arc::new(tower))
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn dim(&self) -> usize {
        1 << self.levels.len()
    }

    /// The tower made of the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Tower {
        Arc::new(FieldTower { levels: self.levels[..depth].to_vec() })
    }

    /// Whether `self` consists of the first levels of `other`.
    pub fn is_prefix_of(&self, other: &FieldTower) -> bool {
        self.levels.len() <= other.levels.len() && self.levels[..] == other.levels[..self.levels.len()]
    }

    pub fn root_index(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerElement {
    tower: Tower,
    c: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mul_rec(x: &[BigRational], y: &[BigRational], rads: &[Level]) -> Vec<BigRational> {
    if x.len() == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let below = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1].radicand;
    let ac = mul_rec(a, c, below);
    let bd = mul_rec(b, d, below);
    let bdr = mul_rec(&bd, r, below);
    let ad = mul_rec(a, d, below);
    let bc = mul_rec(b, c, below);
    let mut out: Vec<BigRational> = ac.iter().zip(&bdr).map(|(p, q)| p + q).collect();
    out.extend(ad.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

fn inv_rec(x: &[BigRational], rads: &[Level]) -> Vec<BigRational> {
    if x.len() == 1 {
        return vec![x[0].recip()];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let below = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1].radicand;
    // (a + b s)^-1 = (a - b s) / (a^2 - r b^2)
    let aa = mul_rec(a, a, below);
    let bb = mul_rec(b, b, below);
    let rbb = mul_rec(&bb, r, below);
    let norm: Vec<BigRational> = aa.iter().zip(&rbb).map(|(p, q)| p - q).collect();
    let ninv = inv_rec(&norm, below);
    let mut out = mul_rec(a, &ninv, below);
    out.extend(mul_rec(b, &ninv, below).into_iter().map(|v| -v));
    out
}

fn is_rational_square(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl TowerElement {
    pub fn zero(tower: &Tower) -> Self {
        TowerElement { tower: tower.clone(), c: vec![BigRational::zero(); tower.dim()] }
    }

    pub fn one(tower: &Tower) -> Self {
        Self::from_rational(tower, BigRational::one())
    }

    pub fn from_rational(tower: &Tower, q: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); tower.dim()];
        c[0] = q;
        TowerElement { tower: tower.clone(), c }
    }

    pub fn from_int(tower: &Tower, n: i64) -> Self {
        Self::from_rational(tower, rat(n))
    }

    /// The adjoined root of `level` (1-based).
    pub fn root(tower: &Tower, level: usize) -> Result<Self> {
        if level == 0 || level > tower.depth() {
            return Err(Error::Field(format!("level {level} out of range")));
        }
        let mut e = Self::zero(tower);
        e.c[1 << (level - 1)] = BigRational::one();
        Ok(e)
    }

    /// Builds an element from its flat coordinates.
    pub fn from_coeffs(tower: &Tower, c: Vec<BigRational>) -> Result<Self> {
        if c.len() != tower.dim() {
            return Err(Error::Field(format!("expected {} coefficients, got {}", tower.dim(), c.len())));
        }
        Ok(TowerElement { tower: tower.clone(), c })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The element as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| &self.c[0])
    }

    /// Smallest level containing the element (0 for rationals).
    pub fn level(&self) -> usize {
        let top = self.c.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
        (usize::BITS - top.leading_zeros()) as usize
    }

    fn same_tower(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &other.tower) || self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        Ok(TowerElement { tower: self.tower.clone(), c })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect();
        Ok(TowerElement { tower: self.tower.clone(), c })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        Ok(TowerElement { tower: self.tower.clone(), c: mul_rec(&self.c, &other.c, &self.tower.levels) })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        TowerElement { tower: self.tower.clone(), c: self.c.iter().map(|x| x * q).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(TowerElement { tower: self.tower.clone(), c: inv_rec(&self.c, &self.tower.levels) })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.tower);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Negates the coordinate of the root at `level`, fixing lower levels.
    pub fn conjugate(&self, level: usize) -> Result<Self> {
        if level == 0 || level > self.tower.depth() {
            return Err(Error::Field(format!("level {level} out of range")));
        }
        Ok(self.conjugate_mask(1 << (level - 1)))
    }

    /// Applies the automorphism negating every root whose bit is in `mask`.
    pub fn conjugate_mask(&self, mask: usize) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, x)| if (i & mask).count_ones() % 2 == 1 { -x } else { x.clone() })
            .collect();
        TowerElement { tower: self.tower.clone(), c }
    }

    /// Re-expresses the element in a larger tower that extends this one.
    pub fn lift(&self, to: &Tower) -> Result<Self> {
        if !self.tower.is_prefix_of(to) {
            return Err(Error::TowerMismatch);
        }
        let mut c = self.c.clone();
        c.resize(to.dim(), BigRational::zero());
        Ok(TowerElement { tower: to.clone(), c })
    }

    /// Restricts to a subtower, failing if the element does not lie in it.
    pub fn restrict(&self, to: &Tower) -> Result<Self> {
        if !to.is_prefix_of(&self.tower) {
            return Err(Error::TowerMismatch);
        }
        if self.c[to.dim()..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Field(format!("{self} does not lie in the subfield")));
        }
        Ok(TowerElement { tower: to.clone(), c: self.c[..to.dim()].to_vec() })
    }

    /// Whether the element is a square in its own field.
    pub fn is_square(&self) -> bool {
        match self.tower.depth() {
            0 => is_rational_square(&self.c[0]).is_some(),
            1 => {
                let d = &self.tower.levels[0].radicand[0];
                square_root_level1(&self.c[0], &self.c[1], d).is_some()
            }
            _ => {
                // x = a + b s with a, b in the level below; a square has a
                // square norm a^2 - r b^2 below, and then one of
                // (a ± sqrt(norm)) / 2 is a square below.
                let below = self.tower.truncate(self.tower.depth() - 1);
                let h = self.c.len() / 2;
                let a = TowerElement { tower: below.clone(), c: self.c[..h].to_vec() };
                let b = TowerElement { tower: below.clone(), c: self.c[h..].to_vec() };
                let r = TowerElement {
                    tower: below.clone(),
                    c: self.tower.levels[self.tower.depth() - 1].radicand.clone(),
                };
                if b.is_zero() {
                    return a.is_square() || (&a * &r.inv().expect("nonzero radicand")).is_square();
                }
                let norm = &(&a * &a) - &(&(&b * &b) * &r);
                let Some(n) = norm.sqrt_level1() else { return false };
                let half = rat(1) / rat(2);
                for cand in [(&a + &n).scale(&half), (&a - &n).scale(&half)] {
                    if let Some(x) = cand.sqrt_level1() {
                        if x.is_zero() {
                            continue;
                        }
                        let y = &b * &x.scale(&rat(2)).inv().expect("nonzero");
                        let lhs = &(&x * &x) + &(&(&y * &y) * &r);
                        if lhs == a {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }

    /// Square root in a tower of depth at most 1.
    fn sqrt_level1(&self) -> Option<Self> {
        match self.tower.depth() {
            0 => is_rational_square(&self.c[0]).map(|q| Self::from_rational(&self.tower, q)),
            1 => {
                let d = &self.tower.levels[0].radicand[0];
                square_root_level1(&self.c[0], &self.c[1], d)
                    .map(|(x, y)| TowerElement { tower: self.tower.clone(), c: vec![x, y] })
            }
            _ => None,
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut names: Vec<&str> = Vec::new();
            for (l, lev) in self.tower.levels.iter().enumerate() {
                if i & (1 << l) != 0 {
                    names.push(&lev.name);
                }
            }
            let neg = x.is_negative();
            let a = x.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if names.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                f.write_str(&names.join("*"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }

    /// Whether printing needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        self.c.iter().filter(|x| !x.is_zero()).count() > 1
    }
}

/// `x + y sqrt(d)` with `(x + y sqrt(d))^2 = a + b sqrt(d)`.
fn square_root_level1(a: &BigRational, b: &BigRational, d: &BigRational) -> Option<(BigRational, BigRational)> {
    if b.is_zero() {
        if let Some(x) = is_rational_square(a) {
            return Some((x, BigRational::zero()));
        }
        return is_rational_square(&(a / d)).map(|y| (BigRational::zero(), y));
    }
    let n = is_rational_square(&(a * a - d * b * b))?;
    let two = rat(2);
    for cand in [(a + &n) / &two, (a - &n) / &two] {
        if let Some(x) = is_rational_square(&cand) {
            if x.is_zero() {
                continue;
            }
            let y = b / (&two * &x);
            if &x * &x + d * &y * &y == *a {
                return Some((x, y));
            }
        }
    }
    None
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&TowerElement> for &TowerElement {
            type Output = TowerElement;
            fn $m(self, rhs: &TowerElement) -> TowerElement {
                self.$try(rhs).expect("scalars from different towers")
            }
        }
        impl $tr<TowerElement> for TowerElement {
            type Output = TowerElement;
            fn $m(self, rhs: TowerElement) -> TowerElement {
                (&self).$try(&rhs).expect("scalars from different towers")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement { tower: self.tower.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        -&self
    }
}

/// Trial-division factorization of a positive integer, primes ascending.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// Writes a prime `p ≡ 1 (mod 4)` as `x^2 + y^2` by Cornacchia's algorithm.
pub fn cornacchia_prime(p: &BigInt) -> Option<(BigInt, BigInt)> {
    let one = BigInt::one();
    let four = BigInt::from(4);
    if p.mod_floor(&four) != one {
        return None;
    }
    let e = (p - &one) / &four;
    let mut c = BigInt::from(2);
    let r = loop {
        if &c >= p {
            return None;
        }
        let r = c.modpow(&e, p);
        if (&r * &r).mod_floor(p) == p - &one {
            break r;
        }
        c += 1;
    };
    let bound = p.sqrt();
    for root in [r.clone(), p - &r] {
        let (mut a, mut b) = (p.clone(), root);
        while b > bound {
            let t = a.mod_floor(&b);
            a = b;
            b = t;
        }
        let rest = p - &b * &b;
        let y = rest.sqrt();
        if &y * &y == rest {
            return Some((b, y));
        }
    }
    None
}

fn gauss_mul(x: (BigInt, BigInt), y: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

/// Writes a rational as `α^2 + β^2` with rational `α, β`, normalized to
/// `0 ≤ α ≤ β`. Absent exactly when `q < 0` or some prime `≡ 3 (mod 4)`
/// divides numerator times denominator to an odd power.
pub fn sum_of_two_squares(q: &BigRational) -> Option<(BigRational, BigRational)> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some((BigRational::zero(), BigRational::zero()));
    }
    let d = q.denom().clone();
    let n = q.numer() * &d;
    let mut z = (BigInt::one(), BigInt::zero());
    let four = BigInt::from(4);
    for (p, e) in factorize(&n) {
        if p == BigInt::from(2) {
            for _ in 0..e {
                z = gauss_mul(z, &(BigInt::one(), BigInt::one()));
            }
        } else if p.mod_floor(&four) == BigInt::from(3) {
            if e % 2 == 1 {
                return None;
            }
            let s = num_traits::pow(p, (e / 2) as usize);
            z = (&z.0 * &s, &z.1 * &s);
        } else {
            let w = cornacchia_prime(&p)?;
            for _ in 0..e {
                z = gauss_mul(z, &w);
            }
        }
    }
    let (a, b) = (z.0.abs(), z.1.abs());
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    Some((BigRational::new(a, d.clone()), BigRational::new(b, d)))
}

impl TowerElement {
    /// Parses the display form of a rational, e.g. `-3/4`.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::parse_bytes(n.as_bytes(), 10)?;
        let d = BigInt::parse_bytes(d.as_bytes(), 10)?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    }
}
