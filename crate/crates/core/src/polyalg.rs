//! Sparse polynomials over a field tower and graded presentations
//! `R = k[x_1..x_n] / (g_1..g_s)`.
//!
//! All ideal computations are local to one degree: the ideals are
//! homogeneous, so `f ∈ I` for `f` of degree `d` is decided by linear
//! algebra on the span of `m · g_j` with `deg(m · g_j) = d`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abgroup::{AbelianGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::lattice::{degree_hom, fiber_points, grlex_cmp, listing_cmp, total_degree, Exponent};
use crate::linalg::{Echelon, SparseVec, TAG_BASE};
use crate::numfield::{Tower, TowerElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    tower: Tower,
    terms: BTreeMap<Exponent, TowerElement>,
}

impl Polynomial {
    pub fn zero(nvars: usize, tower: &Tower) -> Self {
        Polynomial { nvars, tower: tower.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: TowerElement) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize, tower: &Tower) -> Self {
        Self::constant(nvars, TowerElement::one(tower))
    }

    pub fn var(nvars: usize, tower: &Tower, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, TowerElement::one(tower))
    }

    pub fn monomial(e: Exponent, c: TowerElement) -> Self {
        let mut p = Polynomial { nvars: e.len(), tower: c.tower().clone(), terms: BTreeMap::new() };
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, tower: &Tower, terms: impl IntoIterator<Item = (Exponent, TowerElement)>) -> Self {
        let mut p = Self::zero(nvars, tower);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: &TowerElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = &*x + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &TowerElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&TowerElement> {
        self.terms.get(e)
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms_desc(&self) -> Vec<(&Exponent, &TowerElement)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_cmp(b.0, a.0));
        t
    }

    pub fn leading(&self) -> Option<(&Exponent, &TowerElement)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn scale(&self, c: &TowerElement) -> Self {
        let mut p = Self::zero(self.nvars, &self.tower);
        if c.is_zero() {
            return p;
        }
        for (e, x) in &self.terms {
            p.terms.insert(e.clone(), x * c);
        }
        p
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        let mut p = Self::zero(self.nvars, &self.tower);
        for (e, x) in &self.terms {
            let e2: Exponent = e.iter().zip(m).map(|(a, b)| a + b).collect();
            p.terms.insert(e2, x.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars, &self.tower);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
        assert!(self.tower == other.tower, "polynomials over different towers");
    }

    /// Replaces `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::Dimension(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        let (nv, tower) = match images.first() {
            Some(p) => (p.nvars, p.tower.clone()),
            None => (0, self.tower.clone()),
        };
        if images.iter().any(|p| p.nvars != nv || p.tower != tower) {
            return Err(Error::Dimension("substitution images live in different rings".into()));
        }
        if tower != self.tower && !self.tower.is_prefix_of(&tower) {
            return Err(Error::TowerMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(nv, &tower)]; self.nvars];
        let mut out = Polynomial::zero(nv, &tower);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(nv, c.lift(&tower)?);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient; zero results are dropped.
    pub fn map_coeffs(&self, tower: &Tower, f: impl Fn(&TowerElement) -> TowerElement) -> Self {
        let mut p = Self::zero(self.nvars, tower);
        for (e, c) in &self.terms {
            let x = f(c);
            if !x.is_zero() {
                p.terms.insert(e.clone(), x);
            }
        }
        p
    }

    pub fn lift(&self, tower: &Tower) -> Result<Self> {
        let mut p = Self::zero(self.nvars, tower);
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), c.lift(tower)?);
        }
        Ok(p)
    }

    pub fn restrict(&self, tower: &Tower) -> Result<Self> {
        let mut p = Self::zero(self.nvars, tower);
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), c.restrict(tower)?);
        }
        Ok(p)
    }

    /// Re-indexes variables: `x_i ↦ x_{map[i]}` in a ring with `nvars` variables.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Self {
        let mut p = Self::zero(nvars, &self.tower);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] += k;
                }
            }
            p.add_term(e2, c);
        }
        p
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Canonical scalar multiple: primitive integer coefficients with a
    /// positive leading coefficient when all coefficients are rational,
    /// otherwise leading coefficient one.
    pub fn normalized(&self) -> Self {
        let Some((_, lead)) = self.leading() else { return self.clone() };
        if self.is_rational() {
            let mut den = BigInt::one();
            let mut num = BigInt::zero();
            for c in self.terms.values() {
                let q = c.as_rational().expect("rational");
                den = den.lcm(q.denom());
            }
            for c in self.terms.values() {
                let q = c.as_rational().expect("rational");
                num = num.gcd(&(q * BigRational::from_integer(den.clone())).to_integer());
            }
            let mut f = BigRational::new(den, num);
            if lead.as_rational().expect("rational").is_negative() {
                f = -f;
            }
            self.scale(&TowerElement::from_rational(&self.tower, f))
        } else {
            self.scale(&lead.inv().expect("nonzero"))
        }
    }

    /// Whether `self = c · other` for some nonzero scalar `c`.
    pub fn is_scalar_multiple_of(&self, other: &Polynomial) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.normalized() == other.normalized()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { p: self, names }
    }
}

pub struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

fn single_component(c: &TowerElement) -> Option<(usize, &BigRational)> {
    let mut nz = c.coeffs().iter().enumerate().filter(|(_, x)| !x.is_zero());
    let first = nz.next()?;
    nz.next().is_none().then_some(first)
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.p.terms_desc();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], x) })
                .collect();
            let (neg, body) = match single_component(c) {
                Some((_, q)) if q.is_negative() => (true, -*c),
                _ => (false, (*c).clone()),
            };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coeff = if body.is_compound() { format!("({body})") } else { format!("{body}") };
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else {
                if !body.is_one() {
                    write!(f, "{coeff}*")?;
                }
                f.write_str(&mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), &-c);
        }
        p
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check(rhs);
        let mut p = Polynomial::zero(self.nvars, &self.tower);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, &(c1 * c2));
            }
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-TowerElement::one(&self.tower))
    }
}

/// A graded algebra given by generators, degrees and homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    names: Vec<String>,
    group: AbelianGroup,
    degrees: Vec<GroupElement>,
    tower: Tower,
    relations: Vec<Polynomial>,
    degree_map: GroupHom,
}

impl GradedPresentation {
    pub fn new(
        names: Vec<String>,
        group: AbelianGroup,
        degrees: Vec<GroupElement>,
        tower: Tower,
        relations: Vec<Polynomial>,
    ) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::InvalidPresentation(format!("{} names but {} degrees", names.len(), degrees.len())));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidPresentation(format!("duplicate variable {n}")));
            }
        }
        let degree_map = degree_hom(&group, &degrees)?;
        let p = GradedPresentation { names, group, degrees, tower, relations: Vec::new(), degree_map };
        let mut p = p;
        for r in &relations {
            if r.nvars() != p.nvars() || r.tower() != &p.tower {
                return Err(Error::InvalidPresentation("relation over a different ring".into()));
            }
            if !r.is_zero() && p.homogeneous_degree(r)?.is_none() {
                return Err(Error::NotHomogeneous(p.term_degrees(r)));
            }
        }
        p.relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(p)
    }

    /// The polynomial ring with the given generators and no relations.
    pub fn free(names: Vec<String>, group: AbelianGroup, degrees: Vec<GroupElement>, tower: Tower) -> Result<Self> {
        Self::new(names, group, degrees, tower, Vec::new())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn degree_map(&self) -> &GroupHom {
        &self.degree_map
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), &self.tower, i)
    }

    /// Same generators and degrees, other relations.
    pub fn with_relations(&self, relations: Vec<Polynomial>) -> Result<Self> {
        Self::new(self.names.clone(), self.group.clone(), self.degrees.clone(), self.tower.clone(), relations)
    }

    /// Same ring with degrees pushed forward along `proj`.
    pub fn regrade(&self, proj: &GroupHom) -> Result<Self> {
        let degrees = self.degrees.iter().map(|d| proj.apply(d)).collect::<Result<Vec<_>>>()?;
        Self::new(self.names.clone(), proj.codomain().clone(), degrees, self.tower.clone(), self.relations.clone())
    }

    pub fn monomial_degree(&self, e: &[u32]) -> GroupElement {
        let v: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
        self.degree_map.apply_coords(&v)
    }

    /// The common degree of all terms. Absent for mixed degrees and for 0.
    pub fn homogeneous_degree(&self, f: &Polynomial) -> Result<Option<GroupElement>> {
        if f.nvars() != self.nvars() {
            return Err(Error::Dimension("polynomial over another variable set".into()));
        }
        let mut deg: Option<GroupElement> = None;
        for e in f.terms.keys() {
            let d = self.monomial_degree(e);
            match &deg {
                None => deg = Some(d),
                Some(d0) if *d0 != d => return Ok(None),
                _ => {}
            }
        }
        Ok(deg)
    }

    fn term_degrees(&self, f: &Polynomial) -> String {
        let mut seen: Vec<String> = Vec::new();
        for (e, _) in f.terms_desc() {
            let mono = Polynomial::monomial(e.clone(), TowerElement::one(&self.tower));
            seen.push(format!("{} has degree {}", mono.display(&self.names), self.monomial_degree(e)));
        }
        seen.join(", ")
    }

    pub(crate) fn piece_space(&self, d: &GroupElement, cap: Option<u32>, tagged: bool) -> Result<PieceSpace> {
        let monomials = {
            let mut f = fiber_points(&self.degree_map, d, cap)?;
            f.sort_by(|a, b| grlex_cmp(b, a));
            f
        };
        let index: BTreeMap<Exponent, usize> = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut echelon = Echelon::new(&self.tower);
        let mut multiples = Vec::new();
        for (ri, r) in self.relations.iter().enumerate() {
            let dr = self.homogeneous_degree(r)?.expect("relations are homogeneous");
            let rest = d.sub(&dr)?;
            let shifts = match fiber_points(&self.degree_map, &rest, cap) {
                Ok(v) => v,
                Err(Error::UnboundedFiber) => return Err(Error::UnboundedFiber),
                Err(e) => return Err(e),
            };
            for m in shifts {
                let prod = r.mul_monomial(&m);
                let mut v = SparseVec::new();
                let mut inside = true;
                for (e, c) in prod.terms() {
                    match index.get(e) {
                        Some(&k) => {
                            v.insert(k, c.clone());
                        }
                        None => inside = false,
                    }
                }
                if !inside {
                    // only possible when a cap truncates the fiber
                    continue;
                }
                if tagged {
                    v.insert(TAG_BASE + multiples.len(), TowerElement::one(&self.tower));
                    multiples.push((ri, m));
                    echelon.insert_tagged(v);
                } else {
                    echelon.insert(v);
                }
            }
        }
        Ok(PieceSpace { monomials, index, echelon, multiples })
    }

    /// Basis and dimension of `R_d`.
    pub fn graded_piece(&self, d: &GroupElement, cap: Option<u32>) -> Result<GradedPiece> {
        let space = self.piece_space(d, cap, false)?;
        let basis: Vec<Exponent> = space
            .monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !space.echelon.is_pivot(*i))
            .map(|(_, e)| e.clone())
            .collect();
        let mut basis = basis;
        basis.sort_by(|a, b| listing_cmp(a, b));
        Ok(GradedPiece { dimension: basis.len(), basis, fiber: space.monomials.len() })
    }

    /// Decides `f ∈ (relations)` and returns the combination used.
    pub fn ideal_member(&self, f: &Polynomial) -> Result<Membership> {
        if f.nvars() != self.nvars() || f.tower() != &self.tower {
            return Err(Error::Dimension("polynomial over another ring".into()));
        }
        if f.is_zero() {
            return Ok(Membership { member: true, certificate: Vec::new() });
        }
        let d = self.homogeneous_degree(f)?.ok_or_else(|| Error::NotHomogeneous(self.term_degrees(f)))?;
        let space = self.piece_space(&d, None, true)?;
        let mut v = SparseVec::new();
        for (e, c) in f.terms() {
            match space.index.get(e) {
                Some(&k) => {
                    v.insert(k, c.clone());
                }
                None => return Ok(Membership { member: false, certificate: Vec::new() }),
            }
        }
        let v = space.echelon.reduce_below(v, TAG_BASE);
        if v.range(..TAG_BASE).next().is_some() {
            return Ok(Membership { member: false, certificate: Vec::new() });
        }
        let mut mult: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (k, c) in v.range(TAG_BASE..) {
            let (ri, m) = &space.multiples[k - TAG_BASE];
            let term = Polynomial::monomial(m.clone(), -c);
            let entry = mult.entry(*ri).or_insert_with(|| Polynomial::zero(self.nvars(), &self.tower));
            *entry = &*entry + &term;
        }
        Ok(Membership { member: true, certificate: mult.into_iter().filter(|(_, p)| !p.is_zero()).collect() })
    }

    /// Normal form of `f` in its degree: reduction modulo the relation span
    /// with graded-lex larger monomials eliminated first.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.is_zero() {
            return Ok(f.clone());
        }
        let d = self.homogeneous_degree(f)?.ok_or_else(|| Error::NotHomogeneous(self.term_degrees(f)))?;
        let space = self.piece_space(&d, None, false)?;
        let v = space.reduce(f)?;
        Ok(space.polynomial(&v, self.nvars(), &self.tower))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    /// Standard monomials, a basis of the piece modulo the relations.
    pub basis: Vec<Exponent>,
    pub dimension: usize,
    /// Number of monomials of this degree in the free ring.
    pub fiber: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Pairs (relation index, multiplier) with `f = Σ multiplier · relation`.
    pub certificate: Vec<(usize, Polynomial)>,
}

impl Membership {
    /// Expands the certificate and compares with `f`.
    pub fn verify(&self, relations: &[Polynomial], f: &Polynomial) -> bool {
        if !self.member {
            return false;
        }
        let mut acc = Polynomial::zero(f.nvars(), f.tower());
        for (i, m) in &self.certificate {
            acc = &acc + &(m * &relations[*i]);
        }
        &acc == f
    }
}

/// Monomials of one degree with the relation span reduced to echelon form.
pub(crate) struct PieceSpace {
    pub monomials: Vec<Exponent>,
    pub index: BTreeMap<Exponent, usize>,
    pub echelon: Echelon,
    multiples: Vec<(usize, Exponent)>,
}

impl PieceSpace {
    pub fn vector(&self, f: &Polynomial) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (e, c) in f.terms() {
            let k = self.index.get(e).ok_or_else(|| Error::NotHomogeneous("term outside the degree".into()))?;
            v.insert(*k, c.clone());
        }
        Ok(v)
    }

    pub fn reduce(&self, f: &Polynomial) -> Result<SparseVec> {
        Ok(self.echelon.reduce(self.vector(f)?))
    }

    pub fn polynomial(&self, v: &SparseVec, nvars: usize, tower: &Tower) -> Polynomial {
        Polynomial::from_terms(nvars, tower, v.iter().map(|(k, c)| (self.monomials[*k].clone(), c.clone())))
    }
}

/// All exponent vectors in `n` variables of total degree at most `bound`.
pub fn monomials_up_to(n: usize, bound: u32) -> Vec<Exponent> {
    fn rec(n: usize, j: usize, left: u32, e: &mut Exponent, out: &mut Vec<Exponent>) {
        if j == n {
            out.push(e.clone());
            return;
        }
        for v in 0..=left {
            e[j] = v;
            rec(n, j + 1, left - v, e, out);
        }
        e[j] = 0;
    }
    let mut out = Vec::new();
    rec(n, 0, bound, &mut vec![0; n], &mut out);
    out.sort_by(|a, b| listing_cmp(a, b));
    out
}

/// A new generator for relation discovery: its image in the ambient ring
/// and its degree in the new grading group.
#[derive(Clone, Debug)]
pub struct NewGenerator {
    pub name: String,
    pub image: Polynomial,
    pub degree: GroupElement,
}

struct FoundRelation {
    degree: Vec<BigInt>,
    maxdeg: u64,
    poly: Polynomial,
}

/// Relations among `gens` up to total degree `bound` in the new variables.
///
/// `degree_map` sends the new grading group to the ambient one; each
/// generator image must be homogeneous of the mapped degree. The kernel of
/// evaluation is computed degree by degree along the total-degree
/// filtration, and only elements not already generated by relations of
/// lower total degree are returned. Results are reduced row echelon rows,
/// normalized, over the ambient tower.
pub fn discover_relations(
    ambient: &GradedPresentation,
    gens: &[NewGenerator],
    degree_map: &GroupHom,
    bound: u32,
) -> Result<Vec<Polynomial>> {
    let n = gens.len();
    let tower = ambient.tower().clone();
    let new_group = degree_map.domain();
    for g in gens {
        if g.degree.group() != new_group {
            return Err(Error::GroupMismatch);
        }
        let want = degree_map.apply(&g.degree)?;
        match ambient.homogeneous_degree(&g.image)? {
            Some(d) if d == want => {}
            _ if g.image.is_zero() => {}
            _ => return Err(Error::NotHomogeneous(format!("image of {} is not homogeneous of degree {want}", g.name))),
        }
    }
    // group new monomials by new degree
    let mut groups: BTreeMap<Vec<BigInt>, Vec<Exponent>> = BTreeMap::new();
    for m in monomials_up_to(n, bound) {
        let mut d = new_group.zero();
        for (k, &x) in m.iter().enumerate() {
            if x > 0 {
                d = d.add(&gens[k].degree.scale(&BigInt::from(x)))?;
            }
        }
        groups.entry(d.coords().to_vec()).or_default().push(m);
    }
    for ms in groups.values_mut() {
        ms.sort_by(|a, b| grlex_cmp(b, a));
    }
    let mut order: Vec<Vec<BigInt>> = groups.keys().cloned().collect();
    order.sort_by(|a, b| {
        let ta = groups[a].iter().map(|e| total_degree(e)).min();
        let tb = groups[b].iter().map(|e| total_degree(e)).min();
        ta.cmp(&tb).then_with(|| a.cmp(b))
    });

    let mut images: BTreeMap<Exponent, Polynomial> = BTreeMap::new();
    images.insert(vec![0; n], Polynomial::one(ambient.nvars(), &tower));
    let mut spaces: BTreeMap<Vec<BigInt>, PieceSpace> = BTreeMap::new();
    let mut found: Vec<FoundRelation> = Vec::new();

    for t in 1..=bound as u64 {
        for key in &order {
            let ms = &groups[key];
            if !ms.iter().any(|e| total_degree(e) == t) {
                continue;
            }
            let v_t: Vec<&Exponent> = ms.iter().filter(|e| total_degree(e) <= t).collect();
            let dkey = new_group.element(key.clone())?;
            let amb_deg = degree_map.apply(&dkey)?;
            let akey = amb_deg.coords().to_vec();
            if !spaces.contains_key(&akey) {
                spaces.insert(akey.clone(), ambient.piece_space(&amb_deg, None, false)?);
            }
            let space = &spaces[&akey];
            // kernel of evaluation on v_t
            let mut ev = Echelon::new(&tower);
            for (i, m) in v_t.iter().enumerate() {
                let img = image_of(&mut images, gens, m);
                let mut v = space.reduce(&img)?;
                v.insert(TAG_BASE + i, TowerElement::one(&tower));
                ev.insert_tagged(v);
            }
            let kernel: Vec<SparseVec> = ev
                .rows()
                .iter()
                .filter(|r| r.keys().next().is_some_and(|k| *k >= TAG_BASE))
                .map(|r| r.iter().map(|(k, c)| (k - TAG_BASE, c.clone())).collect())
                .collect();
            if kernel.is_empty() {
                continue;
            }
            let col: BTreeMap<&Exponent, usize> = v_t.iter().enumerate().map(|(i, e)| (*e, i)).collect();
            let mut known = Echelon::new(&tower);
            for r in &found {
                if r.maxdeg > t {
                    continue;
                }
                let rdeg = new_group.element(r.degree.clone())?;
                let rest = dkey.sub(&rdeg)?;
                let Some(shifts) = groups.get(rest.coords()) else { continue };
                for s in shifts.iter().filter(|s| total_degree(s) + r.maxdeg <= t) {
                    let prod = r.poly.mul_monomial(s);
                    let v: SparseVec = prod.terms().map(|(e, c)| (col[e], c.clone())).collect();
                    known.insert(v);
                }
            }
            // new relations are the kernel elements independent modulo the
            // multiples of relations already found
            let mut fresh = Echelon::new(&tower);
            for k in kernel {
                fresh.insert(known.reduce(k));
            }
            for row in fresh.into_reduced().sorted_rows() {
                let poly = Polynomial::from_terms(n, &tower, row.iter().map(|(k, c)| (v_t[*k].clone(), c.clone())))
                    .normalized();
                let maxdeg = poly.total_degree().unwrap_or(0);
                found.push(FoundRelation { degree: key.clone(), maxdeg, poly });
            }
        }
    }
    Ok(found.into_iter().map(|r| r.poly).collect())
}

fn image_of(cache: &mut BTreeMap<Exponent, Polynomial>, gens: &[NewGenerator], m: &Exponent) -> Polynomial {
    if let Some(p) = cache.get(m) {
        return p.clone();
    }
    let k = m.iter().position(|&x| x > 0).expect("nonconstant monomial");
    let mut prev = m.clone();
    prev[k] -= 1;
    let base = image_of(cache, gens, &prev);
    let p = &base * &gens[k].image;
    cache.insert(m.clone(), p.clone());
    p
}

/// Orders polynomials by leading monomial, descending.
pub fn leading_cmp(a: &Polynomial, b: &Polynomial) -> Ordering {
    match (a.leading(), b.leading()) {
        (Some((x, _)), Some((y, _))) => grlex_cmp(y, x),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
    }
}
