//! Pullbacks of graded presentations along grading-group morphisms.
//!
//! For an injective `H → G` the pullback is the Veronese subalgebra
//! `⊕_{d ∈ H} R_d`, generated by the images of the Hilbert basis of the
//! monoid of exponents with degree in `H`. A general `φ: M' → G` factors
//! through its image; the kernel contributes degree-only generators with
//! image 1.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::abgroup::{hom_kernel, image, quotient, subgroup_membership, AbelianGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::lattice::{
    degree_hom, fiber_points, hilbert_basis, pointedness, total_degree, Exponent, FiberMonoid, Pointedness,
    DEFAULT_DEGREE_CAP,
};
use crate::linalg::Echelon;
use crate::numfield::TowerElement;
use crate::polyalg::{discover_relations, GradedPresentation, NewGenerator, Polynomial};

pub const DEFAULT_RELATION_BOUND: u32 = 6;

#[derive(Clone, Debug)]
pub struct PullbackOptions {
    /// Total-degree bound for relation discovery.
    pub bound: u32,
    /// Total-degree cap for Hilbert basis completion.
    pub cap: u64,
    /// Names for the new generators, overriding the derived ones.
    pub names: Option<Vec<String>>,
}

impl Default for PullbackOptions {
    fn default() -> Self {
        PullbackOptions { bound: DEFAULT_RELATION_BOUND, cap: DEFAULT_DEGREE_CAP, names: None }
    }
}

#[derive(Clone, Debug)]
pub struct PullbackResult {
    pub presentation: GradedPresentation,
    pub ambient: GradedPresentation,
    /// Image of each new generator in the ambient ring.
    pub generator_images: Vec<Polynomial>,
    /// New grading group to ambient grading group.
    pub degree_map: GroupHom,
    pub degree_bound_used: u32,
}

impl PullbackResult {
    pub fn new_generators(&self) -> Vec<NewGenerator> {
        self.presentation
            .names()
            .iter()
            .zip(&self.generator_images)
            .zip(self.presentation.degrees())
            .map(|((n, im), d)| NewGenerator { name: n.clone(), image: im.clone(), degree: d.clone() })
            .collect()
    }

    /// Checks that every relation maps into the ambient ideal.
    pub fn verify_relations(&self) -> Result<bool> {
        for r in self.presentation.relations() {
            let img = r.substitute(&self.generator_images)?;
            if !self.ambient.ideal_member(&img)?.member {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Name of a monomial: factors joined by `_`, powers written `p<k>`.
pub fn monomial_name(names: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}p{}", names[i], k) })
        .collect();
    if parts.is_empty() {
        String::from("one")
    } else {
        parts.join("_")
    }
}

fn names_or(opts: &PullbackOptions, derived: Vec<String>) -> Result<Vec<String>> {
    match &opts.names {
        Some(n) if n.len() != derived.len() => {
            Err(Error::Dimension(format!("{} names supplied for {} generators", n.len(), derived.len())))
        }
        Some(n) => Ok(n.clone()),
        None => Ok(derived),
    }
}

/// The degrees of the generators, which span the subgroup of degrees with
/// nonzero pieces.
pub fn effective_degree_subgroup(r: &GradedPresentation) -> Vec<GroupElement> {
    r.degrees().to_vec()
}

/// Veronese subalgebra `⊕_{d ∈ H} R_d` with degrees in coordinates of the
/// generators of `H` (modulo their relations).
pub fn veronese_subalgebra(
    r: &GradedPresentation,
    h: &[GroupElement],
    opts: &PullbackOptions,
) -> Result<PullbackResult> {
    let g = r.group();
    if h.iter().any(|x| x.group() != g) {
        return Err(Error::GroupMismatch);
    }
    // Z^k → G sending e_i to h_i, and its image as the new grading group
    let psi = GroupHom::from_free(g, h)?;
    let (kgroup, kinc) = hom_kernel(&psi)?;
    let zk = AbelianGroup::free(h.len());
    let kgens: Vec<GroupElement> =
        (0..kgroup.ngens()).map(|i| kinc.apply(&kgroup.generator(i))).collect::<Result<_>>()?;
    let (ngroup, nproj) = quotient(&zk, &kgens)?;
    let ngens: Vec<GroupElement> = (0..h.len()).map(|i| nproj.apply(&zk.generator(i))).collect::<Result<_>>()?;
    let degree_map = GroupHom::from_generator_images(&ngroup, g, &ngens, h)?;

    let fm = FiberMonoid::new(r.degree_map().clone(), h.to_vec())?;
    if let Pointedness::NotPointed(w) = pointedness(r.degree_map())? {
        return Err(Error::NotPointed(w.iter().map(|&x| x as i64).collect()));
    }
    let basis = hilbert_basis(&fm, Some(opts.cap))?;

    let mut degrees = Vec::with_capacity(basis.len());
    for e in &basis {
        let d = r.monomial_degree(e);
        let w = subgroup_membership(h, &d)?.ok_or(Error::NotInMonoid)?;
        degrees.push(nproj.apply(&zk.element(w)?)?);
    }
    let images: Vec<Polynomial> =
        basis.iter().map(|e| Polynomial::monomial(e.clone(), TowerElement::one(r.tower()))).collect();
    let names = names_or(opts, basis.iter().map(|e| monomial_name(r.names(), e)).collect())?;
    build(r, names, images, degrees, ngroup, degree_map, opts.bound)
}

fn build(
    r: &GradedPresentation,
    names: Vec<String>,
    images: Vec<Polynomial>,
    degrees: Vec<GroupElement>,
    group: AbelianGroup,
    degree_map: GroupHom,
    bound: u32,
) -> Result<PullbackResult> {
    let gens: Vec<NewGenerator> = names
        .iter()
        .zip(&images)
        .zip(&degrees)
        .map(|((n, im), d)| NewGenerator { name: n.clone(), image: im.clone(), degree: d.clone() })
        .collect();
    let relations = discover_relations(r, &gens, &degree_map, bound)?;
    let presentation = GradedPresentation::new(names, group, degrees, r.tower().clone(), relations)?;
    Ok(PullbackResult {
        presentation,
        ambient: r.clone(),
        generator_images: images,
        degree_map,
        degree_bound_used: bound,
    })
}

/// Pullback along an arbitrary `φ: M' → G`.
///
/// Veronese generators of `im φ` are lifted to chosen preimages of their
/// degrees; each generator of the kernel monoid of `φ` (both signs of a
/// free kernel generator, torsion generators once) becomes a generator with
/// image 1.
pub fn pullback_general(r: &GradedPresentation, phi: &GroupHom, opts: &PullbackOptions) -> Result<PullbackResult> {
    if phi.codomain() != r.group() {
        return Err(Error::GroupMismatch);
    }
    let mprime = phi.domain();
    let (_, emb, _) = image(phi)?;
    let h = emb.generator_images();
    let ver = veronese_subalgebra(r, &h, &PullbackOptions { names: None, ..opts.clone() })?;
    let phi_gens = phi.generator_images();

    let mut names: Vec<String> = ver.presentation.names().to_vec();
    let mut images = ver.generator_images.clone();
    let mut degrees = Vec::new();
    for im in &images {
        let d = r.homogeneous_degree(im)?.ok_or(Error::NotInMonoid)?;
        let w = subgroup_membership(&phi_gens, &d)?.ok_or(Error::NotInMonoid)?;
        degrees.push(mprime.element(w)?);
    }
    let (kgroup, kinc) = hom_kernel(phi)?;
    let one = Polynomial::one(r.nvars(), r.tower());
    let mut k = 0;
    for i in 0..kgroup.ngens() {
        let gen = kinc.apply(&kgroup.generator(i))?;
        let signs: &[bool] = if kgroup.generator_order(i).is_some() { &[true] } else { &[true, false] };
        for &pos in signs {
            k += 1;
            names.push(format!("u{k}"));
            images.push(one.clone());
            degrees.push(if pos { gen.clone() } else { gen.neg() });
        }
    }
    let names = names_or(opts, names)?;
    build(r, names, images, degrees, mprime.clone(), phi.clone(), opts.bound)
}

/// Whether `target` lies in the span of the images of the monomials
/// `monos` in the ambient piece of degree `d`.
fn in_span(
    ambient: &GradedPresentation,
    d: &GroupElement,
    spanning: &[Polynomial],
    target: &Polynomial,
) -> Result<bool> {
    let space_monos = fiber_points(ambient.degree_map(), d, None)?;
    let index: BTreeMap<&Exponent, usize> = space_monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let to_vec =
        |p: &Polynomial| -> crate::linalg::SparseVec { p.terms().map(|(e, c)| (index[e], c.clone())).collect() };
    let mut ech = Echelon::new(ambient.tower());
    for rel in ambient.relations() {
        let dr = ambient.homogeneous_degree(rel)?.expect("homogeneous");
        for m in fiber_points(ambient.degree_map(), &d.sub(&dr)?, None)? {
            ech.insert(to_vec(&rel.mul_monomial(&m)));
        }
    }
    for s in spanning {
        ech.insert(to_vec(s));
    }
    Ok(ech.reduce(to_vec(target)).is_empty())
}

fn product_image(images: &[Polynomial], e: &[u32], nvars: usize, r: &GradedPresentation) -> Polynomial {
    let mut p = Polynomial::one(nvars, r.tower());
    for (i, &k) in e.iter().enumerate() {
        if k > 0 {
            p = &p * &images[i].pow(k);
        }
    }
    p
}

/// Index of a generator whose image lies in the subalgebra generated by
/// the others, within the total-degree bound. Candidates are tried by
/// decreasing image total degree, later generators first on ties.
fn removable(pr: &PullbackResult) -> Result<Option<usize>> {
    let p = &pr.presentation;
    let n = p.nvars();
    let amb = &pr.ambient;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let da = pr.generator_images[a].total_degree().unwrap_or(0);
        let db = pr.generator_images[b].total_degree().unwrap_or(0);
        db.cmp(&da).then(b.cmp(&a))
    });
    for i in order {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let odeg: Vec<GroupElement> = others.iter().map(|&j| p.degrees()[j].clone()).collect();
        let q = degree_hom(p.group(), &odeg)?;
        let monos = match fiber_points(&q, &p.degrees()[i], Some(pr.degree_bound_used)) {
            Ok(m) => m,
            Err(Error::UnboundedFiber) => continue,
            Err(e) => return Err(e),
        };
        let oimages: Vec<Polynomial> = others.iter().map(|&j| pr.generator_images[j].clone()).collect();
        let spanning: Vec<Polynomial> = monos
            .iter()
            .filter(|e| total_degree(e) <= pr.degree_bound_used as u64 && total_degree(e) > 0)
            .map(|e| product_image(&oimages, e, amb.nvars(), amb))
            .collect();
        let target = &pr.generator_images[i];
        if target.is_zero() {
            return Ok(Some(i));
        }
        let d = amb.homogeneous_degree(target)?.ok_or_else(|| Error::NotHomogeneous("generator image".into()))?;
        if in_span(amb, &d, &spanning, target)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Drops generators that are polynomials in the others, one at a time,
/// then rediscovers the relations among the survivors.
pub fn minimize_generators(pr: &PullbackResult) -> Result<PullbackResult> {
    let mut cur = pr.clone();
    let mut changed = false;
    while let Some(i) = removable(&cur)? {
        let keep: Vec<usize> = (0..cur.presentation.nvars()).filter(|&j| j != i).collect();
        let p = &cur.presentation;
        let names = keep.iter().map(|&j| p.names()[j].clone()).collect();
        let degrees = keep.iter().map(|&j| p.degrees()[j].clone()).collect();
        let images: Vec<Polynomial> = keep.iter().map(|&j| cur.generator_images[j].clone()).collect();
        let presentation = GradedPresentation::free(names, p.group().clone(), degrees, p.tower().clone())?;
        cur = PullbackResult { presentation, generator_images: images, ..cur };
        changed = true;
    }
    if !changed {
        return Ok(cur);
    }
    let gens = cur.new_generators();
    let relations = discover_relations(&cur.ambient, &gens, &cur.degree_map, cur.degree_bound_used)?;
    cur.presentation = cur.presentation.with_relations(relations)?;
    Ok(cur)
}

/// Coordinates of each element of `xs` in terms of `h`, if all lie in span.
pub fn coordinates_in(h: &[GroupElement], xs: &[GroupElement]) -> Result<Option<Vec<Vec<BigInt>>>> {
    let mut out = Vec::new();
    for x in xs {
        match subgroup_membership(h, x)? {
            Some(w) => out.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}
