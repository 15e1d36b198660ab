//! Finite abelian semilinear actions on graded presentations, descent to
//! the fixed field, and twisting by cocycles with values in diagonal
//! automorphisms `Hom(M, K^×)`.
//!
//! A group element acts by `c · x_i ↦ ḡ(c) · s_i · x_{π(i)}`, where `ḡ`
//! flips the signs of the square roots in its conjugation mask, together
//! with an automorphism `A` of the grading group such that
//! `deg x_{π(i)} = A(deg x_i)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abgroup::{hom_kernel, quotient, subgroup_membership, AbelianGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::{invert, Echelon, SparseVec};
use crate::numfield::{sum_of_two_squares, Tower, TowerElement};
use crate::polyalg::{GradedPresentation, Polynomial};
use crate::veronese::{minimize_generators, PullbackResult};

/// One generator of the acting group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionGenerator {
    pub name: String,
    pub order: u32,
    /// `x_i ↦ s_i · x_{perm[i]}`.
    pub perm: Vec<usize>,
    pub scalars: Vec<TowerElement>,
    /// Bit `l - 1` set means the root of level `l` changes sign.
    pub conj_mask: usize,
    /// Automorphism of the grading group; derived from the permutation
    /// when absent.
    pub grading: Option<GroupHom>,
}

impl ActionGenerator {
    /// A permutation with unit scalars.
    pub fn permutation(name: &str, order: u32, perm: Vec<usize>, conj_mask: usize, tower: &Tower) -> Self {
        let scalars = vec![TowerElement::one(tower); perm.len()];
        ActionGenerator { name: name.into(), order, perm, scalars, conj_mask, grading: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearAction {
    pub generators: Vec<ActionGenerator>,
}

/// A single group element as a concrete semilinear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    pub perm: Vec<usize>,
    pub scalars: Vec<TowerElement>,
    pub conj_mask: usize,
    pub grading: GroupHom,
}

impl SemilinearMap {
    pub fn identity(p: &GradedPresentation) -> Self {
        SemilinearMap {
            perm: (0..p.nvars()).collect(),
            scalars: vec![TowerElement::one(p.tower()); p.nvars()],
            conj_mask: 0,
            grading: GroupHom::identity(p.group()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SemilinearMap) -> Result<SemilinearMap> {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let scalars = other
            .perm
            .iter()
            .zip(&other.scalars)
            .map(|(&j, s)| &s.conjugate_mask(self.conj_mask) * &self.scalars[j])
            .collect();
        Ok(SemilinearMap {
            perm,
            scalars,
            conj_mask: self.conj_mask ^ other.conj_mask,
            grading: self.grading.compose(&other.grading)?,
        })
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let n = f.nvars();
        let tower = f.tower();
        let mut out = Polynomial::zero(n, tower);
        for (e, c) in f.terms() {
            let mut coeff = c.conjugate_mask(self.conj_mask);
            let mut e2 = vec![0u32; n];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[self.perm[i]] += k;
                    for _ in 0..k {
                        coeff = &coeff * &self.scalars[i];
                    }
                }
            }
            out = &out + &Polynomial::monomial(e2, coeff);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.conj_mask == 0
            && self.perm.iter().enumerate().all(|(i, &j)| i == j)
            && self.scalars.iter().all(|s| s.is_one())
            && self.grading == GroupHom::identity(self.grading.domain())
    }
}

/// The grading automorphism determined by `deg x_i ↦ deg x_{perm[i]}`.
pub fn derive_grading(p: &GradedPresentation, perm: &[usize]) -> Result<GroupHom> {
    let images: Vec<GroupElement> = perm.iter().map(|&j| p.degrees()[j].clone()).collect();
    GroupHom::from_generator_images(p.group(), p.group(), p.degrees(), &images)
}

impl SemilinearAction {
    pub fn new(generators: Vec<ActionGenerator>) -> Self {
        SemilinearAction { generators }
    }

    fn check_shape(&self, p: &GradedPresentation) -> Result<()> {
        for g in &self.generators {
            if g.perm.len() != p.nvars() || g.scalars.len() != p.nvars() {
                return Err(Error::InvalidAction(format!("{}: wrong number of variables", g.name)));
            }
            let seen: BTreeSet<usize> = g.perm.iter().copied().collect();
            if seen.len() != p.nvars() || seen.iter().any(|&j| j >= p.nvars()) {
                return Err(Error::InvalidAction(format!("{}: not a permutation", g.name)));
            }
            if g.scalars.iter().any(|s| s.is_zero() || s.tower() != p.tower()) {
                return Err(Error::InvalidAction(format!("{}: scalars must be nonzero in the ring's field", g.name)));
            }
            if g.conj_mask >> p.tower().depth() != 0 {
                return Err(Error::InvalidAction(format!("{}: conjugation beyond the tower", g.name)));
            }
        }
        Ok(())
    }

    /// The generator maps with their grading automorphisms resolved.
    pub fn generator_maps(&self, p: &GradedPresentation) -> Result<Vec<SemilinearMap>> {
        self.check_shape(p)?;
        self.generators
            .iter()
            .map(|g| {
                let grading = match &g.grading {
                    Some(h) => h.clone(),
                    None => derive_grading(p, &g.perm)?,
                };
                Ok(SemilinearMap { perm: g.perm.clone(), scalars: g.scalars.clone(), conj_mask: g.conj_mask, grading })
            })
            .collect()
    }

    /// All products `g_1^{a_1} ⋯ g_r^{a_r}` with `0 ≤ a_k < order_k`, in
    /// lexicographic order of the exponents.
    pub fn elements(&self, p: &GradedPresentation) -> Result<Vec<SemilinearMap>> {
        let maps = self.generator_maps(p)?;
        let mut out = vec![SemilinearMap::identity(p)];
        for (g, m) in self.generators.iter().zip(&maps) {
            let mut next = Vec::new();
            for x in &out {
                let mut cur = x.clone();
                for _ in 0..g.order {
                    next.push(cur.clone());
                    cur = cur.compose(m)?;
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn group_order(&self) -> u64 {
        self.generators.iter().map(|g| g.order as u64).product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub checks: Vec<Check>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }
}

/// Validates an action; every failure carries a counterexample.
pub fn check_action(p: &GradedPresentation, a: &SemilinearAction) -> Result<ActionReport> {
    let mut rep = ActionReport { checks: Vec::new() };
    if let Err(e) = a.check_shape(p) {
        rep.push("well-formed", false, format!("{e}"));
        return Ok(rep);
    }
    rep.push("well-formed", true, String::new());
    let names = p.names();

    // degree compatibility
    let mut maps = Vec::new();
    let mut degree_ok = true;
    for g in &a.generators {
        let grading = match &g.grading {
            Some(h) => Ok(h.clone()),
            None => derive_grading(p, &g.perm),
        };
        match grading {
            Ok(h) => {
                for i in 0..p.nvars() {
                    let want = h.apply(&p.degrees()[i])?;
                    let have = &p.degrees()[g.perm[i]];
                    if &want != have {
                        degree_ok = false;
                        rep.push(
                            "degree compatibility",
                            false,
                            format!(
                                "{}: {} -> {} but the grading sends {} to {}",
                                g.name,
                                names[i],
                                names[g.perm[i]],
                                p.degrees()[i],
                                want
                            ),
                        );
                        break;
                    }
                }
                maps.push(SemilinearMap {
                    perm: g.perm.clone(),
                    scalars: g.scalars.clone(),
                    conj_mask: g.conj_mask,
                    grading: h,
                });
            }
            Err(_) => {
                degree_ok = false;
                rep.push("degree compatibility", false, degree_witness(p, g)?);
            }
        }
    }
    if !degree_ok {
        return Ok(rep);
    }
    rep.push("degree compatibility", true, String::new());

    // orders
    let mut order_ok = true;
    for (g, m) in a.generators.iter().zip(&maps) {
        let mut cur = SemilinearMap::identity(p);
        for _ in 0..g.order {
            cur = cur.compose(m)?;
        }
        if !cur.is_identity() {
            order_ok = false;
            rep.push("order", false, format!("{}^{} is not the identity", g.name, g.order));
        }
    }
    if order_ok {
        rep.push("order", true, String::new());
    }

    // commutation
    let mut comm_ok = true;
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if maps[i].compose(&maps[j])? != maps[j].compose(&maps[i])? {
                comm_ok = false;
                rep.push(
                    "commutation",
                    false,
                    format!("{} and {} do not commute", a.generators[i].name, a.generators[j].name),
                );
            }
        }
    }
    if comm_ok {
        rep.push("commutation", true, String::new());
    }

    // relation ideal stability
    let mut stable = true;
    'outer: for (g, m) in a.generators.iter().zip(&maps) {
        for r in p.relations() {
            let img = m.apply(r);
            if !p.ideal_member(&img)?.member {
                stable = false;
                rep.push(
                    "relation stability",
                    false,
                    format!("{} maps {} to {}", g.name, r.display(names), img.display(names)),
                );
                break 'outer;
            }
        }
    }
    if stable {
        rep.push("relation stability", true, String::new());
    }

    // the group acts faithfully on the field, so it is a Galois group
    if order_ok && comm_ok {
        let elems = a.elements(p)?;
        let masks: BTreeSet<usize> = elems.iter().map(|e| e.conj_mask).collect();
        if masks.len() == elems.len() {
            rep.push("galois faithfulness", true, String::new());
        } else {
            rep.push(
                "galois faithfulness",
                false,
                format!("{} group elements but only {} field automorphisms", elems.len(), masks.len()),
            );
        }
    }
    Ok(rep)
}

/// A degree relation `Σ c_i deg x_i = 0` that the permutation breaks.
fn degree_witness(p: &GradedPresentation, g: &ActionGenerator) -> Result<String> {
    let names = p.names();
    let (k, inc) = hom_kernel(p.degree_map())?;
    for j in 0..k.ngens() {
        let c = inc.apply(&k.generator(j))?;
        let mut img = p.group().zero();
        for (i, ci) in c.coords().iter().enumerate() {
            img = img.add(&p.degrees()[g.perm[i]].scale(ci))?;
        }
        if !img.is_zero() {
            let terms: Vec<String> = c
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| format!("{x}*deg({})", names[i]))
                .collect();
            return Ok(format!("{}: {} = 0 but the permuted degrees give {}", g.name, terms.join(" + "), img));
        }
    }
    Ok(format!("{}: the permuted degrees do not generate the grading group", g.name))
}

/// The induced action on a pullback whose generator images are permuted
/// up to scalars by the action on the ambient ring.
pub fn induced_action(pr: &PullbackResult, a: &SemilinearAction) -> Result<SemilinearAction> {
    let maps = a.generator_maps(&pr.ambient)?;
    let p = &pr.presentation;
    let mut gens = Vec::new();
    for (g, m) in a.generators.iter().zip(&maps) {
        let mut perm = Vec::new();
        let mut scalars = Vec::new();
        for (l, img) in pr.generator_images.iter().enumerate() {
            let moved = m.apply(img);
            let hit = pr.generator_images.iter().enumerate().find_map(|(k, other)| {
                let (le, lc) = other.leading()?;
                let c = moved.coeff(le)?;
                let s = c * &lc.inv().ok()?;
                (other.scale(&s) == moved).then_some((k, s))
            });
            let (k, s) = hit.ok_or_else(|| {
                Error::InvalidAction(format!("{} does not permute generator {} up to scalars", g.name, p.names()[l]))
            })?;
            perm.push(k);
            scalars.push(s);
        }
        gens.push(ActionGenerator {
            name: g.name.clone(),
            order: g.order,
            perm,
            scalars,
            conj_mask: g.conj_mask,
            grading: None,
        });
    }
    Ok(SemilinearAction::new(gens))
}

#[derive(Clone, Debug, Default)]
pub struct DescentOptions {
    /// Orbit representatives by variable index, one per orbit in order of
    /// smallest member; the smallest member by default.
    pub representatives: Option<Vec<usize>>,
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    /// The presentation over the fixed field, graded by the coinvariants.
    pub presentation: GradedPresentation,
    /// The source ring regraded by the coinvariants, over the big field.
    pub source: GradedPresentation,
    /// Each new generator as a linear form in the source variables.
    pub generator_images: Vec<Polynomial>,
    /// Each source variable as a linear form in the new generators.
    pub substitution: Vec<Polynomial>,
    /// `M → M_Γ`.
    pub coinvariants: GroupHom,
    pub fixed_depth: usize,
}

impl DescentResult {
    /// The descended ring as a pullback of the source ring, so that
    /// generator minimization and relation discovery apply.
    pub fn as_pullback(&self, bound: u32) -> Result<PullbackResult> {
        let lifted = self.presentation.with_relations(Vec::new())?;
        let p = GradedPresentation::free(
            lifted.names().to_vec(),
            lifted.group().clone(),
            lifted.degrees().to_vec(),
            self.source.tower().clone(),
        )?;
        Ok(PullbackResult {
            presentation: p,
            ambient: self.source.clone(),
            generator_images: self.generator_images.clone(),
            degree_map: GroupHom::identity(self.source.group()),
            degree_bound_used: bound,
        })
    }

    /// Drops generators that are polynomials in the others and rediscovers
    /// the relations. The relations span a subspace defined over the fixed
    /// field, so their reduced echelon form restricts to it.
    pub fn minimize(&self, bound: u32) -> Result<PullbackResult> {
        let m = minimize_generators(&self.as_pullback(bound)?)?;
        let small = self.presentation.tower();
        let p = &m.presentation;
        let relations = p.relations().iter().map(|r| r.restrict(small)).collect::<Result<_>>()?;
        let presentation = GradedPresentation::new(
            p.names().to_vec(),
            p.group().clone(),
            p.degrees().to_vec(),
            small.clone(),
            relations,
        )?;
        Ok(PullbackResult { presentation, ..m })
    }
}

fn theta(tower: &Tower, mask: usize) -> TowerElement {
    let mut c = vec![BigRational::zero(); tower.dim()];
    c[mask] = BigRational::one();
    TowerElement::from_coeffs(tower, c).expect("basis element")
}

/// Orbits of the variables, each sorted, ordered by smallest member.
pub fn orbits(elems: &[SemilinearMap], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut o: Vec<usize> = elems.iter().map(|e| e.perm[i]).collect::<BTreeSet<_>>().into_iter().collect();
        o.sort();
        for &j in &o {
            seen[j] = true;
        }
        out.push(o);
    }
    out
}

/// Invariant subring over the fixed field.
///
/// For each orbit with representative `v` and each basis element `θ` of
/// the big field over the fixed field, `(1/|Γ|) Σ_g g(θ⁻¹ v)` is invariant;
/// independent ones become generators. Inverting this change of variables
/// and splitting each substituted relation into its components along the
/// `θ` gives the relations over the fixed field. The grading group is the
/// coinvariant group `M/⟨g·m − m⟩`.
pub fn invariant_ring(p: &GradedPresentation, a: &SemilinearAction, opts: &DescentOptions) -> Result<DescentResult> {
    let rep = check_action(p, a)?;
    if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
        return Err(Error::InvalidAction(format!("{}: {}", c.name, c.detail)));
    }
    let tower = p.tower().clone();
    let elems = a.elements(p)?;
    let order = elems.len();
    // fixed field: the levels no element conjugates
    let flipped = elems.iter().fold(0usize, |acc, e| acc | e.conj_mask);
    let depth = tower.depth();
    let fixed_depth = if flipped == 0 { depth } else { flipped.trailing_zeros() as usize };
    if flipped != ((1 << depth) - 1) & !((1 << fixed_depth) - 1) {
        return Err(Error::Unsupported("the conjugated levels must be the top of the tower".into()));
    }
    if order != 1 << (depth - fixed_depth) {
        return Err(Error::InvalidAction(format!(
            "group of order {order} for a field extension of degree {}",
            1 << (depth - fixed_depth)
        )));
    }
    let small = tower.truncate(fixed_depth);
    let thetas: Vec<usize> = (0..1usize << (depth - fixed_depth)).map(|s| s << fixed_depth).collect();
    let inv_order = TowerElement::from_rational(&tower, BigRational::new(BigInt::one(), BigInt::from(order)));

    let n = p.nvars();
    let orbs = orbits(&elems, n);
    let reps: Vec<usize> = match &opts.representatives {
        Some(r) => {
            if r.len() != orbs.len() || r.iter().zip(&orbs).any(|(v, o)| !o.contains(v)) {
                return Err(Error::InvalidAction("one representative per orbit, in orbit order".into()));
            }
            r.clone()
        }
        None => orbs.iter().map(|o| o[0]).collect(),
    };

    let mut images: Vec<Polynomial> = Vec::new();
    let mut derived_names = Vec::new();
    let mut orbit_of_new = Vec::new();
    for (oi, (o, &v)) in orbs.iter().zip(&reps).enumerate() {
        let mut ech = Echelon::new(&tower);
        let mut count = 0;
        for &t in &thetas {
            let th = theta(&tower, t);
            let start = Polynomial::monomial(unit(n, v), th.inv()?);
            let mut u = Polynomial::zero(n, &tower);
            for g in &elems {
                u = &u + &g.apply(&start);
            }
            let u = u.scale(&inv_order);
            let vec: SparseVec =
                u.terms().map(|(e, c)| (e.iter().position(|&x| x == 1).expect("linear"), c.clone())).collect();
            if u.is_zero() || ech.insert(vec).is_none() {
                continue;
            }
            count += 1;
            derived_names.push(component_name(&p.names()[v], t >> fixed_depth, depth - fixed_depth, o.len(), &u, v));
            images.push(u);
            orbit_of_new.push(oi);
        }
        if count != o.len() {
            return Err(Error::InvalidAction(format!(
                "orbit of {} gives {count} invariants for {} variables",
                p.names()[v],
                o.len()
            )));
        }
    }
    // all orbits have as many invariants as members, so the change of
    // variables is square; invert it orbit by orbit
    let mut substitution = vec![Polynomial::zero(images.len(), &tower); n];
    for (oi, o) in orbs.iter().enumerate() {
        let news: Vec<usize> = (0..images.len()).filter(|&k| orbit_of_new[k] == oi).collect();
        let c: Vec<Vec<TowerElement>> = news
            .iter()
            .map(|&k| {
                o.iter()
                    .map(|&v| images[k].coeff(&unit(n, v)).cloned().unwrap_or_else(|| TowerElement::zero(&tower)))
                    .collect()
            })
            .collect();
        let cinv = invert(&c, &tower).ok_or_else(|| Error::InvalidAction("singular change of variables".into()))?;
        for (a_idx, &v) in o.iter().enumerate() {
            let mut f = Polynomial::zero(images.len(), &tower);
            for (b_idx, &k) in news.iter().enumerate() {
                f = &f + &Polynomial::monomial(unit(images.len(), k), cinv[a_idx][b_idx].clone());
            }
            substitution[v] = f;
        }
    }

    // relations: components along the θ of each substituted relation
    let mut relations: Vec<Polynomial> = Vec::new();
    for r in p.relations() {
        let s = r.substitute(&substitution)?;
        for &t in &thetas {
            let comp = component(&s, t, fixed_depth, &small);
            if comp.is_zero() || relations.iter().any(|q| q.is_scalar_multiple_of(&comp)) {
                continue;
            }
            relations.push(comp);
        }
    }

    // grading by coinvariants
    let maps = a.generator_maps(p)?;
    let mut moved = Vec::new();
    for m in &maps {
        for j in 0..p.group().ngens() {
            let e = p.group().generator(j);
            moved.push(m.grading.apply(&e)?.sub(&e)?);
        }
    }
    let (mc, proj) = quotient(p.group(), &moved)?;
    let degrees: Vec<GroupElement> =
        orbit_of_new.iter().map(|&oi| proj.apply(&p.degrees()[reps[oi]])).collect::<Result<_>>()?;
    let names = match &opts.names {
        Some(nm) if nm.len() == images.len() => nm.clone(),
        Some(nm) => {
            return Err(Error::Dimension(format!("{} names for {} generators", nm.len(), images.len())));
        }
        None => derived_names,
    };
    let presentation = GradedPresentation::new(names, mc, degrees, small, relations)?;
    let source = p.regrade(&proj)?;
    Ok(DescentResult { presentation, source, generator_images: images, substitution, coinvariants: proj, fixed_depth })
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn component_name(v: &str, t: usize, levels: usize, orbit: usize, u: &Polynomial, idx: usize) -> String {
    if orbit == 1 && t == 0 && u.len() == 1 && u.coeff(&unit(u.nvars(), idx)).is_some_and(|c| c.is_one()) {
        return v.into();
    }
    match levels {
        1 => format!("{v}_{}", if t == 0 { "re" } else { "im" }),
        _ => format!("{v}_c{t}"),
    }
}

/// The coefficient of `θ_t` in `f`, as a polynomial over the fixed field.
fn component(f: &Polynomial, t: usize, fixed_depth: usize, small: &Tower) -> Polynomial {
    let low = 1usize << fixed_depth;
    Polynomial::from_terms(
        f.nvars(),
        small,
        f.terms().map(|(e, c)| {
            let coeffs: Vec<BigRational> = (0..low).map(|i| c.coeffs()[t | i].clone()).collect();
            (e.clone(), TowerElement::from_coeffs(small, coeffs).expect("fixed-field element"))
        }),
    )
}

/// Values of `σ_g` on the generators of the grading group, one row per
/// action generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub values: Vec<Vec<TowerElement>>,
}

fn eval_character(values: &[TowerElement], m: &GroupElement, tower: &Tower) -> Result<TowerElement> {
    let mut acc = TowerElement::one(tower);
    for (v, k) in values.iter().zip(m.coords()) {
        if k.is_zero() || v.is_one() {
            continue;
        }
        let k: i64 = k.try_into().map_err(|_| Error::Overflow("character exponent"))?;
        acc = &acc * &v.pow(k)?;
    }
    Ok(acc)
}

/// `(g·χ)(m) = ḡ(χ(A_g⁻¹ m))` on the grading-group generators.
fn act_on_character(
    g: &SemilinearMap,
    order: u32,
    values: &[TowerElement],
    tower: &Tower,
) -> Result<Vec<TowerElement>> {
    let mut ainv = GroupHom::identity(g.grading.domain());
    for _ in 1..order {
        ainv = ainv.compose(&g.grading)?;
    }
    let grp = g.grading.domain();
    (0..grp.ngens())
        .map(|j| Ok(eval_character(values, &ainv.apply(&grp.generator(j))?, tower)?.conjugate_mask(g.conj_mask)))
        .collect()
}

fn mul_chars(a: &[TowerElement], b: &[TowerElement]) -> Vec<TowerElement> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

impl Cocycle {
    pub fn trivial(p: &GradedPresentation, a: &SemilinearAction) -> Self {
        Cocycle { values: vec![vec![TowerElement::one(p.tower()); p.group().ngens()]; a.generators.len()] }
    }

    /// `σ_g(m)`.
    pub fn eval(&self, gen: usize, m: &GroupElement) -> Result<TowerElement> {
        let t = self.values[gen][0].tower().clone();
        eval_character(&self.values[gen], m, &t)
    }

    /// Checks `Π_k g^k(σ_g) = 1` for every generator and
    /// `σ_g · g(σ_h) = σ_h · h(σ_g)` for every pair.
    pub fn check(&self, p: &GradedPresentation, a: &SemilinearAction) -> Result<Option<String>> {
        let maps = a.generator_maps(p)?;
        let t = p.tower();
        if self.values.len() != maps.len() || self.values.iter().any(|v| v.len() != p.group().ngens()) {
            return Ok(Some("cocycle table has the wrong shape".into()));
        }
        for v in &self.values {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    return Ok(Some(format!("value on generator {j} is zero")));
                }
                if let Some(ord) = p.group().generator_order(j) {
                    let o: i64 = ord.try_into().map_err(|_| Error::Overflow("torsion order"))?;
                    if !x.pow(o)?.is_one() {
                        return Ok(Some(format!("value on torsion generator {j} has the wrong order")));
                    }
                }
            }
        }
        let orders: Vec<u32> = a.generators.iter().map(|g| g.order).collect();
        for (k, m) in maps.iter().enumerate() {
            let mut acc = vec![TowerElement::one(t); p.group().ngens()];
            let mut cur = self.values[k].clone();
            for _ in 0..orders[k] {
                acc = mul_chars(&acc, &cur);
                cur = act_on_character(m, orders[k], &cur, t)?;
            }
            if acc.iter().any(|x| !x.is_one()) {
                return Ok(Some(format!("norm condition fails for {}", a.generators[k].name)));
            }
        }
        for i in 0..maps.len() {
            for j in i + 1..maps.len() {
                let lhs = mul_chars(&self.values[i], &act_on_character(&maps[i], orders[i], &self.values[j], t)?);
                let rhs = mul_chars(&self.values[j], &act_on_character(&maps[j], orders[j], &self.values[i], t)?);
                if lhs != rhs {
                    return Ok(Some(format!(
                        "{} and {} violate the cocycle condition",
                        a.generators[i].name, a.generators[j].name
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Values given on the generators of a free group `Λ` presenting the
    /// grading group through `proj: Λ → M`; they must be trivial on the
    /// kernel.
    pub fn from_divisor_values(proj: &GroupHom, values: Vec<Vec<TowerElement>>, tower: &Tower) -> Result<Self> {
        DivisorPresentation::new(proj)?.cocycle(values, tower)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Cocycle {
            values: self
                .values
                .iter()
                .map(|r| r.iter().map(|x| x.inv()).collect::<Result<_>>())
                .collect::<Result<_>>()?,
        })
    }
}

/// A presentation `Λ → M` prepared for turning values on `Λ` into
/// cocycle tables: kernel generators and a preimage of each generator of `M`.
#[derive(Clone, Debug)]
pub struct DivisorPresentation {
    lambda: AbelianGroup,
    kernel: Vec<GroupElement>,
    preimages: Vec<GroupElement>,
}

impl DivisorPresentation {
    pub fn new(proj: &GroupHom) -> Result<Self> {
        let lambda = proj.domain().clone();
        let (k, inc) = hom_kernel(proj)?;
        let kernel = (0..k.ngens()).map(|j| inc.apply(&k.generator(j))).collect::<Result<_>>()?;
        let gens = proj.generator_images();
        let m = proj.codomain();
        let mut preimages = Vec::new();
        for j in 0..m.ngens() {
            let c = subgroup_membership(&gens, &m.generator(j))?
                .ok_or_else(|| Error::InvalidHom("presentation map is not surjective".into()))?;
            preimages.push(lambda.element(c)?);
        }
        Ok(DivisorPresentation { lambda, kernel, preimages })
    }

    pub fn cocycle(&self, values: Vec<Vec<TowerElement>>, tower: &Tower) -> Result<Cocycle> {
        for row in &values {
            if row.len() != self.lambda.ngens() {
                return Err(Error::Dimension("one value per generator of the presenting group".into()));
            }
            for k in &self.kernel {
                if !eval_character(row, k, tower)?.is_one() {
                    return Err(Error::Cocycle(format!("values are not trivial on the kernel element {k}")));
                }
            }
        }
        let values = values
            .iter()
            .map(|row| self.preimages.iter().map(|c| eval_character(row, c, tower)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(Cocycle { values })
    }
}

/// Multiplies the scalar of `g` on `x_i` by `σ_g(deg x_{π(i)})`.
pub fn twist_action(p: &GradedPresentation, a: &SemilinearAction, sigma: &Cocycle) -> Result<SemilinearAction> {
    if let Some(why) = sigma.check(p, a)? {
        return Err(Error::Cocycle(why));
    }
    let mut gens = a.generators.clone();
    for (k, g) in gens.iter_mut().enumerate() {
        for i in 0..g.perm.len() {
            let f = sigma.eval(k, &p.degrees()[g.perm[i]])?;
            g.scalars[i] = &g.scalars[i] * &f;
        }
    }
    Ok(SemilinearAction::new(gens))
}

/// The divisor classes used by [`cocycle_from_n`]: indices of
/// `L⁺_0..L⁺_4` and `L⁻_0..L⁻_4` among the generators of `Λ`.
#[derive(Clone, Debug)]
pub struct ConicBundleLines {
    pub plus: [usize; 5],
    pub minus: [usize; 5],
}

/// A cocycle with `σ([L⁺_j − L⁺_i]) = n_i/n_j`, built from a
/// representation `n_1 n_2 n_3 n_4 = α² + β²`; absent if there is none.
pub fn cocycle_from_n(
    n: &[BigRational; 4],
    proj: &GroupHom,
    lines: &ConicBundleLines,
    tower: &Tower,
) -> Result<Option<(Cocycle, BigRational, BigRational)>> {
    cocycle_from_n_with(n, &DivisorPresentation::new(proj)?, lines, tower)
}

/// [`cocycle_from_n`] with the presentation prepared once.
pub fn cocycle_from_n_with(
    n: &[BigRational; 4],
    pres: &DivisorPresentation,
    lines: &ConicBundleLines,
    tower: &Tower,
) -> Result<Option<(Cocycle, BigRational, BigRational)>> {
    if n.iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroInput);
    }
    if tower.depth() < 1
        || !TowerElement::root(tower, 1)?.pow(2)?.as_rational().is_some_and(|q| *q == -BigRational::one())
    {
        return Err(Error::Field("the first level must adjoin a square root of -1".into()));
    }
    let prod: BigRational = n.iter().cloned().product();
    let Some((alpha, beta)) = sum_of_two_squares(&prod) else { return Ok(None) };
    let i = TowerElement::root(tower, 1)?;
    let q = |x: &BigRational| TowerElement::from_rational(tower, x.clone());
    let mut row = vec![TowerElement::one(tower); pres.lambda.ngens()];
    row[lines.plus[0]] = &q(&alpha) + &(&i * &q(&beta));
    row[lines.minus[0]] = (&q(&alpha) - &(&i * &q(&beta))).inv()?;
    for j in 1..5 {
        row[lines.plus[j]] = q(&n[j - 1]).inv()?;
        row[lines.minus[j]] = q(&n[j - 1]);
    }
    Ok(Some((pres.cocycle(vec![row], tower)?, alpha, beta)))
}

/// `n_{i,j} = σ([L⁺_j − L⁺_i])` for `1 ≤ i, j ≤ 4`.
pub fn n_table(c: &Cocycle, proj: &GroupHom, lines: &ConicBundleLines) -> Result<Vec<Vec<TowerElement>>> {
    let lambda = proj.domain();
    let mut out = Vec::new();
    for i in 1..5 {
        let mut row = Vec::new();
        for j in 1..5 {
            let d = lambda.generator(lines.plus[j]).sub(&lambda.generator(lines.plus[i]))?;
            row.push(c.eval(0, &proj.apply(&d)?)?);
        }
        out.push(row);
    }
    Ok(out)
}
