//! The TOML document format and its resolution into core objects.

use std::collections::BTreeMap;
use std::fmt;

use coxring_core::abgroup::{quotient, AbelianGroup, GroupElement, GroupHom};
use coxring_core::galois::{ActionGenerator, Cocycle, ConicBundleLines, DivisorPresentation, SemilinearAction};
use coxring_core::matrix::IntMatrix;
use coxring_core::numfield::{FieldTower, Tower, TowerElement};
use coxring_core::polyalg::{GradedPresentation, Polynomial};
use coxring_core::torsor::ParamScheme;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::grammar::{parse_monomial, parse_polynomial, parse_scalar};

pub const FORMAT_VERSION: u32 = 1;

fn version() -> u32 {
    FORMAT_VERSION
}

fn is_default<T: Default + PartialEq>(x: &T) -> bool {
    *x == T::default()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default = "version")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fields: BTreeMap<String, FieldSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homs: BTreeMap<String, HomSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subgroups: BTreeMap<String, SubgroupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rings: BTreeMap<String, RingSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, ActionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cocycles: BTreeMap<String, CocycleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, BundleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_schemes: BTreeMap<String, SchemeSpec>,
}

/// A tower of quadratic extensions; each root squares to an expression in
/// the roots before it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub roots: Vec<RootSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSpec {
    pub name: String,
    pub square: String,
}

/// Either `Z^free_rank ⊕ ⊕ Z/t`, or the quotient of another group by the
/// listed elements. Elements of a quotient are written in the coordinates
/// of the group it is a quotient of.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "is_default")]
    pub free_rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_of: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub domain: String,
    pub codomain: String,
    /// Image of each domain generator, row by row.
    pub images: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub group: String,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub group: String,
    /// Generators, one per row.
    pub generators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub generators: Vec<String>,
    pub degrees: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub ring: String,
    pub generators: Vec<ActionGeneratorSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionGeneratorSpec {
    pub name: String,
    pub order: u32,
    /// The variable each generator is sent to, in ring order.
    pub images: Vec<String>,
    /// Field roots sent to their negatives.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conjugate: Vec<String>,
    /// Scalar in front of each image; all one if absent.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scalars: Vec<String>,
}

/// Values of `σ_g` for each action generator `g`, on the generators of the
/// ring's grading group (or of the group it is a quotient of).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub action: String,
    pub values: Vec<Vec<String>>,
}

/// Conic bundle lines: indices of `L⁺_0..L⁺_4` and `L⁻_0..L⁻_4` among the
/// generators of the group the ring's grading group is a quotient of.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub action: String,
    pub plus: [usize; 5],
    pub minus: [usize; 5],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub ring: String,
    /// Pairs `[variable, monomial]` meaning `gcd(variable, monomial) = 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coprimality: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irrelevant: Vec<String>,
    pub projection: Vec<String>,
    pub coordinates: Vec<String>,
    pub equations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocError {
    Syntax { line: usize, column: usize, message: String },
    Reference { at: String, name: String },
    Invalid { at: String, message: String },
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            DocError::Reference { at, name } => write!(f, "{at}: unresolved reference '{name}'"),
            DocError::Invalid { at, message } => write!(f, "{at}: {message}"),
        }
    }
}

impl std::error::Error for DocError {}

fn invalid(at: impl Into<String>, message: impl fmt::Display) -> DocError {
    DocError::Invalid { at: at.into(), message: message.to_string() }
}

/// Parses the text form. Resolution happens in [`Model::build`].
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    toml::from_str(text).map_err(|e: toml::de::Error| {
        let (line, column) = match e.span() {
            Some(span) => {
                let before = &text[..span.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                (line, column)
            }
            None => (0, 0),
        };
        DocError::Syntax { line, column, message: e.message().to_string() }
    })
}

pub fn serialize_document(doc: &Document) -> String {
    toml::to_string(doc).expect("documents serialize")
}

#[derive(Clone, Debug)]
pub struct GroupInfo {
    pub group: AbelianGroup,
    /// The group this one is a quotient of, with the projection.
    pub parent: Option<(String, GroupHom)>,
}

impl GroupInfo {
    /// Width of coordinate vectors written for this group.
    pub fn input_width(&self) -> usize {
        match &self.parent {
            Some((_, p)) => p.domain().ngens(),
            None => self.group.ngens(),
        }
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, String> {
        if coords.len() != self.input_width() {
            return Err(format!("expected {} coordinates, got {}", self.input_width(), coords.len()));
        }
        match &self.parent {
            Some((_, p)) => {
                let x = p.domain().element_i64(coords).map_err(|e| e.to_string())?;
                p.apply(&x).map_err(|e| e.to_string())
            }
            None => self.group.element_i64(coords).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingInfo {
    pub presentation: GradedPresentation,
    pub group: String,
}

#[derive(Clone, Debug)]
pub struct ActionInfo {
    pub ring: String,
    pub action: SemilinearAction,
}

#[derive(Clone, Debug)]
pub struct CocycleInfo {
    pub action: String,
    pub cocycle: Cocycle,
}

#[derive(Clone, Debug)]
pub struct BundleInfo {
    pub action: String,
    pub lines: ConicBundleLines,
}

/// A document with every reference resolved.
#[derive(Clone, Debug, Default)]
pub struct Model {
    pub fields: BTreeMap<String, Tower>,
    pub groups: BTreeMap<String, GroupInfo>,
    pub homs: BTreeMap<String, GroupHom>,
    pub elements: BTreeMap<String, GroupElement>,
    pub subgroups: BTreeMap<String, (String, Vec<GroupElement>)>,
    pub rings: BTreeMap<String, RingInfo>,
    pub actions: BTreeMap<String, ActionInfo>,
    pub cocycles: BTreeMap<String, CocycleInfo>,
    pub bundles: BTreeMap<String, BundleInfo>,
    pub schemes: BTreeMap<String, ParamScheme>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, at: &str, name: &str) -> Result<&'a T, DocError> {
    map.get(name).ok_or_else(|| DocError::Reference { at: at.into(), name: name.into() })
}

impl Model {
    pub fn build(doc: &Document) -> Result<Model, DocError> {
        if doc.version != FORMAT_VERSION {
            return Err(invalid("version", format!("unsupported format version {}", doc.version)));
        }
        let mut m = Model::default();
        m.fields.insert("Q".into(), FieldTower::rationals());
        for (name, f) in &doc.fields {
            let at = format!("fields.{name}");
            let mut levels: Vec<(String, Vec<num_rational::BigRational>)> = Vec::new();
            for (k, r) in f.roots.iter().enumerate() {
                let below = FieldTower::new(levels.clone()).map_err(|e| invalid(&at, e))?;
                let sq = parse_scalar(&r.square, &below).map_err(|e| invalid(format!("{at}.roots[{k}]"), e))?;
                levels.push((r.name.clone(), sq.coeffs().to_vec()));
            }
            let t = FieldTower::new(levels).map_err(|e| invalid(&at, e))?;
            if m.fields.insert(name.clone(), t).is_some() {
                return Err(invalid(at, "the name Q is reserved"));
            }
        }
        m.build_groups(doc)?;
        for (name, h) in &doc.homs {
            let at = format!("homs.{name}");
            let dom = lookup(&m.groups, &at, &h.domain)?;
            let cod = lookup(&m.groups, &at, &h.codomain)?;
            if h.images.len() != dom.group.ngens() {
                return Err(invalid(at, format!("{} images for {} generators", h.images.len(), dom.group.ngens())));
            }
            let imgs: Vec<GroupElement> =
                h.images.iter().map(|v| cod.element(v)).collect::<Result<_, _>>().map_err(|e| invalid(&at, e))?;
            let cols: Vec<Vec<BigInt>> = imgs.iter().map(|e| e.coords().to_vec()).collect();
            let mat = IntMatrix::from_columns(cod.group.ngens(), &cols);
            let hom = GroupHom::new(dom.group.clone(), cod.group.clone(), mat).map_err(|e| invalid(&at, e))?;
            m.homs.insert(name.clone(), hom);
        }
        for (name, e) in &doc.elements {
            let at = format!("elements.{name}");
            let g = lookup(&m.groups, &at, &e.group)?;
            m.elements.insert(name.clone(), g.element(&e.coords).map_err(|x| invalid(at, x))?);
        }
        for (name, s) in &doc.subgroups {
            let at = format!("subgroups.{name}");
            let g = lookup(&m.groups, &at, &s.group)?;
            let gens =
                s.generators.iter().map(|v| g.element(v)).collect::<Result<_, _>>().map_err(|x| invalid(&at, x))?;
            m.subgroups.insert(name.clone(), (s.group.clone(), gens));
        }
        for (name, r) in &doc.rings {
            let info = m.build_ring(name, r)?;
            m.rings.insert(name.clone(), info);
        }
        for (name, a) in &doc.actions {
            let info = m.build_action(name, a)?;
            m.actions.insert(name.clone(), info);
        }
        for (name, c) in &doc.cocycles {
            let at = format!("cocycles.{name}");
            let act = lookup(&m.actions, &at, &c.action)?;
            let ring = &m.rings[&act.ring];
            let t = ring.presentation.tower();
            let values: Vec<Vec<TowerElement>> = c
                .values
                .iter()
                .map(|row| row.iter().map(|s| parse_scalar(s, t)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()
                .map_err(|e| invalid(&at, e))?;
            if values.len() != act.action.generators.len() {
                return Err(invalid(at, "one row of values per action generator"));
            }
            let cocycle = match &m.groups[&ring.group].parent {
                Some((_, p)) => {
                    DivisorPresentation::new(p).and_then(|d| d.cocycle(values, t)).map_err(|e| invalid(&at, e))?
                }
                None => {
                    if values.iter().any(|r| r.len() != ring.presentation.group().ngens()) {
                        return Err(invalid(at, "one value per generator of the grading group"));
                    }
                    Cocycle { values }
                }
            };
            m.cocycles.insert(name.clone(), CocycleInfo { action: c.action.clone(), cocycle });
        }
        for (name, b) in &doc.bundles {
            let at = format!("bundles.{name}");
            let act = lookup(&m.actions, &at, &b.action)?;
            let g = &m.groups[&m.rings[&act.ring].group];
            let Some((_, p)) = &g.parent else {
                return Err(invalid(at, "the grading group must be given as a quotient"));
            };
            let n = p.domain().ngens();
            if b.plus.iter().chain(&b.minus).any(|&i| i >= n) {
                return Err(invalid(at, "line index out of range"));
            }
            let lines = ConicBundleLines { plus: b.plus, minus: b.minus };
            m.bundles.insert(name.clone(), BundleInfo { action: b.action.clone(), lines });
        }
        for (name, s) in &doc.param_schemes {
            let ps = m.build_scheme(name, s)?;
            m.schemes.insert(name.clone(), ps);
        }
        Ok(m)
    }

    fn build_groups(&mut self, doc: &Document) -> Result<(), DocError> {
        // quotients may refer to groups defined later in the map
        let mut pending: Vec<&String> = doc.groups.keys().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for name in pending {
                let g = &doc.groups[name];
                let at = format!("groups.{name}");
                match &g.quotient_of {
                    None => {
                        if !g.relations.is_empty() {
                            return Err(invalid(at, "relations need quotient_of"));
                        }
                        let torsion = g.torsion.iter().map(|&t| BigInt::from(t)).collect();
                        let group = AbelianGroup::new(g.free_rank, torsion).map_err(|e| invalid(&at, e))?;
                        self.groups.insert(name.clone(), GroupInfo { group, parent: None });
                    }
                    Some(p) => {
                        if g.free_rank != 0 || !g.torsion.is_empty() {
                            return Err(invalid(at, "a quotient takes its shape from the relations"));
                        }
                        if !doc.groups.contains_key(p) {
                            return Err(DocError::Reference { at, name: p.clone() });
                        }
                        let Some(parent) = self.groups.get(p) else {
                            rest.push(name);
                            continue;
                        };
                        if parent.parent.is_some() {
                            return Err(invalid(at, "quotients of quotients are not supported"));
                        }
                        let rels = g
                            .relations
                            .iter()
                            .map(|v| parent.group.element_i64(v))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| invalid(&at, e))?;
                        let (q, proj) = quotient(&parent.group, &rels).map_err(|e| invalid(&at, e))?;
                        self.groups.insert(name.clone(), GroupInfo { group: q, parent: Some((p.clone(), proj)) });
                    }
                }
            }
            if rest.len() == before {
                return Err(invalid(format!("groups.{}", rest[0]), "cyclic quotient definitions"));
            }
            pending = rest;
        }
        Ok(())
    }

    fn build_ring(&self, name: &str, r: &RingSpec) -> Result<RingInfo, DocError> {
        let at = format!("rings.{name}");
        let g = lookup(&self.groups, &at, &r.group)?;
        let field = r.field.as_deref().unwrap_or("Q");
        let t = lookup(&self.fields, &at, field)?;
        if r.degrees.len() != r.generators.len() {
            return Err(invalid(at, format!("{} degrees for {} generators", r.degrees.len(), r.generators.len())));
        }
        let degrees: Vec<GroupElement> = r
            .degrees
            .iter()
            .enumerate()
            .map(|(k, v)| g.element(v).map_err(|e| invalid(format!("{at}.degrees[{k}]"), e)))
            .collect::<Result<_, _>>()?;
        let rels: Vec<Polynomial> = r
            .relations
            .iter()
            .enumerate()
            .map(|(k, s)| parse_polynomial(s, &r.generators, t).map_err(|e| invalid(format!("{at}.relations[{k}]"), e)))
            .collect::<Result<_, _>>()?;
        let p = GradedPresentation::new(r.generators.clone(), g.group.clone(), degrees, t.clone(), rels)
            .map_err(|e| invalid(at, e))?;
        Ok(RingInfo { presentation: p, group: r.group.clone() })
    }

    fn build_action(&self, name: &str, a: &ActionSpec) -> Result<ActionInfo, DocError> {
        let at = format!("actions.{name}");
        let ring = lookup(&self.rings, &at, &a.ring)?;
        let p = &ring.presentation;
        let t = p.tower();
        let mut gens = Vec::new();
        for (k, g) in a.generators.iter().enumerate() {
            let at = format!("{at}.generators[{k}]");
            if g.images.len() != p.nvars() {
                return Err(invalid(at, "one image per ring generator"));
            }
            let perm: Vec<usize> = g
                .images
                .iter()
                .map(|v| p.var_index(v).ok_or_else(|| DocError::Reference { at: at.clone(), name: v.clone() }))
                .collect::<Result<_, _>>()?;
            let mut mask = 0usize;
            for r in &g.conjugate {
                let l = t.root_index(r).ok_or_else(|| DocError::Reference { at: at.clone(), name: r.clone() })?;
                mask |= 1 << l;
            }
            let mut ag = ActionGenerator::permutation(&g.name, g.order, perm, mask, t);
            if !g.scalars.is_empty() {
                if g.scalars.len() != p.nvars() {
                    return Err(invalid(at, "one scalar per ring generator"));
                }
                ag.scalars = g
                    .scalars
                    .iter()
                    .map(|s| parse_scalar(s, t))
                    .collect::<Result<_, _>>()
                    .map_err(|e| invalid(&at, e))?;
            }
            gens.push(ag);
        }
        Ok(ActionInfo { ring: a.ring.clone(), action: SemilinearAction::new(gens) })
    }

    fn build_scheme(&self, name: &str, s: &SchemeSpec) -> Result<ParamScheme, DocError> {
        let at = format!("param_schemes.{name}");
        let ring = lookup(&self.rings, &at, &s.ring)?;
        let p = &ring.presentation;
        let t = p.tower();
        let mono =
            |x: &str, what: &str| parse_monomial(x, p.names(), t).map_err(|e| invalid(format!("{at}.{what}"), e));
        let mut coprimality = Vec::new();
        for [v, m] in &s.coprimality {
            let i = p.var_index(v).ok_or_else(|| DocError::Reference { at: at.clone(), name: v.clone() })?;
            coprimality.push((i, mono(m, "coprimality")?));
        }
        let irrelevant = s.irrelevant.iter().map(|x| mono(x, "irrelevant")).collect::<Result<_, _>>()?;
        let projection = s.projection.iter().map(|x| mono(x, "projection")).collect::<Result<_, _>>()?;
        let equations = s
            .equations
            .iter()
            .enumerate()
            .map(|(k, e)| {
                parse_polynomial(e, &s.coordinates, t).map_err(|x| invalid(format!("{at}.equations[{k}]"), x))
            })
            .collect::<Result<_, _>>()?;
        ParamScheme::new(p.clone(), coprimality, irrelevant, projection, equations, s.coordinates.clone())
            .map_err(|e| invalid(at, e))
    }

    /// The projection onto a ring's grading group from the group it is a
    /// quotient of, if it is one.
    pub fn ring_projection(&self, ring: &str) -> Option<&GroupHom> {
        let r = self.rings.get(ring)?;
        self.groups.get(&r.group)?.parent.as_ref().map(|(_, p)| p)
    }
}
