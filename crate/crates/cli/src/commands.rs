//! Command dispatch and reports.

use std::fmt;

use clap::{Parser, Subcommand};
use coxring_core::abgroup::{hom_kernel, GroupElement};
use coxring_core::galois::{
    check_action, cocycle_from_n, induced_action, invariant_ring, n_table, twist_action, ActionReport, Cocycle,
    DescentOptions, DescentResult, SemilinearAction,
};
use coxring_core::lattice::{fiber_points, hilbert_basis, FiberMonoid, DEFAULT_DEGREE_CAP};
use coxring_core::matrix::smith_normal_form;
use coxring_core::numfield::{sum_of_two_squares, TowerElement};
use coxring_core::polyalg::GradedPresentation;
use coxring_core::torsor::{
    coverage, generated_in_degree, irrelevant_ideal, param_enumerate, param_project_and_verify,
};
use coxring_core::veronese::{
    coordinates_in, minimize_generators, pullback_general, veronese_subalgebra, PullbackOptions, PullbackResult,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::document::{parse_document, DocError, Model};
use crate::fixtures;
use crate::grammar::parse_scalar;

#[derive(Parser, Debug)]
#[command(
    name = "coxring",
    version,
    about = "Graded presentations of Cox rings: Veronese pullbacks, Galois descent, torsor checks"
)]
pub struct Cli {
    /// Bundled document: dp4, chatelet or p1xp1.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Document file.
    #[arg(long, global = true)]
    pub file: Option<std::path::PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith normal form of a homomorphism matrix.
    Snf {
        #[arg(long)]
        hom: String,
    },
    /// Kernel of a homomorphism.
    Kernel {
        #[arg(long)]
        hom: String,
    },
    /// Monomials of one degree.
    Fiber {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: String,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Hilbert basis of the monomials with degree in a subgroup.
    Hilbert {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
    },
    /// Veronese subalgebra over a subgroup of degrees.
    Veronese {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
    },
    /// Pullback of the grading along a homomorphism.
    Pullback {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        hom: String,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
    },
    /// Veronese subalgebra or pullback with redundant generators removed.
    Minimize {
        #[arg(long)]
        ring: String,
        #[arg(long, conflicts_with = "hom")]
        subgroup: Option<String>,
        #[arg(long)]
        hom: Option<String>,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u64,
    },
    /// Checks the axioms of a semilinear action.
    CheckAction {
        #[arg(long)]
        action: String,
    },
    /// Invariant ring over the fixed field.
    Descend {
        #[arg(long)]
        action: String,
        /// Pass to this Veronese subalgebra first.
        #[arg(long)]
        subgroup: Option<String>,
        /// Remove redundant generators afterwards.
        #[arg(long)]
        minimize: bool,
        /// Orbit representatives, comma separated.
        #[arg(long)]
        representatives: Option<String>,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Descent along an action twisted by a cocycle.
    Twist {
        #[arg(long)]
        action: String,
        #[arg(long, conflicts_with_all = ["bundle", "n"])]
        cocycle: Option<String>,
        /// Conic bundle used with --n.
        #[arg(long, requires = "n")]
        bundle: Option<String>,
        /// n1,n2,n3,n4.
        #[arg(long, requires = "bundle")]
        n: Option<String>,
        #[arg(long)]
        representatives: Option<String>,
    },
    /// Cocycle with n_{i,j} = n_i/n_j on a conic bundle, if one exists.
    CocycleFromN {
        #[arg(long)]
        bundle: String,
        #[arg(num_args = 4, allow_hyphen_values = true)]
        n: Vec<String>,
    },
    /// Writes a nonnegative rational as a sum of two squares.
    TwoSquares {
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Generators of the radical of the ideal of a graded piece.
    Irrelevant {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: String,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Checks surjectivity of R_km ⊗ R_m → R_(k+1)m.
    GeneratedInDegree {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: String,
        #[arg(long, default_value_t = 2)]
        steps: u32,
    },
    /// Degrees of the relations; with a subgroup, recomputes the Veronese
    /// subalgebra and checks its relations in the ambient ring.
    CheckRelations {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Enumerates torsor points and verifies their images.
    ParamCheck {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 3)]
        height: u32,
        /// Also check that surface points up to this height are reached.
        #[arg(long)]
        coverage: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_height: u32,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Document(DocError),
    Compute(coxring_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Document(e) => write!(f, "document: {e}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<coxring_core::Error> for CliError {
    fn from(e: coxring_core::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Document(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(coxring_core::Error::BoundExceeded { .. }) => 2,
            _ => 1,
        }
    }
}

/// Output of a command: text lines, a JSON record, and whether every check
/// passed.
#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub passed: bool,
}

impl Report {
    fn new(lines: Vec<String>, json: Value) -> Self {
        Report { lines, json, passed: true }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json");
            s.push('\n');
            s
        } else {
            let mut s = self.lines.join("\n");
            s.push('\n');
            s
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

type Res<T> = Result<T, CliError>;

fn load(cli: &Cli) -> Res<Model> {
    let text = match (&cli.fixture, &cli.file) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --fixture or --file".into())),
        (Some(name), None) => fixtures::get(name)
            .ok_or_else(|| {
                CliError::Usage(format!("unknown fixture '{name}' (known: {})", fixtures::NAMES.join(", ")))
            })?
            .to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(CliError::Usage("a document is required: --fixture or --file".into())),
    };
    Ok(Model::build(&parse_document(&text)?)?)
}

fn get<'a, T>(map: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Res<&'a T> {
    map.get(name).ok_or_else(|| CliError::Usage(format!("no {kind} named '{name}'")))
}

fn ring<'a>(m: &'a Model, name: &str) -> Res<&'a GradedPresentation> {
    Ok(&get(&m.rings, "ring", name)?.presentation)
}

/// A named element, or comma-separated coordinates in the ring's group.
fn degree(m: &Model, ring_name: &str, spec: &str) -> Res<GroupElement> {
    if let Some(e) = m.elements.get(spec) {
        return Ok(e.clone());
    }
    let coords: Vec<i64> = spec
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("'{spec}' is neither an element name nor a coordinate list")))?;
    let g = &m.groups[&m.rings[ring_name].group];
    g.element(&coords).map_err(CliError::Usage)
}

fn subgroup<'a>(m: &'a Model, ring_name: &str, name: &str) -> Res<&'a Vec<GroupElement>> {
    let (g, gens) = get(&m.subgroups, "subgroup", name)?;
    if *g != m.rings[ring_name].group {
        return Err(CliError::Usage(format!(
            "subgroup '{name}' lives in {g}, not in the grading group of {ring_name}"
        )));
    }
    Ok(gens)
}

fn mono_str(names: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn coords_json(e: &GroupElement) -> Value {
    json!(e.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn presentation_report(
    title: &str,
    p: &GradedPresentation,
    images: Option<(&[coxring_core::polyalg::Polynomial], &[String])>,
) -> Report {
    let mut lines = vec![
        format!("{title}"),
        format!("field: {}", field_name(p)),
        format!("grading group: {}", p.group()),
        format!("generators: {}", p.nvars()),
    ];
    let mut gens = Vec::new();
    for (k, (n, d)) in p.names().iter().zip(p.degrees()).enumerate() {
        let image = images.map(|(im, names)| im[k].display(names).to_string());
        match &image {
            Some(s) => lines.push(format!("  {n}  degree {d}  image {s}")),
            None => lines.push(format!("  {n}  degree {d}")),
        }
        gens.push(json!({"name": n, "degree": coords_json(d), "image": image}));
    }
    lines.push(format!("relations: {}", p.relations().len()));
    let rels: Vec<String> = p.relations().iter().map(|r| r.display(p.names()).to_string()).collect();
    lines.extend(rels.iter().map(|r| format!("  {r}")));
    let json = json!({
        "field": field_name(p),
        "group": p.group().to_string(),
        "generators": gens,
        "relations": rels,
    });
    Report::new(lines, json)
}

fn field_name(p: &GradedPresentation) -> String {
    let t = p.tower();
    if t.depth() == 0 {
        return "Q".into();
    }
    let roots: Vec<String> = t.levels().iter().map(|l| l.name.clone()).collect();
    format!("Q({})", roots.join(", "))
}

fn pullback_report(title: &str, pr: &PullbackResult, basis: Option<&[GroupElement]>) -> Res<Report> {
    let mut rep = presentation_report(title, &pr.presentation, Some((&pr.generator_images, pr.ambient.names())));
    rep.lines.push(format!("relation degree bound: {}", pr.degree_bound_used));
    rep.json["degree_bound"] = json!(pr.degree_bound_used);
    if let Some(h) = basis {
        let ambient: Vec<GroupElement> =
            pr.presentation.degrees().iter().map(|d| pr.degree_map.apply(d)).collect::<Result<_, _>>()?;
        if let Some(cols) = coordinates_in(h, &ambient)? {
            rep.lines.push("degree matrix in the subgroup generators (one column per generator):".into());
            let mut rows = Vec::new();
            for i in 0..h.len() {
                let row: Vec<String> = cols.iter().map(|c| format!("{:>3}", c[i])).collect();
                rep.lines.push(format!("  {}", row.join(" ")));
                rows.push(cols.iter().map(|c| c[i].to_string()).collect::<Vec<_>>());
            }
            rep.json["degree_matrix"] = json!(rows);
        }
    }
    Ok(rep)
}

fn action_report(r: &ActionReport) -> Report {
    let mut lines = Vec::new();
    let mut checks = Vec::new();
    for c in &r.checks {
        lines.push(format!(
            "{:<22} {}{}",
            c.name,
            if c.passed { "ok" } else { "FAILED" },
            if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) }
        ));
        checks.push(json!({"name": c.name, "passed": c.passed, "detail": c.detail}));
    }
    let mut rep = Report::new(lines, json!({"checks": checks}));
    rep.passed = r.passed();
    rep
}

fn representatives(p: &GradedPresentation, spec: &Option<String>) -> Res<DescentOptions> {
    let representatives = match spec {
        None => None,
        Some(s) => Some(
            s.split(',')
                .map(|v| {
                    p.var_index(v.trim()).ok_or_else(|| CliError::Usage(format!("no generator named '{}'", v.trim())))
                })
                .collect::<Res<Vec<usize>>>()?,
        ),
    };
    Ok(DescentOptions { representatives, names: None })
}

fn descent_report(title: &str, d: &DescentResult) -> Report {
    let mut rep = presentation_report(title, &d.presentation, Some((&d.generator_images, d.source.names())));
    rep.lines.insert(1, format!("source field: {}", field_name(&d.source)));
    rep.json["source_field"] = json!(field_name(&d.source));
    rep
}

fn parse_q(s: &str) -> Res<BigRational> {
    TowerElement::parse_rational(s).ok_or_else(|| CliError::Usage(format!("'{s}' is not a rational number")))
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Res<Report> {
    use Command::*;
    if let TwoSquares { q } = &cli.command {
        return two_squares(&parse_q(q)?);
    }
    let m = load(cli)?;
    match &cli.command {
        Snf { hom } => {
            let h = get(&m.homs, "hom", hom)?;
            let s = smith_normal_form(h.matrix());
            let f: Vec<String> = s.invariant_factors().iter().map(|x| x.to_string()).collect();
            let lines = vec![
                format!("matrix: {} x {}", h.matrix().rows(), h.matrix().cols()),
                format!("rank: {}", s.rank),
                format!("invariant factors: [{}]", f.join(", ")),
            ];
            Ok(Report::new(lines, json!({"rank": s.rank, "invariant_factors": f})))
        }
        Kernel { hom } => {
            let h = get(&m.homs, "hom", hom)?;
            let (k, inc) = hom_kernel(h)?;
            let gens: Vec<GroupElement> =
                (0..k.ngens()).map(|i| inc.apply(&k.generator(i))).collect::<Result<_, _>>()?;
            let mut lines = vec![format!("kernel: {k}")];
            lines.extend(gens.iter().map(|g| format!("  {g}")));
            Ok(Report::new(
                lines,
                json!({"group": k.to_string(), "generators": gens.iter().map(coords_json).collect::<Vec<_>>()}),
            ))
        }
        Fiber { ring: rn, degree: d, cap } => {
            let p = ring(&m, rn)?;
            let d = degree(&m, rn, d)?;
            let pts = fiber_points(p.degree_map(), &d, *cap)?;
            let mut lines = vec![format!("degree {d}: {} monomials", pts.len())];
            lines.extend(pts.iter().map(|e| format!("  {}", mono_str(p.names(), e))));
            let ms: Vec<String> = pts.iter().map(|e| mono_str(p.names(), e)).collect();
            Ok(Report::new(lines, json!({"degree": coords_json(&d), "monomials": ms})))
        }
        Hilbert { ring: rn, subgroup: h, cap } => {
            let p = ring(&m, rn)?;
            let fm = FiberMonoid::new(p.degree_map().clone(), subgroup(&m, rn, h)?.clone())?;
            let b = hilbert_basis(&fm, Some(*cap))?;
            let ms: Vec<String> = b.iter().map(|e| mono_str(p.names(), e)).collect();
            let mut lines = vec![format!("Hilbert basis: {} elements", b.len())];
            lines.extend(ms.iter().map(|s| format!("  {s}")));
            Ok(Report::new(lines, json!({"basis": ms})))
        }
        Veronese { ring: rn, subgroup: h, bound, cap } => {
            let p = ring(&m, rn)?;
            let hs = subgroup(&m, rn, h)?;
            let pr = veronese_subalgebra(p, hs, &PullbackOptions { bound: *bound, cap: *cap, names: None })?;
            pullback_report(&format!("Veronese subalgebra of {rn} over {h}"), &pr, Some(hs))
        }
        Pullback { ring: rn, hom, bound, cap } => {
            let p = ring(&m, rn)?;
            let phi = get(&m.homs, "hom", hom)?;
            let pr = pullback_general(p, phi, &PullbackOptions { bound: *bound, cap: *cap, names: None })?;
            pullback_report(&format!("pullback of {rn} along {hom}"), &pr, None)
        }
        Minimize { ring: rn, subgroup: h, hom, bound, cap } => {
            let p = ring(&m, rn)?;
            let opts = PullbackOptions { bound: *bound, cap: *cap, names: None };
            let (pr, basis) = match (h, hom) {
                (Some(h), None) => {
                    let hs = subgroup(&m, rn, h)?;
                    (veronese_subalgebra(p, hs, &opts)?, Some(hs.as_slice()))
                }
                (None, Some(f)) => (pullback_general(p, get(&m.homs, "hom", f)?, &opts)?, None),
                _ => return Err(CliError::Usage("give --subgroup or --hom".into())),
            };
            let min = minimize_generators(&pr)?;
            let mut rep = pullback_report(&format!("minimized presentation of {rn}"), &min, basis)?;
            rep.lines.insert(1, format!("generators before minimization: {}", pr.presentation.nvars()));
            Ok(rep)
        }
        CheckAction { action } => {
            let a = get(&m.actions, "action", action)?;
            Ok(action_report(&check_action(ring(&m, &a.ring)?, &a.action)?))
        }
        Descend { action, subgroup: h, minimize, representatives: reps, bound } => {
            let a = get(&m.actions, "action", action)?;
            let base = ring(&m, &a.ring)?;
            let check = check_action(base, &a.action)?;
            if !check.passed() {
                return Ok(action_report(&check));
            }
            let (p, act): (GradedPresentation, SemilinearAction) = match h {
                Some(h) => {
                    let pr = veronese_subalgebra(base, subgroup(&m, &a.ring, h)?, &PullbackOptions::default())?;
                    let ia = induced_action(&pr, &a.action)?;
                    (pr.presentation, ia)
                }
                None => (base.clone(), a.action.clone()),
            };
            let d = invariant_ring(&p, &act, &representatives(&p, reps)?)?;
            if *minimize {
                let min = d.minimize(*bound)?;
                let mut rep = pullback_report("minimized invariant ring", &min, None)?;
                rep.lines.insert(1, format!("generators before minimization: {}", d.presentation.nvars()));
                Ok(rep)
            } else {
                Ok(descent_report("invariant ring", &d))
            }
        }
        Twist { action, cocycle, bundle, n, representatives: reps } => {
            let a = get(&m.actions, "action", action)?;
            let p = ring(&m, &a.ring)?;
            let sigma: Cocycle = match (cocycle, bundle, n) {
                (Some(c), None, None) => {
                    let c = get(&m.cocycles, "cocycle", c)?;
                    if c.action != *action {
                        return Err(CliError::Usage(format!("cocycle belongs to action '{}'", c.action)));
                    }
                    c.cocycle.clone()
                }
                (None, Some(b), Some(n)) => {
                    let ns: Vec<BigRational> = n.split(',').map(|s| parse_q(s.trim())).collect::<Res<_>>()?;
                    let ns: [BigRational; 4] =
                        ns.try_into().map_err(|_| CliError::Usage("--n takes four comma-separated values".into()))?;
                    let bi = get(&m.bundles, "bundle", b)?;
                    let proj = m.ring_projection(&a.ring).expect("bundle rings have a projection");
                    match cocycle_from_n(&ns, proj, &bi.lines, p.tower())? {
                        Some((c, _, _)) => c,
                        None => {
                            let mut rep = Report::new(
                                vec!["no cocycle: the product is not a sum of two squares".into()],
                                json!({"cocycle": null}),
                            );
                            rep.passed = false;
                            return Ok(rep);
                        }
                    }
                }
                _ => return Err(CliError::Usage("give --cocycle, or --bundle with --n".into())),
            };
            let tw = twist_action(p, &a.action, &sigma)?;
            let check = check_action(p, &tw)?;
            if !check.passed() {
                return Ok(action_report(&check));
            }
            let d = invariant_ring(p, &tw, &representatives(p, reps)?)?;
            Ok(descent_report("invariant ring of the twisted action", &d))
        }
        CocycleFromN { bundle, n } => {
            let ns: Vec<BigRational> = n.iter().map(|s| parse_q(s)).collect::<Res<_>>()?;
            let ns: [BigRational; 4] = ns.try_into().map_err(|_| CliError::Usage("four values are needed".into()))?;
            let b = get(&m.bundles, "bundle", bundle)?;
            let a = &m.actions[&b.action];
            let p = ring(&m, &a.ring)?;
            let proj = m.ring_projection(&a.ring).expect("bundle rings have a projection");
            let label: Vec<String> = ns.iter().map(|x| x.to_string()).collect();
            match cocycle_from_n(&ns, proj, &b.lines, p.tower())? {
                None => Ok(Report::new(
                    vec![format!("n = ({}): absent, the product is not a sum of two squares", label.join(", "))],
                    json!({"n": label, "cocycle": null}),
                )),
                Some((c, alpha, beta)) => {
                    if let Some(why) = c.check(p, &a.action)? {
                        return Err(CliError::Compute(coxring_core::Error::Cocycle(why)));
                    }
                    let table = n_table(&c, proj, &b.lines)?;
                    let mut lines = vec![
                        format!("n = ({})", label.join(", ")),
                        format!("product = {alpha}^2 + {beta}^2"),
                        "values on the grading group generators:".into(),
                    ];
                    let vals: Vec<Vec<String>> =
                        c.values.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                    for (g, row) in a.action.generators.iter().zip(&vals) {
                        lines.push(format!("  {}: [{}]", g.name, row.join(", ")));
                    }
                    lines.push("n_{i,j}:".into());
                    let tab: Vec<Vec<String>> =
                        table.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                    for row in &tab {
                        lines
                            .push(format!("  {}", row.iter().map(|x| format!("{x:>5}")).collect::<Vec<_>>().join(" ")));
                    }
                    Ok(Report::new(
                        lines,
                        json!({"n": label, "alpha": alpha.to_string(), "beta": beta.to_string(), "cocycle": vals, "n_table": tab}),
                    ))
                }
            }
        }
        TwoSquares { .. } => unreachable!("handled above"),
        Irrelevant { ring: rn, degree: d, cap } => {
            let p = ring(&m, rn)?;
            let d = degree(&m, rn, d)?;
            let irr = irrelevant_ideal(p, &d, *cap)?;
            let ms: Vec<String> = irr.iter().map(|e| mono_str(p.names(), e)).collect();
            let mut lines = vec![format!("radical of <R_{d}>: {} generators", ms.len())];
            lines.extend(ms.iter().map(|s| format!("  {s}")));
            Ok(Report::new(lines, json!({"degree": coords_json(&d), "generators": ms})))
        }
        GeneratedInDegree { ring: rn, degree: d, steps } => {
            let p = ring(&m, rn)?;
            let d = degree(&m, rn, d)?;
            let g = generated_in_degree(p, &d, *steps)?;
            let mut lines = Vec::new();
            let mut js = Vec::new();
            for s in &g.steps {
                lines.push(format!(
                    "k = {}: dim R_(k+1)m = {}, rank of R_km * R_m = {}",
                    s.k, s.target_dimension, s.image_rank
                ));
                js.push(json!({"k": s.k, "dimension": s.target_dimension, "rank": s.image_rank}));
            }
            lines.push(format!(
                "generated in degree {d} up to k = {steps}: {}",
                if g.generated() { "yes" } else { "no" }
            ));
            let mut rep = Report::new(lines, json!({"steps": js, "generated": g.generated()}));
            rep.passed = g.generated();
            Ok(rep)
        }
        CheckRelations { ring: rn, subgroup: h, bound } => {
            let p = ring(&m, rn)?;
            let mut lines = Vec::new();
            let mut js = Vec::new();
            for r in p.relations() {
                let d = p.homogeneous_degree(r)?.expect("validated relations are homogeneous");
                lines.push(format!("degree {d}: {}", r.display(p.names())));
                js.push(json!({"relation": r.display(p.names()).to_string(), "degree": coords_json(&d)}));
            }
            let mut rep = Report::new(lines, json!({"relations": js}));
            if let Some(h) = h {
                let pr = veronese_subalgebra(
                    p,
                    subgroup(&m, rn, h)?,
                    &PullbackOptions { bound: *bound, ..PullbackOptions::default() },
                )?;
                let ok = pr.verify_relations()?;
                rep.lines.push(format!(
                    "Veronese over {h}: {} relations, all in the ambient ideal: {}",
                    pr.presentation.relations().len(),
                    if ok { "yes" } else { "no" }
                ));
                rep.json["veronese_relations_verified"] = json!(ok);
                rep.passed = ok;
            }
            Ok(rep)
        }
        ParamCheck { scheme, height, coverage: cov, max_height } => {
            let ps = get(&m.schemes, "parameter scheme", scheme)?;
            let tuples = param_enumerate(ps, *height)?;
            let rep = param_project_and_verify(ps, &tuples)?;
            let mut lines = vec![
                format!("parameter height {height}: {} tuples", rep.tuples),
                format!("distinct projective points: {}", rep.points.len()),
                format!("violations: {}", rep.violations.len()),
            ];
            for v in &rep.violations {
                lines.push(format!("  tuple {:?} -> {} fails equation {}", v.tuple, point_str(&v.point), v.equation));
            }
            let mut js = json!({
                "height": height,
                "tuples": rep.tuples,
                "points": rep.points.iter().map(|p| point_str(p)).collect::<Vec<_>>(),
                "violations": rep.violations.iter().map(|v| json!({"tuple": v.tuple, "point": point_str(&v.point), "equation": v.equation})).collect::<Vec<_>>(),
            });
            let mut passed = rep.violations.is_empty();
            if let Some(sh) = cov {
                let c = coverage(ps, *sh, *max_height)?;
                lines.push(format!("surface points of height <= {sh}: {}", c.points.len()));
                for (p, h) in &c.points {
                    lines.push(match h {
                        Some(h) => format!("  {} reached at parameter height {h}", point_str(p)),
                        None => format!("  {} NOT reached up to parameter height {max_height}", point_str(p)),
                    });
                }
                js["coverage"] = json!(c
                    .points
                    .iter()
                    .map(|(p, h)| json!({"point": point_str(p), "height": h}))
                    .collect::<Vec<_>>());
                passed &= c.complete();
            }
            let mut r = Report::new(lines, js);
            r.passed = passed;
            Ok(r)
        }
    }
}

fn point_str(p: &[BigInt]) -> String {
    format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" : "))
}

fn two_squares(q: &BigRational) -> Res<Report> {
    match sum_of_two_squares(q) {
        Some((a, b)) => Ok(Report::new(
            vec![format!("{q} = {a}^2 + {b}^2")],
            json!({"q": q.to_string(), "a": a.to_string(), "b": b.to_string()}),
        )),
        None => {
            let mut rep = Report::new(
                vec![format!("{q} is not a sum of two squares")],
                json!({"q": q.to_string(), "a": null, "b": null}),
            );
            rep.passed = false;
            Ok(rep)
        }
    }
}

/// Parses arguments, runs the command, and returns the exit code with the
/// text for stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (1, String::new(), text) };
        }
    };
    match execute(&cli) {
        Ok(rep) => (rep.exit_code(), rep.render(cli.json), String::new()),
        Err(e) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&json!({"error": e.to_string(), "exit_code": e.exit_code()}))
                    .expect("json")
                    + "\n"
            } else {
                String::new()
            };
            (e.exit_code(), out, format!("error: {e}\n"))
        }
    }
}

/// Parses a scalar in a ring's field, for callers building cocycles by hand.
pub fn scalar_in(p: &GradedPresentation, s: &str) -> Result<TowerElement, crate::grammar::ParseError> {
    parse_scalar(s, p.tower())
}
