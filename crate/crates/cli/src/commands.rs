//! Subcommands. Instance files with a `scheme` line are worked on in the
//! extended space; `--kind` binarizes every integer variable instead.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use binext::binarization::{unimodular_map, BinarizationPolytope, Generator, PolytopeKind, WitnessRule};
use binext::bnb::{
    build_bbt1_tree, check_complete, check_complete_projected, leaf_statuses, leaf_statuses_projected,
    min_complete_tree_size, BBTree, LeafStatus, DEFAULT_BOX_CAP,
};
use binext::extension::ExtendedSet;
use binext::kernel::{parse_rational, RatVector};
use binext::polyhedra::{format_row, Inequality, MixedIntegerSet, Sense};
use binext::splits::{
    closure_hrep, closure_member, closure_optimize, closure_project_member, gc_round, parse_split,
    verify_aggregation, verify_split_cut, AggStep, ClosureMembership, ProjectedMembership, Rounding, StepRelation,
    DEFAULT_CUT_CAP,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::expr::{parse_constraint, parse_linear, parse_vector};
use crate::instance::{Instance, Rel};
use crate::report::{vec_text, Report};
use crate::scenarios::{family_for, run_scenario, ScenarioOpts, CATALOG, DEFAULT_SEED};
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "binext", version, about = "Binary extended formulations of bounded mixed-integer sets")]
pub struct Cli {
    /// Worker threads for parallel scans (results do not depend on it).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Parse an instance file and print it back in canonical form.
    Parse { file: PathBuf },
    /// Print the extended formulation of an instance.
    Binarize {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
    },
    /// Classify a binarization polytope: exact, perfect, affine, unimodular.
    Classify {
        #[arg(long)]
        kind: Option<PolytopeKind>,
        #[arg(long)]
        u: u64,
        /// Codes for 0..=u separated by `;`, e.g. `0 0; 1 0; 1 1; 0 1`.
        #[arg(long, conflicts_with = "kind")]
        codes: Option<String>,
    },
    /// Unimodular map between two binarization polytopes with the same bound.
    Map {
        #[arg(long)]
        from: PolytopeKind,
        #[arg(long)]
        to: PolytopeKind,
        #[arg(long)]
        u: u64,
    },
    /// Verify that a cut is valid for both pieces of a split.
    SplitCut {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        /// `pi = a b c ; pi0 = t`
        #[arg(long)]
        split: String,
        #[arg(long)]
        cut: String,
    },
    /// Chvatal-Gomory cut `floor(a/d) x <= floor(max a.x / d)`.
    Gc {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        coeffs: String,
        #[arg(long, default_value = "1")]
        divisor: String,
    },
    /// Verify a weighted aggregation of constraints, optionally rounded.
    Aggregate {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        /// One step per line: `multiplier : lhs REL rhs`.
        #[arg(long)]
        steps_file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = RoundArg::None)]
        rounding: RoundArg,
        #[arg(long, default_value = "1")]
        divisor: String,
    },
    /// Bounded split closures.
    Closure {
        #[command(subcommand)]
        op: ClosureOp,
    },
    /// Branch-and-bound trees.
    Bb {
        #[command(subcommand)]
        op: BbOp,
    },
    /// Run scripted reproductions.
    Reproduce {
        /// Scenario name or `all`.
        name: Option<String>,
        #[arg(long)]
        list: bool,
        /// Dimension for `bb-corner-cut`.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Space {
    /// Binarize every integer variable with this kind, overriding the file's scheme.
    #[arg(long)]
    pub kind: Option<PolytopeKind>,
    /// Work on the original set even if the file declares a scheme.
    #[arg(long, conflicts_with = "kind")]
    pub original: bool,
    /// In the extended set, keep only the binary variables integral.
    #[arg(long)]
    pub drop_x_integrality: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Coefficient bound of the split family.
    #[arg(long = "K", default_value_t = 1)]
    pub k: u32,
    /// Variables the splits may use (default: every integer variable).
    #[arg(long, value_delimiter = ',')]
    pub support: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
pub enum ClosureOp {
    /// Is a point in the closure of the bounded family?
    Member {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        point: String,
        /// Test only these coordinates (membership in the projection).
        #[arg(long, value_delimiter = ',')]
        project: Option<Vec<String>>,
    },
    /// Optimize a linear objective over the family closure.
    Optimize {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        objective: String,
        #[arg(long, value_enum, default_value_t = SenseArg::Max)]
        sense: SenseArg,
    },
    /// Inequality description of the family closure.
    Hrep {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum BbOp {
    /// The unary-space tree for the corner-cut polytope of dimension `n`.
    Build {
        #[arg(long)]
        n: usize,
    },
    /// Check completeness of a tree file against an instance.
    Check {
        file: PathBuf,
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Smallest complete tree in the original space (exhaustive).
    MinSize { file: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum RoundArg {
    None,
    Rhs,
    Coeffs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SenseArg {
    Max,
    Min,
}

/// The set a command works on, with the extension when there is one.
struct Target {
    inst: Instance,
    set: MixedIntegerSet,
    ext: Option<ExtendedSet>,
}

impl Target {
    fn load(file: &Path, space: &Space) -> Result<Target, CliError> {
        let inst = Instance::load(file)?;
        let ext = if space.original { None } else { inst.extended(space.kind, space.drop_x_integrality)? };
        let set = match &ext {
            Some(e) => e.ext.clone(),
            None => inst.set()?,
        };
        Ok(Target { inst, set, ext })
    }

    fn names(&self) -> &[String] {
        self.set.relax.var_names()
    }

    fn describe(&self, r: &mut Report) {
        r.result("instance", self.inst.name.as_deref().unwrap_or("-"));
        r.result("dimension", self.set.dim());
        if let Some(e) = &self.ext {
            let kinds: Vec<String> = e.scheme.polytopes.iter().map(|b| b.kind.map_or("custom", |k| k.name()).to_string()).collect();
            r.result("extension", kinds.join(","));
        }
    }

    fn var(&self, name: &str) -> Result<usize, CliError> {
        self.names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CliError::Usage(format!("unknown variable `{name}`")))
    }
}

fn sense(is_eq: bool) -> &'static str {
    if is_eq {
        "="
    } else {
        "<="
    }
}

fn rational(text: &str) -> Result<binext::kernel::Rational, CliError> {
    parse_rational(text.trim()).map_err(|_| CliError::Usage(format!("bad rational `{text}`")))
}

fn inequality(text: &str, names: &[String]) -> Result<Inequality, CliError> {
    let (a, rel, b) = parse_constraint(text, names)?;
    match rel {
        Rel::Le => Ok(Inequality::le(a, b)),
        Rel::Ge => Ok(Inequality::ge(a, b)),
        Rel::Eq => Err(CliError::Usage(format!("`{text}` is an equation, expected <= or >="))),
    }
}

fn read_steps(path: &Path, names: &[String]) -> Result<Vec<AggStep>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut steps = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: CliError| CliError::Parse(format!("{}:{}: {e}", path.display(), no + 1));
        let (m, c) = line
            .split_once(':')
            .ok_or_else(|| at(CliError::Usage("expected `multiplier : constraint`".into())))?;
        let mult = rational(m).map_err(at)?;
        let (a, rel, b) = parse_constraint(c, names).map_err(at)?;
        let rel = match rel {
            Rel::Le => StepRelation::Le,
            Rel::Ge => StepRelation::Ge,
            Rel::Eq => StepRelation::Eq,
        };
        steps.push(AggStep::new(a, rel, b, mult));
    }
    Ok(steps)
}

fn parse_codes(text: &str) -> Result<Vec<Generator>, CliError> {
    text.split(';')
        .enumerate()
        .map(|(k, w)| Ok(Generator { k: k as u64, w: RatVector(parse_vector(w)?) }))
        .collect()
}

fn classify(kind: Option<PolytopeKind>, u: u64, codes: Option<&str>) -> Result<Report, CliError> {
    let b = match (kind, codes) {
        (Some(k), None) => BinarizationPolytope::make(k, u)?,
        (None, Some(c)) => BinarizationPolytope::from_generators(u, parse_codes(c)?)?,
        _ => return Err(CliError::Usage("give exactly one of --kind or --codes".into())),
    };
    let mut r = Report::new("classify");
    r.result("q", b.q);
    r.check("binarization-polytope", b.check_membership()?);
    let c = b.classify()?;
    r.result("exact", c.is_exact);
    r.result("perfect", c.is_perfect);
    r.result("unimodular", c.is_unimodular);
    match &c.affine {
        Some((alpha, a0)) => r.result("affine", format!("x = {} . z + {a0}", vec_text(alpha))),
        None => r.result("affine", "no"),
    }
    r.result("linear", c.linear);
    for row in b.body.normalized().rows() {
        r.note(format_row(row.a, sense(row.is_eq), row.b, b.body.var_names()));
    }
    Ok(r)
}

fn map(from: PolytopeKind, to: PolytopeKind, u: u64) -> Result<Report, CliError> {
    let b = BinarizationPolytope::make(from, u)?;
    let c = BinarizationPolytope::make(to, u)?;
    let m = unimodular_map(&b, &c)?;
    let mut r = Report::new(format!("map {from} -> {to}, u = {u}"));
    for (i, row) in m.matrix.row_vectors().iter().enumerate() {
        r.result(format!("V[{}]", i + 1), vec_text(row));
    }
    r.result("v", vec_text(&m.offset));
    let src = b.witnesses(WitnessRule::default())?;
    let dst = c.witnesses(WitnessRule::default())?;
    r.check("codes-map-to-codes", src.iter().zip(&dst).all(|(s, d)| m.apply(&s.w) == d.w));
    Ok(r)
}

fn split_cut(t: &Target, split: &str, cut: &str) -> Result<Report, CliError> {
    let s = parse_split(split)?;
    let c = inequality(cut, t.names())?;
    let mut r = Report::new("split-cut");
    t.describe(&mut r);
    r.result("split", s.display(t.names()));
    r.result("cut", c.display(t.names()));
    let v = verify_split_cut(&t.set.relax, &s, &c);
    for (side, piece) in ["left", "right"].iter().zip(&v.pieces) {
        r.result(format!("piece({side})"), format!("{piece:?}"));
    }
    r.check("valid-split-cut", v.valid);
    Ok(r)
}

fn gc(t: &Target, coeffs: &str, divisor: &str) -> Result<Report, CliError> {
    let a = parse_linear(coeffs, t.names())?;
    let d = rational(divisor)?;
    let cut = gc_round(&t.set, &a, &d)?;
    let mut r = Report::new("gc");
    t.describe(&mut r);
    r.result("cut", cut.display(t.names()));
    Ok(r)
}

fn aggregate(t: &Target, steps: &Path, target: &str, rounding: RoundArg, divisor: &str) -> Result<Report, CliError> {
    let steps = read_steps(steps, t.names())?;
    let goal = inequality(target, t.names())?;
    let rounding = match rounding {
        RoundArg::None => Rounding::None,
        RoundArg::Rhs => Rounding::Rhs,
        RoundArg::Coeffs => Rounding::CoeffsAndRhs,
    };
    let rep = verify_aggregation(&t.set, &steps, rounding, &rational(divisor)?, &goal, 10_000_000)?;
    let mut r = Report::new("aggregate");
    t.describe(&mut r);
    r.result("aggregated", rep.aggregated.display(t.names()));
    r.result("derived", rep.derived.display(t.names()));
    if let Some(e) = rep.enumeration_check {
        r.check("holds-at-every-integer-point", e);
    }
    if let Some(why) = &rep.reason {
        r.note(why.clone());
    }
    r.check("derives-target", rep.valid);
    Ok(r)
}

fn family_support(t: &Target, f: &FamilyArgs) -> Result<Option<Vec<usize>>, CliError> {
    f.support.as_ref().map(|s| s.iter().map(|n| t.var(n.trim())).collect()).transpose()
}

fn closure(op: &ClosureOp) -> Result<Report, CliError> {
    match op {
        ClosureOp::Member { file, space, family, point, project } => {
            let t = Target::load(file, space)?;
            let fam = family_for(&t.set, family.k, family_support(&t, family)?.as_deref())?;
            let x = parse_vector(point)?;
            let mut r = Report::new("closure member");
            t.describe(&mut r);
            r.result("family-size", fam.len());
            match project {
                None => {
                    let m = closure_member(&x, &t.set, &fam)?;
                    r.membership(format!("membership {} K={}", vec_text(&x), family.k), m.is_member(), family.k);
                    if let ClosureMembership::NonMember { split, separator } = &m {
                        r.result("separator", separator.display(t.names()));
                        r.result("split", split.as_ref().map_or("none (outside the relaxation)".into(), |s| s.display(t.names())));
                    }
                }
                Some(coords) => {
                    let cs: Vec<usize> = coords.iter().map(|n| t.var(n.trim())).collect::<Result<_, _>>()?;
                    let m = closure_project_member(&x, &cs, &t.set, &fam, DEFAULT_CUT_CAP)?;
                    r.membership(format!("membership {} in projection K={}", vec_text(&x), family.k), m.is_member(), family.k);
                    match &m {
                        ProjectedMembership::Member { point, cuts } => {
                            r.result("lift", vec_text(point));
                            r.result("cuts-added", cuts);
                        }
                        ProjectedMembership::NonMember { cuts, farkas } => {
                            for (s, c) in cuts {
                                r.result("cut", format!("{} from {}", c.display(t.names()), s.display(t.names())));
                            }
                            r.result("farkas", vec_text(farkas));
                        }
                    }
                }
            }
            Ok(r)
        }
        ClosureOp::Optimize { file, space, family, objective, sense } => {
            let t = Target::load(file, space)?;
            let fam = family_for(&t.set, family.k, family_support(&t, family)?.as_deref())?;
            let c = parse_linear(objective, t.names())?;
            let sense = match sense {
                SenseArg::Max => Sense::Max,
                SenseArg::Min => Sense::Min,
            };
            let opt = closure_optimize(&t.set, &fam, &c, sense, DEFAULT_CUT_CAP)?;
            let mut r = Report::new("closure optimize");
            t.describe(&mut r);
            r.result("family-size", fam.len());
            r.result("value", &opt.value);
            r.result("point", vec_text(&opt.point));
            for (s, cut) in &opt.cuts {
                r.result("cut", format!("{} from {}", cut.display(t.names()), s.display(t.names())));
            }
            Ok(r)
        }
        ClosureOp::Hrep { file, space, family } => {
            let t = Target::load(file, space)?;
            let fam = family_for(&t.set, family.k, family_support(&t, family)?.as_deref())?;
            let h = closure_hrep(&t.set, &fam, DEFAULT_CUT_CAP)?;
            let mut r = Report::new("closure hrep");
            t.describe(&mut r);
            r.result("family-size", fam.len());
            for row in h.normalized().rows() {
                r.result("row", format_row(row.a, sense(row.is_eq), row.b, t.names()));
            }
            Ok(r)
        }
    }
}

fn bb(op: &BbOp) -> Result<Report, CliError> {
    match op {
        BbOp::Build { n } => {
            let (_, tree) = build_bbt1_tree(*n)?;
            let mut r = Report::new(format!("bb build n = {n}"));
            r.result("leaves", tree.leaf_count());
            for line in tree.render(None).lines() {
                r.note(line.to_string());
            }
            Ok(r)
        }
        BbOp::Check { file, space, tree } => {
            let t = Target::load(file, space)?;
            let text = std::fs::read_to_string(tree).map_err(|e| CliError::Usage(format!("{}: {e}", tree.display())))?;
            let bt = BBTree::parse(&text, t.set.clone())?;
            let (statuses, complete) = match &t.ext {
                Some(_) => {
                    let origin = t.inst.set()?;
                    (leaf_statuses_projected(&bt, &origin)?, check_complete_projected(&bt, &origin)?)
                }
                None => (leaf_statuses(&bt)?, check_complete(&bt)?),
            };
            let mut r = Report::new("bb check");
            t.describe(&mut r);
            r.result("leaves", bt.leaf_count());
            let lookup = |id: usize| statuses.iter().find(|(l, _)| *l == id).map(|(_, s)| s.clone());
            for line in bt.render(Some(&lookup as &dyn Fn(usize) -> Option<LeafStatus>)).lines() {
                r.note(line.to_string());
            }
            r.check("complete", complete);
            Ok(r)
        }
        BbOp::MinSize { file } => {
            let inst = Instance::load(file)?;
            let best = min_complete_tree_size(&inst.set()?, DEFAULT_BOX_CAP)?;
            let mut r = Report::new("bb min-size");
            r.result("instance", inst.name.as_deref().unwrap_or("-"));
            r.result("min-complete-tree-size", best);
            Ok(r)
        }
    }
}

fn reproduce(name: Option<&str>, list: bool, opts: &ScenarioOpts, out: &mut String) -> Result<Vec<Report>, CliError> {
    if list || name.is_none() {
        for (n, d, _) in CATALOG {
            out.push_str(&format!("{n:24} {d}\n"));
        }
        return Ok(Vec::new());
    }
    match name {
        Some("all") => CATALOG.iter().map(|(n, _, _)| run_scenario(n, opts)).collect(),
        Some(n) => Ok(vec![run_scenario(n, opts)?]),
        None => unreachable!(),
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<Vec<Report>, CliError> {
    let one = |r: Result<Report, CliError>| r.map(|r| vec![r]);
    match &cli.cmd {
        Cmd::Parse { file } => {
            let inst = Instance::load(file)?;
            out.push_str(&inst.to_text());
            Ok(Vec::new())
        }
        Cmd::Binarize { file, space } => {
            let t = Target::load(file, space)?;
            let Some(e) = &t.ext else {
                return Err(CliError::Usage("no scheme in the file; pass --kind".into()));
            };
            let mut r = Report::new(format!("extended formulation of {}", t.inst.name.as_deref().unwrap_or("-")));
            t.describe(&mut r);
            let ints: Vec<&str> = e.ext.int_vars.iter().map(|&j| t.names()[j].as_str()).collect();
            r.result("integer", ints.join(" "));
            for row in e.ext.relax.rows() {
                r.result("row", format_row(row.a, sense(row.is_eq), row.b, t.names()));
            }
            Ok(vec![r])
        }
        Cmd::Classify { kind, u, codes } => one(classify(*kind, *u, codes.as_deref())),
        Cmd::Map { from, to, u } => one(map(*from, *to, *u)),
        Cmd::SplitCut { file, space, split, cut } => one(split_cut(&Target::load(file, space)?, split, cut)),
        Cmd::Gc { file, space, coeffs, divisor } => one(gc(&Target::load(file, space)?, coeffs, divisor)),
        Cmd::Aggregate { file, space, steps_file, target, rounding, divisor } => {
            one(aggregate(&Target::load(file, space)?, steps_file, target, *rounding, divisor))
        }
        Cmd::Closure { op } => one(closure(op)),
        Cmd::Bb { op } => one(bb(op)),
        Cmd::Reproduce { name, list, n } => {
            let opts = ScenarioOpts { seed: cli.seed, n: *n };
            reproduce(name.as_deref(), *list, &opts, out)
        }
    }
}

/// Parses `args`, runs the command and writes reports to `out`, errors to `err`.
pub fn run_to<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                write!(out, "{e}").ok();
            } else {
                write!(err, "{e}").ok();
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            return 2;
        }
    };
    let mut raw = String::new();
    let outcome = pool.install(|| dispatch(&cli, &mut raw));
    write!(out, "{raw}").ok();
    match outcome {
        Ok(reports) => {
            for r in &reports {
                write!(out, "{r}").ok();
            }
            i32::from(!reports.iter().all(Report::passed))
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            e.exit_code()
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn instances() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances")
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("binext").chain(args.iter().copied());
        let code = run_to(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn inst(name: &str) -> String {
        instances().join(name).to_string_lossy().into_owned()
    }

    #[test]
    fn parse_round_trips() {
        let (code, out, _) = call(&["parse", &inst("three-bins.txt")]);
        assert_eq!(code, 0);
        let orig = Instance::load(&instances().join("three-bins.txt")).unwrap();
        assert_eq!(Instance::parse(&out).unwrap().to_text(), orig.to_text());
    }

    #[test]
    fn parse_errors_exit_2_with_position() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "vars x y\nrow 1 2 <> 3").unwrap();
        let (code, _, err) = call(&["parse", &f.path().to_string_lossy()]);
        assert_eq!(code, 2);
        assert!(err.contains(":2:9:"), "{err}");
        let (code, _, _) = call(&["parse", "/no/such/file"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn gc_and_split_cut_on_the_log_extension() {
        let p = inst("pentagon.txt");
        let (code, out, _) = call(&["gc", &p, "--kind", "log", "--coeffs", "2 z2_1 + 2 z2_2", "--divisor", "2"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("RESULT cut = z2_1 + z2_2 <= 1"), "{out}");
        let (code, out, _) = call(&[
            "split-cut", &p, "--kind", "log", "--split", "pi = 1 0 0 0 0 0 ; pi0 = 1", "--cut", "2 x1 + 3 x2 <= 7",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("CHECK valid-split-cut PASS"));
        let (code, out, _) = call(&[
            "split-cut", &p, "--kind", "log", "--split", "pi = 1 0 0 0 0 0 ; pi0 = 1", "--cut", "x2 <= 1",
        ]);
        assert_eq!(code, 1);
        assert!(out.contains("CHECK valid-split-cut FAIL"));
    }

    #[test]
    fn closure_optimize_matches_the_log_bound() {
        let (code, out, _) =
            call(&["closure", "optimize", &inst("pentagon.txt"), "--kind", "log", "--K", "2", "--objective", "x2"]);
        assert_eq!(code, 0);
        assert!(out.contains("RESULT value = 7/5"), "{out}");
    }

    #[test]
    fn closure_member_labels() {
        let p = inst("pentagon.txt");
        let (_, out, _) = call(&["closure", "member", &p, "--K", "2", "--point", "5/4 3/2"]);
        assert!(out.contains("member [bounded-family (K=2) evidence]"), "{out}");
        let (_, out, _) = call(&["closure", "member", &inst("kite.txt"), "--kind", "logplus", "--point", "6/5 6/5", "--project", "x1,x2"]);
        assert!(out.contains("non-member [certified]"), "{out}");
    }

    #[test]
    fn aggregate_from_steps_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# (15) + (16) + both binarization equations").unwrap();
        writeln!(f, "1 : z1_1 + z1_2 + z2_2 <= 1\n1 : z1_2 + z2_1 + z2_2 <= 1").unwrap();
        writeln!(f, "1 : x1 - z1_1 - 2 z1_2 = 0\n1 : x2 - z2_1 - 2 z2_2 = 0").unwrap();
        let (code, out, _) = call(&[
            "aggregate", &inst("kite.txt"), "--kind", "logplus", "--steps-file", &f.path().to_string_lossy(),
            "--target", "x1 + x2 <= 2",
        ]);
        assert!(out.contains("RESULT aggregated = x1 + x2 <= 2"), "{out}");
        // (15) and (16) are not rows of P_L+, so the bare aggregation is not a derivation
        assert_eq!(code, 1);
    }

    #[test]
    fn classify_and_map() {
        let (code, out, _) = call(&["classify", "--u", "3", "--codes", "0 0; 1 0; 1 1; 0 1"]);
        assert_eq!(code, 0);
        assert!(out.contains("RESULT perfect = true") && out.contains("RESULT affine = no"), "{out}");
        let (code, out, _) = call(&["map", "--from", "full", "--to", "logplus", "--u", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("CHECK codes-map-to-codes PASS"));
        let (code, _, _) = call(&["classify", "--u", "3"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bb_build_and_check() {
        let (code, out, _) = call(&["bb", "build", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("RESULT leaves = 6"));
        let mut inst_file = tempfile::NamedTempFile::new().unwrap();
        writeln!(inst_file, "vars x1\nint x1\nbound x1 0 4\nrow 1 >= 1/2\nrow -1 >= -7/2").unwrap();
        let mut tree = tempfile::NamedTempFile::new().unwrap();
        writeln!(tree, "branch x1 <=0 | >=1\n  LEAF\n  branch x1 <=3 | >=4\n    LEAF\n    LEAF").unwrap();
        let path = inst_file.path().to_string_lossy().into_owned();
        let (code, out, _) = call(&["bb", "check", &path, "--tree", &tree.path().to_string_lossy()]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("CHECK complete PASS"));
        let (code, out, _) = call(&["bb", "min-size", &path]);
        assert_eq!(code, 0);
        assert!(out.contains("RESULT min-complete-tree-size = 3"), "{out}");
    }

    #[test]
    fn capacity_errors_exit_3() {
        let (code, _, err) = call(&["bb", "build", "--n", "40"]);
        assert_eq!(code, 3, "{err}");
        let (code, _, _) = call(&["reproduce", "bb-corner-cut", "--n", "17"]);
        assert_eq!(code, 2);
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "vars x1 x2 x3 x4\nint x1 x2 x3 x4\nbound x1 0 9\nbound x2 0 9\nbound x3 0 9\nbound x4 0 9").unwrap();
        let (code, _, err) = call(&["bb", "min-size", &f.path().to_string_lossy()]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn reproduce_list_and_unknown() {
        let (code, out, _) = call(&["reproduce", "--list"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), CATALOG.len());
        let (code, _, err) = call(&["reproduce", "nope"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown scenario"));
    }

    #[test]
    fn output_does_not_depend_on_workers() {
        for args in [
            vec!["reproduce", "unimodular-maps"],
            vec!["reproduce", "log-vs-original"],
            vec!["reproduce", "single-split-dominance", "--seed", "7"],
        ] {
            let one = call(&[&["--workers", "1"][..], &args].concat());
            let four = call(&[&["--workers", "4"][..], &args].concat());
            assert_eq!(one, four, "{args:?}");
            assert_eq!(one.0, 0, "{}", one.1);
        }
    }

    #[test]
    fn seeds_change_random_sweeps_only() {
        let a = call(&["reproduce", "unary-tree-translate", "--seed", "1"]);
        let b = call(&["reproduce", "unary-tree-translate", "--seed", "1"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
