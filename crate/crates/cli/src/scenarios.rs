//! Scripted reproductions. Each scenario emits `RESULT` values and one `CHECK`
//! per claim; closure memberships carry their strength label.

use binext::binarization::{
    affine_to_linear, superincreasing_knapsack_facets, unimodular_map, BinarizationPolytope, BinarizationScheme,
    Generator, IntAffineMap, PolytopeKind, WitnessRule,
};
use binext::bnb::{
    build_bbt1_tree, build_corner_cut, check_complete, check_complete_projected, leaf_statuses_projected,
    min_complete_tree_size, translate_unary_tree, verify_translation, BBTree, DEFAULT_BOX_CAP, MAX_CORNER_N,
};
use binext::extension::{extend, ExtendedSet};
use binext::kernel::{determinant, int, rat, RatMatrix, RatVector, Rational};
use binext::polyhedra::{
    hull, mixed_integer_hull, same_set, subset_of, vertices, HPolyhedron, Inequality, MixedIntegerSet, Sense,
    DEFAULT_ENUMERATION_CAP,
};
use binext::splits::{
    augment_family_with_preimages, closure_hrep, closure_member, closure_optimize, closure_project_member,
    enumerate_family, gc_round, integer_family, split_pieces, verify_aggregation, verify_split_cut, AggStep,
    ClosureMembership, ProjectedMembership, Rounding, SplitFamily, SplitSet, StepRelation, DEFAULT_CUT_CAP,
    DEFAULT_FAMILY_CAP,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{parse_constraint, parse_linear};
use crate::instance::{Instance, Rel};
use crate::report::{vec_text, Report};
use crate::CliError;

pub const PENTAGON: &str = include_str!("../instances/pentagon.txt");
pub const KITE: &str = include_str!("../instances/kite.txt");
pub const THREE_BINS: &str = include_str!("../instances/three-bins.txt");
pub const STRIP: &str = include_str!("../instances/strip.txt");
pub const SEGMENT: &str = include_str!("../instances/segment.txt");

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy)]
pub struct ScenarioOpts {
    pub seed: u64,
    /// Dimension of the corner-cut polytope for `bb-corner-cut`.
    pub n: usize,
}

impl Default for ScenarioOpts {
    fn default() -> Self {
        ScenarioOpts { seed: DEFAULT_SEED, n: 2 }
    }
}

type Runner = fn(&ScenarioOpts) -> Result<Report, CliError>;

pub const CATALOG: &[(&str, &str, Runner)] = &[
    ("nonaffine-example", "non-affine binarization and the I' split closure", nonaffine_example),
    ("affine-to-linear", "affine binarizations are unimodular images of linear ones", affine_to_linear_scenario),
    ("perfect-restriction", "restricting to one code per value gives a perfect polytope", perfect_restriction),
    ("knapsack-facets", "cover inequalities describe the perfect log binarization", knapsack_facets),
    ("log-vs-original", "the log extension cuts deeper than the original split closure", log_vs_original),
    ("single-split-dominance", "single-block splits are dominated by original splits", single_split_dominance),
    ("single-split-hull", "one extended split gives the integer hull of a segment", single_split_hull),
    ("unimodular-maps", "unimodular binarizations give the same projected closure", unimodular_maps),
    ("logplus-vs-log", "the perfect log extension separates (6/5, 6/5)", logplus_vs_log),
    ("unary-vs-logplus", "the full extension cuts a point the perfect log extension keeps", unary_vs_logplus),
    ("bb-corner-cut", "branch-and-bound trees for the corner-cut polytope", bb_corner_cut),
    ("unary-tree-translate", "trees over the unary extension translate to the original space", unary_tree_translate),
    ("invariants", "hull round trips, separator re-verification and family monotonicity", invariants),
];

pub const INVARIANT_SEEDS: u64 = 100;

pub fn run_scenario(name: &str, opts: &ScenarioOpts) -> Result<Report, CliError> {
    let (_, desc, f) = CATALOG
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| CliError::Usage(format!("unknown scenario `{name}`")))?;
    let mut r = f(opts)?;
    r.title = format!("{name}: {desc}");
    Ok(r)
}

fn instance(text: &str) -> Instance {
    Instance::parse(text).expect("bundled instance parses")
}

fn names(e: &ExtendedSet) -> &[String] {
    e.ext.relax.var_names()
}

fn ineq(names: &[String], text: &str) -> Result<Inequality, CliError> {
    let (a, rel, rhs) = parse_constraint(text, names)?;
    match rel {
        Rel::Le => Ok(Inequality::le(a, rhs)),
        Rel::Ge => Ok(Inequality::ge(a, rhs)),
        Rel::Eq => Err(CliError::Usage(format!("`{text}` is an equation"))),
    }
}

fn step(names: &[String], text: &str, mult: Rational) -> Result<AggStep, CliError> {
    let (a, rel, rhs) = parse_constraint(text, names)?;
    let rel = match rel {
        Rel::Le => StepRelation::Le,
        Rel::Ge => StepRelation::Ge,
        Rel::Eq => StepRelation::Eq,
    };
    Ok(AggStep::new(a, rel, rhs, mult))
}

fn split(names: &[String], expr: &str, pi0: i64) -> Result<SplitSet, CliError> {
    let pi = parse_linear(expr, names)?;
    Ok(SplitSet::new(pi.iter().map(|c| c.to_integer()).collect(), pi0.into())?)
}

fn with_cuts(m: &MixedIntegerSet, cuts: &[&Inequality]) -> MixedIntegerSet {
    let mut h = m.relax.clone();
    for c in cuts {
        let (a, b) = c.as_le();
        h.add_le(a.0, b);
    }
    m.with_relax(h)
}

fn rng(opts: &ScenarioOpts, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(stream))
}

/// A random polytope in `[0,u]^2` cut by two rows through a half-integral interior point.
pub fn random_planar(g: &mut ChaCha8Rng, u: u64) -> MixedIntegerSet {
    let ui = u as i64;
    let mut h = HPolyhedron::cube(&[int(0), int(0)], &[int(ui), int(ui)]);
    let c = [rat(g.gen_range(1..2 * ui), 2), rat(g.gen_range(1..2 * ui), 2)];
    for _ in 0..2 {
        let a = [int(g.gen_range(-3..=3)), int(g.gen_range(-3..=3))];
        let b = &a[0] * &c[0] + &a[1] * &c[1] + rat(g.gen_range(1..=4), 2);
        h.add_le(a.to_vec(), b);
    }
    MixedIntegerSet::new(h, vec![0, 1], vec![u, u]).expect("bounded planar set")
}

fn piece_vertices(h: &HPolyhedron, s: &SplitSet) -> Result<Vec<RatVector>, CliError> {
    let (a, b) = split_pieces(h, s);
    let mut v = vertices(&a)?.vertices;
    v.extend(vertices(&b)?.vertices);
    Ok(v)
}

fn z_support(e: &ExtendedSet) -> Vec<usize> {
    e.blocks.iter().flat_map(|b| b.clone()).collect()
}

fn record_cut(r: &mut Report, tag: &str, names: &[String], cut: &Inequality) {
    r.result(format!("cut({tag})"), cut.display(names));
}

fn nonaffine_example(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let codes = [[0, 0], [1, 0], [1, 1], [0, 1]];
    let gens: Vec<Generator> = codes
        .iter()
        .enumerate()
        .map(|(k, w)| Generator { k: k as u64, w: RatVector::from_ints(w) })
        .collect();
    let b = BinarizationPolytope::from_generators(3, gens)?;
    let mut displayed = HPolyhedron::cube(&[int(0), int(0), int(0)], &[int(3), int(1), int(1)]);
    for (a, rhs) in [([1, -1, -1], 0), ([1, 1, -3], 0), ([-1, 1, 3], 0), ([-1, -1, 1], -2)] {
        displayed.add_ge(RatVector::from_ints(&a).0, int(rhs));
    }
    r.check("body-matches-displayed-rows", same_set(&b.body, &displayed)?);
    r.check("is-binarization-polytope", b.check_membership()?);
    let cls = b.classify()?;
    r.result("exact", cls.is_exact);
    r.result("perfect", cls.is_perfect);
    r.result("affine", cls.affine.is_some());
    r.check("exact-perfect-not-affine", cls.is_exact && cls.is_perfect && cls.affine.is_none());

    let p = instance(STRIP).set()?;
    let e = extend(&p, &BinarizationScheme { polytopes: vec![b.clone(), b] }, true)?;
    let pbar = RatVector(vec![int(1), rat(3, 2), rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)]);
    r.check("point-in-P_B", e.ext.relax.contains(&pbar));
    let half = rat(1, 2);
    let dz1 = RatVector(vec![int(0), int(0), int(0), int(0), half.clone(), int(0)]);
    let dz2 = RatVector(vec![int(1), int(1), half.clone(), half.clone(), int(0), half]);
    let decomp = [&dz1, &dz2]
        .iter()
        .all(|d| e.ext.relax.contains(&pbar.add(d)) && e.ext.relax.contains(&pbar.sub(d)));
    r.check("decompositions-in-P_B", decomp);

    let k = 2;
    let fam = integer_family(&e.ext, k, DEFAULT_FAMILY_CAP)?;
    r.result("family-size", fam.len());
    let mem = closure_member(&pbar, &e.ext, &fam)?;
    r.membership(format!("membership (xbar, zbar) in SC(P_B, I') K={k}"), mem.is_member(), k);
    r.check("point-survives-I'-closure", mem.is_member());

    let fam_p = integer_family(&p, k, DEFAULT_FAMILY_CAP)?;
    let mx = closure_member(&pbar[..2], &p, &fam_p)?;
    r.membership(format!("membership xbar in SC(P) K={k}"), mx.is_member(), k);
    if let ClosureMembership::NonMember { split: Some(s), separator } = &mx {
        r.result("separator", format!("{} from {}", separator.display(p.relax.var_names()), s.display(p.relax.var_names())));
    }
    r.check("xbar-outside-SC(P)", !mx.is_member());
    let sub = e.substitution_map();
    r.check("substitution-unavailable-for-non-affine", sub.is_err());

    // the affine contrast: P_L of the pentagon
    let pent = instance(PENTAGON);
    let zonly = pent.extended_as(PolytopeKind::Log, true)?;
    let both = pent.extended_as(PolytopeKind::Log, false)?;
    let phi = both.substitution_map()?;
    let fam_z = integer_family(&zonly.ext, 1, DEFAULT_FAMILY_CAP)?;
    let fam_xz = integer_family(&both.ext, 1, DEFAULT_FAMILY_CAP)?;
    let aug_z = augment_family_with_preimages(&phi, &fam_xz, &fam_z)?;
    let aug_xz = augment_family_with_preimages(&phi, &fam_z, &fam_xz)?;
    let a = closure_hrep(&zonly.ext, &aug_z, DEFAULT_CUT_CAP)?;
    let c = closure_hrep(&both.ext, &aug_xz, DEFAULT_CUT_CAP)?;
    r.result("I'-family-size-after-substitution", aug_z.len());
    r.check("affine-closures-agree-I_B-vs-I'", same_set(&a, &c)?);
    Ok(r)
}

fn flipped_polytope(b: &BinarizationPolytope, flip: &[bool]) -> Result<(BinarizationPolytope, Vec<Generator>), CliError> {
    let gens: Vec<Generator> = b
        .witnesses(WitnessRule::default())?
        .into_iter()
        .map(|g| Generator {
            k: g.k,
            w: RatVector(g.w.iter().zip(flip).map(|(c, &f)| if f { int(1) - c } else { c.clone() }).collect()),
        })
        .collect();
    Ok((BinarizationPolytope::from_generators(b.u, gens.clone())?, gens))
}

fn check_linearization(b: &BinarizationPolytope, gens: &[Generator]) -> Result<bool, CliError> {
    let (lin, g) = affine_to_linear(b)?;
    let det_ok = determinant(&g.matrix)?.abs() == int(1);
    let cls = lin.classify()?;
    let images: Vec<Generator> = gens.iter().map(|x| Generator { k: x.k, w: g.apply(&x.w) }).collect();
    let refit = BinarizationPolytope::from_generators(b.u, images)?;
    let refit_linear = refit.classify()?.affine.is_some_and(|(_, a0)| a0.is_zero());
    Ok(det_ok && cls.linear && refit_linear && same_set(&refit.body, &lin.body)?)
}

fn affine_to_linear_scenario(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let gens = vec![
        Generator { k: 0, w: RatVector::from_ints(&[1, 0]) },
        Generator { k: 1, w: RatVector::from_ints(&[0, 0]) },
        Generator { k: 2, w: RatVector::from_ints(&[0, 1]) },
    ];
    let b = BinarizationPolytope::from_generators(2, gens.clone())?;
    let (alpha, a0) = b.classify()?.affine.ok_or_else(|| CliError::Usage("example is affine".into()))?;
    r.result("alpha", vec_text(&alpha));
    r.result("alpha0", &a0);
    let (lin, g) = affine_to_linear(&b)?;
    r.result("D", vec_text(&(0..2).map(|j| g.matrix[(j, j)].clone()).collect::<Vec<_>>()));
    r.result("wbar", vec_text(&g.offset));
    let (alpha2, b0) = lin.classify()?.affine.expect("image of an affine polytope is affine");
    r.result("alpha'", vec_text(&alpha2));
    r.result("alpha0'", &b0);
    r.check("example-linearized", check_linearization(&b, &gens)?);

    let mut fixed = true;
    for u in 1..=5 {
        let f = BinarizationPolytope::make(PolytopeKind::Full, u)?;
        let (lin, g) = affine_to_linear(&f)?;
        fixed &= g.offset.is_zero() && g.matrix == RatMatrix::identity(f.q) && same_set(&lin.body, &f.body)?;
    }
    r.check("full-binarization-fixed", fixed);

    let mut g = rng(opts, 1);
    let kinds = [PolytopeKind::Full, PolytopeKind::Unary, PolytopeKind::Log, PolytopeKind::LogPerfect];
    let trials = 30;
    let mut ok = 0;
    for _ in 0..trials {
        let u = g.gen_range(1..=7);
        let b = BinarizationPolytope::make(kinds[g.gen_range(0..kinds.len())], u)?;
        let flip: Vec<bool> = (0..b.q).map(|_| g.gen_bool(0.5)).collect();
        let (fb, gens) = flipped_polytope(&b, &flip)?;
        if fb.classify()?.affine.is_some() && check_linearization(&fb, &gens)? {
            ok += 1;
        }
    }
    r.result("random-flipped-polytopes", format!("{ok}/{trials}"));
    r.check("unit-determinant-and-linear-refit", ok == trials);
    Ok(r)
}

fn perfect_restriction(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let bl = BinarizationPolytope::make(PolytopeKind::Log, 2)?;
    let cls = bl.classify()?;
    r.check("B^L(2)-exact-not-perfect", cls.is_exact && !cls.is_perfect);
    let res = bl.perfect_restriction(WitnessRule::default())?;
    let lp = BinarizationPolytope::make(PolytopeKind::LogPerfect, 2)?;
    r.check("restriction-of-B^L(2)-is-B^L+(2)", same_set(&res.body, &lp.body)?);
    r.check("restriction-is-perfect", res.classify()?.is_perfect);
    r.check("strictly-inside", subset_of(&res.body, &bl.body)? && !subset_of(&bl.body, &res.body)?);

    // x = 5 z4 + z1 + 2 z2 + 4 z3 over [0,7]
    let mut body = HPolyhedron::universe_named(["x", "z1", "z2", "z3", "z4"].iter().map(|s| s.to_string()).collect());
    body.add_eq(RatVector::from_ints(&[1, -1, -2, -4, -5]).0, int(0));
    let b = BinarizationPolytope::from_body(&body, 7)?;
    r.check("example-is-binarization", b.check_membership()?);
    let cls = b.classify()?;
    r.check("example-not-exact", !cls.is_exact);
    let w = b.witnesses(WitnessRule::default())?;
    let free = w.iter().filter(|g| g.k >= 5).all(|g| g.w[3].is_zero());
    r.check("witnesses-for-5-6-7-avoid-z4", free);
    let res = b.perfect_restriction(WitnessRule::default())?;
    let mut z4_zero = b.body.clone();
    z4_zero.add_eq(RatVector::from_ints(&[0, 0, 0, 0, 1]).0, int(0));
    r.check("restriction-equals-z4=0-slice", same_set(&res.body, &z4_zero)?);
    r.check("restriction-perfect-and-strictly-inside", res.classify()?.is_perfect && !subset_of(&b.body, &res.body)?);
    for (k, g) in w.iter().enumerate() {
        r.result(format!("code({k})"), vec_text(&g.w));
    }
    Ok(r)
}

/// Rows of `h` with at least two nonzero coefficients, split into (inequalities, equations).
fn structural_rows(h: &HPolyhedron) -> (usize, usize) {
    let mut ineq = 0;
    let mut eq = 0;
    for row in h.normalized().rows() {
        if row.a.iter().filter(|c| !c.is_zero()).count() < 2 {
            continue;
        }
        if row.is_eq {
            eq += 1;
        } else {
            ineq += 1;
        }
    }
    (ineq, eq)
}

fn knapsack_facets(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let f = superincreasing_knapsack_facets(5, 3);
    let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
    r.result("facets(5, 3)", f.iter().map(|c| c.display(&names)).collect::<Vec<_>>().join("; "));
    r.check("facets(5,3)-is-x2+x3<=1", f == vec![Inequality::le(RatVector::from_ints(&[0, 1, 1]), int(1))]);
    r.check("facets(7,3)-empty", superincreasing_knapsack_facets(7, 3).is_empty());
    r.check("facets(8,3)-empty", superincreasing_knapsack_facets(8, 3).is_empty());

    let mut cover_ok = true;
    for n in 1..=5usize {
        for bbar in 1..(1u64 << n) {
            let pts: Vec<RatVector> = (0..(1u64 << n))
                .filter(|&bits| bits <= bbar)
                .map(|bits| (0..n).map(|j| int(((bits >> j) & 1) as i64)).collect())
                .collect();
            let mut q = HPolyhedron::cube(&vec![int(0); n], &vec![int(1); n]);
            let facets = superincreasing_knapsack_facets(bbar, n);
            cover_ok &= facets.len() < n;
            for c in facets {
                let (a, b) = c.as_le();
                q.add_le(a.0, b);
            }
            cover_ok &= same_set(&q, &hull(&pts)?)?;
        }
    }
    r.check("cover-inequalities-give-knapsack-hull-n<=5", cover_ok);

    let mut sweep_ok = true;
    let mut worst = String::new();
    for u in 1..=64u64 {
        let b = BinarizationPolytope::make(PolytopeKind::LogPerfect, u)?;
        let q = b.q;
        let pts: Vec<RatVector> = (0..=u)
            .map(|k| std::iter::once(int(k as i64)).chain((0..q).map(|j| int(((k >> j) & 1) as i64))).collect())
            .collect();
        let brute = hull(&pts)?;
        let (ineq, eq) = structural_rows(&b.body);
        let ok = same_set(&b.body, &brute)? && eq == 1 && ineq < q.max(1);
        if !ok && worst.is_empty() {
            worst = format!("u = {u}: {ineq} inequalities, {eq} equations");
        }
        sweep_ok &= ok;
    }
    r.result("first-failure", if worst.is_empty() { "none".to_string() } else { worst });
    r.check("B^L+(u)-equals-brute-force-hull-u<=64", sweep_ok);
    Ok(r)
}

fn log_vs_original(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let pent = instance(PENTAGON);
    let p = pent.set()?;
    let e = pent.extended_as(PolytopeKind::Log, false)?;
    let nm = names(&e).to_vec();
    let cuts = [
        ineq(&nm, "z2_1 + z2_2 <= 1")?,
        ineq(&nm, "z2_2 - z1_2 <= 0")?,
        ineq(&nm, "-2 z1_1 + 3 x2 <= 3")?,
        ineq(&nm, "2 x1 + 3 x2 <= 7")?,
    ];
    for (tag, c) in ["11", "12", "13", "14"].iter().zip(&cuts) {
        record_cut(&mut r, tag, &nm, c);
    }
    let c11 = gc_round(&e.ext, &parse_linear("2 z2_1 + 2 z2_2", &nm)?, &int(2))?;
    r.check("cut(11)-gomory-chvatal", c11 == cuts[0]);
    let c12 = gc_round(&e.ext, &parse_linear("4 z2_2 - 4 z1_2", &nm)?, &int(4))?;
    r.check("cut(12)-gomory-chvatal", c12 == cuts[1]);
    r.check("cut(13)-split-z1_2", verify_split_cut(&e.ext.relax, &split(&nm, "z1_2", 0)?, &cuts[2]).valid);
    r.check("cut(14)-split-x1", verify_split_cut(&e.ext.relax, &split(&nm, "x1", 1)?, &cuts[3]).valid);

    let strengthened = with_cuts(&e.ext, &cuts.iter().collect::<Vec<_>>());
    let mut steps: Vec<AggStep> = cuts
        .iter()
        .zip([4, 4, 1, 1])
        .map(|(c, m)| AggStep::new(c.a.clone(), StepRelation::Le, c.rhs.clone(), int(m)))
        .collect();
    steps.push(step(&nm, "x1 - z1_1 - 2 z1_2 = 0", int(-2))?);
    steps.push(step(&nm, "x2 - z2_1 - 2 z2_2 = 0", int(4))?);
    let target = ineq(&nm, "10 x2 <= 14")?;
    let rep = verify_aggregation(&strengthened, &steps, Rounding::None, &int(1), &target, 0)?;
    r.result("combination", rep.aggregated.display(&nm));
    r.check("multipliers-4-4-1-1-give-10x2<=14", rep.valid && rep.aggregated == target);

    let k = 2;
    let fam = integer_family(&e.ext, k, DEFAULT_FAMILY_CAP)?;
    let opt = closure_optimize(&e.ext, &fam, &parse_linear("x2", &nm)?, Sense::Max, DEFAULT_CUT_CAP)?;
    r.result(format!("max x2 over SC(P_L) K={k}"), &opt.value);
    r.check("SC(P_L)-max-x2<=7/5", opt.value <= rat(7, 5));
    let k5 = 5;
    let fam_p = integer_family(&p, k5, DEFAULT_FAMILY_CAP)?;
    let opt_p = closure_optimize(&p, &fam_p, &RatVector::from_ints(&[0, 1]), Sense::Max, DEFAULT_CUT_CAP)?;
    r.result(format!("max x2 over SC(P) K={k5}"), &opt_p.value);
    r.check("SC(P)-max-x2>=3/2", opt_p.value >= rat(3, 2));
    r.check("strict-containment", opt.value < opt_p.value);

    let xbar = vec![rat(5, 4), rat(3, 2)];
    let mem = closure_member(&xbar, &p, &fam_p)?;
    r.membership(format!("membership (5/4, 3/2) in SC(P) K={k5}"), mem.is_member(), k5);
    r.check("(5/4,3/2)-member", mem.is_member());

    // three points whose segments to integer points pass through xbar
    let pts = [vec![int(1), rat(5, 3)], vec![rat(3, 2), int(2)], vec![rat(5, 3), rat(5, 3)]];
    let partners = [vec![int(2), int(1)], vec![int(1), int(1)], vec![int(0), int(1)]];
    let lambdas = [rat(3, 4), rat(1, 2), rat(3, 4)];
    let mut geometry = true;
    for i in 0..3 {
        let mix: Vec<Rational> = (0..2)
            .map(|j| &lambdas[i] * &pts[i][j] + (int(1) - &lambdas[i]) * &partners[i][j])
            .collect();
        geometry &= mix == xbar && p.relax.contains(&pts[i]);
    }
    r.check("three-points-in-P-and-on-segments", geometry);
    let through = fam_p.containing(&xbar);
    let mut literal = 0;
    let mut argument = true;
    for s in &through {
        if pts.iter().all(|q| s.contains(q)) {
            literal += 1;
        }
        // a point outside S and its integer partner put xbar in conv(P \ S)
        argument &= pts.iter().any(|q| !s.contains(q));
    }
    r.result("splits-through-xbar", through.len());
    r.result("splits-containing-all-three-points", literal);
    r.check("three-point-argument", argument && !through.is_empty());
    Ok(r)
}

fn single_split_dominance(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let kinds = [PolytopeKind::Full, PolytopeKind::Unary, PolytopeKind::Log, PolytopeKind::LogPerfect];
    let mut g = rng(opts, 2);
    let trials = 50;
    let mut ok = 0;
    for _ in 0..trials {
        let u = g.gen_range(1..=3);
        let p = random_planar(&mut g, u);
        let kind = kinds[g.gen_range(0..kinds.len())];
        let e = extend(&p, &BinarizationScheme::uniform(kind, &[u, u])?, false)?;
        let i = g.gen_range(0..2);
        let blk = e.blocks[i].clone();
        let mut pi = vec![0i64; e.dim()];
        while pi.iter().all(|&c| c == 0) {
            for j in blk.clone() {
                pi[j] = g.gen_range(-2..=2);
            }
        }
        let wit = e.scheme.polytopes[i].witnesses(WitnessRule::default())?;
        let vals: Vec<i64> = wit
            .iter()
            .map(|w| blk.clone().zip(w.w.iter()).map(|(j, c)| if c.is_zero() { 0 } else { pi[j] }).sum())
            .collect();
        let pi0 = g.gen_range(vals.iter().min().unwrap() - 1..=*vals.iter().max().unwrap());
        let s = SplitSet::from_ints(&pi, pi0)?;
        // s: the largest value whose code lies on the same side as the code of 0
        let first = vals[0] <= pi0;
        let t = (0..wit.len()).filter(|&t| (vals[t] <= pi0) == first).max().unwrap_or(0) as i64;
        let mut e1 = vec![0i64; 2];
        e1[i] = 1;
        let orig = SplitSet::from_ints(&e1, t)?;
        let small = piece_vertices(&p.relax, &orig)?;
        let big = piece_vertices(&e.ext.relax, &s)?;
        let contained = if big.is_empty() {
            small.is_empty()
        } else {
            let proj = e.project_x(&hull(&big)?)?;
            small.iter().all(|v| proj.contains(v))
        };
        if contained {
            ok += 1;
        }
    }
    r.result("random-single-block-splits", format!("{ok}/{trials}"));
    r.check("proj(conv(P_B minus S))-contains-conv(P minus S')", ok == trials);
    Ok(r)
}

fn single_split_hull(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let seg = instance(SEGMENT);
    let p = seg.set()?;
    let e = seg.extended(None, false)?.expect("segment declares a scheme");
    let nm = names(&e).to_vec();
    let s = split(&nm, "x2 - z1_2", 0)?;
    r.result("split", s.display(&nm));
    let pts = piece_vertices(&e.ext.relax, &s)?;
    let xs: Vec<RatVector> = pts.iter().map(|v| e.x_part(v)).collect();
    let got = if xs.is_empty() { None } else { Some(hull(&xs)?) };
    let target = hull(&[RatVector::from_ints(&[1, 1])])?;
    let ok = match &got {
        Some(h) => same_set(h, &target)?,
        None => false,
    };
    let mut uniq = xs.clone();
    uniq.sort_by(|a, b| a.0.cmp(&b.0));
    uniq.dedup();
    r.result("proj_x(conv(P_B minus S)) vertices", uniq.iter().map(|v| vec_text(v)).collect::<Vec<_>>().join(" "));
    r.check("single-split-gives-(1,1)", ok);
    let ih = mixed_integer_hull(&p, DEFAULT_ENUMERATION_CAP)?;
    r.check("integer-hull-is-(1,1)", ih.vertices == vec![RatVector::from_ints(&[1, 1])]);
    // no split of the original space does the same
    let fam = integer_family(&p, 3, DEFAULT_FAMILY_CAP)?;
    let mut none = true;
    for s in fam.iter() {
        let v = piece_vertices(&p.relax, &s)?;
        if !v.is_empty() && same_set(&hull(&v)?, &target)? {
            none = false;
        }
    }
    r.check("no-original-split-K<=3-gives-(1,1)", none);
    Ok(r)
}

fn full_unary_trial(g: &mut ChaCha8Rng) -> Result<bool, CliError> {
    let u = g.gen_range(1..=3);
    let p = random_planar(g, u);
    let ef = extend(&p, &BinarizationScheme::uniform(PolytopeKind::Full, &[u, u])?, true)?;
    let eu = extend(&p, &BinarizationScheme::uniform(PolytopeKind::Unary, &[u, u])?, true)?;
    let bf = BinarizationPolytope::make(PolytopeKind::Full, u)?;
    let bu = BinarizationPolytope::make(PolytopeKind::Unary, u)?;
    let fu = unimodular_map(&bf, &bu)?;
    let uf = unimodular_map(&bu, &bf)?;
    let f_to_u = ef.block_map(&eu, &[fu.clone(), fu])?;
    let u_to_f = eu.block_map(&ef, &[uf.clone(), uf])?;
    let fam_f = enumerate_family(&z_support(&ef), 1, &ef.ext.relax, DEFAULT_FAMILY_CAP)?;
    let fam_u = enumerate_family(&z_support(&eu), 1, &eu.ext.relax, DEFAULT_FAMILY_CAP)?;
    let aug_f = augment_family_with_preimages(&f_to_u, &fam_u, &fam_f)?;
    let aug_u = augment_family_with_preimages(&u_to_f, &fam_f, &fam_u)?;
    let cf = closure_hrep(&ef.ext, &aug_f, DEFAULT_CUT_CAP)?;
    let cu = closure_hrep(&eu.ext, &aug_u, DEFAULT_CUT_CAP)?;
    Ok(same_set(&ef.project_x(&cf)?, &eu.project_x(&cu)?)?)
}

fn affine_map_trial(g: &mut ChaCha8Rng) -> Result<bool, CliError> {
    let u = g.gen_range(1..=3);
    let p = random_planar(g, u);
    let rows: Vec<Vec<i64>> = (0..2)
        .map(|_| loop {
            let row = vec![g.gen_range(-2..=2), g.gen_range(-2..=2)];
            if row != [0, 0] {
                break row;
            }
        })
        .collect();
    let lin = RatMatrix::from_int_rows(&rows)?;
    let image = vertices(&p.relax)?
        .vertices
        .iter()
        .map(|v| lin.mul_vec(v))
        .collect::<Result<Vec<_>, _>>()?;
    let lo: Vec<Rational> = (0..2).map(|j| image.iter().map(|v| v[j].floor()).min().unwrap()).collect();
    let lo = RatVector(lo);
    let f = IntAffineMap::new(lin, lo.iter().map(|l| -l).collect())?;
    let shifted: Vec<RatVector> = image.iter().map(|v| v.sub(&lo)).collect();
    let ub: Vec<u64> = (0..2)
        .map(|j| {
            let top = shifted.iter().map(|v| v[j].ceil()).max().unwrap();
            u64::try_from(top.to_integer()).expect("shifted image is nonnegative")
        })
        .collect();
    let q = MixedIntegerSet::new(hull(&shifted)?, vec![0, 1], ub)?;
    let fam_q = integer_family(&q, 2, DEFAULT_FAMILY_CAP)?;
    let fam_p = integer_family(&p, 1, DEFAULT_FAMILY_CAP)?;
    let aug = augment_family_with_preimages(&f, &fam_q, &fam_p)?;
    let cp = closure_hrep(&p, &aug, DEFAULT_CUT_CAP)?;
    let cq = closure_hrep(&q, &fam_q, DEFAULT_CUT_CAP)?;
    Ok(vertices(&cp)?.vertices.iter().all(|v| cq.contains(&f.apply(v))))
}

fn unimodular_maps(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let mut gen_ok = true;
    for u in 1..=6 {
        let f = BinarizationPolytope::make(PolytopeKind::Full, u)?;
        let un = BinarizationPolytope::make(PolytopeKind::Unary, u)?;
        for (b, c) in [(&f, &un), (&un, &f)] {
            let m = unimodular_map(b, c)?;
            let src = b.witnesses(WitnessRule::default())?;
            let dst = c.witnesses(WitnessRule::default())?;
            gen_ok &= m.matrix.is_integral() && m.offset.is_integral();
            gen_ok &= src.iter().zip(&dst).all(|(s, d)| s.k == d.k && m.apply(&s.w) == d.w);
        }
    }
    r.check("full<->unary-generators-map-onto-generators-u<=6", gen_ok);
    let bu2 = BinarizationPolytope::make(PolytopeKind::Unary, 2)?;
    let bf2 = BinarizationPolytope::make(PolytopeKind::Full, 2)?;
    let m = unimodular_map(&bu2, &bf2)?;
    r.result("unary(2)->full(2)", format!(
            "V = [{}], v = {}",
            m.matrix.row_vectors().iter().map(|row| vec_text(row)).collect::<Vec<_>>().join("; "),
            vec_text(&m.offset)
        ));
    let bf3 = BinarizationPolytope::make(PolytopeKind::Full, 3)?;
    let bl3 = BinarizationPolytope::make(PolytopeKind::LogPerfect, 3)?;
    let m = unimodular_map(&bf3, &bl3)?;
    let images: Vec<RatVector> = (0..3).map(|j| m.apply(&RatVector::unit(3, j))).collect();
    r.result("full(3)->logplus(3) images of e1 e2 e3", images.iter().map(|v| vec_text(v)).collect::<Vec<_>>().join(" "));
    r.check(
        "full(3)->logplus(3)",
        images == vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[0, 1]), RatVector::from_ints(&[1, 1])],
    );

    let mut g = rng(opts, 3);
    let mut agree = 0;
    let seeds = 20;
    for _ in 0..seeds {
        if full_unary_trial(&mut g)? {
            agree += 1;
        }
    }
    r.result("full-vs-unary-projected-closures-agree", format!("{agree}/{seeds}"));
    r.check("projected-closures-identical", agree == seeds);
    let mut g = rng(opts, 4);
    let mut mapped = 0;
    for _ in 0..seeds {
        if affine_map_trial(&mut g)? {
            mapped += 1;
        }
    }
    r.result("affine-maps-with-closure-vertices-mapped-inside", format!("{mapped}/{seeds}"));
    r.check("closure-vertices-map-into-closure", mapped == seeds);
    Ok(r)
}

fn logplus_vs_log(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let kite = instance(KITE);
    let lp = kite.extended_as(PolytopeKind::LogPerfect, false)?;
    let lg = kite.extended_as(PolytopeKind::Log, false)?;
    let nm = names(&lp).to_vec();
    let c15 = ineq(&nm, "z1_1 + z1_2 + z2_2 <= 1")?;
    let c16 = ineq(&nm, "z1_2 + z2_1 + z2_2 <= 1")?;
    record_cut(&mut r, "15", &nm, &c15);
    record_cut(&mut r, "16", &nm, &c16);
    r.check("cut(15)-split-z2_2", verify_split_cut(&lp.ext.relax, &split(&nm, "z2_2", 0)?, &c15).valid);
    r.check("cut(16)-split-z1_2", verify_split_cut(&lp.ext.relax, &split(&nm, "z1_2", 0)?, &c16).valid);
    let steps = vec![
        AggStep::new(c15.a.clone(), StepRelation::Le, int(1), int(1)),
        AggStep::new(c16.a.clone(), StepRelation::Le, int(1), int(1)),
        step(&nm, "x1 - z1_1 - 2 z1_2 = 0", int(1))?,
        step(&nm, "x2 - z2_1 - 2 z2_2 = 0", int(1))?,
    ];
    let target = ineq(&nm, "x1 + x2 <= 2")?;
    let rep = verify_aggregation(&with_cuts(&lp.ext, &[&c15, &c16]), &steps, Rounding::None, &int(1), &target, 0)?;
    r.result("sum", rep.aggregated.display(&nm));
    r.check("sum-is-x1+x2<=2", rep.valid && rep.aggregated == target);

    let xbar = [rat(6, 5), rat(6, 5)];
    let k1 = 1;
    let fam_lp = integer_family(&lp.ext, k1, DEFAULT_FAMILY_CAP)?;
    let pm = closure_project_member(&xbar, &[0, 1], &lp.ext, &fam_lp, DEFAULT_CUT_CAP)?;
    r.membership(format!("membership (6/5, 6/5) in proj SC(P_L+) K={k1}"), pm.is_member(), k1);
    r.check("(6/5,6/5)-cut-from-P_L+", !pm.is_member());

    let k = 2;
    let fam_l = integer_family(&lg.ext, k, DEFAULT_FAMILY_CAP)?;
    let pbar = RatVector(vec![rat(6, 5), rat(6, 5), rat(2, 5), rat(2, 5), rat(2, 5), rat(2, 5)]);
    r.check("lifted-point-in-P_L", lg.ext.relax.contains(&pbar));
    let mem = closure_member(&pbar, &lg.ext, &fam_l)?;
    r.membership(format!("membership (6/5, 6/5, 2/5, 2/5, 2/5, 2/5) in SC(P_L) K={k}"), mem.is_member(), k);
    if let ClosureMembership::NonMember { split: Some(s), separator } = &mem {
        r.result("separator", format!("{} from {}", separator.display(names(&lg)), s.display(names(&lg))));
        r.note("the separator is a certified split cut, so the lift (2/5, 2/5, 2/5, 2/5) of (6/5, 6/5) is not in SC(P_L)");
    }
    r.check("lifted-point-member", mem.is_member());

    let pl = closure_project_member(&xbar, &[0, 1], &lg.ext, &fam_l, DEFAULT_CUT_CAP)?;
    r.membership(format!("membership (6/5, 6/5) in proj SC(P_L) K={k}"), pl.is_member(), k);
    if let ProjectedMembership::Member { point, .. } = &pl {
        r.result("lift", vec_text(point));
    }
    r.check("(6/5,6/5)-kept-by-P_L", pl.is_member());
    Ok(r)
}

fn unary_vs_logplus(_: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let bins = instance(THREE_BINS);
    let e = bins.extended(None, false)?.expect("three-bins declares a scheme");
    let nm = names(&e).to_vec();
    let mut derived = Vec::new();
    for (tag, i) in [("17", 1), ("18", 2)] {
        let steps = vec![
            step(&nm, &format!("4 y{i} - x{i} >= 0"), int(1))?,
            step(&nm, &format!("x{i} - z{i}_1 - 2 z{i}_2 - 3 z{i}_3 = 0"), int(1))?,
            step(&nm, &format!("z{i}_1 + z{i}_2 + z{i}_3 <= 1"), int(-3))?,
            step(&nm, &format!("z{i}_2 >= 0"), int(1))?,
            step(&nm, &format!("z{i}_3 >= 0"), int(2))?,
        ];
        let target = ineq(&nm, &format!("y{i} - z{i}_1 - z{i}_2 - z{i}_3 >= 0"))?;
        let rep = verify_aggregation(&e.ext, &steps, Rounding::Rhs, &int(4), &target, 0)?;
        r.result(format!("aggregated({tag})"), rep.aggregated.display(&nm));
        record_cut(&mut r, tag, &nm, &rep.derived);
        r.check(format!("cut({tag})-chvatal-gomory"), rep.valid);
        derived.push(target);
    }
    let steps = vec![
        step(&nm, "x3 <= 3", rat(-1, 12))?,
        step(&nm, "x1 + x2 + x3 = 4", rat(1, 3))?,
        step(&nm, "4 y3 - x3 >= 0", rat(1, 4))?,
        step(&nm, "-x1 + z1_1 + 2 z1_2 + 3 z1_3 = 0", rat(1, 3))?,
        step(&nm, "-x2 + z2_1 + 2 z2_2 + 3 z2_3 = 0", rat(1, 3))?,
    ];
    let target = ineq(&nm, "y3 + z1_1 + z1_2 + z1_3 + z2_1 + z2_2 + z2_3 >= 2")?;
    let rep = verify_aggregation(&e.ext, &steps, Rounding::CoeffsAndRhs, &int(1), &target, 10_000_000)?;
    r.result("aggregated(19)", rep.aggregated.display(&nm));
    record_cut(&mut r, "19", &nm, &rep.derived);
    r.check("cut(19)-rounded", rep.valid);
    r.check("cut(19)-holds-at-every-integer-point", rep.enumeration_check == Some(true));
    derived.push(target);

    let steps: Vec<AggStep> = derived
        .iter()
        .map(|c| AggStep::new(c.a.clone(), StepRelation::Ge, c.rhs.clone(), int(1)))
        .collect();
    let sum_target = ineq(&nm, "y1 + y2 + y3 >= 2")?;
    let refs: Vec<&Inequality> = derived.iter().collect();
    let rep = verify_aggregation(&with_cuts(&e.ext, &refs), &steps, Rounding::None, &int(1), &sum_target, 0)?;
    r.result("sum", rep.aggregated.display(&nm));
    r.check("sum-is-y1+y2+y3>=2", rep.valid && rep.aggregated == sum_target);
    let xy = [rat(3, 2), int(1), rat(3, 2), rat(1, 2), rat(1, 2), rat(1, 2)];
    let mut padded = xy.to_vec();
    padded.resize(e.dim(), int(0));
    r.check("ybar-violates-sum", !sum_target.holds_at(&padded));
    r.membership("membership (xbar, ybar) in proj SC(P_U)", false, 1);

    let lp = bins.extended_as(PolytopeKind::LogPerfect, false)?;
    let k = 1;
    let fam = integer_family(&lp.ext, k, DEFAULT_FAMILY_CAP)?;
    let mut p = xy.to_vec();
    p.extend([rat(1, 2), rat(1, 2), int(0), rat(1, 2), rat(1, 2), rat(1, 2)]);
    r.check("lifted-point-in-P_L+", lp.ext.relax.contains(&p));
    let mem = closure_member(&p, &lp.ext, &fam)?;
    r.membership(format!("membership lifted point in SC(P_L+) K={k}"), mem.is_member(), k);
    r.check("lifted-point-member", mem.is_member());
    Ok(r)
}

fn bb_corner_cut(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let n = opts.n;
    if n == 0 || n > MAX_CORNER_N {
        return Err(CliError::Usage(format!("--n must be in 1..={MAX_CORNER_N}")));
    }
    let p = build_corner_cut(n)?;
    if n == 1 {
        let v = vertices(&p.relax)?.sorted();
        r.result("P^1", v.iter().map(|x| vec_text(x)).collect::<Vec<_>>().join(" "));
        r.check("P^1-is-[1/2,7/2]", v == vec![RatVector(vec![rat(1, 2)]), RatVector(vec![rat(7, 2)])]);
    }
    let (_, tree) = build_bbt1_tree(n)?;
    r.result("tree-size", tree.leaf_count());
    r.check("tree-size-is-2^n+n", tree.leaf_count() == (1 << n) + n);
    if n <= 2 {
        let st = leaf_statuses_projected(&tree, &p)?;
        let count = |label: &str| st.iter().filter(|(_, s)| s.label() == label).count();
        r.result("leaves empty/contained/violating", format!("{}/{}/{}", count("empty"), count("contained"), count("violating")));
        r.check("complete", check_complete_projected(&tree, &p)?);
        let best = min_complete_tree_size(&p, DEFAULT_BOX_CAP)?;
        let bound = 2 * (1usize << n) - 1;
        r.result("min-complete-tree-size-original-space", best);
        r.check(format!("original-space-minimum>={bound}"), best >= bound);
    } else {
        r.note(format!("completeness and the exhaustive minimum are run for n <= 2 only; n = {n}"));
    }
    Ok(r)
}

fn one_line(t: &BBTree) -> String {
    t.to_string().lines().map(str::trim).collect::<Vec<_>>().join(" / ")
}

fn unary_tree_translate(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let mut g = rng(opts, 5);
    let trials = 20;
    let mut verified = 0;
    let mut complete = 0;
    let mut preserved = true;
    for _ in 0..trials {
        let n = g.gen_range(1..=2);
        let p = build_corner_cut(n)?;
        let e = extend(&p, &BinarizationScheme::uniform(PolytopeKind::Unary, &p.upper_bounds)?, false)?;
        let zs = z_support(&e);
        let mut t = BBTree::new(e.ext.clone());
        for _ in 0..g.gen_range(1..=8) {
            let leaves = t.leaves();
            let leaf = leaves[g.gen_range(0..leaves.len())];
            let fixed: Vec<usize> = t.node_box(leaf).iter().filter(|b| b.1 == b.2).map(|b| b.0).collect();
            let free: Vec<usize> = zs.iter().copied().filter(|z| !fixed.contains(z)).collect();
            if !free.is_empty() {
                t.branch(leaf, free[g.gen_range(0..free.len())], 0)?;
            }
        }
        let tr = translate_unary_tree(&t, &e, &p)?;
        if tr.leaf_count() == t.leaf_count() && verify_translation(&t, &tr, &e)?.iter().all(|&b| b) {
            verified += 1;
        }
        if check_complete_projected(&t, &p)? {
            complete += 1;
            preserved &= check_complete(&tr)?;
        }
    }
    r.result("random-trees-translated", format!("{verified}/{trials}"));
    r.result("complete-random-trees", complete);
    r.check("leafwise-containment", verified == trials);

    let p = build_corner_cut(1)?;
    let e = extend(&p, &BinarizationScheme::uniform(PolytopeKind::Unary, &[4])?, false)?;
    let mut t = BBTree::new(e.ext.clone());
    let z = |j: usize| e.blocks[0].start + j - 1;
    let (_, right) = t.branch(0, z(1), 0)?;
    t.branch(right, z(4), 0)?;
    let tr = translate_unary_tree(&t, &e, &p)?;
    r.result("unary-tree", one_line(&t));
    r.result("translated", one_line(&tr));
    preserved &= check_complete_projected(&t, &p)? && check_complete(&tr)?;
    r.check("completeness-preserved", preserved);
    Ok(r)
}

fn round_trip(g: &mut ChaCha8Rng) -> Result<bool, CliError> {
    let dim = g.gen_range(1..=3);
    let n = g.gen_range(1..=8);
    let pts: Vec<RatVector> = (0..n)
        .map(|_| RatVector((0..dim).map(|_| rat(g.gen_range(-6..=6), g.gen_range(1..=2))).collect()))
        .collect();
    let h = hull(&pts)?;
    let v = vertices(&h)?.vertices;
    Ok(pts.iter().all(|p| h.contains(p)) && v.iter().all(|w| pts.contains(w)) && same_set(&hull(&v)?, &h)?)
}

/// `None` when the point is a member; otherwise whether the separator is a valid split cut that cuts it.
fn separator_check(g: &mut ChaCha8Rng) -> Result<Option<bool>, CliError> {
    let u = g.gen_range(1..=3);
    let p = random_planar(g, u);
    let fam = integer_family(&p, 1, DEFAULT_FAMILY_CAP)?;
    let verts = vertices(&p.relax)?.vertices;
    let bary: Vec<Rational> = (0..2)
        .map(|j| verts.iter().map(|v| v[j].clone()).sum::<Rational>() / int(verts.len() as i64))
        .collect();
    let a = &verts[g.gen_range(0..verts.len())];
    let b = &verts[g.gen_range(0..verts.len())];
    let (la, lb) = (rat(g.gen_range(0..=4), 8), rat(g.gen_range(0..=4), 8));
    let pt: Vec<Rational> = (0..2).map(|j| &la * &a[j] + &lb * &b[j] + (int(1) - &la - &lb) * &bary[j]).collect();
    Ok(match closure_member(&pt, &p, &fam)? {
        ClosureMembership::Member { .. } => None,
        ClosureMembership::NonMember { split, separator } => Some(
            !separator.holds_at(&pt) && split.is_some_and(|s| verify_split_cut(&p.relax, &s, &separator).valid),
        ),
    })
}

fn monotone(g: &mut ChaCha8Rng) -> Result<bool, CliError> {
    let u = g.gen_range(1..=3);
    let p = random_planar(g, u);
    let f1 = integer_family(&p, 1, DEFAULT_FAMILY_CAP)?;
    let f2 = integer_family(&p, 2, DEFAULT_FAMILY_CAP)?;
    let f0 = SplitFamily::empty(2).with_extra(f1.iter().step_by(2).collect::<Vec<_>>());
    let c0 = closure_hrep(&p, &f0, DEFAULT_CUT_CAP)?;
    let c1 = closure_hrep(&p, &f1, DEFAULT_CUT_CAP)?;
    let c2 = closure_hrep(&p, &f2, DEFAULT_CUT_CAP)?;
    Ok(subset_of(&c1, &c0)? && subset_of(&c2, &c1)? && subset_of(&c0, &p.relax)?)
}

fn invariants(opts: &ScenarioOpts) -> Result<Report, CliError> {
    let mut r = Report::new("");
    let n = INVARIANT_SEEDS;
    let mut g = rng(opts, 10);
    let mut ok = 0;
    for _ in 0..n {
        ok += u64::from(round_trip(&mut g)?);
    }
    r.result("hull-vertices-round-trips", format!("{ok}/{n}"));
    r.check("hull-vertices-round-trip", ok == n);
    let mut g = rng(opts, 11);
    let (mut certified, mut valid) = (0, 0);
    for _ in 0..n {
        if let Some(v) = separator_check(&mut g)? {
            certified += 1;
            valid += u64::from(v);
        }
    }
    r.result("separators-re-verified", format!("{valid}/{certified}"));
    r.check("separators-are-split-cuts", valid == certified && certified > 0);
    let mut g = rng(opts, 12);
    let mut ok = 0;
    for _ in 0..n {
        ok += u64::from(monotone(&mut g)?);
    }
    r.result("nested-families", format!("{ok}/{n}"));
    r.check("larger-families-give-smaller-closures", ok == n);
    Ok(r)
}

/// Family used by `closure` subcommands: integer variables, or `support` if given.
pub fn family_for(m: &MixedIntegerSet, k: u32, support: Option<&[usize]>) -> Result<SplitFamily, CliError> {
    Ok(match support {
        Some(s) => enumerate_family(s, k, &m.relax, DEFAULT_FAMILY_CAP)?,
        None => integer_family(m, k, DEFAULT_FAMILY_CAP)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_instances_parse() {
        for text in [PENTAGON, KITE, THREE_BINS, STRIP, SEGMENT] {
            let inst = Instance::parse(text).unwrap();
            inst.set().unwrap();
            assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(run_scenario("nope", &ScenarioOpts::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn corner_cut_n2() {
        let rep = run_scenario("bb-corner-cut", &ScenarioOpts::default()).unwrap();
        assert_eq!(rep.get("tree-size"), Some("6"));
        assert_eq!(rep.check_named("complete"), Some(true));
        assert!(rep.passed(), "{rep}");
    }
}
