//! Line-based instance files.
//!
//! ```text
//! vars x1 x2
//! int x1 x2
//! bound x1 0 2
//! bound x2 0 2
//! row 2 1 <= 5
//! row -2 3 <= 3
//! scheme log
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;

use binext::binarization::{BinarizationPolytope, BinarizationScheme, PolytopeKind};
use binext::extension::{extend_targets, ExtendedSet};
use binext::kernel::{parse_rational, Rational};
use binext::polyhedra::{HPolyhedron, MixedIntegerSet};
use num_traits::{One, Signed, Zero};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

impl Rel {
    pub fn parse(s: &str) -> Option<Rel> {
        match s {
            "<=" => Some(Rel::Le),
            ">=" => Some(Rel::Ge),
            "=" => Some(Rel::Eq),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub a: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeDecl {
    /// One kind for every integer variable.
    Uniform(PolytopeKind),
    /// `(variable, kind)` pairs; unlisted integer variables stay unbinarized.
    PerVar(Vec<(usize, PolytopeKind)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    pub source: Option<String>,
    pub vars: Vec<String>,
    /// Integer variables in declaration order.
    pub ints: Vec<usize>,
    pub bounds: Vec<Option<(Rational, Rational)>>,
    pub rows: Vec<Row>,
    pub scheme: Option<SchemeDecl>,
}

struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { col: s + 1, text: &line[s..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { col: s + 1, text: &line[s..] });
    }
    out
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance, ParseError> {
        let mut inst = Instance {
            name: None,
            source: None,
            vars: Vec::new(),
            ints: Vec::new(),
            bounds: Vec::new(),
            rows: Vec::new(),
            scheme: None,
        };
        let mut int_lines: Vec<(usize, usize)> = Vec::new();
        let mut last_line = 0;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            last_line = ln;
            let line = raw.split('#').next().unwrap_or("");
            let toks = tokens(line);
            let Some(head) = toks.first() else { continue };
            let err = |col: usize, msg: String| ParseError { line: ln, col, msg };
            let args = &toks[1..];
            if head.text != "vars" && inst.vars.is_empty() {
                return Err(err(head.col, format!("`{}` before `vars`", head.text)));
            }
            let var = |t: &Tok| -> Result<usize, ParseError> {
                inst.vars
                    .iter()
                    .position(|v| v == t.text)
                    .ok_or_else(|| err(t.col, format!("unknown variable `{}`", t.text)))
            };
            let rat = |t: &Tok| parse_rational(t.text).map_err(|_| err(t.col, format!("bad rational `{}`", t.text)));
            match head.text {
                "vars" => {
                    if !inst.vars.is_empty() {
                        return Err(err(head.col, "`vars` given twice".into()));
                    }
                    if args.is_empty() {
                        return Err(err(head.col + 4, "empty variable list".into()));
                    }
                    for t in args {
                        if !is_name(t.text) {
                            return Err(err(t.col, format!("bad variable name `{}`", t.text)));
                        }
                        if inst.vars.iter().any(|v| v == t.text) {
                            return Err(err(t.col, format!("variable `{}` declared twice", t.text)));
                        }
                        inst.vars.push(t.text.to_string());
                    }
                    inst.bounds = vec![None; inst.vars.len()];
                }
                "int" => {
                    if args.is_empty() {
                        return Err(err(head.col + 3, "empty integer list".into()));
                    }
                    for t in args {
                        let j = var(t)?;
                        if !inst.ints.contains(&j) {
                            inst.ints.push(j);
                            int_lines.push((ln, t.col));
                        }
                    }
                }
                "bound" => {
                    if args.len() != 3 {
                        return Err(err(head.col, "expected `bound <name> <lo> <hi>`".into()));
                    }
                    let j = var(&args[0])?;
                    let (lo, hi) = (rat(&args[1])?, rat(&args[2])?);
                    if lo > hi {
                        return Err(err(args[2].col, format!("empty bound interval [{lo}, {hi}]")));
                    }
                    inst.bounds[j] = Some((lo, hi));
                }
                "row" => {
                    let n = inst.vars.len();
                    if args.len() != n + 2 {
                        let col = args
                            .iter()
                            .find(|t| Rel::parse(t.text).is_some())
                            .or(args.last())
                            .map_or(head.col, |t| t.col);
                        return Err(err(col, format!("expected {n} coefficients, a relation and a right-hand side")));
                    }
                    let a = args[..n].iter().map(rat).collect::<Result<Vec<_>, _>>()?;
                    let rel = Rel::parse(args[n].text)
                        .ok_or_else(|| err(args[n].col, format!("expected <=, >= or =, found `{}`", args[n].text)))?;
                    let rhs = rat(&args[n + 1])?;
                    inst.rows.push(Row { a, rel, rhs });
                }
                "scheme" => {
                    let kind = |t: &Tok| t.text.parse::<PolytopeKind>().map_err(|e| err(t.col, e.to_string()));
                    match args {
                        [k] => {
                            if inst.scheme.is_some() {
                                return Err(err(head.col, "scheme given twice".into()));
                            }
                            inst.scheme = Some(SchemeDecl::Uniform(kind(k)?));
                        }
                        [v, k] => {
                            let j = var(v)?;
                            let k = kind(k)?;
                            match &mut inst.scheme {
                                None => inst.scheme = Some(SchemeDecl::PerVar(vec![(j, k)])),
                                Some(SchemeDecl::PerVar(list)) if !list.iter().any(|(i, _)| *i == j) => list.push((j, k)),
                                _ => return Err(err(v.col, format!("conflicting scheme for `{}`", v.text))),
                            }
                        }
                        _ => return Err(err(head.col, "expected `scheme <kind>` or `scheme <name> <kind>`".into())),
                    }
                }
                other => return Err(err(head.col, format!("unknown directive `{other}`"))),
            }
        }
        if inst.vars.is_empty() {
            return Err(ParseError {
                line: last_line.max(1),
                col: 1,
                msg: "no `vars` line".into(),
            });
        }
        for (&j, &(ln, col)) in inst.ints.iter().zip(&int_lines) {
            let err = |msg: String| ParseError { line: ln, col, msg };
            match &inst.bounds[j] {
                None => return Err(err(format!("integer variable `{}` needs a bound", inst.vars[j]))),
                Some((lo, hi)) => {
                    if !lo.is_zero() || !hi.is_integer() || hi.is_negative() {
                        return Err(err(format!(
                            "integer variable `{}` needs bounds 0 and a nonnegative integer",
                            inst.vars[j]
                        )));
                    }
                }
            }
        }
        if let Some(SchemeDecl::PerVar(list)) = &inst.scheme {
            if let Some((j, _)) = list.iter().find(|(j, _)| !inst.ints.contains(j)) {
                return Err(ParseError {
                    line: last_line,
                    col: 1,
                    msg: format!("scheme on continuous variable `{}`", inst.vars[*j]),
                });
            }
        }
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Instance, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let mut inst = Instance::parse(&text).map_err(|e| CliError::Parse(format!("{}:{e}", path.display())))?;
        inst.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        inst.source = Some(path.display().to_string());
        Ok(inst)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vars {}", self.vars.join(" "));
        if !self.ints.is_empty() {
            let names: Vec<&str> = self.ints.iter().map(|&j| self.vars[j].as_str()).collect();
            let _ = writeln!(s, "int {}", names.join(" "));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let Some((lo, hi)) = b {
                let _ = writeln!(s, "bound {} {lo} {hi}", self.vars[j]);
            }
        }
        for r in &self.rows {
            let a: Vec<String> = r.a.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "row {} {} {}", a.join(" "), r.rel.symbol(), r.rhs);
        }
        match &self.scheme {
            None => {}
            Some(SchemeDecl::Uniform(k)) => {
                let _ = writeln!(s, "scheme {k}");
            }
            Some(SchemeDecl::PerVar(list)) => {
                for (j, k) in list {
                    let _ = writeln!(s, "scheme {} {k}", self.vars[*j]);
                }
            }
        }
        s
    }

    pub fn upper(&self, j: usize) -> u64 {
        let (_, hi) = self.bounds[j].as_ref().expect("integer variables are bounded");
        hi.to_integer().try_into().expect("bound fits in u64")
    }

    pub fn set(&self) -> Result<MixedIntegerSet, CliError> {
        let n = self.vars.len();
        let mut h = HPolyhedron::universe_named(self.vars.clone());
        for r in &self.rows {
            match r.rel {
                Rel::Le => h.add_le(r.a.clone(), r.rhs.clone()),
                Rel::Ge => h.add_ge(r.a.clone(), r.rhs.clone()),
                Rel::Eq => h.add_eq(r.a.clone(), r.rhs.clone()),
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if self.ints.contains(&j) {
                continue;
            }
            if let Some((lo, hi)) = b {
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                h.add_ge(e.clone(), lo.clone());
                h.add_le(e, hi.clone());
            }
        }
        let ub = self.ints.iter().map(|&j| self.upper(j)).collect();
        Ok(MixedIntegerSet::new(h, self.ints.clone(), ub)?)
    }

    /// Binarized variables with their kinds, in integer-declaration order.
    pub fn scheme_targets(&self, fallback: Option<PolytopeKind>) -> Vec<(usize, PolytopeKind)> {
        let uniform = fallback.or(match &self.scheme {
            Some(SchemeDecl::Uniform(k)) => Some(*k),
            _ => None,
        });
        match (uniform, &self.scheme) {
            (Some(k), _) => self.ints.iter().map(|&j| (j, k)).collect(),
            (None, Some(SchemeDecl::PerVar(list))) => self
                .ints
                .iter()
                .filter_map(|j| list.iter().find(|(i, _)| i == j).copied())
                .collect(),
            _ => Vec::new(),
        }
    }

    /// `P_B` for the declared scheme, or for `kind` on every integer variable.
    pub fn extended(&self, kind: Option<PolytopeKind>, drop_original_integrality: bool) -> Result<Option<ExtendedSet>, CliError> {
        let targets = self.scheme_targets(kind);
        if targets.is_empty() {
            return Ok(None);
        }
        self.build_extension(&targets, drop_original_integrality).map(Some)
    }

    /// Same binarized variables as declared (all integer variables if none are), all of `kind`.
    pub fn extended_as(&self, kind: PolytopeKind, drop_original_integrality: bool) -> Result<ExtendedSet, CliError> {
        let mut targets = self.scheme_targets(None);
        if targets.is_empty() {
            targets = self.scheme_targets(Some(kind));
        }
        let targets: Vec<_> = targets.into_iter().map(|(j, _)| (j, kind)).collect();
        self.build_extension(&targets, drop_original_integrality)
    }

    fn build_extension(&self, targets: &[(usize, PolytopeKind)], drop: bool) -> Result<ExtendedSet, CliError> {
        let m = self.set()?;
        let polys = targets
            .iter()
            .map(|&(j, k)| BinarizationPolytope::make(k, self.upper(j)))
            .collect::<Result<Vec<_>, _>>()?;
        let idx: Vec<usize> = targets.iter().map(|t| t.0).collect();
        let scheme = BinarizationScheme { polytopes: polys };
        Ok(extend_targets(&m, &idx, &scheme, drop)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use binext::kernel::{int, rat};

    const PENTAGON: &str = "# pentagon\nvars x1 x2\nint x1 x2\nbound x1 0 2\nbound x2 0 2\nrow 2 1 <= 5\nrow -2 3 <= 3\n";

    #[test]
    fn pentagon_file() {
        let inst = Instance::parse(PENTAGON).unwrap();
        let m = inst.set().unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.int_vars, vec![0, 1]);
        assert_eq!(m.upper_bounds, vec![2, 2]);
        assert!(m.relax.contains(&[rat(3, 2), int(2)]));
        assert!(!m.relax.contains(&[int(2), int(2)]));
    }

    #[test]
    fn empty_var_list() {
        let e = Instance::parse("vars\n").unwrap_err();
        assert_eq!((e.line, e.msg.as_str()), (1, "empty variable list"));
    }

    #[test]
    fn rational_rhs_round_trips() {
        let inst = Instance::parse("vars a b\nrow 1 -1/2 >= 3/2\n").unwrap();
        assert_eq!(inst.rows[0].rhs, rat(3, 2));
        assert!(inst.to_text().contains("row 1 -1/2 >= 3/2"));
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn round_trip_with_scheme() {
        let text = format!("{PENTAGON}scheme x1 log\nscheme x2 full\n");
        let inst = Instance::parse(&text).unwrap();
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
        let e = inst.extended(None, false).unwrap().unwrap();
        assert_eq!(e.dim(), 2 + 2 + 2);
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("int x\n", 1, 1, "before `vars`"),
            ("vars x\nrow 1 2 <= 3\n", 2, 9, "expected 1 coefficients"),
            ("vars x\nrow 1 < 3\n", 2, 7, "expected <=, >= or ="),
            ("vars x\nbound y 0 1\n", 2, 7, "unknown variable"),
            ("vars x\nint x\n", 2, 5, "needs a bound"),
            ("vars x\nbound x 0 1/0\n", 2, 11, "bad rational"),
            ("vars x\nfoo\n", 2, 1, "unknown directive"),
            ("vars x\nscheme log2\n", 2, 8, "unknown binarization kind"),
            ("vars 1x\n", 1, 6, "bad variable name"),
        ];
        for (text, line, col, msg) in cases {
            let e = Instance::parse(text).unwrap_err();
            assert_eq!((e.line, e.col), (line, col), "{text:?}: {e}");
            assert!(e.msg.contains(msg), "{text:?}: {e}");
        }
    }

    #[test]
    fn continuous_bounds_become_rows() {
        let inst = Instance::parse("vars x y\nint x\nbound x 0 3\nbound y -1/2 1/2\n").unwrap();
        let m = inst.set().unwrap();
        assert!(m.relax.contains(&[int(3), rat(-1, 2)]));
        assert!(!m.relax.contains(&[int(0), int(1)]));
    }
}
