//! Linear expressions on the command line: either a dense coefficient list
//! (`2 0 -3/2`) or named terms (`2 x1 - 3/2 z1_2`, `2*x1 + x2`).

use binext::kernel::{parse_rational, RatVector, Rational};
use num_traits::{One, Zero};

use crate::instance::Rel;
use crate::CliError;

fn bad(msg: String) -> CliError {
    CliError::Usage(msg)
}

pub fn parse_vector(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|_| bad(format!("bad rational `{t}`"))))
        .collect()
}

pub fn parse_ints(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| bad(format!("bad integer `{t}`"))))
        .collect()
}

pub fn parse_linear(text: &str, names: &[String]) -> Result<RatVector, CliError> {
    let spaced = text.replace('*', " ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    if toks.is_empty() {
        return Err(bad("empty expression".into()));
    }
    if toks.iter().all(|t| parse_rational(t).is_ok()) {
        if toks.len() != names.len() {
            return Err(bad(format!("expected {} coefficients, got {}", names.len(), toks.len())));
        }
        return Ok(RatVector(parse_vector(text)?));
    }
    let mut a = RatVector::zeros(names.len());
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for t in toks {
        match t {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Ok(c) = parse_rational(t) {
                    if coef.is_some() {
                        return Err(bad(format!("two coefficients in a row at `{t}`")));
                    }
                    coef = Some(c);
                    continue;
                }
                let (s, name) = match t.strip_prefix('-') {
                    Some(rest) => (-Rational::one(), rest),
                    None => (Rational::one(), t.strip_prefix('+').unwrap_or(t)),
                };
                let j = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| bad(format!("unknown variable `{name}`")))?;
                a[j] += &sign * s * coef.take().unwrap_or_else(Rational::one);
                sign = Rational::one();
            }
        }
    }
    if coef.is_some() || !sign.is_one() {
        return Err(bad(format!("dangling coefficient or sign in `{text}`")));
    }
    Ok(a)
}

/// `lhs REL rhs` with the left side as in [`parse_linear`].
pub fn parse_constraint(text: &str, names: &[String]) -> Result<(RatVector, Rel, Rational), CliError> {
    for sym in ["<=", ">=", "="] {
        if let Some((l, r)) = text.split_once(sym) {
            let rhs = parse_rational(r.trim()).map_err(|_| bad(format!("bad right-hand side `{}`", r.trim())))?;
            let rel = Rel::parse(sym).expect("known symbol");
            return Ok((parse_linear(l, names)?, rel, rhs));
        }
    }
    Err(bad(format!("no <=, >= or = in `{text}`")))
}

pub fn nonzero(a: &[Rational]) -> bool {
    a.iter().any(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use binext::kernel::{int, rat};

    fn names() -> Vec<String> {
        ["x1", "x2", "z1_1"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dense_and_named_agree() {
        let d = parse_linear("2 0 -3/2", &names()).unwrap();
        let n = parse_linear("2 x1 - 3/2 z1_1", &names()).unwrap();
        let m = parse_linear("2*x1 -3/2*z1_1", &names()).unwrap();
        assert_eq!(d, n);
        assert_eq!(d, m);
        assert_eq!(parse_linear("-x2 + x1", &names()).unwrap(), RatVector(vec![int(1), int(-1), int(0)]));
    }

    #[test]
    fn constraints() {
        let (a, rel, b) = parse_constraint("x1 + 10 x2 <= 20", &names()).unwrap();
        assert_eq!((a[1].clone(), rel, b), (int(10), Rel::Le, int(20)));
        let (_, rel, b) = parse_constraint("x1 >= -1/2", &names()).unwrap();
        assert_eq!((rel, b), (Rel::Ge, rat(-1, 2)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_linear("2 3", &names()).is_err());
        assert!(parse_linear("2 y", &names()).is_err());
        assert!(parse_linear("x1 -", &names()).is_err());
        assert!(parse_constraint("x1 < 2", &names()).is_err());
    }
}
