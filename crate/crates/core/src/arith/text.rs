//! Text form shared by all polynomial-like values: terms in decreasing degree,
//! `^` for powers, optional `*`, composite coefficients in parentheses.

use crate::error::{Error, Result};

/// One parsed term `±coeff*var^exp`; `coeff` is `None` for an implicit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub neg: bool,
    pub coeff: Option<String>,
    pub exp: usize,
}

fn is_plain_integer(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Formats `(coefficient text, exponent)` pairs, already in decreasing order.
pub fn format_sum<I>(terms: I, var: &str) -> String
where
    I: IntoIterator<Item = (String, usize)>,
{
    let mut out = String::new();
    for (c, k) in terms {
        if !out.is_empty() {
            out.push('+');
        }
        let c = if is_plain_integer(&c) { c } else { format!("({c})") };
        match k {
            0 => out.push_str(&c),
            _ => {
                if c != "1" {
                    out.push_str(&c);
                    out.push('*');
                }
                out.push_str(var);
                if k > 1 {
                    out.push('^');
                    out.push_str(&k.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits a sum into terms in `var`. Coefficients are returned as raw text.
pub fn parse_terms(s: &str, var: &str) -> Result<Vec<Term>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let b = s.as_bytes();
    let vb = var.as_bytes();
    let mut i = 0;
    let mut terms = Vec::new();
    let err = |msg: &str| Error::Parse(format!("{msg} in `{s}`"));
    while i < b.len() {
        let mut neg = false;
        while i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            if b[i] == b'-' {
                neg = !neg;
            }
            i += 1;
        }
        if i >= b.len() {
            return Err(err("dangling sign"));
        }
        let mut coeff = None;
        if b[i] == b'(' {
            let start = i + 1;
            let mut depth = 0;
            while i < b.len() {
                match b[i] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            if i >= b.len() {
                return Err(err("unbalanced parenthesis"));
            }
            coeff = Some(s[start..i].to_string());
            i += 1;
        } else if b[i].is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            coeff = Some(s[start..i].to_string());
        } else if b[i].is_ascii_alphabetic() && !b[i..].starts_with(vb) {
            // bare coefficient such as `u` or `u^2`
            let start = i;
            while i < b.len() && !matches!(b[i], b'+' | b'-' | b'*') {
                i += 1;
            }
            coeff = Some(s[start..i].to_string());
        }
        if i < b.len() && b[i] == b'*' {
            if coeff.is_none() {
                return Err(err("`*` without coefficient"));
            }
            i += 1;
        }
        let mut exp = 0;
        if b[i..].starts_with(vb) {
            i += vb.len();
            exp = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                exp = s[start..i].parse().map_err(|_| err("bad exponent"))?;
            }
        } else if coeff.is_none() {
            return Err(err("expected coefficient or variable"));
        }
        if i < b.len() && b[i] != b'+' && b[i] != b'-' {
            return Err(err("unexpected character"));
        }
        terms.push(Term { neg, coeff, exp });
    }
    Ok(terms)
}

/// Convenience wrapper mapping coefficient text through `parse` (None = 1).
pub fn parse_sum<C, F>(s: &str, var: &str, parse: &F) -> Result<Vec<(C, usize)>>
where
    F: Fn(&str) -> Result<C>,
    C: std::ops::Neg<Output = C>,
{
    parse_terms(s, var)?
        .into_iter()
        .map(|t| {
            let c = parse(t.coeff.as_deref().unwrap_or("1"))?;
            Ok((if t.neg { -c } else { c }, t.exp))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms() {
        let t = parse_terms("T^3+2*T+1", "T").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], Term { neg: false, coeff: None, exp: 3 });
        assert_eq!(t[1].coeff.as_deref(), Some("2"));
        assert_eq!(t[2].exp, 0);
        let t = parse_terms("-(u+1)*t^2 - 3t", "t").unwrap();
        assert!(t[0].neg && t[0].coeff.as_deref() == Some("u+1") && t[0].exp == 2);
        assert!(t[1].neg && t[1].exp == 1);
        assert!(parse_terms("T^", "T").is_err());
        assert!(parse_terms("T+", "T").is_err());
        assert_eq!(parse_terms("u*T", "T").unwrap()[0].coeff.as_deref(), Some("u"));
        assert!(parse_terms("*T", "T").is_err());
    }

    #[test]
    fn format() {
        let s = format_sum(vec![("1".into(), 3), ("2".into(), 1), ("1".into(), 0)], "T");
        assert_eq!(s, "T^3+2*T+1");
        let s = format_sum(vec![("u+1".into(), 1)], "T");
        assert_eq!(s, "(u+1)*T");
        assert_eq!(format_sum(Vec::new(), "T"), "0");
    }
}
