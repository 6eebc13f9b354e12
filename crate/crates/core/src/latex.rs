//! LaTeX emission for scalars, words, polynomials and rule tables, laid out
//! for visual comparison: variables and one-forms carry upper indices,
//! derivatives lower ones, matrix entries both.

use num::{One, Signed};

use crate::error::Result;
use crate::freealg::{Alphabet, NCPoly, Word};
use crate::rewrite::{orient_relation, RewriteRule, WordOrder};
use crate::scalar::{MultiPoly, Param, Rat, ScalarValue};

fn latex_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_multipoly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (n, (expo, coef)) in terms.iter().rev().enumerate() {
        let neg = coef.is_negative();
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = coef.abs();
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || expo.iter().all(|&e| e == 0) {
            parts.push(latex_rat(&mag));
        }
        for prm in Param::ALL {
            match expo[prm as usize] {
                0 => {}
                1 => parts.push(prm.name().to_string()),
                e => parts.push(format!("{}^{{{e}}}", prm.name())),
            }
        }
        out.push_str(&parts.join(" "));
    }
    out
}

pub fn latex_scalar(v: &ScalarValue) -> String {
    if v.den().is_one() {
        latex_multipoly(v.num())
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            latex_multipoly(v.num()),
            latex_multipoly(v.den())
        )
    }
}

/// One generator. Names follow the engine's conventions: `x3` and `xi3`
/// carry upper indices, `d3` a lower one, `t13` both, and the two adjoined
/// inverses render as explicit inverse powers.
pub fn latex_letter(alphabet: &Alphabet, g: u32) -> String {
    let name = alphabet.name(g);
    if name == "dinv" {
        return "D^{-1}".to_string();
    }
    if let Some(rest) = name.strip_suffix("inv") {
        return format!("({})^{{-1}}", latex_named(rest));
    }
    latex_named(name)
}

fn latex_named(name: &str) -> String {
    let digits: String = name.chars().filter(|c| c.is_ascii_digit()).collect();
    let stem: String = name.chars().take_while(|c| !c.is_ascii_digit()).collect();
    match (stem.as_str(), digits.len()) {
        ("x", 1) => format!("x^{{{digits}}}"),
        ("xi", 1) => format!("\\xi^{{{digits}}}"),
        ("d", 1) => format!("\\partial_{{{digits}}}"),
        ("t", 2) => format!(
            "t^{{{}}}_{{{}}}",
            &digits[..1],
            &digits[1..]
        ),
        _ => format!("\\mathtt{{{name}}}"),
    }
}

pub fn latex_word(w: &Word, alphabet: &Alphabet) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters()
        .iter()
        .map(|&g| latex_letter(alphabet, g))
        .collect::<Vec<_>>()
        .join(" \\, ")
}

pub fn latex_poly(p: &NCPoly, alphabet: &Alphabet) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (w, c)) in p.terms().enumerate() {
        let neg = c.num().leading().is_some_and(|(_, r)| r.is_negative());
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag_scalar = if neg { -c } else { c.clone() };
        let coeff = if mag_scalar.is_one() && !w.is_empty() {
            String::new()
        } else if mag_scalar.num().term_count() > 1 && !w.is_empty() {
            format!("\\left({}\\right)", latex_scalar(&mag_scalar))
        } else {
            latex_scalar(&mag_scalar)
        };
        if w.is_empty() {
            out.push_str(&coeff);
        } else if coeff.is_empty() {
            out.push_str(&latex_word(w, alphabet));
        } else {
            out.push_str(&format!("{coeff} \\, {}", latex_word(w, alphabet)));
        }
    }
    out
}

pub fn latex_rule(rule: &RewriteRule, alphabet: &Alphabet) -> String {
    format!(
        "{} &= {}",
        latex_word(rule.lhs(), alphabet),
        latex_poly(rule.rhs(), alphabet)
    )
}

/// An aligned array of oriented relations, one row each.
pub fn latex_relation_array(
    rels: &[NCPoly],
    alphabet: &Alphabet,
    order: WordOrder,
) -> Result<String> {
    let mut rows = Vec::with_capacity(rels.len());
    for rel in rels {
        if rel.is_zero() {
            continue;
        }
        let rule = orient_relation(rel, order)?;
        rows.push(latex_rule(&rule, alphabet));
    }
    Ok(format!(
        "\\begin{{align*}}\n{}\n\\end{{align*}}",
        rows.join(" \\\\\n")
    ))
}
