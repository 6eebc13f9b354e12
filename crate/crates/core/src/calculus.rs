//! The two first-order differential calculi over the deformed coordinate
//! algebra: exchange tables generated from a braid matrix, the fixed
//! variable/one-form/derivative relations, and the exterior differential.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::freealg::{Alphabet, GenId, NCPoly, Parity, Word};
use crate::parser::parse_relation_lines;
use crate::rewrite::{interreduce, orient_relation, RewriteSystem, WordOrder, DEFAULT_FUEL};
use crate::rmatrix::{omega, omega_inverse, RMatrix};
use crate::scalar::ScalarValue;

/// Which of the two braid matrices drives the calculus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BraidChoice {
    Omega,
    OmegaInverse,
}

impl BraidChoice {
    pub const ALL: [BraidChoice; 2] = [BraidChoice::Omega, BraidChoice::OmegaInverse];

    pub fn matrix(self) -> RMatrix {
        match self {
            BraidChoice::Omega => omega(),
            BraidChoice::OmegaInverse => omega_inverse(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BraidChoice::Omega => "omega",
            BraidChoice::OmegaInverse => "omega-inv",
        }
    }

    pub fn from_name(name: &str) -> Option<BraidChoice> {
        match name {
            "omega" => Some(BraidChoice::Omega),
            "omega-inv" | "omega-inverse" => Some(BraidChoice::OmegaInverse),
            _ => None,
        }
    }
}

pub fn x_alphabet() -> Alphabet {
    Alphabet::new(vec![
        ("x1", Parity::Even, 60),
        ("x2", Parity::Even, 50),
        ("x3", Parity::Even, 40),
    ])
    .expect("valid alphabet")
}

pub fn xi_alphabet() -> Alphabet {
    Alphabet::new(vec![
        ("xi2", Parity::Odd, 30),
        ("xi1", Parity::Odd, 20),
        ("xi3", Parity::Odd, 10),
    ])
    .expect("valid alphabet")
}

pub fn d_alphabet() -> Alphabet {
    Alphabet::new(vec![
        ("d1", Parity::Even, 90),
        ("d2", Parity::Even, 80),
        ("d3", Parity::Even, 70),
    ])
    .expect("valid alphabet")
}

/// Variables, one-forms and derivatives in one alphabet. Precedence puts
/// derivatives leftmost and one-forms rightmost, so normal words read
/// "forms, then variables, then derivatives".
pub fn mixed_alphabet() -> Alphabet {
    Alphabet::new(vec![
        ("d1", Parity::Even, 90),
        ("d2", Parity::Even, 80),
        ("d3", Parity::Even, 70),
        ("x1", Parity::Even, 60),
        ("x2", Parity::Even, 50),
        ("x3", Parity::Even, 40),
        ("xi2", Parity::Odd, 30),
        ("xi1", Parity::Odd, 20),
        ("xi3", Parity::Odd, 10),
    ])
    .expect("valid alphabet")
}

const XX_RELATIONS: &str = "\
x1*x2 - q*x2*x1 - s*x3*x3
x1*x3 - u*x3*x1
x2*x3 - 1/u*x3*x2
";

const XIXI_RELATIONS: &str = "\
xi1*xi1
xi2*xi2
xi3*xi3
xi2*xi1 + u^2/q^2*xi1*xi2
xi1*xi3 + q/u*xi3*xi1
xi2*xi3 + u/q*xi3*xi2
";

// The derivative pair composes contravariantly to the pair basis: these rows
// read in reversed pair order span the (-1)-eigenspace of the transposed
// inverse braid. Reading the eigenvectors straight gives the reciprocal
// coefficients, and those fail the overlap between the derivative exchanges
// and the cross tables.
const DD_RELATIONS: &str = "\
d1*d2 - q^2/u^2*d2*d1
d1*d3 - q/u*d3*d1
d2*d3 - u/q*d3*d2
";

pub fn xx_relations(alphabet: &Alphabet) -> Result<Vec<NCPoly>> {
    parse_relation_lines(XX_RELATIONS, alphabet)
}

pub fn xixi_relations(alphabet: &Alphabet) -> Result<Vec<NCPoly>> {
    parse_relation_lines(XIXI_RELATIONS, alphabet)
}

pub fn dd_relations(alphabet: &Alphabet) -> Result<Vec<NCPoly>> {
    parse_relation_lines(DD_RELATIONS, alphabet)
}

pub fn x_system() -> Result<RewriteSystem> {
    let a = x_alphabet();
    let rels = xx_relations(&a)?;
    interreduce(&a, &rels, WordOrder::DegLex, DEFAULT_FUEL)
}

pub fn xi_system() -> Result<RewriteSystem> {
    let a = xi_alphabet();
    let rels = xixi_relations(&a)?;
    interreduce(&a, &rels, WordOrder::DegLex, DEFAULT_FUEL)
}

pub fn d_system() -> Result<RewriteSystem> {
    let a = d_alphabet();
    let rels = dd_relations(&a)?;
    interreduce(&a, &rels, WordOrder::DegLex, DEFAULT_FUEL)
}

/// The cross tables a braid matrix induces, as relations over the mixed
/// alphabet. `xixi_raw` holds the nine unreduced one-form relations; they
/// collapse to the six fixed ones.
pub struct Tables {
    pub xxi: Vec<NCPoly>,
    pub dxi: Vec<NCPoly>,
    pub xd: Vec<NCPoly>,
    pub xixi_raw: Vec<NCPoly>,
}

fn gen_pair(alphabet: &Alphabet, prefix: &str, i: u8) -> Result<GenId> {
    alphabet.require(&format!("{prefix}{i}"))
}

fn two(a: GenId, b: GenId) -> Word {
    Word::from_ids(vec![a, b])
}

/// Exchange tables induced by `c` on the mixed alphabet: variables past
/// one-forms via `c` itself, derivatives past one-forms via its inverse,
/// and derivatives past variables via `c` with a unit term on the diagonal.
pub fn generate_tables(alphabet: &Alphabet, c: &RMatrix) -> Result<Tables> {
    let k_mat = c.inverse()?;
    let x: Vec<GenId> = (1..=3)
        .map(|i| gen_pair(alphabet, "x", i))
        .collect::<Result<_>>()?;
    let xi: Vec<GenId> = (1..=3)
        .map(|i| gen_pair(alphabet, "xi", i))
        .collect::<Result<_>>()?;
    let d: Vec<GenId> = (1..=3)
        .map(|i| gen_pair(alphabet, "d", i))
        .collect::<Result<_>>()?;
    let ix = |i: u8| x[(i - 1) as usize];
    let ixi = |i: u8| xi[(i - 1) as usize];
    let id = |i: u8| d[(i - 1) as usize];

    let mut xxi = Vec::new();
    let mut xixi_raw = Vec::new();
    let mut dxi = Vec::new();
    let mut xd = Vec::new();
    for k in 1..=3u8 {
        for l in 1..=3u8 {
            // x^k xi^l = C^{kl}_{mn} xi^m x^n
            let mut p = NCPoly::from_term(two(ix(k), ixi(l)), ScalarValue::one());
            for m in 1..=3u8 {
                for n in 1..=3u8 {
                    let coef = c.coeff(k, l, m, n);
                    if !coef.is_zero() {
                        p = p.sub(&NCPoly::from_term(two(ixi(m), ix(n)), coef.clone()));
                    }
                }
            }
            xxi.push(p);

            // xi^k xi^l = -C^{kl}_{mn} xi^m xi^n
            let mut p = NCPoly::from_term(two(ixi(k), ixi(l)), ScalarValue::one());
            for m in 1..=3u8 {
                for n in 1..=3u8 {
                    let coef = c.coeff(k, l, m, n);
                    if !coef.is_zero() {
                        p = p.add(&NCPoly::from_term(two(ixi(m), ixi(n)), coef.clone()));
                    }
                }
            }
            xixi_raw.push(p);

            // d_k xi^l = K^{lm}_{kn} xi^n d_m with K the inverse of C.
            let mut p = NCPoly::from_term(two(id(k), ixi(l)), ScalarValue::one());
            for m in 1..=3u8 {
                for n in 1..=3u8 {
                    let coef = k_mat.coeff(l, m, k, n);
                    if !coef.is_zero() {
                        p = p.sub(&NCPoly::from_term(two(ixi(n), id(m)), coef.clone()));
                    }
                }
            }
            dxi.push(p);

            // d_l x^k = delta(k,l) + C^{km}_{ln} x^n d_m; rows ordered by
            // derivative index first.
            let (dl, xk) = (k, l);
            let mut p = NCPoly::from_term(two(id(dl), ix(xk)), ScalarValue::one());
            if dl == xk {
                p = p.sub(&NCPoly::one());
            }
            for m in 1..=3u8 {
                for n in 1..=3u8 {
                    let coef = c.coeff(xk, m, dl, n);
                    if !coef.is_zero() {
                        p = p.sub(&NCPoly::from_term(two(ix(n), id(m)), coef.clone()));
                    }
                }
            }
            xd.push(p);
        }
    }
    Ok(Tables {
        xxi,
        dxi,
        xd,
        xixi_raw,
    })
}

/// The full rewrite system of one calculus: fixed relations plus the three
/// generated cross tables, interreduced.
pub fn calculus_system(choice: BraidChoice) -> Result<RewriteSystem> {
    let alphabet = mixed_alphabet();
    let c = choice.matrix();
    let tables = generate_tables(&alphabet, &c)?;
    let mut rels = xx_relations(&alphabet)?;
    rels.extend(xixi_relations(&alphabet)?);
    rels.extend(dd_relations(&alphabet)?);
    rels.extend(tables.xxi);
    rels.extend(tables.dxi);
    rels.extend(tables.xd);
    interreduce(&alphabet, &rels, WordOrder::DegLex, DEFAULT_FUEL)
}

/// Orients relations and keys them by left side, for order-insensitive
/// comparison of relation lists.
pub fn oriented_map(
    relations: &[NCPoly],
    order: WordOrder,
) -> Result<BTreeMap<Word, NCPoly>> {
    let mut map = BTreeMap::new();
    for rel in relations {
        if rel.is_zero() {
            continue;
        }
        let rule = orient_relation(rel, order)?;
        if let Some(prev) = map.insert(rule.lhs().clone(), rule.rhs().clone()) {
            if &prev != map.get(rule.lhs()).unwrap() {
                return Err(CoreError::Invalid(format!(
                    "conflicting relations share the leading word at {:?}",
                    rule.lhs()
                )));
            }
        }
    }
    Ok(map)
}

pub fn rule_map(sys: &RewriteSystem) -> BTreeMap<Word, NCPoly> {
    sys.rules()
        .iter()
        .map(|r| (r.lhs().clone(), r.rhs().clone()))
        .collect()
}

#[derive(Clone, Copy)]
enum DiffImage {
    Undefined,
    Zero,
    Form(GenId),
}

/// The exterior differential: variables map to their one-forms, one-forms
/// to zero, with the graded sign rule on products. Undefined on derivatives.
pub struct Differential {
    image: Vec<DiffImage>,
    parity: Vec<Parity>,
}

pub fn differential(alphabet: &Alphabet) -> Differential {
    let mut image = vec![DiffImage::Undefined; alphabet.len()];
    let mut parity = vec![Parity::Even; alphabet.len()];
    for g in alphabet.generators() {
        parity[g.id as usize] = g.parity;
        if g.name.starts_with("xi") {
            image[g.id as usize] = DiffImage::Zero;
        } else if let Some(rest) = g.name.strip_prefix('x') {
            if let Some(xi) = alphabet.lookup(&format!("xi{rest}")) {
                image[g.id as usize] = DiffImage::Form(xi);
            }
        }
    }
    Differential { image, parity }
}

impl Differential {
    /// d(w) for a single word, by the graded Leibniz rule: the sign of each
    /// term is set by the parity of the prefix left of the letter hit.
    fn apply_word(&self, w: &Word) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        let mut sign_odd = false;
        for (j, &g) in w.letters().iter().enumerate() {
            match self.image[g as usize] {
                DiffImage::Undefined => {
                    return Err(CoreError::Invalid(format!(
                        "generator id {g} has no differential"
                    )));
                }
                DiffImage::Zero => {}
                DiffImage::Form(xi) => {
                    let mut ids = w.letters().to_vec();
                    ids[j] = xi;
                    let coef = if sign_odd {
                        -&ScalarValue::one()
                    } else {
                        ScalarValue::one()
                    };
                    out = out.add(&NCPoly::from_term(Word::from_ids(ids), coef));
                }
            }
            if self.parity[g as usize] == Parity::Odd {
                sign_odd = !sign_odd;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            out = out.add(&self.apply_word(w)?.scale(c));
        }
        Ok(out)
    }
}

/// Every word in the given letters with length in 1..=max_len.
pub fn words_up_to(letters: &[GenId], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<GenId>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for stem in &frontier {
            for &g in letters {
                let mut ids = stem.clone();
                ids.push(g);
                out.push(Word::from_ids(ids.clone()));
                next.push(ids);
            }
        }
        frontier = next;
    }
    out
}
