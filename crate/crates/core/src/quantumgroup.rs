//! The matrix quantum group acting on the deformed calculi: the exchange
//! ideal among the nine matrix entries, the quantum determinant and its
//! localization, the Hopf structure maps, the star structure, and the
//! distinguished subgroup and special-case quotients.

use crate::error::{CoreError, Result};
use crate::freealg::{
    alphabet_union, translate_by_name, union_cross_relations, Alphabet, GenId, NCPoly, Parity,
    Word,
};
use crate::parser::{parse_expr, parse_scalar};
use crate::rewrite::{interreduce, RewriteSystem, WordOrder, DEFAULT_FUEL};
use crate::rmatrix::RMatrix;
use crate::scalar::{Param, ScalarValue, Substitution};

pub fn t_alphabet() -> Alphabet {
    t_alphabet_named("t")
}

/// A renamed copy of the matrix-entry alphabet, for tensor factors.
pub fn t_alphabet_named(prefix: &str) -> Alphabet {
    let order: [(&str, i64); 9] = [
        ("32", 90),
        ("31", 80),
        ("33", 70),
        ("23", 60),
        ("21", 50),
        ("22", 40),
        ("13", 30),
        ("12", 20),
        ("11", 10),
    ];
    let names: Vec<String> = order.iter().map(|(ij, _)| format!("{prefix}{ij}")).collect();
    let spec: Vec<(&str, Parity, i64)> = names
        .iter()
        .zip(order.iter())
        .map(|(name, (_, prec))| (name.as_str(), Parity::Even, *prec))
        .collect();
    Alphabet::new(spec).expect("valid alphabet")
}

fn tg(alphabet: &Alphabet, prefix: &str, i: u8, j: u8) -> Result<GenId> {
    alphabet.require(&format!("{prefix}{i}{j}"))
}

/// The 81 exchange instances R^{ji}_{kl} t^k_m t^l_n = t^j_l t^i_k R^{lk}_{mn},
/// one relation per (j, i, m, n), zero rows dropped.
pub fn generate_rtt(alphabet: &Alphabet, prefix: &str, r: &RMatrix) -> Result<Vec<NCPoly>> {
    let t = |i: u8, j: u8| tg(alphabet, prefix, i, j);
    let mut out = Vec::new();
    for j in 1..=3u8 {
        for i in 1..=3u8 {
            for m in 1..=3u8 {
                for n in 1..=3u8 {
                    let mut p = NCPoly::zero();
                    for k in 1..=3u8 {
                        for l in 1..=3u8 {
                            let c = r.coeff(j, i, k, l);
                            if !c.is_zero() {
                                let w = Word::from_ids(vec![t(k, m)?, t(l, n)?]);
                                p = p.add(&NCPoly::from_term(w, c.clone()));
                            }
                            let c = r.coeff(l, k, m, n);
                            if !c.is_zero() {
                                let w = Word::from_ids(vec![t(j, l)?, t(i, k)?]);
                                p = p.sub(&NCPoly::from_term(w, c.clone()));
                            }
                        }
                    }
                    if !p.is_zero() {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn rtt_system_from(r: &RMatrix) -> Result<RewriteSystem> {
    let a = t_alphabet();
    let rels = generate_rtt(&a, "t", r)?;
    interreduce(&a, &rels, WordOrder::DegInvLex, DEFAULT_FUEL)
}

pub fn rtt_system() -> Result<RewriteSystem> {
    rtt_system_from(&crate::rmatrix::omega())
}

/// The exchange system at specialized parameters.
pub fn rtt_system_at(sub: &Substitution) -> Result<RewriteSystem> {
    rtt_system_from(&crate::rmatrix::omega().substitute(sub)?)
}

const DET_TERMS: [(&str, [(u8, u8); 3]); 6] = [
    ("1", [(1, 1), (2, 2), (3, 3)]),
    ("1", [(1, 3), (2, 1), (3, 2)]),
    ("u^3/q^3", [(1, 2), (2, 3), (3, 1)]),
    ("-q/u", [(1, 1), (2, 3), (3, 2)]),
    ("-u^2/q^2", [(1, 2), (2, 1), (3, 3)]),
    ("-u^2/q^2", [(1, 3), (2, 2), (3, 1)]),
];

/// The quantum determinant, a cubic in normal order.
pub fn determinant(alphabet: &Alphabet, prefix: &str) -> Result<NCPoly> {
    let mut p = NCPoly::zero();
    for (coef, factors) in DET_TERMS {
        let ids: Vec<GenId> = factors
            .iter()
            .map(|&(i, j)| tg(alphabet, prefix, i, j))
            .collect::<Result<_>>()?;
        p = p.add(&NCPoly::from_term(Word::from_ids(ids), parse_scalar(coef)?));
    }
    Ok(p)
}

const ADJ_ENTRIES: [[&str; 3]; 3] = [
    [
        "t22*t33 - q/u*t23*t32",
        "-q^2/u^2*t12*t33 + q^3/u^3*t13*t32",
        "t12*t23 - q/u*t13*t22",
    ],
    [
        "-u^2/q^2*t21*t33 + u^3/q^3*t23*t31",
        "t11*t33 - u/q*t13*t31",
        "-u^2/q^2*t11*t23 + u^3/q^3*t13*t21",
    ],
    [
        "t21*t32 - u^2/q^2*t22*t31",
        "-q^2/u^2*t11*t32 + t12*t31",
        "t11*t22 - u^2/q^2*t12*t21",
    ],
];

/// The adjugate matrix M with T^{-1} = M D^{-1}, entries over the plain
/// matrix-entry alphabet.
pub fn adjugate(alphabet: &Alphabet) -> Result<Vec<Vec<NCPoly>>> {
    ADJ_ENTRIES
        .iter()
        .map(|row| row.iter().map(|e| parse_expr(e, alphabet)).collect())
        .collect()
}

const D_MOVE: [[&str; 3]; 3] = [
    ["1", "u^2/q^4", "u/q^2"],
    ["q^4/u^2", "1", "q^2/u"],
    ["q^2/u", "u/q^2", "1"],
];

/// The factor in D t^i_j = lambda_{ij} t^i_j D, equivalently
/// t^i_j D^{-1} = lambda_{ij} D^{-1} t^i_j; one-indexed.
pub fn d_move_factor(i: u8, j: u8) -> ScalarValue {
    parse_scalar(D_MOVE[(i - 1) as usize][(j - 1) as usize]).expect("valid scalar")
}

/// The weighted adjugate: each entry of the adjugate is homogeneous for the
/// D-commutation grading, with weight equal to the matching move factor, so
/// scaling entrywise gives the left companion with Mw T = D I.
pub fn weighted_adjugate(alphabet: &Alphabet) -> Result<Vec<Vec<NCPoly>>> {
    let adj = adjugate(alphabet)?;
    Ok((0..3)
        .map(|i| {
            (0..3)
                .map(|k| adj[i][k].scale(&d_move_factor(i as u8 + 1, k as u8 + 1)))
                .collect()
        })
        .collect())
}

/// The matrix-entry algebra extended by the inverse determinant. Normal
/// words put the inverse generator last.
pub struct Localized {
    pub alphabet: Alphabet,
    pub dinv: GenId,
    /// Plain-alphabet generator id to localized id.
    pub map_t: Vec<GenId>,
    pub system: RewriteSystem,
    /// The determinant over the localized alphabet, at this localization's
    /// parameters.
    det: NCPoly,
    /// Commutation factor of each localized letter past the inverse.
    factors: Vec<ScalarValue>,
}

pub fn localized_system() -> Result<Localized> {
    localized_system_at(&Substitution::new())
}

/// The localization at specialized parameters.
pub fn localized_system_at(sub: &Substitution) -> Result<Localized> {
    let t = t_alphabet();
    let ext = Alphabet::new(vec![("dinv", Parity::Even, 0)])?;
    let un = alphabet_union(&t, &ext)?;
    let dinv = un.map_b[0];
    let sys = rtt_system_at(sub)?;
    let mut rels: Vec<NCPoly> = sys
        .rules()
        .iter()
        .map(|r| r.as_relation().translate(&un.map_a))
        .collect();
    let mut factors = vec![ScalarValue::one(); un.alphabet.len()];
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            let tij = un.map_a[tg(&t, "t", i, j)? as usize];
            let lhs = Word::from_ids(vec![tij, dinv]);
            let rhs = Word::from_ids(vec![dinv, tij]);
            let factor = d_move_factor(i, j).substitute(sub)?;
            factors[tij as usize] = factor.inverse()?;
            rels.push(
                NCPoly::from_term(lhs, ScalarValue::one())
                    .sub(&NCPoly::from_term(rhs, factor)),
            );
        }
    }
    let d = determinant(&t, "t")?
        .substitute_params(sub)?
        .translate(&un.map_a);
    let dinv_poly = NCPoly::gen(dinv);
    rels.push(d.mul(&dinv_poly).sub(&NCPoly::one()));
    rels.push(dinv_poly.mul(&d).sub(&NCPoly::one()));
    let system = interreduce(&un.alphabet, &rels, WordOrder::DegInvLex, DEFAULT_FUEL)?;
    Ok(Localized {
        alphabet: un.alphabet,
        dinv,
        map_t: un.map_a,
        system,
        det: d,
        factors,
    })
}

impl Localized {
    /// Rewrites p into an equivalent inverse-free polynomial: inverse
    /// letters are pushed to the right end of each word, collecting one
    /// move factor per crossing, and every term is then padded on the
    /// right with determinant powers up to a common count, where
    /// dinv^k D^k = 1 cancels them exactly. The result is zero in the
    /// plain exchange quotient precisely when p is zero here, so a
    /// reduction of the cleared polynomial settles membership even though
    /// the localized rules are not confluent.
    pub fn clear_inverse(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut parts: Vec<(Word, ScalarValue, u32)> = Vec::new();
        let mut kmax = 0u32;
        for (w, c) in p.terms() {
            let mut coeff = c.clone();
            let mut seen = 0u32;
            let mut letters = Vec::with_capacity(w.len());
            for &g in w.letters() {
                if g == self.dinv {
                    seen += 1;
                } else {
                    coeff = &coeff * &self.factors[g as usize].pow(seen);
                    letters.push(g);
                }
            }
            kmax = kmax.max(seen);
            parts.push((Word::from_ids(letters), coeff, seen));
        }
        let mut out = NCPoly::zero();
        for (w, c, k) in parts {
            out = out.add(&NCPoly::from_term(w, c).mul(&self.det.pow(kmax - k)));
        }
        Ok(out)
    }
}

/// The antipode, an algebra antihomomorphism on the localized algebra:
/// matrix entries map to adjugate entries times the inverse determinant,
/// the inverse determinant maps to the determinant.
pub struct Antipode {
    images: Vec<NCPoly>,
}

pub fn antipode(loc: &Localized) -> Result<Antipode> {
    antipode_at(loc, &Substitution::new())
}

/// The antipode over a localization built at the same specialization.
pub fn antipode_at(loc: &Localized, sub: &Substitution) -> Result<Antipode> {
    let t = t_alphabet();
    let adj = adjugate(&t)?;
    let mut images = vec![NCPoly::zero(); loc.alphabet.len()];
    let dinv_poly = NCPoly::gen(loc.dinv);
    for i in 0..3 {
        for j in 0..3 {
            let tij = loc.map_t[tg(&t, "t", i as u8 + 1, j as u8 + 1)? as usize];
            images[tij as usize] = adj[i][j]
                .substitute_params(sub)?
                .translate(&loc.map_t)
                .mul(&dinv_poly);
        }
    }
    images[loc.dinv as usize] = determinant(&t, "t")?
        .substitute_params(sub)?
        .translate(&loc.map_t);
    Ok(Antipode { images })
}

impl Antipode {
    /// Applies the antihomomorphism: letters of each word are mapped in
    /// reverse order and the images multiplied.
    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let mut prod = NCPoly::one();
            for &g in w.letters().iter().rev() {
                prod = prod.mul(&self.images[g as usize]);
            }
            out = out.add(&prod.scale(c));
        }
        out
    }
}

/// Two commuting copies of the matrix-entry algebra; the coproduct lands
/// here. First tensor factor sorts left of the second in normal words.
pub struct TwoCopy {
    pub alphabet: Alphabet,
    /// Plain id to first-factor id.
    pub map_first: Vec<GenId>,
    /// Plain id to second-factor id.
    pub map_second: Vec<GenId>,
    pub system: RewriteSystem,
}

pub fn two_copy_system() -> Result<TwoCopy> {
    two_copy_system_at(&Substitution::new())
}

pub fn two_copy_system_at(sub: &Substitution) -> Result<TwoCopy> {
    let ta = t_alphabet();
    let tb = t_alphabet_named("tb");
    let un = alphabet_union(&ta, &tb)?;
    let base = rtt_system_at(sub)?;
    let mut rels: Vec<NCPoly> = base
        .rules()
        .iter()
        .map(|r| r.as_relation().translate(&un.map_a))
        .collect();
    let second = generate_rtt(&tb, "tb", &crate::rmatrix::omega().substitute(sub)?)?;
    rels.extend(second.iter().map(|p| p.translate(&un.map_b)));
    rels.extend(union_cross_relations(&un));
    let system = interreduce(&un.alphabet, &rels, WordOrder::DegInvLex, DEFAULT_FUEL)?;
    Ok(TwoCopy {
        alphabet: un.alphabet,
        map_first: un.map_a,
        map_second: un.map_b,
        system,
    })
}

impl TwoCopy {
    /// Delta(t^i_j) = sum_k t^i_k (x) t^k_j.
    pub fn coproduct_entry(&self, i: u8, j: u8) -> Result<NCPoly> {
        let t = t_alphabet();
        let mut p = NCPoly::zero();
        for k in 1..=3u8 {
            let a = self.map_first[tg(&t, "t", i, k)? as usize];
            let b = self.map_second[tg(&t, "t", k, j)? as usize];
            p = p.add(&NCPoly::from_term(
                Word::from_ids(vec![a, b]),
                ScalarValue::one(),
            ));
        }
        Ok(p)
    }

    /// Extends the coproduct to any polynomial in the plain matrix entries.
    pub fn coproduct(&self, p: &NCPoly) -> Result<NCPoly> {
        let t = t_alphabet();
        let mut images: Vec<NCPoly> = Vec::with_capacity(t.len());
        for g in t.generators() {
            let (i, j) = entry_indices(&g.name)?;
            images.push(self.coproduct_entry(i, j)?);
        }
        Ok(p.substitute_letters(&|g| images[g as usize].clone()))
    }
}

fn entry_indices(name: &str) -> Result<(u8, u8)> {
    let digits: Vec<u32> = name
        .chars()
        .rev()
        .take(2)
        .filter_map(|c| c.to_digit(10))
        .collect();
    if digits.len() != 2 {
        return Err(CoreError::UnknownGenerator(name.to_string()));
    }
    Ok((digits[1] as u8, digits[0] as u8))
}

/// The counit: matrix entries go to Kronecker deltas, the inverse
/// determinant to one. Returns the scalar value of the image.
pub fn counit(p: &NCPoly, alphabet: &Alphabet) -> Result<ScalarValue> {
    let mut images: Vec<NCPoly> = Vec::with_capacity(alphabet.len());
    for g in alphabet.generators() {
        if g.name == "dinv" {
            images.push(NCPoly::one());
        } else {
            let (i, j) = entry_indices(&g.name)?;
            images.push(if i == j { NCPoly::one() } else { NCPoly::zero() });
        }
    }
    p.substitute_letters(&|g| images[g as usize].clone())
        .scalar_value()
        .ok_or_else(|| CoreError::Invalid("counit image is not scalar".into()))
}

/// The star map on generator ids: swaps the two rows and the two column
/// entries below the diagonal, fixing the corner.
pub fn star_letter(alphabet: &Alphabet, g: GenId) -> GenId {
    let name = alphabet.name(g);
    let (i, j) = entry_indices(name).expect("matrix entry name");
    let (si, sj) = star_indices(i, j);
    alphabet
        .lookup(&format!("t{si}{sj}"))
        .expect("star image exists")
}

pub fn star_indices(i: u8, j: u8) -> (u8, u8) {
    let f = |k: u8| match k {
        1 => 2,
        2 => 1,
        _ => 3,
    };
    if (i, j) == (3, 1) {
        (3, 2)
    } else if (i, j) == (3, 2) {
        (3, 1)
    } else if i == 3 && j == 3 {
        (3, 3)
    } else if i == 3 {
        (3, f(j))
    } else if j == 3 {
        (f(i), 3)
    } else {
        (f(i), f(j))
    }
}

/// The star antihomomorphism on the plain matrix-entry algebra: reverses
/// words, maps letters, fixes scalars.
pub fn star(p: &NCPoly, alphabet: &Alphabet) -> NCPoly {
    p.reverse_map(&|g| star_letter(alphabet, g))
}

/// Substitutes t31 = t32 = 0 into the exchange ideal. Returns (rules,
/// obstructions): multi-term survivors present the subgroup algebra, while
/// single-term survivors assert a product of surviving generators vanishes.
pub fn subgroup_split(sub: Option<&Substitution>) -> Result<(Vec<NCPoly>, Vec<NCPoly>)> {
    let sys = rtt_system()?;
    let a = sys.alphabet().clone();
    let t31 = a.require("t31")?;
    let t32 = a.require("t32")?;
    let mut rules = Vec::new();
    let mut obstructions = Vec::new();
    for r in sys.rules() {
        let mut rel = r.as_relation();
        if let Some(s) = sub {
            rel = rel.substitute_params(s)?;
        }
        let killed = rel.substitute_letters(&|g| {
            if g == t31 || g == t32 {
                NCPoly::zero()
            } else {
                NCPoly::gen(g)
            }
        });
        if killed.is_zero() {
            continue;
        }
        if killed.term_count() == 1 {
            obstructions.push(killed);
        } else {
            rules.push(killed);
        }
    }
    Ok((rules, obstructions))
}

/// The subgroup algebra at q = u^2 localized at the corner entry: seven
/// surviving generators plus its inverse, with commutation factors read
/// off mechanically from the reduced relations.
pub struct CornerLocalized {
    pub alphabet: Alphabet,
    pub corner_inv: GenId,
    pub system: RewriteSystem,
}

/// The parameter locus on which the subgroup constraints vanish.
pub fn subgroup_locus() -> Substitution {
    Substitution::new().set(Param::Q, ScalarValue::param(Param::U).pow(2))
}

pub fn corner_localized_system() -> Result<CornerLocalized> {
    corner_localized_system_at(&subgroup_locus())
}

/// Same construction under any substitution that kills the subgroup
/// obstructions; the substitution must fix q = u^2 or extend it.
pub fn corner_localized_system_at(sub: &Substitution) -> Result<CornerLocalized> {
    let (rules, obstructions) = subgroup_split(Some(sub))?;
    if !obstructions.is_empty() {
        return Err(CoreError::Invalid(
            "the subgroup constraint does not vanish at q = u^2".into(),
        ));
    }
    let t = t_alphabet();
    let live = Alphabet::new(vec![
        ("t33", Parity::Even, 70),
        ("t23", Parity::Even, 60),
        ("t21", Parity::Even, 50),
        ("t22", Parity::Even, 40),
        ("t13", Parity::Even, 30),
        ("t12", Parity::Even, 20),
        ("t11", Parity::Even, 10),
    ])?;
    let translated: Vec<NCPoly> = rules
        .iter()
        .map(|p| translate_by_name(p, &t, &live))
        .collect::<Result<_>>()?;
    let base = interreduce(&live, &translated, WordOrder::DegInvLex, DEFAULT_FUEL)?;

    let ext = Alphabet::new(vec![("t33inv", Parity::Even, 0)])?;
    let un = alphabet_union(&live, &ext)?;
    let corner_inv = un.map_b[0];
    let corner = un.map_a[live.require("t33")? as usize];
    let mut rels: Vec<NCPoly> = base
        .rules()
        .iter()
        .map(|r| r.as_relation().translate(&un.map_a))
        .collect();
    // Commutation of each live generator with the inverse corner: the
    // factor nu in t33 g = nu g t33 is read off the reduced product, and
    // g t33inv = nu t33inv g follows.
    for g in live.generators() {
        if g.name == "t33" {
            continue;
        }
        let prod = NCPoly::from_term(
            Word::from_ids(vec![live.require("t33")?, g.id]),
            ScalarValue::one(),
        );
        let (nf, _) = base.normal_form(&prod)?;
        let mut it = nf.terms();
        let (w, c) = it.next().ok_or_else(|| {
            CoreError::Invalid(format!("t33*{} reduces to zero", g.name))
        })?;
        if it.next().is_some() || w.letters() != [g.id, live.require("t33")?] {
            return Err(CoreError::Invalid(format!(
                "t33*{} does not reduce to a single swapped term",
                g.name
            )));
        }
        let nu = c.clone();
        let gid = un.map_a[g.id as usize];
        rels.push(
            NCPoly::from_term(Word::from_ids(vec![gid, corner_inv]), ScalarValue::one()).sub(
                &NCPoly::from_term(Word::from_ids(vec![corner_inv, gid]), nu),
            ),
        );
    }
    let corner_poly = NCPoly::gen(corner);
    let inv_poly = NCPoly::gen(corner_inv);
    rels.push(corner_poly.mul(&inv_poly).sub(&NCPoly::one()));
    rels.push(inv_poly.mul(&corner_poly).sub(&NCPoly::one()));
    let system = interreduce(&un.alphabet, &rels, WordOrder::DegInvLex, DEFAULT_FUEL)?;
    Ok(CornerLocalized {
        alphabet: un.alphabet,
        corner_inv,
        system,
    })
}

/// The primed entries t^i_j t33inv of the corner-localized subgroup.
pub fn primed_entries(loc: &CornerLocalized) -> Vec<(String, NCPoly)> {
    let inv = NCPoly::gen(loc.corner_inv);
    loc.alphabet
        .generators()
        .filter(|g| g.id != loc.corner_inv)
        .map(|g| {
            let p = NCPoly::gen(g.id).mul(&inv);
            (g.name.clone(), p)
        })
        .collect()
}

/// Normal forms of all pairwise commutators of the primed entries, keeping
/// only the nonzero ones. An empty result means the primed entries commute.
pub fn primed_commutator_residues(
    loc: &CornerLocalized,
) -> Result<Vec<(String, String, NCPoly)>> {
    let entries = primed_entries(loc);
    let mut out = Vec::new();
    for a in 0..entries.len() {
        for b in a + 1..entries.len() {
            let (na, pa) = &entries[a];
            let (nb, pb) = &entries[b];
            let comm = pa.mul(pb).sub(&pb.mul(pa));
            let (nf, _) = loc.system.normal_form(&comm)?;
            if !nf.is_zero() {
                out.push((na.clone(), nb.clone(), nf));
            }
        }
    }
    Ok(out)
}

/// The coaction target: matrix entries tensor the variable/one-form
/// algebra, matrix entries sorting left.
pub struct Coaction {
    pub alphabet: Alphabet,
    pub map_t: Vec<GenId>,
    images: Vec<Option<NCPoly>>,
    pub system: RewriteSystem,
}

pub fn coaction_system(choice: crate::calculus::BraidChoice) -> Result<Coaction> {
    coaction_system_at(choice, &Substitution::new())
}

pub fn coaction_system_at(
    choice: crate::calculus::BraidChoice,
    sub: &Substitution,
) -> Result<Coaction> {
    use crate::calculus::{generate_tables, mixed_alphabet, xixi_relations, xx_relations};

    let t = t_alphabet();
    let space = Alphabet::new(vec![
        ("x1", Parity::Even, 60),
        ("x2", Parity::Even, 50),
        ("x3", Parity::Even, 40),
        ("xi2", Parity::Odd, 30),
        ("xi1", Parity::Odd, 20),
        ("xi3", Parity::Odd, 10),
    ])?;
    let un = alphabet_union(&t, &space)?;

    let mixed = mixed_alphabet();
    let tables = generate_tables(&mixed, &choice.matrix().substitute(sub)?)?;
    let mut rels: Vec<NCPoly> = rtt_system_at(sub)?
        .rules()
        .iter()
        .map(|r| r.as_relation().translate(&un.map_a))
        .collect();
    for p in xx_relations(&mixed)?
        .iter()
        .chain(xixi_relations(&mixed)?.iter())
        .chain(tables.xxi.iter())
    {
        rels.push(translate_by_name(&p.substitute_params(sub)?, &mixed, &un.alphabet)?);
    }
    rels.extend(union_cross_relations(&un));
    let system = interreduce(&un.alphabet, &rels, WordOrder::DegInvLex, DEFAULT_FUEL)?;

    // Images of the mixed-alphabet letters under v^i -> sum_j t^i_j v^j.
    let mut images = vec![None; mixed.len()];
    for g in mixed.generators() {
        if space.lookup(&g.name).is_none() {
            continue;
        }
        let (prefix, idx) = if let Some(rest) = g.name.strip_prefix("xi") {
            ("xi", rest.parse::<u8>().unwrap())
        } else {
            ("x", g.name[1..].parse::<u8>().unwrap())
        };
        let mut p = NCPoly::zero();
        for j in 1..=3u8 {
            let tij = un.map_a[tg(&t, "t", idx, j)? as usize];
            let vj = un.map_b[space.require(&format!("{prefix}{j}"))? as usize];
            p = p.add(&NCPoly::from_term(
                Word::from_ids(vec![tij, vj]),
                ScalarValue::one(),
            ));
        }
        images[g.id as usize] = Some(p);
    }
    Ok(Coaction {
        alphabet: un.alphabet,
        map_t: un.map_a,
        images,
        system,
    })
}

impl Coaction {
    /// Applies the coaction to a relation over the mixed alphabet; errors
    /// on letters outside the variable/one-form block.
    pub fn apply(&self, p: &NCPoly) -> Result<NCPoly> {
        for (w, _) in p.terms() {
            for &g in w.letters() {
                if self.images[g as usize].is_none() {
                    return Err(CoreError::Invalid(
                        "the coaction only covers variables and one-forms".into(),
                    ));
                }
            }
        }
        Ok(p.substitute_letters(&|g| self.images[g as usize].clone().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{oriented_map, rule_map, BraidChoice};
    use crate::fixtures;
    use crate::parser::parse_relation_lines;
    use crate::rmatrix::{omega, omega_inverse};

    #[test]
    fn rtt_relations_interreduce_to_the_fixture() {
        let sys = rtt_system().unwrap();
        assert_eq!(sys.rules().len(), 36);
        let a = sys.alphabet();
        let fixture = parse_relation_lines(fixtures::RTT, a).unwrap();
        let expected = oriented_map(&fixture, WordOrder::DegInvLex).unwrap();
        assert_eq!(rule_map(&sys), expected);
    }

    #[test]
    fn miscopied_exchange_rows_leave_a_residue() {
        // Two plausible-looking variants of fixture rows, each off by a
        // factor of q in one tail coefficient, are not in the ideal.
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        for line in [
            "t32*t11 - q/u*t11*t32 + (u^2-q)/u*t12*t31",
            "t33*t23 - u*t23*t33 - q*s/u*t21*t32 + s*u*t22*t31",
        ] {
            let p = parse_expr(line, a).unwrap();
            let (nf, _) = sys.normal_form(&p).unwrap();
            assert!(!nf.is_zero(), "variant {line} slipped into the ideal");
        }
    }

    #[test]
    fn both_matrices_generate_the_same_ideal() {
        let a = t_alphabet();
        let from_omega = rtt_system().unwrap();
        let from_inverse = rtt_system_from(&omega_inverse()).unwrap();
        for rel in generate_rtt(&a, "t", &omega_inverse()).unwrap() {
            assert!(from_omega.reduces_to_zero(&rel).unwrap().is_zero);
        }
        for rel in generate_rtt(&a, "t", &omega()).unwrap() {
            assert!(from_inverse.reduces_to_zero(&rel).unwrap().is_zero);
        }
    }

    #[test]
    fn determinant_commutation_factors() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        let d = determinant(a, "t").unwrap();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let tij = NCPoly::gen(tg(a, "t", i, j).unwrap());
                let lhs = d.mul(&tij);
                let rhs = tij.mul(&d).scale(&d_move_factor(i, j));
                let check = sys.reduces_to_zero(&lhs.sub(&rhs)).unwrap();
                assert!(check.is_zero, "move factor at ({i},{j})");
            }
        }
    }

    #[test]
    fn determinant_is_not_central() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        let d = determinant(a, "t").unwrap();
        let t12 = NCPoly::gen(a.require("t12").unwrap());
        let comm = d.mul(&t12).sub(&t12.mul(&d));
        assert!(!sys.reduces_to_zero(&comm).unwrap().is_zero);
    }

    #[test]
    fn printed_variant_factors_fail() {
        // Two plausible variants of the move factors leave residues.
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        let d = determinant(a, "t").unwrap();
        for (i, j, variant) in [(2u8, 1u8, "q^2"), (2, 3, "u/q^2")] {
            let tij = NCPoly::gen(tg(a, "t", i, j).unwrap());
            let lhs = d.mul(&tij);
            let rhs = tij.mul(&d).scale(&parse_scalar(variant).unwrap());
            let check = sys.reduces_to_zero(&lhs.sub(&rhs)).unwrap();
            assert!(!check.is_zero, "variant factor at ({i},{j})");
        }
    }

    #[test]
    fn move_factors_multiply_to_one_over_determinant_words() {
        for (_, factors) in DET_TERMS {
            let mut prod = ScalarValue::one();
            for (i, j) in factors {
                prod = &prod * &d_move_factor(i, j);
            }
            assert!(prod.is_one());
        }
    }

    #[test]
    fn localization_inverts_the_determinant() {
        let loc = localized_system().unwrap();
        assert_eq!(loc.system.rules().len(), 46);
        let t = t_alphabet();
        let d = determinant(&t, "t").unwrap().translate(&loc.map_t);
        let dinv = NCPoly::gen(loc.dinv);
        let one = NCPoly::one();
        let (nf, _) = loc.system.normal_form(&d.mul(&dinv)).unwrap();
        assert_eq!(nf, one);
        let (nf, _) = loc.system.normal_form(&dinv.mul(&d)).unwrap();
        assert_eq!(nf, one);
    }

    #[test]
    fn adjugate_is_a_two_sided_companion() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        let d = determinant(a, "t").unwrap();
        let adj = adjugate(a).unwrap();
        let wadj = weighted_adjugate(a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut right = NCPoly::zero();
                let mut left = NCPoly::zero();
                for k in 0..3 {
                    let tik = NCPoly::gen(tg(a, "t", i as u8 + 1, k as u8 + 1).unwrap());
                    let tkj = NCPoly::gen(tg(a, "t", k as u8 + 1, j as u8 + 1).unwrap());
                    right = right.add(&tik.mul(&adj[k][j]));
                    left = left.add(&wadj[i][k].mul(&tkj));
                }
                let expect = if i == j { d.clone() } else { NCPoly::zero() };
                let rc = sys.reduces_to_zero(&right.sub(&expect)).unwrap();
                assert!(rc.is_zero, "T M at ({i},{j})");
                let lc = sys.reduces_to_zero(&left.sub(&expect)).unwrap();
                assert!(lc.is_zero, "Mw T at ({i},{j})");
            }
        }
    }

    #[test]
    fn antipode_satisfies_both_axioms() {
        let loc = localized_system().unwrap();
        let s = antipode(&loc).unwrap();
        let t = t_alphabet();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let mut left = NCPoly::zero();
                let mut right = NCPoly::zero();
                for k in 1..=3u8 {
                    let tik = NCPoly::gen(loc.map_t[tg(&t, "t", i, k).unwrap() as usize]);
                    let tkj = NCPoly::gen(loc.map_t[tg(&t, "t", k, j).unwrap() as usize]);
                    left = left.add(&s.apply(&tik).mul(&tkj));
                    right = right.add(&tik.mul(&s.apply(&tkj)));
                }
                let expect = if i == j { NCPoly::one() } else { NCPoly::zero() };
                let lc = loc.system.reduces_to_zero(&left.sub(&expect)).unwrap();
                assert!(lc.is_zero, "left axiom at ({i},{j})");
                let rc = loc.system.reduces_to_zero(&right.sub(&expect)).unwrap();
                assert!(rc.is_zero, "right axiom at ({i},{j})");
            }
        }
    }

    #[test]
    fn antipode_preserves_the_ideal() {
        let loc = localized_system().unwrap();
        let s = antipode(&loc).unwrap();
        for rule in loc.system.rules() {
            let image = s.apply(&rule.as_relation());
            let cleared = loc.clear_inverse(&image).unwrap();
            let check = loc.system.reduces_to_zero(&cleared).unwrap();
            assert!(
                check.is_zero,
                "antipode image of {}",
                rule.display(&loc.alphabet)
            );
        }
    }

    #[test]
    fn clearing_the_inverse_respects_the_quotient() {
        let loc = localized_system().unwrap();
        let t = t_alphabet();
        let d = determinant(&t, "t").unwrap().translate(&loc.map_t);
        let dinv = NCPoly::gen(loc.dinv);
        // dinv t11 d t22 dinv equals t11 t22 dinv by two crossings; the
        // cleared form must land in the same residue class.
        let p = dinv
            .mul(&NCPoly::gen(loc.map_t[tg(&t, "t", 1, 1).unwrap() as usize]))
            .mul(&d)
            .mul(&NCPoly::gen(loc.map_t[tg(&t, "t", 2, 2).unwrap() as usize]))
            .mul(&dinv);
        let q = NCPoly::gen(loc.map_t[tg(&t, "t", 1, 1).unwrap() as usize])
            .mul(&NCPoly::gen(loc.map_t[tg(&t, "t", 2, 2).unwrap() as usize]))
            .mul(&dinv);
        let cleared = loc.clear_inverse(&p.sub(&q)).unwrap();
        assert!(!cleared
            .terms()
            .any(|(w, _)| w.letters().contains(&loc.dinv)));
        assert!(loc.system.reduces_to_zero(&cleared).unwrap().is_zero);
    }

    #[test]
    fn antipode_of_determinant_is_its_inverse() {
        let loc = localized_system().unwrap();
        let s = antipode(&loc).unwrap();
        let t = t_alphabet();
        let d = determinant(&t, "t").unwrap().translate(&loc.map_t);
        let image = s.apply(&d);
        let (nf, _) = loc.system.normal_form(&image).unwrap();
        assert_eq!(nf, NCPoly::gen(loc.dinv));
    }

    #[test]
    fn coproduct_is_an_algebra_morphism() {
        let tc = two_copy_system().unwrap();
        let base = rtt_system().unwrap();
        for rule in base.rules() {
            let image = tc.coproduct(&rule.as_relation()).unwrap();
            let check = tc.system.reduces_to_zero(&image).unwrap();
            assert!(
                check.is_zero,
                "coproduct image of {}",
                rule.display(base.alphabet())
            );
        }
    }

    #[test]
    fn coproduct_of_determinant_is_grouplike() {
        let tc = two_copy_system().unwrap();
        let t = t_alphabet();
        let tb = t_alphabet_named("tb");
        let d = determinant(&t, "t").unwrap();
        let image = tc.coproduct(&d).unwrap();
        let d_first = d.translate(&tc.map_first);
        let d_second = determinant(&tb, "tb").unwrap().translate(&tc.map_second);
        let check = tc
            .system
            .reduces_to_zero(&image.sub(&d_first.mul(&d_second)))
            .unwrap();
        assert!(check.is_zero);
    }

    #[test]
    fn counit_kills_the_ideal_and_fixes_the_determinant() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        for rule in sys.rules() {
            let v = counit(&rule.as_relation(), a).unwrap();
            assert!(v.is_zero(), "counit of {}", rule.display(a));
        }
        let d = determinant(a, "t").unwrap();
        assert!(counit(&d, a).unwrap().is_one());
    }

    #[test]
    fn counit_axioms_on_generators() {
        let tc = two_copy_system().unwrap();
        let t = t_alphabet();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let delta = tc.coproduct_entry(i, j).unwrap();
                // (counit x id): first-factor letters to deltas.
                let left = delta.substitute_letters(&|g| {
                    let name = tc.alphabet.name(g);
                    if name.starts_with("tb") {
                        NCPoly::gen(g)
                    } else {
                        let (a, b) = entry_indices(name).unwrap();
                        if a == b {
                            NCPoly::one()
                        } else {
                            NCPoly::zero()
                        }
                    }
                });
                let tbij = tc.map_second[tg(&t, "t", i, j).unwrap() as usize];
                assert_eq!(left, NCPoly::gen(tbij));
                // (id x counit): second-factor letters to deltas.
                let right = delta.substitute_letters(&|g| {
                    let name = tc.alphabet.name(g);
                    if name.starts_with("tb") {
                        let (a, b) = entry_indices(name).unwrap();
                        if a == b {
                            NCPoly::one()
                        } else {
                            NCPoly::zero()
                        }
                    } else {
                        NCPoly::gen(g)
                    }
                });
                let tij = tc.map_first[tg(&t, "t", i, j).unwrap() as usize];
                assert_eq!(right, NCPoly::gen(tij));
            }
        }
    }

    #[test]
    fn star_is_an_involutive_symmetry_of_the_ideal() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        for g in a.generators() {
            assert_eq!(star_letter(a, star_letter(a, g.id)), g.id);
        }
        for rule in sys.rules() {
            let image = star(&rule.as_relation(), a);
            let check = sys.reduces_to_zero(&image).unwrap();
            assert!(check.is_zero, "star image of {}", rule.display(a));
        }
    }

    #[test]
    fn star_fixes_the_determinant_and_pairs_the_move_factors() {
        let sys = rtt_system().unwrap();
        let a = sys.alphabet();
        let d = determinant(a, "t").unwrap();
        let (nf, _) = sys.normal_form(&star(&d, a)).unwrap();
        assert_eq!(nf, d);
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let (si, sj) = star_indices(i, j);
                let prod = &d_move_factor(i, j) * &d_move_factor(si, sj);
                assert!(prod.is_one(), "pairing at ({i},{j})");
            }
        }
    }

    #[test]
    fn subgroup_obstructions_are_exactly_two() {
        let (rules, obstructions) = subgroup_split(None).unwrap();
        assert!(!rules.is_empty());
        assert_eq!(obstructions.len(), 2);
        let a = t_alphabet();
        let mut found = std::collections::BTreeMap::new();
        for p in &obstructions {
            let (w, c) = p.leading().unwrap();
            found.insert(
                w.display(&a).to_string(),
                c.clone(),
            );
        }
        let c12 = found.get("t12*t33").expect("t12*t33 obstruction");
        let c21 = found.get("t21*t33").expect("t21*t33 obstruction");
        assert_eq!(c12, &parse_scalar("(u^2-q)/(u*q)").unwrap());
        assert_eq!(c21, &parse_scalar("-(u^2-q)/u").unwrap());
        // Both vanish exactly on the subgroup locus q = u^2.
        for c in [c12, c21] {
            assert!(c.substitute(&subgroup_locus()).unwrap().is_zero());
            assert!(!c.is_zero());
        }
    }

    #[test]
    fn subgroup_at_q_u2_has_no_obstructions() {
        let (_, obstructions) = subgroup_split(Some(&subgroup_locus())).unwrap();
        assert!(obstructions.is_empty());
    }

    #[test]
    fn star_respects_the_subgroup_locus() {
        // The star map swaps the two killed generators, so the constraint
        // t31 = t32 = 0 is star-stable.
        let a = t_alphabet();
        let t31 = a.require("t31").unwrap();
        let t32 = a.require("t32").unwrap();
        assert_eq!(star_letter(&a, t31), t32);
        assert_eq!(star_letter(&a, t32), t31);
    }

    #[test]
    fn primed_commutators_vanish_except_the_third_column_pair() {
        let loc = corner_localized_system().unwrap();
        assert_eq!(primed_entries(&loc).len(), 7);
        let residues = primed_commutator_residues(&loc).unwrap();
        // Twenty of the twenty-one pairs commute. The survivor pairs the
        // two off-corner entries of the third column, and its residue is
        // an s-multiple: the corner clears the quadratic relation between
        // them only up to the s-tail of their exchange rule.
        assert_eq!(residues.len(), 1);
        let (na, nb, nf) = &residues[0];
        assert_eq!((na.as_str(), nb.as_str()), ("t23", "t13"));
        let expected = parse_expr(
            "s/u*t11*t22*t33inv*t33inv - s/u^3*t12*t21*t33inv*t33inv - s/u",
            &loc.alphabet,
        )
        .unwrap();
        assert_eq!(nf, &expected);
    }

    #[test]
    fn primed_commutators_all_vanish_once_s_is_zero() {
        let sub = subgroup_locus().set(Param::S, ScalarValue::zero());
        let loc = corner_localized_system_at(&sub).unwrap();
        assert!(primed_commutator_residues(&loc).unwrap().is_empty());
    }

    #[test]
    fn plain_entries_do_not_commute_in_the_corner_localization() {
        let loc = corner_localized_system().unwrap();
        let t33 = NCPoly::gen(loc.alphabet.require("t33").unwrap());
        let t12 = NCPoly::gen(loc.alphabet.require("t12").unwrap());
        let comm = t33.mul(&t12).sub(&t12.mul(&t33));
        assert!(!loc.system.reduces_to_zero(&comm).unwrap().is_zero);
    }

    #[test]
    fn classical_limit_is_commutative() {
        let sub = Substitution::new()
            .set(Param::Q, ScalarValue::one())
            .set(Param::U, ScalarValue::one())
            .set(Param::S, ScalarValue::zero());
        let sys = rtt_system().unwrap();
        for rule in sys.rules() {
            let rel = rule.as_relation().substitute_params(&sub).unwrap();
            let lhs = rule.lhs();
            let flipped = Word::from_ids(vec![lhs.letters()[1], lhs.letters()[0]]);
            let comm = NCPoly::from_term(lhs.clone(), ScalarValue::one())
                .sub(&NCPoly::from_term(flipped, ScalarValue::one()));
            assert_eq!(rel, comm, "limit of {}", rule.display(sys.alphabet()));
        }
    }

    #[test]
    fn coaction_preserves_all_three_relation_sectors() {
        use crate::calculus::{generate_tables, mixed_alphabet, xixi_relations, xx_relations};
        let mixed = mixed_alphabet();
        for choice in BraidChoice::ALL {
            let co = coaction_system(choice).unwrap();
            let tables = generate_tables(&mixed, &choice.matrix()).unwrap();
            let mut sectors: Vec<NCPoly> = xx_relations(&mixed).unwrap();
            sectors.extend(xixi_relations(&mixed).unwrap());
            sectors.extend(tables.xxi);
            for rel in sectors {
                let image = co.apply(&rel).unwrap();
                let check = co.system.reduces_to_zero(&image).unwrap();
                assert!(
                    check.is_zero,
                    "coaction image of {} under {}",
                    rel.display(&mixed),
                    choice.name()
                );
            }
        }
    }

    #[test]
    fn coaction_rejects_derivative_letters() {
        use crate::calculus::mixed_alphabet;
        let co = coaction_system(BraidChoice::Omega).unwrap();
        let mixed = mixed_alphabet();
        let p = NCPoly::gen(mixed.require("d1").unwrap());
        assert!(co.apply(&p).is_err());
    }
}
