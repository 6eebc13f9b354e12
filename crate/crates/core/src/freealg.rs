//! Free associative algebra over Q(q, u, s) on a Z2-graded ordered alphabet.
//!
//! Generator ids are assigned in descending precedence, so id 0 is the
//! highest-precedence letter. A word is normal for a rewrite system exactly
//! when it cannot be reduced; for the systems built here that means letters
//! read in ascending precedence from left to right.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::scalar::{ScalarValue, Substitution};

pub type GenId = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
    pub parity: Parity,
}

/// Ordered alphabet. Construction sorts by descending precedence and then
/// forgets the raw precedence numbers; only the resulting order matters.
#[derive(Clone, Debug)]
pub struct Alphabet {
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
}

impl Alphabet {
    /// Builds an alphabet from (name, parity, precedence) triples. Higher
    /// precedence means earlier id.
    pub fn new(spec: Vec<(&str, Parity, i64)>) -> Result<Alphabet> {
        let mut rows: Vec<(String, Parity, i64)> = Vec::new();
        for (name, parity, prec) in spec {
            rows.push((name.to_string(), parity, prec));
        }
        let mut seen_prec: HashMap<i64, ()> = HashMap::new();
        for (_, _, p) in &rows {
            if seen_prec.insert(*p, ()).is_some() {
                return Err(CoreError::DuplicatePrecedence(*p));
            }
        }
        rows.sort_by(|a, b| b.2.cmp(&a.2));
        let mut gens = Vec::new();
        let mut by_name = HashMap::new();
        for (id, (name, parity, _)) in rows.into_iter().enumerate() {
            if by_name.insert(name.clone(), id as GenId).is_some() {
                return Err(CoreError::DuplicateName(name));
            }
            gens.push(Generator {
                id: id as GenId,
                name,
                parity,
            });
        }
        Ok(Alphabet { gens, by_name })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<GenId> {
        self.lookup(name)
            .ok_or_else(|| CoreError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id as usize].name
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.gens[id as usize].parity
    }

    /// Parity of a word: product of the letter parities.
    pub fn word_parity(&self, w: &Word) -> Parity {
        let odd = w
            .letters()
            .iter()
            .filter(|&&g| self.parity(g) == Parity::Odd)
            .count();
        if odd % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn word_from_names(&self, names: &[&str]) -> Result<Word> {
        let mut ids = Vec::with_capacity(names.len());
        for n in names {
            ids.push(self.require(n)?);
        }
        Ok(Word::from_ids(ids))
    }
}

/// Disjoint union of two alphabets with id translation tables. Every letter
/// of `b` gets higher precedence than every letter of `a`, each factor
/// keeping its internal order; with the cross rules of
/// [`union_cross_relations`] normal words read `a` block then `b` block.
pub struct AlphabetUnion {
    pub alphabet: Alphabet,
    /// New id of old `a` generator i.
    pub map_a: Vec<GenId>,
    /// New id of old `b` generator i.
    pub map_b: Vec<GenId>,
}

pub fn alphabet_union(a: &Alphabet, b: &Alphabet) -> Result<AlphabetUnion> {
    let mut gens = Vec::new();
    let mut by_name = HashMap::new();
    let mut map_b = Vec::new();
    let mut map_a = Vec::new();
    for g in &b.gens {
        let id = gens.len() as GenId;
        if by_name.insert(g.name.clone(), id).is_some() {
            return Err(CoreError::NameCollision(g.name.clone()));
        }
        gens.push(Generator {
            id,
            name: g.name.clone(),
            parity: g.parity,
        });
        map_b.push(id);
    }
    for g in &a.gens {
        let id = gens.len() as GenId;
        if by_name.insert(g.name.clone(), id).is_some() {
            return Err(CoreError::NameCollision(g.name.clone()));
        }
        gens.push(Generator {
            id,
            name: g.name.clone(),
            parity: g.parity,
        });
        map_a.push(id);
    }
    Ok(AlphabetUnion {
        alphabet: Alphabet { gens, by_name },
        map_a,
        map_b,
    })
}

/// Carries a polynomial into another alphabet by matching generator names.
/// Letters whose name is missing from the target must not occur in `p`.
pub fn translate_by_name(p: &NCPoly, from: &Alphabet, to: &Alphabet) -> Result<NCPoly> {
    let map: Vec<Option<GenId>> = from.generators().map(|g| to.lookup(&g.name)).collect();
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let ids = w
            .letters()
            .iter()
            .map(|&g| {
                map[g as usize]
                    .ok_or_else(|| CoreError::UnknownGenerator(from.name(g).to_string()))
            })
            .collect::<Result<Vec<GenId>>>()?;
        out.insert_add(Word::from_ids(ids), c.clone());
    }
    Ok(out)
}

/// Commutation relations g_b g_a - g_a g_b for every pair. The g_b g_a word
/// is the reducible one, so these orient as g_b g_a -> g_a g_b and normal
/// words carry the `a` block on the left, the `b` block on the right.
pub fn union_cross_relations(u: &AlphabetUnion) -> Vec<NCPoly> {
    let mut rels = Vec::new();
    for &gb in &u.map_b {
        for &ga in &u.map_a {
            let lhs = Word::from_ids(vec![gb, ga]);
            let rhs = Word::from_ids(vec![ga, gb]);
            let mut p = NCPoly::from_term(lhs, ScalarValue::one());
            p.insert_add(rhs, -&ScalarValue::one());
            rels.push(p);
        }
    }
    rels
}

/// Word in the free monoid on generator ids.
///
/// The order is degree first, then position-wise with *smaller id = bigger
/// letter*, matching the precedence convention: the maximal word of a
/// homogeneous relation is the most out-of-order one.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    ids: Vec<GenId>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn single(g: GenId) -> Word {
        Word { ids: vec![g] }
    }

    pub fn from_ids(ids: Vec<GenId>) -> Word {
        Word { ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn letters(&self) -> &[GenId] {
        &self.ids
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut ids = self.ids.clone();
        ids.extend_from_slice(&other.ids);
        Word { ids }
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            ids: self.ids[start..end].to_vec(),
        }
    }

    /// Replaces `ids[pos..pos + len]`, returning prefix and suffix words.
    pub fn split_at_match(&self, pos: usize, len: usize) -> (Word, Word) {
        (self.slice(0, pos), self.slice(pos + len, self.ids.len()))
    }

    /// Number of out-of-order pairs: positions i < j whose letters satisfy
    /// id(w[i]) < id(w[j]), i.e. a higher-precedence letter left of a lower
    /// one. Normal words for the pure commutation systems have zero.
    pub fn inversions(&self) -> u64 {
        let mut n = 0;
        for i in 0..self.ids.len() {
            for j in (i + 1)..self.ids.len() {
                if self.ids[i] < self.ids[j] {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.ids
            .len()
            .cmp(&other.ids.len())
            .then_with(|| {
                for (a, b) in self.ids.iter().zip(other.ids.iter()) {
                    // Reversed: smaller id means higher precedence means
                    // bigger letter.
                    match b.cmp(a) {
                        std::cmp::Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<&str> = self
            .word
            .letters()
            .iter()
            .map(|&g| self.alphabet.name(g))
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

/// Polynomial in the free algebra: finite map from words to nonzero scalars.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, ScalarValue>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::from_term(Word::empty(), ScalarValue::one())
    }

    pub fn scalar(c: ScalarValue) -> NCPoly {
        NCPoly::from_term(Word::empty(), c)
    }

    pub fn gen(g: GenId) -> NCPoly {
        NCPoly::from_term(Word::single(g), ScalarValue::one())
    }

    pub fn from_term(w: Word, c: ScalarValue) -> NCPoly {
        let mut p = NCPoly::zero();
        p.insert_add(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &ScalarValue)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&ScalarValue> {
        self.terms.get(w)
    }

    /// Maximal term under the word order.
    pub fn leading(&self) -> Option<(&Word, &ScalarValue)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    /// Some(c) when the polynomial is the scalar c (including zero).
    pub fn scalar_value(&self) -> Option<ScalarValue> {
        match self.terms.len() {
            0 => Some(ScalarValue::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn remove_term(&mut self, w: &Word) -> Option<ScalarValue> {
        self.terms.remove(w)
    }

    pub fn insert_add(&mut self, w: Word, c: ScalarValue) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert_add(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert_add(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &ScalarValue) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        let mut out = NCPoly::zero();
        for (w, k) in &self.terms {
            out.terms.insert(w.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.insert_add(wa.concat(wb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> NCPoly {
        match self.leading() {
            None => NCPoly::zero(),
            Some((_, c)) => {
                let inv = c.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Applies a substitution homomorphism on letters. The image polynomials
    /// live in whatever alphabet the caller chose.
    pub fn substitute_letters(&self, image: &dyn Fn(GenId) -> NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut prod = NCPoly::scalar(c.clone());
            for &g in w.letters() {
                prod = prod.mul(&image(g));
            }
            out = out.add(&prod);
        }
        out
    }

    /// Translates every letter through an id table (e.g. into a union
    /// alphabet).
    pub fn translate(&self, map: &[GenId]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let ids = w.letters().iter().map(|&g| map[g as usize]).collect();
            out.insert_add(Word::from_ids(ids), c.clone());
        }
        out
    }

    /// Antihomomorphism on words: reverses each word and maps letters.
    pub fn reverse_map(&self, letter: &dyn Fn(GenId) -> GenId) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let ids = w.letters().iter().rev().map(|&g| letter(g)).collect();
            out.insert_add(Word::from_ids(ids), c.clone());
        }
        out
    }

    pub fn substitute_params(&self, s: &Substitution) -> crate::error::Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.insert_add(w.clone(), c.substitute(s)?);
        }
        Ok(out)
    }

    pub fn invariants_hold(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero() && c.invariants_hold())
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> NCPolyDisplay<'a> {
        NCPolyDisplay {
            poly: self,
            alphabet,
        }
    }
}

pub struct NCPolyDisplay<'a> {
    poly: &'a NCPoly,
    alphabet: &'a Alphabet,
}

impl fmt::Display for NCPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.poly.terms.iter().rev() {
            let (neg, mag) = c.render_factor();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag == "1" {
                write!(f, "{}", w.display(self.alphabet))?;
            } else {
                write!(f, "{}*{}", mag, w.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Param;

    fn xyz() -> Alphabet {
        Alphabet::new(vec![
            ("x1", Parity::Even, 30),
            ("x2", Parity::Even, 20),
            ("x3", Parity::Even, 10),
        ])
        .unwrap()
    }

    #[test]
    fn precedence_assigns_ids_descending() {
        let a = Alphabet::new(vec![
            ("b", Parity::Even, 1),
            ("a", Parity::Odd, 5),
        ])
        .unwrap();
        assert_eq!(a.lookup("a"), Some(0));
        assert_eq!(a.lookup("b"), Some(1));
        assert_eq!(a.parity(0), Parity::Odd);
    }

    #[test]
    fn duplicate_precedence_rejected() {
        let r = Alphabet::new(vec![
            ("a", Parity::Even, 1),
            ("b", Parity::Even, 1),
        ]);
        assert!(matches!(r, Err(CoreError::DuplicatePrecedence(1))));
    }

    #[test]
    fn word_order_prefers_short_then_out_of_order() {
        let a = xyz();
        let w = |names: &[&str]| a.word_from_names(names).unwrap();
        // Degree dominates.
        assert!(w(&["x1", "x1", "x1"]) > w(&["x1", "x2"]));
        // Same degree: higher-precedence letter earlier is bigger.
        assert!(w(&["x1", "x2"]) > w(&["x2", "x1"]));
        assert!(w(&["x2", "x3"]) > w(&["x3", "x2"]));
        // Maximal degree-2 word on the sorted side is x1*x1.
        assert!(w(&["x1", "x1"]) > w(&["x1", "x2"]));
    }

    #[test]
    fn inversions_count_out_of_order_pairs() {
        let a = xyz();
        let w = a.word_from_names(&["x3", "x1", "x2"]).unwrap();
        // Only (x1,x2) is out of order: x1 sits left of the lower-precedence
        // x2, while x3 commuting left of both is in normal position.
        assert_eq!(w.inversions(), 1);
        let sorted = a.word_from_names(&["x3", "x2", "x1"]).unwrap();
        assert_eq!(sorted.inversions(), 0);
        let reversed = a.word_from_names(&["x1", "x2", "x3"]).unwrap();
        assert_eq!(reversed.inversions(), 3);
    }

    #[test]
    fn poly_arithmetic_cancels() {
        let a = xyz();
        let x1 = NCPoly::gen(a.lookup("x1").unwrap());
        let x2 = NCPoly::gen(a.lookup("x2").unwrap());
        let p = x1.mul(&x2).sub(&x2.mul(&x1));
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert_eq!(p.term_count(), 2);
    }

    #[test]
    fn leading_term_is_maximal_word() {
        let a = xyz();
        let x1 = a.lookup("x1").unwrap();
        let x2 = a.lookup("x2").unwrap();
        let mut p = NCPoly::from_term(Word::from_ids(vec![x1, x2]), ScalarValue::one());
        p.insert_add(Word::from_ids(vec![x2, x1]), ScalarValue::param(Param::Q));
        assert_eq!(p.leading().unwrap().0, &Word::from_ids(vec![x1, x2]));
    }

    #[test]
    fn union_stacks_second_alphabet_on_top() {
        let t = Alphabet::new(vec![
            ("t11", Parity::Even, 2),
            ("t12", Parity::Even, 1),
        ])
        .unwrap();
        let x = xyz();
        let u = alphabet_union(&t, &x).unwrap();
        // x letters (factor b) take ids 0..3, t letters follow.
        assert_eq!(u.alphabet.lookup("x1"), Some(0));
        assert_eq!(u.alphabet.lookup("t11"), Some(3));
        assert_eq!(u.map_a, vec![3, 4]);
        assert_eq!(u.map_b, vec![0, 1, 2]);
        let rels = union_cross_relations(&u);
        assert_eq!(rels.len(), 6);
        for r in &rels {
            assert_eq!(r.term_count(), 2);
            let (lead, c) = r.leading().unwrap();
            assert_eq!(lead.len(), 2);
            assert!(c.is_one());
            // The reducible word has the x letter (higher precedence) first;
            // normal words put the t block on the left.
            assert!(lead.letters()[0] < lead.letters()[1]);
        }
    }

    #[test]
    fn union_rejects_name_collision() {
        let a = xyz();
        let b = xyz();
        assert!(matches!(
            alphabet_union(&a, &b),
            Err(CoreError::NameCollision(_))
        ));
    }

    #[test]
    fn word_parity_multiplies() {
        let a = Alphabet::new(vec![
            ("xi1", Parity::Odd, 2),
            ("x1", Parity::Even, 1),
        ])
        .unwrap();
        let w = a.word_from_names(&["xi1", "x1", "xi1"]).unwrap();
        assert_eq!(a.word_parity(&w), Parity::Even);
        let v = a.word_from_names(&["xi1", "x1"]).unwrap();
        assert_eq!(a.word_parity(&v), Parity::Odd);
    }

    #[test]
    fn display_pulls_signs_and_units() {
        let a = xyz();
        let x1 = a.lookup("x1").unwrap();
        let x2 = a.lookup("x2").unwrap();
        let x3 = a.lookup("x3").unwrap();
        let mut p = NCPoly::from_term(Word::from_ids(vec![x1, x2]), ScalarValue::one());
        p.insert_add(
            Word::from_ids(vec![x2, x1]),
            -&ScalarValue::param(Param::Q),
        );
        p.insert_add(
            Word::from_ids(vec![x3, x3]),
            -&ScalarValue::param(Param::S),
        );
        assert_eq!(p.display(&a).to_string(), "x1*x2 - q*x2*x1 - s*x3*x3");
    }
}
