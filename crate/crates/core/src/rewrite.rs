//! Deterministic rewriting in the free algebra.
//!
//! A rewrite system is a finite set of rules `lhs -> rhs` with `lhs` a word
//! of length at least two and `rhs` a polynomial in strictly smaller words.
//! Reduction replaces one occurrence per step and is fully deterministic:
//! a strategy picks the word and the position, and at a fixed position the
//! longest matching left side wins (maximal munch), ties broken by rule
//! index. Every reduction is fuel-bounded, so termination never has to be
//! assumed, and every run leaves a replayable trace.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::freealg::{Alphabet, GenId, NCPoly, Word};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Word order used to orient relations into rules.
///
/// `DegLex` is degree then the letter-precedence lex order. `DegInvLex`
/// inserts the inversion count between the two, preferring as left side the
/// word that is furthest from normal order; systems whose relations carry
/// normal-ordered words bigger than their left side (the t system does) need
/// it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordOrder {
    DegLex,
    DegInvLex,
}

pub fn word_cmp(a: &Word, b: &Word, order: WordOrder) -> std::cmp::Ordering {
    match order {
        WordOrder::DegLex => a.cmp(b),
        WordOrder::DegInvLex => a
            .len()
            .cmp(&b.len())
            .then_with(|| a.inversions().cmp(&b.inversions()))
            .then_with(|| a.cmp(b)),
    }
}

/// One oriented rule. Invariants: the left side has at least two letters,
/// and no word on the right side contains the left side.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    lhs: Word,
    rhs: NCPoly,
}

fn word_contains(haystack: &Word, needle: &Word) -> bool {
    let h = haystack.letters();
    let n = needle.letters();
    if n.len() > h.len() {
        return false;
    }
    (0..=h.len() - n.len()).any(|i| &h[i..i + n.len()] == n)
}

impl RewriteRule {
    pub fn new(lhs: Word, rhs: NCPoly) -> Result<RewriteRule> {
        if lhs.len() < 2 {
            return Err(CoreError::RuleTooShort);
        }
        if rhs.terms().any(|(w, _)| word_contains(w, &lhs)) {
            return Err(CoreError::RuleNotReduced);
        }
        Ok(RewriteRule { lhs, rhs })
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &NCPoly {
        &self.rhs
    }

    /// The relation lhs - rhs this rule encodes.
    pub fn as_relation(&self) -> NCPoly {
        NCPoly::from_term(self.lhs.clone(), crate::scalar::ScalarValue::one()).sub(&self.rhs)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> RuleDisplay<'a> {
        RuleDisplay {
            rule: self,
            alphabet,
        }
    }
}

pub struct RuleDisplay<'a> {
    rule: &'a RewriteRule,
    alphabet: &'a Alphabet,
}

impl std::fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} -> {}",
            self.rule.lhs.display(self.alphabet),
            self.rule.rhs.display(self.alphabet)
        )
    }
}

/// Orients a relation: the maximal word under `order` becomes the left side
/// and the rest, negated and scaled monic, the right side.
pub fn orient_relation(rel: &NCPoly, order: WordOrder) -> Result<RewriteRule> {
    orient_relation_ranked(rel, None, order)
}

/// Orientation with an explicit precedence-rank table (rank per generator
/// id, smaller rank = higher precedence). Duplicate ranks can make two words
/// incomparable; that is reported as a `NotOrientable` error rather than
/// resolved arbitrarily.
pub fn orient_relation_ranked(
    rel: &NCPoly,
    ranks: Option<&[u64]>,
    order: WordOrder,
) -> Result<RewriteRule> {
    if rel.is_zero() {
        return Err(CoreError::NotOrientable("the zero relation".into()));
    }
    let key = |w: &Word| -> Word {
        match ranks {
            None => w.clone(),
            Some(r) => Word::from_ids(
                w.letters()
                    .iter()
                    .map(|&g| r[g as usize] as GenId)
                    .collect(),
            ),
        }
    };
    let mut best: Option<(Word, Word)> = None; // (comparison key, actual word)
    let mut tied = false;
    for (w, _) in rel.terms() {
        let k = key(w);
        match &best {
            None => best = Some((k, w.clone())),
            Some((bk, _)) => match word_cmp(&k, bk, order) {
                std::cmp::Ordering::Greater => {
                    best = Some((k, w.clone()));
                    tied = false;
                }
                // Distinct words with equal keys: only possible under a
                // rank table that collapses letters.
                std::cmp::Ordering::Equal => tied = true,
                std::cmp::Ordering::Less => {}
            },
        }
    }
    let (_, lead) = best.expect("nonzero relation has terms");
    if tied {
        return Err(CoreError::NotOrientable(
            "two maximal words under the given ranks".into(),
        ));
    }
    let coef = rel.coeff(&lead).expect("leading term present").clone();
    let inv = coef.inverse().expect("nonzero coefficient");
    let mut rest = rel.clone();
    rest.remove_term(&lead);
    let rhs = rest.scale(&inv).neg();
    RewriteRule::new(lead, rhs)
}

/// Reduction strategies. The first component picks the word among the
/// currently reducible ones, the second the position inside it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    LargestLeftmost,
    SmallestLeftmost,
    LargestRightmost,
    SmallestRightmost,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::LargestLeftmost,
        Strategy::SmallestLeftmost,
        Strategy::LargestRightmost,
        Strategy::SmallestRightmost,
    ];

    fn largest_word(self) -> bool {
        matches!(self, Strategy::LargestLeftmost | Strategy::LargestRightmost)
    }

    fn leftmost(self) -> bool {
        matches!(self, Strategy::LargestLeftmost | Strategy::SmallestLeftmost)
    }
}

impl Default for Strategy {
    fn default() -> Strategy {
        Strategy::LargestLeftmost
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceStep {
    /// Position of the replaced occurrence inside the selected word.
    pub position: usize,
    /// Index of the applied rule.
    pub rule: usize,
}

/// Replayable record of a reduction: the strategy plus one (position, rule)
/// pair per step. The word each step acts on is not recorded; the strategy
/// re-selects it deterministically during replay.
#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub strategy: Option<Strategy>,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-derives the reduction target from the same start polynomial,
    /// verifying each recorded step still applies.
    pub fn replay(&self, system: &RewriteSystem, start: &NCPoly) -> Result<NCPoly> {
        let strategy = self.strategy.unwrap_or_default();
        let mut p = start.clone();
        for (n, step) in self.steps.iter().enumerate() {
            let word = system.select_word(&p, strategy).ok_or_else(|| {
                CoreError::Invalid(format!("trace step {} past a normal form", n))
            })?;
            let rule = system
                .rules
                .get(step.rule)
                .ok_or_else(|| CoreError::Invalid(format!("trace step {} names no rule", n)))?;
            let llen = rule.lhs.len();
            let fits = step.position + llen <= word.len()
                && word.letters()[step.position..step.position + llen] == *rule.lhs.letters();
            if !fits {
                return Err(CoreError::Invalid(format!(
                    "trace step {} does not match the selected word",
                    n
                )));
            }
            system.apply_at(&mut p, &word, step.position, step.rule);
        }
        Ok(p)
    }
}

/// Outcome of a zero test: either the input reduced to zero, or the nonzero
/// normal form is returned as the witness.
#[derive(Clone, Debug)]
pub struct ZeroCheck {
    pub is_zero: bool,
    pub witness: Option<NCPoly>,
    pub trace: ReductionTrace,
}

/// A fuel-bounded deterministic rewrite system over a fixed alphabet.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Vec<RewriteRule>,
    fuel: u64,
    /// Rule indices by first letter of the left side, longest left side
    /// first so matching is maximal-munch.
    by_first: HashMap<GenId, Vec<usize>>,
}

impl RewriteSystem {
    pub fn new(alphabet: Alphabet, rules: Vec<RewriteRule>) -> Result<RewriteSystem> {
        let mut sys = RewriteSystem {
            alphabet,
            rules: Vec::new(),
            fuel: DEFAULT_FUEL,
            by_first: HashMap::new(),
        };
        for r in rules {
            sys.push_rule(r)?;
        }
        Ok(sys)
    }

    pub fn with_fuel(mut self, fuel: u64) -> RewriteSystem {
        self.fuel = fuel;
        self
    }

    pub fn set_fuel(&mut self, fuel: u64) {
        self.fuel = fuel;
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn push_rule(&mut self, rule: RewriteRule) -> Result<()> {
        if self.rules.iter().any(|r| r.lhs == rule.lhs) {
            return Err(CoreError::DuplicateRule(
                rule.lhs.display(&self.alphabet).to_string(),
            ));
        }
        let idx = self.rules.len();
        let first = rule.lhs.letters()[0];
        self.rules.push(rule);
        let rules = &self.rules;
        let bucket = self.by_first.entry(first).or_default();
        bucket.push(idx);
        bucket.sort_by(|&a, &b| {
            rules[b]
                .lhs
                .len()
                .cmp(&rules[a].lhs.len())
                .then(a.cmp(&b))
        });
        Ok(())
    }

    fn set_rhs(&mut self, idx: usize, rhs: NCPoly) -> Result<()> {
        let rebuilt = RewriteRule::new(self.rules[idx].lhs.clone(), rhs)?;
        self.rules[idx] = rebuilt;
        Ok(())
    }

    /// First matching rule at `pos` in `w`: longest left side, then lowest
    /// rule index.
    fn match_at(&self, w: &Word, pos: usize) -> Option<usize> {
        let letters = w.letters();
        let bucket = self.by_first.get(&letters[pos])?;
        for &idx in bucket {
            let lhs = self.rules[idx].lhs.letters();
            if pos + lhs.len() <= letters.len() && &letters[pos..pos + lhs.len()] == lhs {
                return Some(idx);
            }
        }
        None
    }

    fn find_redex(&self, w: &Word, leftmost: bool) -> Option<(usize, usize)> {
        let len = w.len();
        if leftmost {
            (0..len).find_map(|pos| self.match_at(w, pos).map(|r| (pos, r)))
        } else {
            (0..len).rev().find_map(|pos| self.match_at(w, pos).map(|r| (pos, r)))
        }
    }

    fn is_reducible_word(&self, w: &Word) -> bool {
        (0..w.len()).any(|pos| self.match_at(w, pos).is_some())
    }

    pub fn is_normal(&self, p: &NCPoly) -> bool {
        p.terms().all(|(w, _)| !self.is_reducible_word(w))
    }

    /// The word the strategy acts on next, if any is reducible.
    fn select_word(&self, p: &NCPoly, strategy: Strategy) -> Option<Word> {
        if strategy.largest_word() {
            p.terms()
                .rev()
                .map(|(w, _)| w)
                .find(|w| self.is_reducible_word(w))
                .cloned()
        } else {
            p.terms()
                .map(|(w, _)| w)
                .find(|w| self.is_reducible_word(w))
                .cloned()
        }
    }

    fn apply_at(&self, p: &mut NCPoly, word: &Word, pos: usize, rule_idx: usize) {
        let coef = p.remove_term(word).expect("selected word present");
        let rule = &self.rules[rule_idx];
        let (prefix, suffix) = word.split_at_match(pos, rule.lhs.len());
        for (w, c) in rule.rhs.terms() {
            let replaced = prefix.concat(w).concat(&suffix);
            p.insert_add(replaced, &coef * c);
        }
    }

    pub fn normal_form(&self, input: &NCPoly) -> Result<(NCPoly, ReductionTrace)> {
        self.normal_form_with(input, Strategy::default())
    }

    pub fn normal_form_with(
        &self,
        input: &NCPoly,
        strategy: Strategy,
    ) -> Result<(NCPoly, ReductionTrace)> {
        let mut p = input.clone();
        let mut trace = ReductionTrace {
            strategy: Some(strategy),
            steps: Vec::new(),
        };
        loop {
            let Some(word) = self.select_word(&p, strategy) else {
                return Ok((p, trace));
            };
            if trace.steps.len() as u64 >= self.fuel {
                let steps = trace.steps.len() as u64;
                return Err(CoreError::FuelExhausted {
                    steps,
                    partial: Box::new(trace),
                });
            }
            let (pos, rule) = self
                .find_redex(&word, strategy.leftmost())
                .expect("selected word is reducible");
            self.apply_at(&mut p, &word, pos, rule);
            trace.steps.push(TraceStep {
                position: pos,
                rule,
            });
        }
    }

    /// Decides whether `input` reduces to zero; if not, the nonzero normal
    /// form is the witness.
    pub fn reduces_to_zero(&self, input: &NCPoly) -> Result<ZeroCheck> {
        let (nf, trace) = self.normal_form(input)?;
        if nf.is_zero() {
            Ok(ZeroCheck {
                is_zero: true,
                witness: None,
                trace,
            })
        } else {
            Ok(ZeroCheck {
                is_zero: false,
                witness: Some(nf),
                trace,
            })
        }
    }
}

/// Builds a reduced rewrite system from raw relations: each relation is
/// first reduced by the rules accepted so far (duplicates and consequences
/// drop out), then oriented; afterwards every right side is reduced to
/// normal form under the full system.
pub fn interreduce(
    alphabet: &Alphabet,
    relations: &[NCPoly],
    order: WordOrder,
    fuel: u64,
) -> Result<RewriteSystem> {
    let mut sys = RewriteSystem::new(alphabet.clone(), Vec::new())?.with_fuel(fuel);
    for rel in relations {
        let (nf, _) = sys.normal_form(rel)?;
        if nf.is_zero() {
            continue;
        }
        let rule = orient_relation(&nf, order)?;
        sys.push_rule(rule)?;
    }
    loop {
        let mut changed = false;
        for i in 0..sys.rules.len() {
            let (nf, _) = sys.normal_form(&sys.rules[i].rhs)?;
            if nf != sys.rules[i].rhs {
                sys.set_rhs(i, nf)?;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(sys)
}

/// Scope of a normal-form uniqueness sweep: all words up to
/// `exhaustive_degree`, plus optionally `sample_count` distinct seeded
/// random words of degree `sample_degree`.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub exhaustive_degree: u32,
    pub sample_degree: Option<u32>,
    pub sample_count: usize,
    pub seed: u64,
}

/// Result of a uniqueness sweep. `disagreements` lists words whose normal
/// form depended on the strategy; `fuel_exhausted` lists words some strategy
/// failed to finish, which leaves their uniqueness unattested.
#[derive(Clone, Debug, Default)]
pub struct SweepOutcome {
    pub words_checked: u64,
    pub disagreements: Vec<Word>,
    pub fuel_exhausted: Vec<Word>,
}

impl SweepOutcome {
    pub fn all_unique(&self) -> bool {
        self.disagreements.is_empty() && self.fuel_exhausted.is_empty()
    }
}

/// Reduces every word in scope under all four strategies and compares the
/// results.
pub fn check_unique_normal_forms(sys: &RewriteSystem, spec: &SweepSpec) -> SweepOutcome {
    let n = sys.alphabet.len() as GenId;
    let mut outcome = SweepOutcome::default();
    let mut words: BTreeSet<Word> = BTreeSet::new();
    let mut stack: Vec<Vec<GenId>> = vec![vec![]];
    while let Some(w) = stack.pop() {
        if (w.len() as u32) < spec.exhaustive_degree {
            for g in 0..n {
                let mut next = w.clone();
                next.push(g);
                stack.push(next);
            }
        }
        words.insert(Word::from_ids(w));
    }
    if let Some(deg) = spec.sample_degree {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut sampled: HashSet<Word> = HashSet::new();
        let mut attempts = 0usize;
        let limit = spec.sample_count.saturating_mul(64).max(1024);
        while sampled.len() < spec.sample_count && attempts < limit {
            attempts += 1;
            let ids: Vec<GenId> = (0..deg).map(|_| rng.random_range(0..n)).collect();
            sampled.insert(Word::from_ids(ids));
        }
        words.extend(sampled);
    }
    for w in words {
        outcome.words_checked += 1;
        let input = NCPoly::from_term(w.clone(), crate::scalar::ScalarValue::one());
        let mut results: Vec<NCPoly> = Vec::new();
        let mut failed = false;
        for strat in Strategy::ALL {
            match sys.normal_form_with(&input, strat) {
                Ok((nf, _)) => results.push(nf),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            outcome.fuel_exhausted.push(w);
            continue;
        }
        if results.windows(2).any(|pair| pair[0] != pair[1]) {
            outcome.disagreements.push(w);
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Parity;
    use crate::parser::parse_expr;
    use crate::scalar::ScalarValue;

    fn osc_alphabet() -> Alphabet {
        Alphabet::new(vec![
            ("x1", Parity::Even, 30),
            ("x2", Parity::Even, 20),
            ("x3", Parity::Even, 10),
        ])
        .unwrap()
    }

    fn osc_system() -> RewriteSystem {
        let a = osc_alphabet();
        let rels: Vec<NCPoly> = [
            "x1*x2 - q*x2*x1 - s*x3*x3",
            "x1*x3 - u*x3*x1",
            "x2*x3 - 1/u*x3*x2",
        ]
        .iter()
        .map(|s| parse_expr(s, &a).unwrap())
        .collect();
        interreduce(&a, &rels, WordOrder::DegLex, DEFAULT_FUEL).unwrap()
    }

    #[test]
    fn cubic_word_reduces_in_three_steps() {
        let sys = osc_system();
        let a = sys.alphabet();
        let input = parse_expr("x1*x2*x3", a).unwrap();
        let (nf, trace) = sys.normal_form(&input).unwrap();
        let expect = parse_expr("q*x3*x2*x1 + s*x3*x3*x3", a).unwrap();
        assert_eq!(nf, expect);
        assert_eq!(trace.len(), 3);
    }

    #[test]
    fn zero_check_produces_witness() {
        let sys = osc_system();
        let a = sys.alphabet();
        let input = parse_expr("x1*x2 - x2*x1", a).unwrap();
        let check = sys.reduces_to_zero(&input).unwrap();
        assert!(!check.is_zero);
        let w = check.witness.unwrap();
        let expect = parse_expr("(q - 1)*x2*x1 + s*x3*x3", a).unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn defining_relations_reduce_to_zero() {
        let sys = osc_system();
        let a = sys.alphabet();
        for src in [
            "x1*x2 - q*x2*x1 - s*x3*x3",
            "x1*x3 - u*x3*x1",
            "x2*x3 - 1/u*x3*x2",
        ] {
            let p = parse_expr(src, a).unwrap();
            assert!(sys.reduces_to_zero(&p).unwrap().is_zero);
        }
    }

    #[test]
    fn trace_replays_to_same_normal_form() {
        let sys = osc_system();
        let a = sys.alphabet();
        let input = parse_expr("x1*x1*x2*x3 - 7*x2*x3*x1 + q*x1*x3*x3", a).unwrap();
        let (nf, trace) = sys.normal_form(&input).unwrap();
        let replayed = trace.replay(&sys, &input).unwrap();
        assert_eq!(nf, replayed);
    }

    #[test]
    fn replay_rejects_foreign_trace() {
        let sys = osc_system();
        let a = sys.alphabet();
        let input = parse_expr("x1*x2*x3", a).unwrap();
        let other = parse_expr("x2*x3", a).unwrap();
        let (_, trace) = sys.normal_form(&input).unwrap();
        assert!(trace.replay(&sys, &other).is_err());
    }

    #[test]
    fn fuel_exhaustion_is_an_error() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        // a*b -> 1 + b*a together with b*a -> 2*a*b grows forever.
        let r1 = RewriteRule::new(
            a.word_from_names(&["a", "b"]).unwrap(),
            parse_expr("1 + b*a", &a).unwrap(),
        )
        .unwrap();
        let r2 = RewriteRule::new(
            a.word_from_names(&["b", "a"]).unwrap(),
            parse_expr("2*a*b", &a).unwrap(),
        )
        .unwrap();
        let sys = RewriteSystem::new(a.clone(), vec![r1, r2])
            .unwrap()
            .with_fuel(50);
        let input = parse_expr("a*b", &a).unwrap();
        match sys.normal_form(&input) {
            Err(CoreError::FuelExhausted { steps, partial }) => {
                assert_eq!(steps, 50);
                assert_eq!(partial.len(), 50);
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn orientation_follows_the_word_order() {
        // Alphabet a > b > c > d. The relation b*d + b*a has DegLex leading
        // word b*a (second letter decides) but b*d is the out-of-order word,
        // so DegInvLex picks it.
        let a = Alphabet::new(vec![
            ("a", Parity::Even, 4),
            ("b", Parity::Even, 3),
            ("c", Parity::Even, 2),
            ("d", Parity::Even, 1),
        ])
        .unwrap();
        let rel = parse_expr("b*d + b*a", &a).unwrap();
        let deglex = orient_relation(&rel, WordOrder::DegLex).unwrap();
        assert_eq!(deglex.lhs(), &a.word_from_names(&["b", "a"]).unwrap());
        let invlex = orient_relation(&rel, WordOrder::DegInvLex).unwrap();
        assert_eq!(invlex.lhs(), &a.word_from_names(&["b", "d"]).unwrap());
    }

    #[test]
    fn orientation_detects_rank_ties() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        let rel = parse_expr("a*b + b*a", &a).unwrap();
        // Collapsing both letters onto one rank makes the two words
        // incomparable.
        let err = orient_relation_ranked(&rel, Some(&[0, 0]), WordOrder::DegLex).unwrap_err();
        assert!(matches!(err, CoreError::NotOrientable(_)));
        // With honest ranks the same relation orients fine.
        assert!(orient_relation_ranked(&rel, Some(&[0, 1]), WordOrder::DegLex).is_ok());
    }

    #[test]
    fn maximal_munch_prefers_longer_left_side() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        let long = RewriteRule::new(
            a.word_from_names(&["a", "b", "a"]).unwrap(),
            NCPoly::one(),
        )
        .unwrap();
        let short = RewriteRule::new(
            a.word_from_names(&["a", "b"]).unwrap(),
            parse_expr("b*a", &a).unwrap(),
        )
        .unwrap();
        let sys = RewriteSystem::new(a.clone(), vec![short, long]).unwrap();
        let input = parse_expr("a*b*a", &a).unwrap();
        let (nf, trace) = sys.normal_form(&input).unwrap();
        assert_eq!(nf, NCPoly::one());
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.steps[0].rule, 1);
    }

    #[test]
    fn interreduce_drops_consequences_and_reduces_right_sides() {
        let a = Alphabet::new(vec![
            ("a", Parity::Even, 3),
            ("b", Parity::Even, 2),
            ("c", Parity::Even, 1),
        ])
        .unwrap();
        let rels = vec![
            parse_expr("c*c", &a).unwrap(),
            parse_expr("a*b + c*c", &a).unwrap(),
            // Consequence of the first relation; must drop out.
            parse_expr("q*c*c", &a).unwrap(),
        ];
        let sys = interreduce(&a, &rels, WordOrder::DegLex, DEFAULT_FUEL).unwrap();
        assert_eq!(sys.rules().len(), 2);
        let ab = a.word_from_names(&["a", "b"]).unwrap();
        let rule = sys.rules().iter().find(|r| r.lhs() == &ab).unwrap();
        // The c*c tail of the right side is reduced away.
        assert!(rule.rhs().is_zero());
    }

    #[test]
    fn sweep_accepts_the_oscillator_system() {
        let sys = osc_system();
        let spec = SweepSpec {
            exhaustive_degree: 4,
            sample_degree: Some(6),
            sample_count: 25,
            seed: 0,
        };
        let outcome = check_unique_normal_forms(&sys, &spec);
        assert!(outcome.all_unique());
        // 1 + 3 + 9 + 27 + 81 enumerated words plus 25 samples.
        assert_eq!(outcome.words_checked, 121 + 25);
    }

    #[test]
    fn sweep_flags_a_non_confluent_system() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        // a*b -> b and b*a -> a: the word a*b*a reduces to b*a -> a one way
        // and to a*a the other.
        let r1 = RewriteRule::new(
            a.word_from_names(&["a", "b"]).unwrap(),
            NCPoly::from_term(a.word_from_names(&["b"]).unwrap(), ScalarValue::one()),
        );
        let r2 = RewriteRule::new(
            a.word_from_names(&["b", "a"]).unwrap(),
            NCPoly::from_term(a.word_from_names(&["a"]).unwrap(), ScalarValue::one()),
        );
        // Length-1 right sides are fine; length-1 LEFT sides are not, which
        // is what RuleTooShort guards. These rules are legal.
        let sys = RewriteSystem::new(a.clone(), vec![r1.unwrap(), r2.unwrap()]).unwrap();
        let spec = SweepSpec {
            exhaustive_degree: 3,
            sample_degree: None,
            sample_count: 0,
            seed: 0,
        };
        let outcome = check_unique_normal_forms(&sys, &spec);
        assert!(!outcome.disagreements.is_empty());
    }

    #[test]
    fn rule_validation_rejects_degenerate_rules() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        let short = RewriteRule::new(a.word_from_names(&["a"]).unwrap(), NCPoly::one());
        assert!(matches!(short, Err(CoreError::RuleTooShort)));
        let circular = RewriteRule::new(
            a.word_from_names(&["a", "b"]).unwrap(),
            parse_expr("b*a*b*a", &a).unwrap(),
        );
        assert!(matches!(circular, Err(CoreError::RuleNotReduced)));
    }

    #[test]
    fn duplicate_left_sides_rejected() {
        let a = Alphabet::new(vec![("a", Parity::Even, 2), ("b", Parity::Even, 1)]).unwrap();
        let ab = a.word_from_names(&["a", "b"]).unwrap();
        let r1 = RewriteRule::new(ab.clone(), NCPoly::one()).unwrap();
        let r2 = RewriteRule::new(ab, NCPoly::zero()).unwrap();
        assert!(matches!(
            RewriteSystem::new(a, vec![r1, r2]),
            Err(CoreError::DuplicateRule(_))
        ));
    }

    #[test]
    fn normal_form_is_idempotent() {
        let sys = osc_system();
        let a = sys.alphabet();
        let input = parse_expr("x1*x1*x2 + u*x2*x1*x3*x2", a).unwrap();
        let (nf, _) = sys.normal_form(&input).unwrap();
        let (nf2, trace2) = sys.normal_form(&nf).unwrap();
        assert_eq!(nf, nf2);
        assert!(trace2.is_empty());
    }
}
