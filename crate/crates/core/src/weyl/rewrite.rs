//! Literal term rewriting on words in `{Q, D, E}`.
//!
//! Rules: `DQ → QD + 1`, `EE → E`, `DE → 0`, `EQ → 0`, and the contraction
//! `E D^k Q^m E → m!·δ_km·E` for `k + m ≥ 1`. Irreducible words are exactly
//! `Q^h E^ε D^k`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraElement, Generator, Monomial, Scalar};
use Generator::{D, E, Q};

pub type Word = Vec<Generator>;

/// Integer combination of words.
pub type WordCombination = BTreeMap<Word, BigInt>;

/// One applicable rule instance: replace `word[start..end]` by `replacement`.
#[derive(Clone, Debug)]
pub struct Redex {
    pub start: usize,
    pub end: usize,
    pub replacement: Vec<(Word, BigInt)>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Every redex in `word`, in left-to-right order.
pub fn redexes(word: &[Generator]) -> Vec<Redex> {
    let mut out = Vec::new();
    for i in 0..word.len().saturating_sub(1) {
        let pair = (word[i], word[i + 1]);
        let replacement = match pair {
            (D, Q) => Some(vec![(vec![Q, D], BigInt::one()), (vec![], BigInt::one())]),
            (E, E) => Some(vec![(vec![E], BigInt::one())]),
            (D, E) | (E, Q) => Some(vec![]),
            _ => None,
        };
        if let Some(replacement) = replacement {
            out.push(Redex { start: i, end: i + 2, replacement });
        }
    }
    // contraction E D^k Q^m E
    for i in 0..word.len() {
        if word[i] != E {
            continue;
        }
        let mut j = i + 1;
        let k = word[j..].iter().take_while(|g| **g == D).count();
        j += k;
        let m = word[j..].iter().take_while(|g| **g == Q).count();
        j += m;
        if k + m >= 1 && j < word.len() && word[j] == E {
            let replacement = if k == m { vec![(vec![E], factorial(m))] } else { vec![] };
            out.push(Redex { start: i, end: j + 1, replacement });
        }
    }
    out
}

pub fn is_normal(word: &[Generator]) -> bool {
    redexes(word).is_empty()
}

fn apply(word: &[Generator], r: &Redex) -> Vec<(Word, BigInt)> {
    r.replacement
        .iter()
        .map(|(rep, c)| {
            let mut w = word[..r.start].to_vec();
            w.extend_from_slice(rep);
            w.extend_from_slice(&word[r.end..]);
            (w, c.clone())
        })
        .collect()
}

fn add_into(acc: &mut WordCombination, w: Word, c: BigInt) {
    let slot = acc.entry(w.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&w);
    }
}

/// Reduces with a fixed strategy: always the leftmost redex.
pub fn reduce_leftmost(word: &[Generator]) -> WordCombination {
    let mut todo: Vec<(Word, BigInt)> = vec![(word.to_vec(), BigInt::one())];
    let mut done = WordCombination::new();
    while let Some((w, c)) = todo.pop() {
        let rs = redexes(&w);
        let first = rs.into_iter().min_by_key(|r| (r.start, r.end));
        match first {
            None => add_into(&mut done, w, c),
            Some(r) => todo.extend(apply(&w, &r).into_iter().map(|(w2, c2)| (w2, c2 * &c))),
        }
    }
    done
}

/// Memoized exploration of every reduction order.
#[derive(Default)]
pub struct Explorer {
    memo: HashMap<Word, Vec<WordCombination>>,
}

impl Explorer {
    pub fn new() -> Self {
        Self::default()
    }

    /// All distinct normal forms reachable from `word` by choosing the first
    /// rewrite freely, recursively. A confluent system yields exactly one.
    pub fn all_normal_forms(&mut self, word: &[Generator]) -> Vec<WordCombination> {
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let rs = redexes(word);
        let mut results: Vec<WordCombination> = Vec::new();
        if rs.is_empty() {
            let mut nf = WordCombination::new();
            nf.insert(word.to_vec(), BigInt::one());
            results.push(nf);
        }
        for r in &rs {
            // combine every choice of normal form for every produced word
            let mut partial: Vec<WordCombination> = vec![WordCombination::new()];
            for (w, c) in apply(word, r) {
                let options = self.all_normal_forms(&w);
                let mut next = Vec::new();
                for base in &partial {
                    for opt in &options {
                        let mut acc = base.clone();
                        for (w2, c2) in opt {
                            add_into(&mut acc, w2.clone(), c2 * &c);
                        }
                        if !next.contains(&acc) {
                            next.push(acc);
                        }
                    }
                }
                partial = next;
            }
            for p in partial {
                if !results.contains(&p) {
                    results.push(p);
                }
            }
        }
        self.memo.insert(word.to_vec(), results.clone());
        results
    }
}

/// Reads an irreducible word as a monomial.
pub fn word_to_monomial(word: &[Generator]) -> Option<Monomial> {
    if !is_normal(word) {
        return None;
    }
    let q = word.iter().filter(|g| **g == Q).count() as u32;
    let d = word.iter().filter(|g| **g == D).count() as u32;
    let e = word.contains(&E);
    Some(Monomial::new(q, e, d))
}

pub fn combination_to_element<S: Scalar>(comb: &WordCombination) -> AlgebraElement<S> {
    AlgebraElement::from_terms(comb.iter().map(|(w, c)| {
        let m = word_to_monomial(w).expect("combination of irreducible words");
        (m, S::from_bigint(c))
    }))
}

/// All words of exactly `len` letters over `{Q, D, E}`.
pub fn all_words(len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                [Q, D, E].into_iter().map(move |g| {
                    let mut w2 = w.clone();
                    w2.push(g);
                    w2
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{normal_order, Surd};

    #[test]
    fn irreducible_words_are_normal_monomials() {
        for len in 0..=5 {
            for w in all_words(len) {
                if is_normal(&w) {
                    let m = word_to_monomial(&w).unwrap();
                    let canonical: Word = std::iter::repeat(Q)
                        .take(m.q as usize)
                        .chain(m.e.then_some(E))
                        .chain(std::iter::repeat(D).take(m.d as usize))
                        .collect();
                    assert_eq!(w, canonical);
                }
            }
        }
    }

    #[test]
    fn confluent_up_to_length_five() {
        let mut ex = Explorer::new();
        for len in 0..=5 {
            for w in all_words(len) {
                let forms = ex.all_normal_forms(&w);
                assert_eq!(forms.len(), 1, "{w:?}");
                let closed: AlgebraElement<Surd> = normal_order(&w).unwrap();
                assert_eq!(combination_to_element::<Surd>(&forms[0]), closed, "{w:?}");
            }
        }
    }

    #[test]
    fn leftmost_strategy_matches() {
        let w = vec![E, D, D, Q, Q, E];
        let nf = reduce_leftmost(&w);
        let mut expected = WordCombination::new();
        expected.insert(vec![E], BigInt::from(2));
        assert_eq!(nf, expected);
    }
}
