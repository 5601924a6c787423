//! Oracles and generators shared by the integration suites. The rank
//! oracle reduces tuples by Nielsen moves and never folds a graph;
//! the scalar oracle multiplies matrices and never looks at a degree.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use freiheit::exact::{GaussianRational, Mat2, Poly};
use freiheit::groupcalc::FreeWord;
use num_traits::Zero;
use rand::Rng;

/// Letters are nonzero integers: generator g is g+1, its inverse -(g+1).
pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        assert_ne!(l, 0, "letter 0 is meaningless");
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn concat_reduce(a: &[i32], b: &[i32]) -> Vec<i32> {
    reduce(a.iter().chain(b.iter()).copied())
}

pub fn to_free_word(w: &[i32]) -> FreeWord {
    FreeWord::from_letters(w.iter().map(|&l| {
        let gen = (l.unsigned_abs() - 1) as u16;
        let sign: i8 = if l > 0 { 1 } else { -1 };
        (gen, sign)
    }))
}

/// Uniform random reduced word of length `1..=max_len` over `rank`
/// generators (no immediate backtracking, then reduced again for
/// safety).
pub fn random_reduced_word(rng: &mut impl Rng, rank: u16, max_len: usize) -> Vec<i32> {
    let len = rng.gen_range(1..=max_len);
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    for _ in 0..len {
        loop {
            let gen = rng.gen_range(1..=rank as i32);
            let letter = if rng.gen_bool(0.5) { gen } else { -gen };
            if letters.last() != Some(&-letter) {
                letters.push(letter);
                break;
            }
        }
    }
    reduce(letters)
}

/// Rank of the subgroup generated by the words, by exhaustive Nielsen
/// reduction: descend in total length whenever a multiplication on
/// either side shortens the tuple, exploring plateaus of equal length
/// exhaustively before concluding the tuple is reduced. For a reduced
/// tuple the non-identity words form a basis, so the rank is the word
/// count.
pub fn nielsen_rank_oracle(words: &[Vec<i32>]) -> usize {
    fn canon_word(w: &[i32]) -> Vec<i32> {
        let inv = invert(w);
        let w = w.to_vec();
        if inv < w {
            inv
        } else {
            w
        }
    }
    fn canon_state(ws: Vec<Vec<i32>>) -> Vec<Vec<i32>> {
        let mut ws: Vec<Vec<i32>> = ws
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(|w| canon_word(&w))
            .collect();
        ws.sort();
        ws
    }
    fn total_len(ws: &[Vec<i32>]) -> usize {
        ws.iter().map(Vec::len).sum()
    }

    let mut state = canon_state(words.iter().map(|w| reduce(w.iter().copied())).collect());
    'descend: loop {
        if state.len() < 2 {
            return state.len();
        }
        let start_len = total_len(&state);
        let mut seen: HashSet<Vec<Vec<i32>>> = HashSet::from([state.clone()]);
        let mut queue: VecDeque<Vec<Vec<i32>>> = VecDeque::from([state.clone()]);
        while let Some(s) = queue.pop_front() {
            for i in 0..s.len() {
                for j in 0..s.len() {
                    if i == j {
                        continue;
                    }
                    for sign in [1, -1] {
                        let factor = if sign > 0 {
                            s[j].clone()
                        } else {
                            invert(&s[j])
                        };
                        // Canonicalization absorbs inverting the whole
                        // word but not which side the factor lands on,
                        // so both products are distinct moves.
                        for product in [
                            concat_reduce(&s[i], &factor),
                            concat_reduce(&factor, &s[i]),
                        ] {
                            let mut next = s.clone();
                            next[i] = product;
                            let next = canon_state(next);
                            let len = total_len(&next);
                            if len < start_len {
                                state = next;
                                continue 'descend;
                            }
                            if len == start_len && seen.insert(next.clone()) {
                                queue.push_back(next);
                            }
                        }
                    }
                }
            }
        }
        return state.len();
    }
}

/// Count scalar images over EVERY alternating word with up to
/// `max_syllables` syllables, bodies from `gammas`, exponents
/// `0 < |m| <= exponent_bound`: plain exact matrix products checked
/// entry by entry. No degree reasoning, no symmetry skipping.
pub fn brute_force_scalar_count(
    gammas: &[Mat2<GaussianRational>],
    max_syllables: usize,
    exponent_bound: i64,
) -> u64 {
    fn is_scalar(m: &Mat2<Poly>) -> bool {
        m.b.is_zero() && m.c.is_zero() && m.a == m.d
    }

    let mut syllables: Vec<Mat2<Poly>> = Vec::new();
    for gamma in gammas {
        for m in -exponent_bound..=exponent_bound {
            if m != 0 {
                syllables.push(freiheit::magnus::syllable_matrix(gamma, m));
            }
        }
    }

    fn walk(
        prefix: &Mat2<Poly>,
        depth_left: usize,
        syllables: &[Mat2<Poly>],
        scalars: &mut u64,
    ) {
        for s in syllables {
            let image = prefix.mul(s);
            if is_scalar(&image) {
                *scalars += 1;
            }
            if depth_left > 1 {
                walk(&image, depth_left - 1, syllables, scalars);
            }
        }
    }

    let mut scalars = 0;
    walk(
        &Mat2::<Poly>::identity(),
        max_syllables,
        &syllables,
        &mut scalars,
    );
    scalars
}
