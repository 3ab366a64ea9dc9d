//! The root poset: covers, depth, positive expressions and inversion sets.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::cartan::{CartanData, Root};
use crate::cone::Sign;
use crate::error::{Error, Result};

/// Default bound on descent steps when computing depths.
pub const DEFAULT_DEPTH_BOUND: usize = 64;

/// How `s_i` moves a positive root in the root poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverDirection {
    Up,
    Down,
    Fixed,
}

pub fn cover_direction(c: &CartanData, i: usize, beta: &Root) -> Result<CoverDirection> {
    let k = c.coroot_pairing(i, beta);
    if k < 0 {
        Ok(CoverDirection::Up)
    } else if k == 0 {
        Ok(CoverDirection::Fixed)
    } else if beta.simple_index() == Some(i) {
        Err(Error::DownToNegative { vertex: i + 1 })
    } else {
        Ok(CoverDirection::Down)
    }
}

/// A word `β = s_{i_r} ⋯ s_{i_1} α_j` climbing the root poset one cover at a time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveExpression {
    seed: usize,
    steps: Vec<usize>,
    root: Root,
}

impl PositiveExpression {
    /// Checks that every step is an up-cover.
    pub fn new(c: &CartanData, seed: usize, steps: Vec<usize>) -> Result<Self> {
        let n = c.rank();
        if seed >= n || steps.iter().any(|&i| i >= n) {
            return Err(Error::InvalidInput(format!("vertex out of range for rank {n}")));
        }
        let mut beta = c.simple_root(seed);
        for &i in &steps {
            if cover_direction(c, i, &beta)? != CoverDirection::Up {
                return Err(Error::InvalidInput(format!(
                    "s{} does not move {beta} up in the root poset",
                    i + 1
                )));
            }
            beta = c.reflect_root(i, &beta);
        }
        Ok(PositiveExpression { seed, steps, root: beta })
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    /// Vertices in application order.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The roots `α_j, s_{i_1}α_j, …, β` along the chain.
    pub fn chain(&self, c: &CartanData) -> Vec<Root> {
        let mut out = vec![c.simple_root(self.seed)];
        for &i in &self.steps {
            let next = c.reflect_root(i, out.last().expect("chain is nonempty"));
            out.push(next);
        }
        out
    }

    /// `δ_k = s_{i_r} ⋯ s_{i_{k+1}} α_{i_k}` for `k = 1..r`.
    pub fn deltas(&self, c: &CartanData) -> Vec<Root> {
        let r = self.steps.len();
        (0..r)
            .map(|k| {
                let mut v = c.simple_root(self.steps[k]);
                for &i in &self.steps[k + 1..] {
                    v = c.reflect_root(i, &v);
                }
                v
            })
            .collect()
    }

    /// The palindromic word of the reflection `t` with root `β`.
    pub fn reflection_word(&self) -> ReflectionWord {
        let mut word: Vec<usize> = self.steps.iter().rev().copied().collect();
        word.push(self.seed);
        word.extend(self.steps.iter().copied());
        ReflectionWord { word }
    }
}

impl fmt::Display for PositiveExpression {
    /// Product form, leftmost reflection applied last, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &i in self.steps.iter().rev() {
            write!(f, "s{} ", i + 1)?;
        }
        write!(f, "α{}", self.seed + 1)
    }
}

/// The word `s_{i_r} ⋯ s_{i_1} s_j s_{i_1} ⋯ s_{i_r}`, stored left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReflectionWord {
    word: Vec<usize>,
}

impl ReflectionWord {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// A positive expression with a sign attached to every step, written
/// `"S6 ; 5+ 4+ 2+ 1-"`: the seed vertex, then steps in application order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedWord {
    seed: usize,
    steps: Vec<(usize, Sign)>,
}

impl SignedWord {
    pub fn new(seed: usize, steps: Vec<(usize, Sign)>) -> Self {
        SignedWord { seed, steps }
    }

    /// Attaches `signs` to the steps of `expr`.
    pub fn from_expression(expr: &PositiveExpression, signs: &[Sign]) -> Self {
        assert_eq!(expr.len(), signs.len(), "one sign per step");
        SignedWord { seed: expr.seed, steps: expr.steps.iter().copied().zip(signs.iter().copied()).collect() }
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn steps(&self) -> &[(usize, Sign)] {
        &self.steps
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.steps.iter().map(|s| s.1).collect()
    }

    /// The underlying positive expression, validated against `c`.
    pub fn expression(&self, c: &CartanData) -> Result<PositiveExpression> {
        PositiveExpression::new(c, self.seed, self.steps.iter().map(|s| s.0).collect())
    }
}

impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{} ;", self.seed + 1)?;
        for (i, s) in &self.steps {
            write!(f, " {}{}", i + 1, s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SignedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse signed word {s:?}"));
        let (head, tail) = s.split_once(';').unwrap_or((s, ""));
        let seed: usize = head.trim().strip_prefix('S').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        if seed == 0 {
            return Err(bad());
        }
        let mut steps = Vec::new();
        for tok in tail.split_whitespace() {
            let (num, sign) = match tok.chars().last() {
                Some('+') => (&tok[..tok.len() - 1], Sign::Plus),
                Some('-') => (&tok[..tok.len() - 1], Sign::Minus),
                _ => return Err(bad()),
            };
            let v: usize = num.parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            steps.push((v - 1, sign));
        }
        Ok(SignedWord { seed: seed - 1, steps })
    }
}

/// Number of down-steps from `β` to a simple root, with an explicit bound.
pub fn depth_with_bound(c: &CartanData, beta: &Root, bound: usize) -> Result<usize> {
    Ok(descend(c, beta, bound)?.1.len())
}

pub fn depth(c: &CartanData, beta: &Root) -> Result<usize> {
    depth_with_bound(c, beta, DEFAULT_DEPTH_BOUND)
}

/// Greedy descent: the final simple index and the vertices used, in descent order.
fn descend(c: &CartanData, beta: &Root, bound: usize) -> Result<(usize, Vec<usize>)> {
    let not_real = || Error::NotPositiveRealRoot(beta.to_string());
    if beta.rank() != c.rank() || !beta.is_positive() {
        return Err(not_real());
    }
    let mut cur = beta.clone();
    let mut used = Vec::new();
    loop {
        if let Some(j) = cur.simple_index() {
            return Ok((j, used));
        }
        if used.len() >= bound {
            return Err(not_real());
        }
        let i = (0..c.rank()).find(|&i| c.coroot_pairing(i, &cur) > 0).ok_or_else(not_real)?;
        cur = c.reflect_root(i, &cur);
        if !cur.is_positive() {
            return Err(not_real());
        }
        used.push(i);
    }
}

/// The greedy positive expression: descend by the smallest down-cover.
pub fn positive_expression(c: &CartanData, beta: &Root) -> Result<PositiveExpression> {
    let (seed, mut used) = descend(c, beta, DEFAULT_DEPTH_BOUND)?;
    used.reverse();
    let expr = PositiveExpression::new(c, seed, used)?;
    debug_assert_eq!(expr.root(), beta);
    Ok(expr)
}

/// All positive expressions for `β`, stopping after `cap` of them.
pub fn all_positive_expressions(c: &CartanData, beta: &Root, cap: usize) -> Result<Vec<PositiveExpression>> {
    depth(c, beta)?;
    let mut out = Vec::new();
    let mut stack: Vec<(Root, Vec<usize>)> = vec![(beta.clone(), Vec::new())];
    while let Some((cur, used)) = stack.pop() {
        if out.len() >= cap {
            break;
        }
        if let Some(j) = cur.simple_index() {
            let mut steps = used.clone();
            steps.reverse();
            out.push(PositiveExpression::new(c, j, steps)?);
            continue;
        }
        for i in (0..c.rank()).rev() {
            if c.coroot_pairing(i, &cur) > 0 {
                let mut next = used.clone();
                next.push(i);
                stack.push((c.reflect_root(i, &cur), next));
            }
        }
    }
    Ok(out)
}

/// Positive real roots of depth at most `max_depth`, with their depths,
/// in breadth-first order.
pub fn positive_roots_up_to_depth(c: &CartanData, max_depth: usize) -> Vec<(Root, usize)> {
    let mut seen: HashMap<Root, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for j in 0..c.rank() {
        let r = c.simple_root(j);
        seen.insert(r.clone(), 0);
        order.push((r.clone(), 0));
        queue.push_back((r, 0));
    }
    while let Some((r, d)) = queue.pop_front() {
        if d == max_depth {
            continue;
        }
        for i in 0..c.rank() {
            if c.coroot_pairing(i, &r) < 0 {
                let up = c.reflect_root(i, &r);
                if !seen.contains_key(&up) {
                    seen.insert(up.clone(), d + 1);
                    order.push((up.clone(), d + 1));
                    queue.push_back((up, d + 1));
                }
            }
        }
    }
    order
}

/// The inversion roots `α_{i_1}, s_{i_1}α_{i_2}, …` of a reduced word.
pub fn inversions(c: &CartanData, word: &[usize]) -> Result<Vec<Root>> {
    let n = c.rank();
    if let Some(&i) = word.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidInput(format!("vertex {} out of range", i + 1)));
    }
    let mut out = Vec::with_capacity(word.len());
    let mut seen = BTreeSet::new();
    for k in 0..word.len() {
        let mut v = c.simple_root(word[k]);
        for &i in word[..k].iter().rev() {
            v = c.reflect_root(i, &v);
        }
        if !v.is_positive() {
            return Err(Error::NotReduced(format!("prefix root {v} is not positive")));
        }
        if !seen.insert(v.clone()) {
            return Err(Error::NotReduced(format!("prefix root {v} repeats")));
        }
        out.push(v);
    }
    Ok(out)
}

/// `γ ↦ −t(γ) = −γ + (β_t^∨, γ) β_t` on the inversions of the reflection `t`.
pub fn inversion_involution(c: &CartanData, t_root: &Root, gamma: &Root) -> Result<Root> {
    let nb = c.bilinear(t_root, t_root);
    if nb <= 0 {
        return Err(Error::NotPositiveRealRoot(t_root.to_string()));
    }
    let num = 2 * c.bilinear(t_root, gamma);
    if num % nb != 0 {
        return Err(Error::NotPositiveRealRoot(t_root.to_string()));
    }
    let k = num / nb;
    let image: Root = Root::new(
        gamma.coords().iter().zip(t_root.coords()).map(|(g, b)| k * b - g).collect(),
    );
    if !gamma.is_positive() || !image.is_positive() {
        return Err(Error::NotAnInversion(gamma.to_string()));
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::bundled;

    fn b2() -> CartanData {
        bundled::load("b2").unwrap()
    }

    fn r(v: &[i64]) -> Root {
        Root::new(v.to_vec())
    }

    #[test]
    fn covers_in_b2() {
        let c = b2();
        assert_eq!(cover_direction(&c, 0, &r(&[0, 1])).unwrap(), CoverDirection::Up);
        assert_eq!(cover_direction(&c, 1, &r(&[1, 1])).unwrap(), CoverDirection::Down);
        assert_eq!(cover_direction(&c, 0, &r(&[1, 1])).unwrap(), CoverDirection::Fixed);
        assert!(matches!(cover_direction(&c, 0, &r(&[1, 0])), Err(Error::DownToNegative { vertex: 1 })));
    }

    #[test]
    fn depths() {
        let c = b2();
        assert_eq!(depth(&c, &r(&[1, 0])).unwrap(), 0);
        assert_eq!(depth(&c, &r(&[2, 1])).unwrap(), 1);
        assert_eq!(depth(&c, &r(&[1, 1])).unwrap(), 1);
        assert!(depth(&c, &r(&[1, 2])).is_err());
        assert!(depth(&c, &r(&[-1, 0])).is_err());
        let kron = CartanData::symmetric(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(depth(&kron, &r(&[1, 1])).is_err());
        assert_eq!(depth(&kron, &r(&[5, 4])).unwrap(), 4);
        assert!(depth_with_bound(&kron, &r(&[5, 4]), 3).is_err());
        let six = bundled::load("rank6").unwrap();
        assert_eq!(depth(&six, &r(&[3, 3, 2, 4, 2, 1])).unwrap(), 10);
    }

    #[test]
    fn greedy_expressions() {
        let c = b2();
        let e = positive_expression(&c, &r(&[1, 1])).unwrap();
        assert_eq!((e.seed(), e.steps()), (0, &[1usize][..]));
        let e = positive_expression(&c, &r(&[1, 0])).unwrap();
        assert!(e.is_empty());
        let d4 = bundled::load("d4").unwrap();
        let e = positive_expression(&d4, &r(&[2, 1, 1, 1])).unwrap();
        assert_eq!((e.seed(), e.steps()), (3, &[0usize, 2, 1, 0][..]));
        assert_eq!(e.to_string(), "s1 s2 s3 s1 α4");
        let reference = PositiveExpression::new(&d4, 0, vec![3, 2, 1, 0]).unwrap();
        assert_eq!(reference.to_string(), "s1 s2 s3 s4 α1");
        assert_eq!(reference.root(), e.root());
        let six = bundled::load("rank6").unwrap();
        let e = positive_expression(&six, &r(&[3, 3, 2, 4, 2, 1])).unwrap();
        assert_eq!(e.len(), 10);
        assert_eq!(e.root(), &r(&[3, 3, 2, 4, 2, 1]));
    }

    #[test]
    fn rank6_word_is_positive() {
        let six = bundled::load("rank6").unwrap();
        let e = PositiveExpression::new(&six, 5, vec![4, 3, 1, 0, 3, 4, 2, 3, 1, 0]).unwrap();
        assert_eq!(e.root(), &r(&[3, 3, 2, 4, 2, 1]));
    }

    #[test]
    fn non_cover_steps_rejected() {
        assert!(PositiveExpression::new(&b2(), 0, vec![0]).is_err());
    }

    #[test]
    fn inversion_sets() {
        let c = b2();
        assert_eq!(inversions(&c, &[0, 1]).unwrap(), vec![r(&[1, 0]), r(&[2, 1])]);
        assert_eq!(inversions(&c, &[1]).unwrap(), vec![r(&[0, 1])]);
        assert!(matches!(inversions(&c, &[0, 0]), Err(Error::NotReduced(_))));
        // The longest element of B2 has length 4.
        assert_eq!(inversions(&c, &[0, 1, 0, 1]).unwrap().len(), 4);
        assert!(inversions(&c, &[0, 1, 0, 1, 0]).is_err());
    }

    #[test]
    fn signed_word_syntax() {
        let text = "S6 ; 5+ 4+ 2+ 1- 4- 5- 3+ 4+ 2+ 1-";
        let w: SignedWord = text.parse().unwrap();
        assert_eq!(w.seed(), 5);
        assert_eq!(w.steps()[3], (0, Sign::Minus));
        assert_eq!(w.to_string(), text);
        let six = bundled::load("rank6").unwrap();
        assert_eq!(w.expression(&six).unwrap().root(), &r(&[3, 3, 2, 4, 2, 1]));
        assert_eq!("S1 ;".parse::<SignedWord>().unwrap().to_string(), "S1 ;");
        assert_eq!("S1".parse::<SignedWord>().unwrap().steps().len(), 0);
        assert!("S0 ;".parse::<SignedWord>().is_err());
        assert!("S1 ; 2".parse::<SignedWord>().is_err());
        assert!("T1 ; 2+".parse::<SignedWord>().is_err());
    }

    #[test]
    fn involution() {
        let c = b2();
        let t = r(&[1, 1]);
        assert_eq!(inversion_involution(&c, &t, &r(&[0, 1])).unwrap(), r(&[2, 1]));
        assert_eq!(inversion_involution(&c, &t, &t).unwrap(), t);
        assert!(inversion_involution(&c, &t, &r(&[1, 0])).is_err());
    }

    #[test]
    fn reflection_words_are_palindromes_with_paired_inversions() {
        for name in ["b2", "a3", "d4", "rank6"] {
            let c = bundled::load(name).unwrap();
            for (beta, d) in positive_roots_up_to_depth(&c, 6) {
                let e = positive_expression(&c, &beta).unwrap();
                assert_eq!(e.len(), d, "{name} {beta}");
                assert_eq!(e.root(), &beta);
                let t = e.reflection_word();
                assert_eq!(t.len(), 2 * d + 1);
                let inv = inversions(&c, t.word()).unwrap();
                assert_eq!(inv.len(), 2 * d + 1);
                assert!(inv.contains(&beta));
                for g in &inv {
                    let h = inversion_involution(&c, &beta, g).unwrap();
                    assert!(inv.contains(&h));
                    assert_eq!(&inversion_involution(&c, &beta, &h).unwrap(), g);
                }
                // Exactly one of δ_k and −tδ_k is a δ.
                let deltas = e.deltas(&c);
                for dk in &deltas {
                    let partner = inversion_involution(&c, &beta, dk).unwrap();
                    assert!(!deltas.contains(&partner) || partner == *dk);
                }
            }
        }
    }

    #[test]
    fn depth_changes_by_one() {
        let c = bundled::rank4_family(3, 2, 2).unwrap();
        for (beta, d) in positive_roots_up_to_depth(&c, 5) {
            assert_eq!(depth(&c, &beta).unwrap(), d);
            for i in 0..c.rank() {
                let s = c.reflect_root(i, &beta);
                if s == beta || !s.is_positive() {
                    continue;
                }
                let ds = depth(&c, &s).unwrap();
                assert!(ds + 1 == d || ds == d + 1);
            }
            assert_eq!(beta.gcd(), 1);
        }
    }

    #[test]
    fn expression_enumeration_includes_greedy() {
        let c = bundled::load("d4").unwrap();
        let beta = r(&[2, 1, 1, 1]);
        let all = all_positive_expressions(&c, &beta, 100).unwrap();
        assert!(all.contains(&positive_expression(&c, &beta).unwrap()));
        assert!(all.iter().all(|e| e.root() == &beta && e.len() == 4));
        assert_eq!(all.len(), 12);
        assert_eq!(all_positive_expressions(&c, &beta, 2).unwrap().len(), 2);
    }
}
