//! Words in the free product `G * F_n` and in the free group `F_n`.
//!
//! Coefficients are opaque free letters: a symbol and its formal inverse
//! cancel when adjacent, nothing else. Variables are `x1..xn` carrying
//! nonzero integer exponents. All constructors return freely reduced words.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown symbol `{symbol}` at byte {position}")]
    UnknownSymbol { symbol: String, position: usize },
    #[error("variable index {index} out of range 1..={n} at byte {position}")]
    VariableOutOfRange {
        index: usize,
        n: usize,
        position: usize,
    },
    #[error("zero exponent at byte {position}")]
    ZeroExponent { position: usize },
    #[error("malformed token `{token}` at byte {position}")]
    Malformed { token: String, position: usize },
    #[error("variable count must be at least 1")]
    NoVariables,
    #[error("variable counts differ: {left} vs {right}")]
    MismatchedVariables { left: usize, right: usize },
    #[error("commutator term {index} has a zero exponent")]
    ZeroCommutatorExponent { index: usize },
    #[error("iterated commutator depth must be at least 1, got {0}")]
    InvalidDepth(usize),
}

/// One letter of a word in `G * F_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Token {
    Coefficient { symbol: String, inverted: bool },
    Variable { index: usize, exponent: i64 },
}

impl Token {
    pub fn coefficient(symbol: impl Into<String>) -> Self {
        Token::Coefficient {
            symbol: symbol.into(),
            inverted: false,
        }
    }

    pub fn variable(index: usize, exponent: i64) -> Self {
        Token::Variable { index, exponent }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Token::Coefficient { symbol, inverted } => Token::Coefficient {
                symbol: symbol.clone(),
                inverted: !inverted,
            },
            Token::Variable { index, exponent } => Token::Variable {
                index: *index,
                exponent: -exponent,
            },
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Coefficient { symbol, inverted } => {
                if *inverted {
                    write!(f, "{symbol}^-1")
                } else {
                    write!(f, "{symbol}")
                }
            }
            Token::Variable { index, exponent } => {
                if *exponent == 1 {
                    write!(f, "x{index}")
                } else {
                    write!(f, "x{index}^{exponent}")
                }
            }
        }
    }
}

/// Push `token` onto a reduced stack, cancelling or merging with the top.
fn push_reduced(stack: &mut Vec<Token>, token: Token) {
    match (&token, stack.last_mut()) {
        (Token::Variable { exponent: 0, .. }, _) => {}
        (
            Token::Variable { index, exponent },
            Some(Token::Variable {
                index: top_index,
                exponent: top_exp,
            }),
        ) if index == top_index => {
            *top_exp += exponent;
            if *top_exp == 0 {
                stack.pop();
            }
        }
        (
            Token::Coefficient { symbol, inverted },
            Some(Token::Coefficient {
                symbol: top_symbol,
                inverted: top_inverted,
            }),
        ) if symbol == top_symbol && inverted != top_inverted => {
            stack.pop();
        }
        _ => stack.push(token),
    }
}

/// Freely reduce an arbitrary token sequence.
pub fn reduce(tokens: impl IntoIterator<Item = Token>) -> Vec<Token> {
    let mut stack = Vec::new();
    for t in tokens {
        push_reduced(&mut stack, t);
    }
    stack
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Returns the index if `s` has the shape `x<digits>`.
fn variable_index(s: &str) -> Option<Result<usize, ()>> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(digits.parse::<usize>().map_err(|_| ()))
}

/// A freely reduced element of `G * F_n`. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    n: usize,
    tokens: Vec<Token>,
}

impl Word {
    pub fn identity(n: usize) -> Self {
        Word {
            n,
            tokens: Vec::new(),
        }
    }

    /// Builds a word from raw tokens, reducing them.
    ///
    /// Panics if a variable index is outside `1..=n`.
    pub fn from_tokens(n: usize, tokens: impl IntoIterator<Item = Token>) -> Self {
        let tokens = reduce(tokens);
        for t in &tokens {
            if let Token::Variable { index, .. } = t {
                assert!(
                    (1..=n).contains(index),
                    "variable x{index} outside 1..={n}"
                );
            }
        }
        Word { n, tokens }
    }

    /// Parses whitespace-separated tokens: known coefficient symbols and
    /// `x<k>` variables, each optionally followed by `^<signed integer>`.
    pub fn parse(text: &str, n: usize, known_symbols: &BTreeSet<String>) -> Result<Self, WordError> {
        if n == 0 {
            return Err(WordError::NoVariables);
        }
        let mut raw = Vec::new();
        let mut offset = 0;
        for piece in text.split_whitespace() {
            // split_whitespace does not report offsets
            let position = offset + text[offset..].find(piece).unwrap_or(0);
            offset = position + piece.len();

            let malformed = || WordError::Malformed {
                token: piece.to_string(),
                position,
            };
            let (base, exponent) = match piece.split_once('^') {
                Some((base, exp)) => {
                    let exp: i64 = exp.parse().map_err(|_| malformed())?;
                    if exp == 0 {
                        return Err(WordError::ZeroExponent { position });
                    }
                    (base, exp)
                }
                None => (piece, 1),
            };
            if let Some(index) = variable_index(base) {
                let index = index.map_err(|_| malformed())?;
                if index == 0 || index > n {
                    return Err(WordError::VariableOutOfRange { index, n, position });
                }
                raw.push(Token::variable(index, exponent));
            } else if is_identifier(base) {
                if !known_symbols.contains(base) {
                    return Err(WordError::UnknownSymbol {
                        symbol: base.to_string(),
                        position,
                    });
                }
                let letter = Token::Coefficient {
                    symbol: base.to_string(),
                    inverted: exponent < 0,
                };
                for _ in 0..exponent.unsigned_abs() {
                    raw.push(letter.clone());
                }
            } else {
                return Err(malformed());
            }
        }
        Ok(Word {
            n,
            tokens: reduce(raw),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn is_identity(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Coefficient symbols occurring in the word, inverted or not.
    pub fn symbols(&self) -> BTreeSet<&str> {
        self.tokens
            .iter()
            .filter_map(|t| match t {
                Token::Coefficient { symbol, .. } => Some(symbol.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if self.n != other.n {
            return Err(WordError::MismatchedVariables {
                left: self.n,
                right: other.n,
            });
        }
        let mut stack = self.tokens.clone();
        for t in &other.tokens {
            push_reduced(&mut stack, t.clone());
        }
        Ok(Word {
            n: self.n,
            tokens: stack,
        })
    }

    pub fn invert(&self) -> Word {
        Word {
            n: self.n,
            tokens: self.tokens.iter().rev().map(Token::inverse).collect(),
        }
    }

    /// The augmentation `G * F_n -> F_n`: drop coefficients and reduce.
    pub fn content(&self) -> ContentWord {
        ContentWord::from_letters(
            self.n,
            self.tokens.iter().filter_map(|t| match t {
                Token::Variable { index, exponent } => Some((*index, *exponent)),
                Token::Coefficient { .. } => None,
            }),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.tokens.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A freely reduced element of `F_n` as `(index, exponent)` syllables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContentWord {
    n: usize,
    letters: Vec<(usize, i64)>,
}

impl ContentWord {
    pub fn identity(n: usize) -> Self {
        ContentWord {
            n,
            letters: Vec::new(),
        }
    }

    /// The length-one word `x_index`.
    pub fn generator(n: usize, index: usize) -> Self {
        Self::from_letters(n, [(index, 1)])
    }

    /// Panics if an index lies outside `1..=n`.
    pub fn from_letters(n: usize, letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (index, exponent) in letters {
            assert!(
                (1..=n).contains(&index),
                "variable x{index} outside 1..={n}"
            );
            if exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some((top, e)) if *top == index => {
                    *e += exponent;
                    if *e == 0 {
                        out.pop();
                    }
                }
                _ => out.push((index, exponent)),
            }
        }
        ContentWord { n, letters: out }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of single letters `x_k^{±1}` after expanding powers.
    pub fn letter_length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn multiply(&self, other: &ContentWord) -> Result<ContentWord, WordError> {
        if self.n != other.n {
            return Err(WordError::MismatchedVariables {
                left: self.n,
                right: other.n,
            });
        }
        Ok(Self::from_letters(
            self.n,
            self.letters.iter().chain(other.letters.iter()).copied(),
        ))
    }

    pub fn invert(&self) -> ContentWord {
        ContentWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    /// `self^k`, with negative `k` meaning a power of the inverse.
    pub fn pow(&self, k: i64) -> ContentWord {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = ContentWord::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base).expect("same variable count");
        }
        out
    }

    /// `[self, other] = self other self^-1 other^-1`.
    pub fn commutator(&self, other: &ContentWord) -> Result<ContentWord, WordError> {
        self.multiply(other)?
            .multiply(&self.invert())?
            .multiply(&other.invert())
    }

    /// Image in the abelianization `Z^n`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.n];
        for &(index, exponent) in &self.letters {
            sums[index - 1] += exponent;
        }
        sums
    }

    /// Same element viewed in `F_m` for `m >= n`.
    pub fn widen(&self, m: usize) -> ContentWord {
        assert!(m >= self.n);
        ContentWord {
            n: m,
            letters: self.letters.clone(),
        }
    }

    /// Lift back into `G * F_n` with no coefficients.
    pub fn to_word(&self) -> Word {
        Word {
            n: self.n,
            tokens: self
                .letters
                .iter()
                .map(|&(index, exponent)| Token::Variable { index, exponent })
                .collect(),
        }
    }
}

impl fmt::Display for ContentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// `c_1 = x1`, `c_k = [x_k, c_{k-1}]`, as an element of `F_depth`.
pub fn iterated_commutator(depth: usize) -> Result<ContentWord, WordError> {
    if depth == 0 {
        return Err(WordError::InvalidDepth(depth));
    }
    let mut c = ContentWord::generator(depth, 1);
    for k in 2..=depth {
        c = ContentWord::generator(depth, k).commutator(&c)?;
    }
    Ok(c)
}

/// One factor `[x1^n, x2^m]^l` of a commutator-basis product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorTerm {
    pub n: i64,
    pub m: i64,
    pub l: i64,
}

impl CommutatorTerm {
    pub fn new(n: i64, m: i64, l: i64) -> Self {
        CommutatorTerm { n, m, l }
    }
}

/// `prod_k [x1^{n_k}, x2^{m_k}]^{l_k}` in `F_2`.
pub fn commutator_basis_word(terms: &[CommutatorTerm]) -> Result<ContentWord, WordError> {
    let mut out = ContentWord::identity(2);
    for (k, t) in terms.iter().enumerate() {
        if t.n == 0 || t.m == 0 {
            return Err(WordError::ZeroCommutatorExponent { index: k });
        }
        let a = ContentWord::from_letters(2, [(1, t.n)]);
        let b = ContentWord::from_letters(2, [(2, t.m)]);
        out = out.multiply(&a.commutator(&b)?.pow(t.l))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_cancels_and_merges() {
        let w = Word::parse("x1 x1^-1", 2, &syms(&[])).unwrap();
        assert!(w.is_identity());

        let w = Word::parse("x1 x1^2", 2, &syms(&[])).unwrap();
        assert_eq!(w.tokens(), &[Token::variable(1, 3)]);

        let w = Word::parse("g1 x1^2 g2 x2^-1", 2, &syms(&["g1", "g2"])).unwrap();
        assert_eq!(
            w.tokens(),
            &[
                Token::coefficient("g1"),
                Token::variable(1, 2),
                Token::coefficient("g2"),
                Token::variable(2, -1),
            ]
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let s = syms(&["g"]);
        assert_eq!(
            Word::parse("x1 h", 2, &s),
            Err(WordError::UnknownSymbol {
                symbol: "h".into(),
                position: 3
            })
        );
        assert_eq!(
            Word::parse("g  x3", 2, &s),
            Err(WordError::VariableOutOfRange {
                index: 3,
                n: 2,
                position: 3
            })
        );
        assert_eq!(
            Word::parse("x1^0", 2, &s),
            Err(WordError::ZeroExponent { position: 0 })
        );
        assert!(matches!(
            Word::parse("x1 x2^a", 2, &s),
            Err(WordError::Malformed { position: 3, .. })
        ));
        assert!(matches!(
            Word::parse("x1*x2", 2, &s),
            Err(WordError::Malformed { position: 0, .. })
        ));
        assert!(matches!(
            Word::parse("x0", 2, &s),
            Err(WordError::VariableOutOfRange { index: 0, .. })
        ));
        assert_eq!(Word::parse("", 0, &s), Err(WordError::NoVariables));
    }

    #[test]
    fn same_symbol_coefficients_do_not_merge() {
        let w = Word::parse("g g g^-1", 1, &syms(&["g"])).unwrap();
        assert_eq!(w.tokens(), &[Token::coefficient("g")]);
        let w = Word::parse("g^2", 1, &syms(&["g"])).unwrap();
        assert_eq!(w.to_string(), "g g");
    }

    #[test]
    fn multiply_examples() {
        let s = syms(&["g1", "g2"]);
        let p = |t: &str| Word::parse(t, 2, &s).unwrap();
        assert!(p("x1").multiply(&p("x1^-1")).unwrap().is_identity());
        assert_eq!(p("g1 x1").multiply(&p("x1^-1 g2")).unwrap(), p("g1 g2"));
        assert_eq!(p("x1^2").multiply(&p("x1^3")).unwrap(), p("x1^5"));
        assert_eq!(
            p("x1").multiply(&Word::identity(3)),
            Err(WordError::MismatchedVariables { left: 2, right: 3 })
        );
    }

    #[test]
    fn invert_examples() {
        let s = syms(&["g1"]);
        let p = |t: &str| Word::parse(t, 2, &s).unwrap();
        assert!(Word::identity(2).invert().is_identity());
        assert_eq!(p("x1^2").invert(), p("x1^-2"));
        assert_eq!(p("g1 x2").invert().to_string(), "x2^-1 g1^-1");
        assert_eq!(p("g1 x2").invert().invert(), p("g1 x2"));
    }

    #[test]
    fn content_examples() {
        let s = syms(&["g1", "g2", "g3"]);
        let p = |t: &str| Word::parse(t, 2, &s).unwrap();
        assert_eq!(
            p("g1 x1 g2 x2 g3 x1^-1 x2^-1").content().to_string(),
            "x1 x2 x1^-1 x2^-1"
        );
        assert!(p("g1 x1 g2 x1^-1").content().is_identity());
        assert!(p("g1").content().is_identity());
    }

    #[test]
    fn exponent_sum_examples() {
        let c = ContentWord::from_letters(2, [(1, 2), (2, -1), (1, 1)]);
        assert_eq!(c.exponent_sums(), vec![3, -1]);
        let x1 = ContentWord::generator(2, 1);
        let x2 = ContentWord::generator(2, 2);
        assert_eq!(x1.commutator(&x2).unwrap().exponent_sums(), vec![0, 0]);
        assert_eq!(ContentWord::identity(2).exponent_sums(), vec![0, 0]);
    }

    #[test]
    fn iterated_commutators() {
        assert_eq!(iterated_commutator(1).unwrap().to_string(), "x1");
        assert_eq!(
            iterated_commutator(2).unwrap().to_string(),
            "x2 x1 x2^-1 x1^-1"
        );
        let c3 = iterated_commutator(3).unwrap();
        assert_eq!(
            c3.to_string(),
            "x3 x2 x1 x2^-1 x1^-1 x3^-1 x1 x2 x1^-1 x2^-1"
        );
        // 1 + 4 + 1 + 4 letters
        assert_eq!(c3.letter_length(), 10);
        assert_eq!(iterated_commutator(0), Err(WordError::InvalidDepth(0)));
    }

    #[test]
    fn commutator_basis_examples() {
        let t = |n, m, l| CommutatorTerm::new(n, m, l);
        assert_eq!(
            commutator_basis_word(&[t(1, 1, 1)]).unwrap().to_string(),
            "x1 x2 x1^-1 x2^-1"
        );
        assert_eq!(
            commutator_basis_word(&[t(2, 3, 1)]).unwrap().to_string(),
            "x1^2 x2^3 x1^-2 x2^-3"
        );
        let sq = commutator_basis_word(&[t(1, 1, 2)]).unwrap();
        assert_eq!(sq.letters().len(), 8);
        assert_eq!(
            commutator_basis_word(&[t(1, 0, 1)]),
            Err(WordError::ZeroCommutatorExponent { index: 0 })
        );
    }

    #[test]
    fn render_round_trips() {
        let s = syms(&["g1", "h"]);
        let w = Word::parse("h^-1 x2^-3 g1 g1 x1", 2, &s).unwrap();
        assert_eq!(Word::parse(&w.to_string(), 2, &s).unwrap(), w);
    }
}
