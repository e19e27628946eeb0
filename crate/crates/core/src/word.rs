//! One-variable equations `u(x) = x^{ε_1} g_1 x^{ε_2} g_2 ... = 1` over UT_n(F_p).

use std::collections::BTreeMap;
use std::fmt;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::group::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `x^σ`, `σ = ±1`.
    X(i8),
    /// A named coefficient.
    Const(String),
}

/// Named coefficients of an equation, all in UT_n(F_p) for one `(p, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    p: Prime,
    n: usize,
    entries: BTreeMap<String, GroupElement>,
}

impl CoefficientTable {
    pub fn new(p: Prime, n: usize) -> Self {
        CoefficientTable {
            p,
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, g: GroupElement) -> Result<()> {
        if g.modulus() != self.p {
            return Err(Error::ModulusMismatch(g.modulus().get(), self.p.get()));
        }
        if g.size() != self.n {
            return Err(Error::DimensionMismatch(g.size(), self.n));
        }
        self.entries.insert(name.into(), g);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, g: GroupElement) -> Result<Self> {
        self.insert(name, g)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&GroupElement> {
        self.entries.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &GroupElement)> {
        self.entries.iter()
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Image of every coefficient under an embedding.
    pub fn lift(&self, e: &Embedding) -> Result<Self> {
        let mut out = CoefficientTable::new(self.p, e.m());
        for (name, g) in &self.entries {
            out.entries.insert(name.clone(), e.apply(g)?);
        }
        Ok(out)
    }
}

/// A word in `G * <x>` with bound coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<Letter>,
    table: CoefficientTable,
}

fn is_identifier(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Word {
    pub fn new(letters: Vec<Letter>, table: CoefficientTable) -> Result<Self> {
        for l in &letters {
            match l {
                Letter::Const(name) if table.get(name).is_none() => {
                    return Err(Error::UnboundName(name.clone()))
                }
                Letter::X(s) if s.abs() != 1 => {
                    return Err(Error::InvariantViolated(format!("letter x^{s}")))
                }
                _ => {}
            }
        }
        Ok(Word { letters, table })
    }

    /// Parses whitespace-separated tokens `x`, `x^-1`, `x^k` (shorthand for
    /// `|k|` copies) and coefficient names.
    pub fn parse(text: &str, table: &CoefficientTable) -> Result<Self> {
        Self::parse_at(text, table, 1, 1)
    }

    /// As [`Word::parse`], reporting errors relative to `(line, first_column)`.
    pub fn parse_at(
        text: &str,
        table: &CoefficientTable,
        line: usize,
        first_column: usize,
    ) -> Result<Self> {
        let err = |column: usize, message: String| Error::Parse {
            line,
            column: first_column + column,
            message,
        };
        let mut letters = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let column = offset + text[offset..].find(tok).expect("token comes from text");
            offset = column + tok.len();
            if tok == "x" {
                letters.push(Letter::X(1));
            } else if let Some(exp) = tok.strip_prefix("x^") {
                let k: i64 = exp
                    .parse()
                    .map_err(|_| err(column, format!("bad exponent in `{tok}`")))?;
                if k == 0 {
                    return Err(err(column, "exponent 0 is not allowed".into()));
                }
                let sign = if k > 0 { 1 } else { -1 };
                letters.extend((0..k.unsigned_abs()).map(|_| Letter::X(sign)));
            } else if is_identifier(tok) {
                if table.get(tok).is_none() {
                    return Err(err(column, format!("unknown token `{tok}`")));
                }
                letters.push(Letter::Const(tok.to_string()));
            } else {
                return Err(err(column, format!("invalid token `{tok}`")));
            }
        }
        if letters.is_empty() {
            return Err(err(0, "empty word".into()));
        }
        Ok(Word {
            letters,
            table: table.clone(),
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn modulus(&self) -> Prime {
        self.table.p
    }

    /// Size of the coefficient group UT_n.
    pub fn size(&self) -> usize {
        self.table.n
    }

    /// Signed count of `x` occurrences.
    pub fn exponent(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::X(s) => *s as i64,
                Letter::Const(_) => 0,
            })
            .sum()
    }

    pub fn is_regular(&self) -> bool {
        self.exponent() != 0
    }

    /// `u(1)`: the ordered product of the coefficients.
    pub fn constant_part(&self) -> GroupElement {
        self.letters.iter().fold(
            GroupElement::identity(self.table.p, self.table.n),
            |acc, l| match l {
                Letter::Const(name) => acc.mul_unchecked(&self.table.entries[name]),
                Letter::X(_) => acc,
            },
        )
    }

    /// The same word with coefficients replaced by their images in UT_m.
    pub fn lift(&self, e: &Embedding) -> Result<Word> {
        Ok(Word {
            letters: self.letters.clone(),
            table: self.table.lift(e)?,
        })
    }

    /// `u(x)`. With `lift`, `x` lives in the overgroup and the coefficients
    /// are mapped through the embedding first.
    pub fn evaluate(&self, x: &GroupElement, lift: Option<&Embedding>) -> Result<GroupElement> {
        match lift {
            Some(e) => {
                if x.size() != e.m() {
                    return Err(Error::DimensionMismatch(x.size(), e.m()));
                }
                self.lift(e)?.evaluate(x, None)
            }
            None => {
                if x.size() != self.table.n {
                    return Err(Error::DimensionMismatch(x.size(), self.table.n));
                }
                if x.modulus() != self.table.p {
                    return Err(Error::ModulusMismatch(
                        x.modulus().get(),
                        self.table.p.get(),
                    ));
                }
                let x_inv = x.inv();
                Ok(self.letters.iter().fold(
                    GroupElement::identity(self.table.p, self.table.n),
                    |acc, l| match l {
                        Letter::X(1) => acc.mul_unchecked(x),
                        Letter::X(_) => acc.mul_unchecked(&x_inv),
                        Letter::Const(name) => acc.mul_unchecked(&self.table.entries[name]),
                    },
                ))
            }
        }
    }

    /// Replaces every `x^σ` by `(x^k)^σ`, spelled out letter by letter.
    pub fn substitute(&self, k: i64) -> Result<Word> {
        if k == 0 {
            return Err(Error::ZeroSubstitution);
        }
        let mut letters = Vec::new();
        for l in &self.letters {
            match l {
                Letter::X(s) => {
                    let sign = if (*s as i64) * k > 0 { 1 } else { -1 };
                    letters.extend((0..k.unsigned_abs()).map(|_| Letter::X(sign)));
                }
                c => letters.push(c.clone()),
            }
        }
        Ok(Word {
            letters,
            table: self.table.clone(),
        })
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                Letter::X(1) => f.write_str("x")?,
                Letter::X(_) => f.write_str("x^-1")?,
                Letter::Const(name) => f.write_str(name)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table(p: u32, n: usize, names: &[&str], seed: u64) -> CoefficientTable {
        let p = Prime::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = CoefficientTable::new(p, n);
        for name in names {
            t.insert(*name, GroupElement::random(&mut rng, p, n))
                .unwrap();
        }
        t
    }

    #[test]
    fn parse_examples() {
        let t = table(3, 3, &["g1", "g2"], 1);
        let w = Word::parse("x g1 x g2", &t).unwrap();
        assert_eq!(
            w.letters(),
            &[
                Letter::X(1),
                Letter::Const("g1".into()),
                Letter::X(1),
                Letter::Const("g2".into())
            ]
        );
        assert_eq!(Word::parse("x^-1", &t).unwrap().letters(), &[Letter::X(-1)]);
        match Word::parse("x g1 y", &t) {
            Err(Error::Parse {
                column, message, ..
            }) => {
                assert_eq!(column, 6);
                assert!(message.contains("unknown token `y`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Word::parse("x ^2", &t).is_err());
        assert!(Word::parse("x^0", &t).is_err());
        assert!(Word::parse("   ", &t).is_err());
        assert_eq!(Word::parse("x^-3 g1", &t).unwrap().exponent(), -3);
    }

    #[test]
    fn exponent_examples() {
        let t = table(2, 3, &["g1", "g2", "g3"], 2);
        assert_eq!(Word::parse("x g1 x g2", &t).unwrap().exponent(), 2);
        let w = Word::parse("x x^-1 g1", &t).unwrap();
        assert_eq!(w.exponent(), 0);
        assert!(!w.is_regular());
        assert_eq!(
            Word::parse("x^-1 g1 x^-1 g2 x^-1 g3", &t)
                .unwrap()
                .exponent(),
            -3
        );
    }

    #[test]
    fn evaluate_examples() {
        let t = table(3, 3, &["g1", "g2"], 3);
        let p = t.modulus();
        let id = GroupElement::identity(p, 3);
        assert!(Word::parse("x", &t)
            .unwrap()
            .evaluate(&id, None)
            .unwrap()
            .is_identity());
        let w = Word::parse("x g1 x g2", &t).unwrap();
        let g1g2 = t.get("g1").unwrap().mul(t.get("g2").unwrap()).unwrap();
        assert_eq!(w.evaluate(&id, None).unwrap(), g1g2);
        assert_eq!(w.constant_part(), g1g2);
        let big = GroupElement::identity(p, 4);
        assert!(w.evaluate(&big, None).is_err());
    }

    #[test]
    fn substitute_examples() {
        let t = table(2, 3, &["g1", "g2"], 4);
        let w = Word::parse("x g1", &t).unwrap();
        assert_eq!(w.substitute(-1).unwrap().render(), "x^-1 g1");
        let w = Word::parse("x g1 x g2", &t).unwrap();
        assert_eq!(w.substitute(2).unwrap().exponent(), 4);
        assert_eq!(w.substitute(0), Err(Error::ZeroSubstitution));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = GroupElement::random(&mut rng, t.modulus(), 3);
            assert_eq!(
                w.substitute(-3).unwrap().evaluate(&x, None).unwrap(),
                w.evaluate(&x.pow(-3), None).unwrap()
            );
        }
    }

    #[test]
    fn new_checks_names() {
        let t = table(2, 3, &["g"], 6);
        assert_eq!(
            Word::new(vec![Letter::Const("h".into())], t.clone()),
            Err(Error::UnboundName("h".into()))
        );
        assert!(Word::new(vec![Letter::X(2)], t).is_err());
    }
}
