//! The collecting process: rewriting `u(x)` as `x^ε · u(1) · Π C_i(x)` with
//! every `C_i` a left-normed commutator `[g, x^σ, S_1, ..., S_k]`.
//!
//! Phase 1 pulls every `x^σ` to the front through `A x^σ = x^σ A [A, x^σ]`.
//! Phase 2 pulls the plain coefficients through the commutators with
//! `C g = g C [C, g]`, after which they form the constant `u(1)`.
//! New atoms are always created behind the letter being moved, so both phases
//! terminate.

use std::collections::HashMap;
use std::fmt;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::word::{CoefficientTable, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Leaf {
    Base(String),
    /// `x^k`, `k != 0`; `k` is the signed length of a run of x letters, or any
    /// value after substitution.
    XPow(i64),
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Base(name) => f.write_str(name),
            Leaf::XPow(1) => f.write_str("x"),
            Leaf::XPow(k) => write!(f, "x^{k}"),
        }
    }
}

/// Left-normed commutator `[head, entries[0], entries[1], ...]`, stored flat.
/// `entries[0]` is always an `x` power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutatorAtom {
    head: String,
    entries: Vec<Leaf>,
}

impl CommutatorAtom {
    pub fn new(head: impl Into<String>, entries: Vec<Leaf>) -> Result<Self> {
        match entries.first() {
            Some(Leaf::XPow(k)) if *k != 0 => Ok(CommutatorAtom {
                head: head.into(),
                entries,
            }),
            _ => Err(Error::InvariantViolated(
                "commutator atom must start with [g, x^σ, ...]".into(),
            )),
        }
    }

    pub fn head(&self) -> &str {
        &self.head
    }

    pub fn entries(&self) -> &[Leaf] {
        &self.entries
    }

    /// Number of leaves, including the head.
    pub fn weight(&self) -> usize {
        self.entries.len() + 1
    }

    fn extended(&self, leaf: Leaf) -> Self {
        let mut entries = self.entries.clone();
        entries.push(leaf);
        CommutatorAtom {
            head: self.head.clone(),
            entries,
        }
    }

    /// Exponent sum of `x` in the free-group expansion, built up bracket by
    /// bracket: `e([A, B]) = -e(A) - e(B) + e(A) + e(B)`.
    pub fn x_exponent(&self) -> i64 {
        self.entries.iter().fold(0i64, |acc, leaf| {
            let e = match leaf {
                Leaf::XPow(k) => *k,
                Leaf::Base(_) => 0,
            };
            -acc - e + acc + e
        })
    }

    fn substituted(&self, k: i64) -> Self {
        CommutatorAtom {
            head: self.head.clone(),
            entries: self
                .entries
                .iter()
                .map(|l| match l {
                    Leaf::XPow(s) => Leaf::XPow(s * k),
                    b => b.clone(),
                })
                .collect(),
        }
    }

    /// Evaluates with coefficients from `table` and `x^k` from `powers`.
    fn evaluate_with(&self, table: &CoefficientTable, powers: &mut XPowers<'_>) -> GroupElement {
        let mut acc = table.get(&self.head).expect("bound coefficient").clone();
        for leaf in &self.entries {
            if acc.is_identity() {
                break;
            }
            let rhs = match leaf {
                Leaf::Base(name) => table.get(name).expect("bound coefficient").clone(),
                Leaf::XPow(k) => powers.get(*k).clone(),
            };
            acc = acc.comm_unchecked(&rhs);
        }
        acc
    }
}

impl fmt::Display for CommutatorAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.head)?;
        for leaf in &self.entries {
            write!(f, ",{leaf}")?;
        }
        f.write_str("]")
    }
}

/// Cache of the powers of one element.
struct XPowers<'a> {
    x: &'a GroupElement,
    cache: HashMap<i64, GroupElement>,
}

impl<'a> XPowers<'a> {
    fn new(x: &'a GroupElement) -> Self {
        XPowers {
            x,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, k: i64) -> &GroupElement {
        let x = self.x;
        self.cache.entry(k).or_insert_with(|| x.pow(k))
    }
}

/// `u(x) = x^ε · u(1) · v(x)` with `v(x) = Π tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    epsilon: i64,
    constants: Vec<String>,
    u1: GroupElement,
    tail: Vec<CommutatorAtom>,
    table: CoefficientTable,
}

#[derive(Clone, Debug)]
enum Item {
    X(i64),
    Base(String),
    Comm(CommutatorAtom),
}

fn commutator_with(item: &Item, leaf: Leaf) -> CommutatorAtom {
    match item {
        Item::Base(name) => CommutatorAtom {
            head: name.clone(),
            entries: vec![leaf],
        },
        Item::Comm(c) => c.extended(leaf),
        Item::X(_) => unreachable!("x letters are never bracketed on the left"),
    }
}

/// Runs the two-phase collecting process.
pub fn collect(word: &Word) -> NormalForm {
    // Adjacent x letters are fused into one power first.
    let mut seq: Vec<Item> = Vec::with_capacity(word.letters().len());
    for l in word.letters() {
        match (l, seq.last_mut()) {
            (Letter::X(s), Some(Item::X(k))) => {
                *k += *s as i64;
                if *k == 0 {
                    seq.pop();
                }
            }
            (Letter::X(s), _) => seq.push(Item::X(*s as i64)),
            (Letter::Const(name), _) => seq.push(Item::Base(name.clone())),
        }
    }

    // Phase 1: x letters to the front.
    let mut block_end = 0;
    while let Some(j) = (block_end..seq.len()).find(|&j| matches!(seq[j], Item::X(_))) {
        let Item::X(sigma) = seq[j] else {
            unreachable!()
        };
        let mut segment = Vec::with_capacity(2 * (j - block_end) + 1);
        segment.push(Item::X(sigma));
        for item in &seq[block_end..j] {
            let c = commutator_with(item, Leaf::XPow(sigma));
            segment.push(item.clone());
            segment.push(Item::Comm(c));
        }
        seq.splice(block_end..=j, segment);
        block_end += 1;
    }

    // Phase 2: plain coefficients to the front of the remainder.
    let mut base_end = block_end;
    while let Some(j) = (base_end..seq.len()).find(|&j| matches!(seq[j], Item::Base(_))) {
        let Item::Base(name) = seq[j].clone() else {
            unreachable!()
        };
        let mut segment = Vec::with_capacity(2 * (j - base_end) + 1);
        segment.push(Item::Base(name.clone()));
        for item in &seq[base_end..j] {
            let c = commutator_with(item, Leaf::Base(name.clone()));
            segment.push(item.clone());
            segment.push(Item::Comm(c));
        }
        seq.splice(base_end..=j, segment);
        base_end += 1;
    }

    let epsilon = word.exponent();
    let constants: Vec<String> = seq[block_end..base_end]
        .iter()
        .map(|i| match i {
            Item::Base(name) => name.clone(),
            _ => unreachable!("constant block holds plain coefficients only"),
        })
        .collect();
    let tail = seq[base_end..]
        .iter()
        .map(|i| match i {
            Item::Comm(c) => c.clone(),
            _ => unreachable!("tail holds commutators only"),
        })
        .collect();
    NormalForm {
        epsilon,
        constants,
        u1: word.constant_part(),
        tail,
        table: word.table().clone(),
    }
}

impl NormalForm {
    pub fn epsilon(&self) -> i64 {
        self.epsilon
    }

    /// `u(1)` in the coefficient group.
    pub fn u1(&self) -> &GroupElement {
        &self.u1
    }

    /// Coefficient names whose ordered product is `u(1)`.
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn tail(&self) -> &[CommutatorAtom] {
        &self.tail
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn tail_exponent(&self) -> i64 {
        self.tail.iter().map(CommutatorAtom::x_exponent).sum()
    }

    /// Substitutes `x ↦ x^k` everywhere: `ε` scales by `k`, every `x^σ` in the
    /// tail becomes `x^{σk}`.
    pub fn substitute(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroSubstitution);
        }
        Ok(NormalForm {
            epsilon: self.epsilon * k,
            constants: self.constants.clone(),
            u1: self.u1.clone(),
            tail: self.tail.iter().map(|a| a.substituted(k)).collect(),
            table: self.table.clone(),
        })
    }

    /// Prepares repeated evaluation in the overgroup of `lift` (or in the
    /// coefficient group itself when `lift` is `None`).
    pub fn evaluator(&self, lift: Option<&Embedding>) -> Result<TailEvaluator<'_>> {
        let (table, u1) = match lift {
            Some(e) => (self.table.lift(e)?, e.apply(&self.u1)?),
            None => (self.table.clone(), self.u1.clone()),
        };
        Ok(TailEvaluator {
            nf: self,
            table,
            u1,
        })
    }

    /// `u(1) · v(x)`.
    pub fn evaluate(&self, x: &GroupElement, lift: Option<&Embedding>) -> Result<GroupElement> {
        self.evaluator(lift)?.right_side(x)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eps={}; u1=", self.epsilon)?;
        if self.constants.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&self.constants.join("*"))?;
        }
        f.write_str("; tail=")?;
        for atom in &self.tail {
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// A normal form with its coefficients already mapped into the target group.
pub struct TailEvaluator<'a> {
    nf: &'a NormalForm,
    table: CoefficientTable,
    u1: GroupElement,
}

impl TailEvaluator<'_> {
    pub fn size(&self) -> usize {
        self.table.size()
    }

    /// The constant `u(1)` as seen in the target group.
    pub fn u1(&self) -> &GroupElement {
        &self.u1
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.size() != self.table.size() {
            return Err(Error::DimensionMismatch(x.size(), self.table.size()));
        }
        if x.modulus() != self.table.modulus() {
            return Err(Error::ModulusMismatch(
                x.modulus().get(),
                self.table.modulus().get(),
            ));
        }
        Ok(())
    }

    /// `v(x) = Π C_i(x)`.
    pub fn tail_value(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        let mut powers = XPowers::new(x);
        let start = GroupElement::identity(self.table.modulus(), self.table.size());
        Ok(self.nf.tail.iter().fold(start, |acc, atom| {
            acc.mul_unchecked(&atom.evaluate_with(&self.table, &mut powers))
        }))
    }

    /// Value of a single atom at `x`.
    pub fn atom_value(&self, atom: &CommutatorAtom, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(atom.evaluate_with(&self.table, &mut XPowers::new(x)))
    }

    /// `R(x) = u(1) · v(x)`.
    pub fn right_side(&self, x: &GroupElement) -> Result<GroupElement> {
        Ok(self.u1.mul_unchecked(&self.tail_value(x)?))
    }

    /// `x^ε · u(1) · v(x)`, which must equal `u(x)`.
    pub fn word_value(&self, x: &GroupElement) -> Result<GroupElement> {
        Ok(x.pow(self.nf.epsilon).mul_unchecked(&self.right_side(x)?))
    }
}
