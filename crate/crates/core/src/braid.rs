//! Braid words over the Artin generators, distinguished braids, and the
//! word problem for three strands.
//!
//! Words are kept freely reduced at all times. The text format is a list of
//! whitespace-separated signed generator indices (`"1 2 -1"` is
//! `σ₁σ₂σ₁⁻¹`); the letter format `"s1 s2 S1"` (capital means inverse) is
//! accepted on input as well.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::burau;
use crate::error::{Error, Result};

/// A single Artin generator `σᵢ` or its inverse, stored as a signed index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, positive: bool) -> Self {
        let i = index as i32;
        Letter(if positive { i } else { -i })
    }

    pub fn from_signed(value: i32) -> Self {
        assert!(value != 0, "zero is not a generator");
        Letter(value)
    }

    /// One-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }
}

/// A freely reduced word in the Artin generators of `B_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Unsupported(format!(
                "braid groups need at least 2 strands, got {strands}"
            )));
        }
        let mut out = Vec::new();
        for l in letters {
            if l.index() < 1 || l.index() >= strands {
                return Err(Error::GeneratorIndex {
                    index: l.signed() as i64,
                    strands,
                });
            }
            push_reduced(&mut out, l);
        }
        Ok(BraidWord {
            strands,
            letters: out,
        })
    }

    pub fn from_signed(strands: usize, letters: &[i32]) -> Result<Self> {
        if let Some(&z) = letters.iter().find(|&&x| x == 0) {
            return Err(Error::GeneratorIndex {
                index: z as i64,
                strands,
            });
        }
        Self::new(strands, letters.iter().map(|&x| Letter::from_signed(x)))
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 2);
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// The Artin generator `σᵢ` (`positive`) or `σᵢ⁻¹`.
    pub fn generator(index: usize, strands: usize, positive: bool) -> Result<Self> {
        Self::new(strands, [Letter::new(index, positive)])
    }

    pub fn letter(strands: usize, letter: Letter) -> Result<Self> {
        Self::new(strands, [letter])
    }

    /// Parses either the signed-integer or the `s1 S1` letter format.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::Parse {
                text: text.to_string(),
                reason,
            };
            let value: i32 = if let Some(rest) = tok.strip_prefix('s') {
                rest.parse::<i32>()
                    .ok()
                    .filter(|v| *v > 0)
                    .ok_or_else(|| bad(format!("bad token {tok:?}")))?
            } else if let Some(rest) = tok.strip_prefix('S') {
                -rest
                    .parse::<i32>()
                    .ok()
                    .filter(|v| *v > 0)
                    .ok_or_else(|| bad(format!("bad token {tok:?}")))?
            } else {
                tok.parse::<i32>()
                    .map_err(|_| bad(format!("bad token {tok:?}")))?
            };
            if value == 0 {
                return Err(bad("generator 0 does not exist".into()));
            }
            letters.push(Letter::from_signed(value));
        }
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation followed by free reduction.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// `self · other`, panicking on a strand mismatch. Convenient inside
    /// algorithms where every word lives in the same braid group.
    pub fn then(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand count mismatch");
        self.compose_unchecked(other)
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> BraidWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = BraidWord::identity(self.strands);
        for _ in 0..k.unsigned_abs() {
            out = out.compose_unchecked(&base);
        }
        out
    }

    /// `c · self · c⁻¹`.
    pub fn conjugated_by(&self, c: &BraidWord) -> BraidWord {
        c.then(self).then(&c.inverse())
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &BraidWord, b: &BraidWord) -> BraidWord {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign()).sum()
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.signed()).collect()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", l.signed())?;
        }
        Ok(())
    }
}

impl Serialize for BraidWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `A_{i,j} = (σ_{j−1}⋯σ_{i+1}) σᵢ² (σ_{j−1}⋯σ_{i+1})⁻¹`.
pub fn pure_generator(i: usize, j: usize, strands: usize) -> Result<BraidWord> {
    if !(1 <= i && i < j && j <= strands) {
        return Err(Error::PureIndex { i, j, strands });
    }
    let conj = BraidWord::new(
        strands,
        (i + 1..j).rev().map(|k| Letter::new(k, true)),
    )?;
    let square = BraidWord::new(strands, [Letter::new(i, true), Letter::new(i, true)])?;
    Ok(square.conjugated_by(&conj))
}

/// `Δ_n² = (σ₁⋯σ_{n−1})ⁿ`, the generator of the center of `B_n`.
pub fn full_twist(strands: usize) -> BraidWord {
    let row = BraidWord::new(strands, (1..strands).map(|k| Letter::new(k, true)))
        .expect("strand count validated by caller");
    row.pow(strands as i64)
}

/// The defining relator `σᵢσⱼσᵢσⱼ⁻¹σᵢ⁻¹σⱼ⁻¹` for adjacent generators.
pub fn braid_relator(i: usize, j: usize, strands: usize) -> Result<BraidWord> {
    let a = BraidWord::generator(i, strands, true)?;
    let b = BraidWord::generator(j, strands, true)?;
    let lhs = a.then(&b).then(&a);
    let rhs = b.then(&a).then(&b);
    Ok(lhs.then(&rhs.inverse()))
}

/// Decides triviality in `B₃`.
///
/// The reduced Burau image at `t = −1` factors through `SL₂(ℤ)`, whose kernel
/// on `B₃` is generated by `(σ₁σ₂)⁶`; that element has exponent sum 12, so the
/// pair (image, exponent sum) determines the braid.
pub fn is_trivial_b3(w: &BraidWord) -> Result<bool> {
    if w.strands() != 3 {
        return Err(Error::WrongStrands {
            expected: 3,
            found: w.strands(),
        });
    }
    if w.is_empty() {
        return Ok(true);
    }
    Ok(w.exponent_sum() == 0 && burau::reduced_burau(w).is_identity())
}

pub fn equal_b3(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    is_trivial_b3(&a.compose(&b.inverse())?)
}

/// A relation `lhs = rhs` labelled with its origin.
#[derive(Clone, Debug)]
pub struct Relation {
    pub label: String,
    pub lhs: BraidWord,
    pub rhs: BraidWord,
}

/// All instances of the standard pure braid group relations on `n` strands:
/// for generators `A_{r,s}` and `A_{i,j}`, the conjugate `A_{r,s}⁻¹ A_{i,j} A_{r,s}`
/// expressed in the four index configurations.
pub fn pure_braid_relations(n: usize) -> Result<Vec<Relation>> {
    let a = |i, j| pure_generator(i, j, n);
    let mut out = Vec::new();
    for r in 1..=n {
        for s in r + 1..=n {
            for i in 1..=n {
                for j in i + 1..=n {
                    let ars = a(r, s)?;
                    let aij = a(i, j)?;
                    let lhs = aij.conjugated_by(&ars.inverse());
                    let rhs = if s < i || (i < r && s < j) {
                        aij.clone()
                    } else if r < s && s == i {
                        aij.conjugated_by(&a(r, j)?)
                    } else if r == i && s < j {
                        aij.conjugated_by(&aij.then(&a(s, j)?))
                    } else if r < i && i < s && s < j {
                        let arj = a(r, j)?;
                        let asj = a(s, j)?;
                        let inner = BraidWord::commutator(&arj, &asj);
                        BraidWord::commutator(&inner, &aij).then(&aij)
                    } else {
                        continue;
                    };
                    out.push(Relation {
                        label: format!("A({r},{s})^-1 A({i},{j}) A({r},{s})"),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `(A_{1,2}⋯A_{1,n})(A_{2,3}⋯A_{2,n})⋯A_{n−1,n}`.
pub fn full_twist_as_pure_product(n: usize) -> Result<BraidWord> {
    let mut w = BraidWord::identity(n);
    for i in 1..n {
        for j in i + 1..=n {
            w = w.then(&pure_generator(i, j, n)?);
        }
    }
    Ok(w)
}

pub fn verify_pure_braid_relations() -> Result<bool> {
    for rel in pure_braid_relations(3)? {
        if !equal_b3(&rel.lhs, &rel.rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_full_twist_product() -> Result<bool> {
    equal_b3(&full_twist(3), &full_twist_as_pure_product(3)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> BraidWord {
        BraidWord::from_signed(3, s).unwrap()
    }

    #[test]
    fn compose_cancels() {
        assert!(w(&[1]).compose(&w(&[-1])).unwrap().is_empty());
        assert_eq!(w(&[1]).compose(&w(&[2])).unwrap(), w(&[1, 2]));
        assert!(w(&[1, 2]).compose(&w(&[-2, -1])).unwrap().is_empty());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = BraidWord::from_signed(4, &[3]).unwrap();
        assert!(matches!(
            w(&[1]).compose(&a),
            Err(Error::StrandMismatch { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BraidWord::from_signed(3, &[3]).is_err());
        assert!(BraidWord::from_signed(3, &[0]).is_err());
        assert!(BraidWord::parse("1 x", 3).is_err());
    }

    #[test]
    fn parse_formats() {
        assert_eq!(BraidWord::parse("1 2 -1", 3).unwrap(), w(&[1, 2, -1]));
        assert_eq!(BraidWord::parse("s1 s2 S1", 3).unwrap(), w(&[1, 2, -1]));
        assert_eq!(BraidWord::parse("  ", 3).unwrap(), w(&[]));
        assert_eq!(w(&[1, 2, -1]).to_string(), "1 2 -1");
    }

    #[test]
    fn pure_generators() {
        assert_eq!(pure_generator(1, 2, 3).unwrap(), w(&[1, 1]));
        assert_eq!(pure_generator(1, 3, 3).unwrap(), w(&[2, 1, 1, -2]));
        assert_eq!(pure_generator(2, 3, 3).unwrap(), w(&[2, 2]));
        assert!(pure_generator(2, 2, 3).is_err());
        assert!(pure_generator(1, 4, 3).is_err());
    }

    #[test]
    fn full_twists() {
        assert_eq!(full_twist(3), w(&[1, 2, 1, 2, 1, 2]));
        assert_eq!(full_twist(2).len(), 2);
        assert_eq!(full_twist(4).len(), 12);
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w(&[1, 2, 1, -2, -1, -2]).exponent_sum(), 0);
        assert_eq!(w(&[1, 2]).pow(6).exponent_sum(), 12);
        assert_eq!(w(&[1, 1, 1]).exponent_sum(), 3);
    }

    #[test]
    fn word_problem_examples() {
        assert!(is_trivial_b3(&w(&[1, 2, 1, -2, -1, -2])).unwrap());
        assert!(!is_trivial_b3(&w(&[1, 2]).pow(6)).unwrap());
        let d = full_twist(3);
        assert!(is_trivial_b3(&BraidWord::commutator(&d, &w(&[1]))).unwrap());
        assert!(is_trivial_b3(&BraidWord::identity(4)).is_err());
    }

    #[test]
    fn pure_relations_hold() {
        let rels = pure_braid_relations(3).unwrap();
        assert_eq!(rels.len(), 2);
        assert!(verify_pure_braid_relations().unwrap());
        assert!(verify_full_twist_product().unwrap());
    }

    #[test]
    fn fadell_neuwirth_substitution() {
        let a12 = pure_generator(1, 2, 3).unwrap();
        let a13 = pure_generator(1, 3, 3).unwrap();
        let a23 = pure_generator(2, 3, 3).unwrap();
        let rhs = full_twist(3).then(&a23.inverse()).then(&a13.inverse());
        assert!(equal_b3(&a12, &rhs).unwrap());
    }
}
