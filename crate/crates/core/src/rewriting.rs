//! Reidemeister–Schreier presentations of finite-index subgroups of `B₃`
//! and their abelianizations.
//!
//! A subgroup `K ≤ B₃` is given as the preimage of a subgroup `S` of the
//! finite image `ρ_m(B₃)`; its right cosets `K·w` correspond to the cosets
//! `S·ρ_m(w)`. The coset graph is explored breadth first, its BFS tree gives a
//! Schreier transversal, and each non-tree edge `(c, σⱼ)` yields the Schreier
//! generator `t_c σⱼ t_{c·σⱼ}⁻¹`. Relations are the Artin relators traced
//! from every coset. The Smith form of the abelianized relation matrix then
//! gives `H₁(K)` together with a projection from Schreier-generator exponent
//! vectors onto `ℤ^r`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::braid::{self, BraidWord, Letter};
use crate::error::{Error, Result};
use crate::finite_image::{bfs_closure, FiniteMatrixGroup, GroupOptions};
use crate::matrix::{IntMatrix, ResidueMatrix};
use crate::snf::{self, SmithForm};

/// Which subgroup of `B₃` a coset context describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `B₃[m] = ker ρ_m`.
    FullKernel,
    /// `ρ_m⁻¹(Z(ρ_m(B₃)))`.
    CenterQuotientKernel,
    /// `ρ_m⁻¹(S)` for the subgroup `S` generated by the images of these words.
    SubgroupPreimage(Vec<BraidWord>),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::FullKernel => "full-kernel",
            Mode::CenterQuotientKernel => "center-quotient-kernel",
            Mode::SubgroupPreimage(_) => "subgroup-preimage",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-kernel" | "full" | "kernel" => Ok(Mode::FullKernel),
            "center-quotient" | "center-quotient-kernel" | "center" => {
                Ok(Mode::CenterQuotientKernel)
            }
            other => Err(Error::Unsupported(format!(
                "mode {other:?}; expected full-kernel or center-quotient"
            ))),
        }
    }
}

/// A Schreier generator `t_c · σⱼ · t_{c·σⱼ}⁻¹`.
#[derive(Clone, Debug, Serialize)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub generator: usize,
    pub word: BraidWord,
}

/// A word in the Schreier generators: `(generator index, exponent ±1)`.
pub type SchreierWord = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct CosetContext {
    modulus: u64,
    mode: Mode,
    image: FiniteMatrixGroup,
    /// The quotient `B₃/K` as a group, for normal `K`.
    quotient: Option<FiniteMatrixGroup>,
    subgroup: Vec<usize>,
    normal: bool,
    letters: Vec<Letter>,
    table: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
    transversal: Vec<BraidWord>,
    lookup: HashMap<ResidueMatrix, usize>,
    reps: Vec<ResidueMatrix>,
    tree: HashSet<(usize, usize)>,
    schreier: Vec<SchreierGenerator>,
    schreier_index: HashMap<(usize, usize), usize>,
}

impl CosetContext {
    pub fn build(m: u64, mode: Mode) -> Result<Self> {
        Self::build_with(m, mode, &GroupOptions::default())
    }

    pub fn build_with(m: u64, mode: Mode, opts: &GroupOptions) -> Result<Self> {
        let image = FiniteMatrixGroup::with_options(3, m, opts)?;
        match mode {
            Mode::FullKernel => {
                let subgroup = vec![image.identity()];
                Ok(Self::from_quotient(m, mode, image.clone(), image, subgroup))
            }
            Mode::CenterQuotientKernel => {
                let subgroup = image.center();
                let quotient = image.quotient_by_center()?;
                Ok(Self::from_quotient(m, mode, image, quotient, subgroup))
            }
            Mode::SubgroupPreimage(ref words) => {
                let gens: Vec<usize> = words
                    .iter()
                    .map(|w| {
                        if w.strands() != 3 {
                            return Err(Error::WrongStrands {
                                expected: 3,
                                found: w.strands(),
                            });
                        }
                        Ok(image.element_of(w))
                    })
                    .collect::<Result<_>>()?;
                let subgroup = image.generate_subgroup(&gens);
                let members: Vec<ResidueMatrix> =
                    subgroup.iter().map(|&i| image.element(i).clone()).collect();
                Self::from_subgroup(m, mode, image, subgroup, members, opts)
            }
        }
    }

    /// Preimage of an explicit element set, which must be a subgroup.
    pub fn from_elements(m: u64, elements: &[usize], opts: &GroupOptions) -> Result<Self> {
        let image = FiniteMatrixGroup::with_options(3, m, opts)?;
        if elements.iter().any(|&e| e >= image.order()) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        let mut subgroup = elements.to_vec();
        subgroup.sort();
        subgroup.dedup();
        if !image.is_subgroup(&subgroup) {
            return Err(Error::NotASubgroup(format!(
                "{} elements not closed under multiplication",
                subgroup.len()
            )));
        }
        let words = subgroup.iter().map(|&i| image.transversal(i).clone()).collect();
        let members: Vec<ResidueMatrix> =
            subgroup.iter().map(|&i| image.element(i).clone()).collect();
        Self::from_subgroup(m, Mode::SubgroupPreimage(words), image, subgroup, members, opts)
    }

    fn from_quotient(
        m: u64,
        mode: Mode,
        image: FiniteMatrixGroup,
        quotient: FiniteMatrixGroup,
        subgroup: Vec<usize>,
    ) -> Self {
        let letters = quotient.letters().to_vec();
        let table = (0..quotient.order())
            .map(|c| (0..letters.len()).map(|p| quotient.edge(c, p)).collect())
            .collect();
        let parent = (0..quotient.order()).map(|c| quotient.bfs_parent(c)).collect();
        let reps = quotient.elements().to_vec();
        let lookup = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let transversal = quotient.transversals().to_vec();
        let mut ctx = CosetContext {
            modulus: m,
            mode,
            image,
            quotient: Some(quotient),
            subgroup,
            normal: true,
            letters,
            table,
            parent,
            transversal,
            lookup,
            reps,
            tree: HashSet::new(),
            schreier: Vec::new(),
            schreier_index: HashMap::new(),
        };
        ctx.finish();
        ctx
    }

    fn from_subgroup(
        m: u64,
        mode: Mode,
        image: FiniteMatrixGroup,
        subgroup: Vec<usize>,
        members: Vec<ResidueMatrix>,
        opts: &GroupOptions,
    ) -> Result<Self> {
        if subgroup.len() == 1 {
            return Ok(Self::from_quotient(m, mode, image.clone(), image, subgroup));
        }
        if subgroup == image.center() {
            let quotient = image.quotient_by_center()?;
            return Ok(Self::from_quotient(m, mode, image, quotient, subgroup));
        }
        let letters = image.letters().to_vec();
        let id = ResidueMatrix::identity(image.dim(), image.modulus());
        let canon = |x: &ResidueMatrix| members.iter().map(|s| s.mul(x)).min().unwrap();
        let c = bfs_closure(
            3,
            &letters,
            image.letter_images(),
            id,
            canon,
            opts.guard,
            opts.parallel,
        )?;
        // S is normal iff conjugation by each generator preserves it.
        let inside: HashSet<usize> = subgroup.iter().copied().collect();
        let normal = (0..letters.len()).all(|p| {
            let g = image.edge(0, p);
            let gi = image.inverse(g);
            subgroup
                .iter()
                .all(|&s| inside.contains(&image.mul(image.mul(g, s), gi)))
        });
        let mut ctx = CosetContext {
            modulus: m,
            mode,
            image,
            quotient: None,
            subgroup,
            normal,
            letters,
            table: c.edges,
            parent: c.parent,
            transversal: c.words,
            lookup: c.lookup,
            reps: c.reps,
            tree: HashSet::new(),
            schreier: Vec::new(),
            schreier_index: HashMap::new(),
        };
        ctx.finish();
        Ok(ctx)
    }

    fn finish(&mut self) {
        let mut tree = HashSet::new();
        for (c, p) in self.parent.iter().enumerate() {
            if let Some((from, pos)) = *p {
                let l = self.letters[pos];
                if l.is_positive() {
                    tree.insert((from, l.index()));
                } else {
                    tree.insert((c, l.index()));
                }
            }
        }
        let mut schreier = Vec::new();
        let mut index = HashMap::new();
        for c in 0..self.index() {
            for j in 1..3 {
                if tree.contains(&(c, j)) {
                    continue;
                }
                let d = self.act(c, Letter::new(j, true));
                let g = BraidWord::generator(j, 3, true).expect("valid generator");
                let word = self.transversal[c]
                    .then(&g)
                    .then(&self.transversal[d].inverse());
                index.insert((c, j), schreier.len());
                schreier.push(SchreierGenerator {
                    coset: c,
                    generator: j,
                    word,
                });
            }
        }
        self.tree = tree;
        self.schreier = schreier;
        self.schreier_index = index;
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    /// Number of cosets, `[B₃ : K]`.
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn image(&self) -> &FiniteMatrixGroup {
        &self.image
    }

    /// `B₃/K` as an enumerated group, when `S` is trivial or the center.
    pub fn quotient(&self) -> Option<&FiniteMatrixGroup> {
        self.quotient.as_ref()
    }

    /// Indices (in `ρ_m(B₃)`) of the subgroup `S` whose preimage is `K`.
    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn transversal(&self, c: usize) -> &BraidWord {
        &self.transversal[c]
    }

    pub fn coset_representative(&self, c: usize) -> &ResidueMatrix {
        &self.reps[c]
    }

    pub fn act(&self, c: usize, l: Letter) -> usize {
        let pos = self
            .letters
            .iter()
            .position(|&x| x == l)
            .expect("letter in alphabet");
        self.table[c][pos]
    }

    pub fn coset_of(&self, w: &BraidWord) -> usize {
        w.letters().iter().fold(0, |c, &l| self.act(c, l))
    }

    /// Coset `S·x` of an element `x ∈ ρ_m(B₃)`.
    pub fn coset_of_matrix(&self, x: &ResidueMatrix) -> Option<usize> {
        let key = self
            .subgroup
            .iter()
            .map(|&s| self.image.element(s).mul(x))
            .min()?;
        self.lookup.get(&key).copied()
    }

    pub fn contains(&self, w: &BraidWord) -> bool {
        self.coset_of(w) == 0
    }

    pub fn tree_edges(&self) -> usize {
        self.tree.len()
    }

    pub fn schreier_generators(&self) -> &[SchreierGenerator] {
        &self.schreier
    }

    /// Traces `w` from coset `start`, returning the Schreier word read along
    /// the way and the coset reached.
    pub fn rewrite_from(&self, start: usize, w: &BraidWord) -> (SchreierWord, usize) {
        let mut out: SchreierWord = Vec::new();
        let mut c = start;
        for &l in w.letters() {
            let j = l.index();
            let (edge, exp, next) = if l.is_positive() {
                let d = self.act(c, l);
                ((c, j), 1, d)
            } else {
                let d = self.act(c, l);
                ((d, j), -1, d)
            };
            if let Some(&s) = self.schreier_index.get(&edge) {
                if out.last() == Some(&(s, -exp)) {
                    out.pop();
                } else {
                    out.push((s, exp));
                }
            }
            c = next;
        }
        (out, c)
    }

    /// Reidemeister rewriting of a subgroup element.
    pub fn reidemeister_rewrite(&self, w: &BraidWord) -> Result<SchreierWord> {
        let (out, end) = self.rewrite_from(0, w);
        if end != 0 {
            return Err(Error::NotInSubgroup {
                word: w.to_string(),
            });
        }
        Ok(out)
    }

    /// Expands a Schreier word back into a braid word.
    pub fn expand(&self, sw: &SchreierWord) -> BraidWord {
        sw.iter().fold(BraidWord::identity(3), |acc, &(s, e)| {
            acc.then(&self.schreier[s].word.pow(e))
        })
    }
}

/// `H₁(K)` computed from the Reidemeister–Schreier presentation.
#[derive(Clone, Debug)]
pub struct AbelianizationContext {
    cosets: CosetContext,
    relations: IntMatrix,
    smith: SmithForm,
    free_rank: usize,
    torsion: Vec<BigInt>,
    /// `s × r`: Schreier exponent row vector ↦ free coordinates.
    projection: IntMatrix,
    /// `r × s`: free coordinates ↦ a Schreier exponent vector realising them.
    section: IntMatrix,
}

/// The Artin relators of `B₃` (a single braid relation).
fn relators() -> Vec<BraidWord> {
    vec![braid::braid_relator(1, 2, 3).expect("valid relator")]
}

impl AbelianizationContext {
    pub fn new(cosets: CosetContext) -> Self {
        Self::with_coset_order(cosets, None)
    }

    /// Builds the relation matrix with rows taken in the given coset order
    /// (used to check that the invariants do not depend on it).
    pub fn with_coset_order(cosets: CosetContext, order: Option<&[usize]>) -> Self {
        let s = cosets.schreier.len();
        let rels = relators();
        let default: Vec<usize> = (0..cosets.index()).collect();
        let order = order.unwrap_or(&default);
        let mut relations = IntMatrix::zeros(order.len() * rels.len(), s);
        for (row, &c) in order.iter().enumerate() {
            for (k, r) in rels.iter().enumerate() {
                let (sw, end) = cosets.rewrite_from(c, r);
                debug_assert_eq!(end, c, "relator closes up");
                for (g, e) in sw {
                    relations[(row * rels.len() + k, g)] += BigInt::from(e);
                }
            }
        }
        let smith = snf::smith_normal_form(&relations);
        let free_rank = s - smith.rank;
        let torsion = smith.torsion();
        let mut projection = IntMatrix::zeros(s, free_rank);
        let mut section = IntMatrix::zeros(free_rank, s);
        for k in 0..free_rank {
            for i in 0..s {
                projection[(i, k)] = smith.v[(i, smith.rank + k)].clone();
                section[(k, i)] = smith.v_inv[(smith.rank + k, i)].clone();
            }
        }
        AbelianizationContext {
            cosets,
            relations,
            smith,
            free_rank,
            torsion,
            projection,
            section,
        }
    }

    pub fn build(m: u64, mode: Mode) -> Result<Self> {
        Ok(Self::new(CosetContext::build(m, mode)?))
    }

    pub fn cosets(&self) -> &CosetContext {
        &self.cosets
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn relation_rank(&self) -> usize {
        self.smith.rank
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn section(&self) -> &IntMatrix {
        &self.section
    }

    /// Abelianized Schreier-generator exponent vector of a subgroup element.
    pub fn exponent_vector(&self, w: &BraidWord) -> Result<Vec<BigInt>> {
        let sw = self.cosets.reidemeister_rewrite(w)?;
        let mut v = vec![BigInt::zero(); self.cosets.schreier.len()];
        for (g, e) in sw {
            v[g] += BigInt::from(e);
        }
        Ok(v)
    }

    pub fn project(&self, exponents: &[BigInt]) -> Vec<BigInt> {
        self.projection.vec_mul(exponents)
    }

    /// Coordinates of `w ∈ K` in the free part of `H₁(K)` (Smith basis).
    pub fn class_of(&self, w: &BraidWord) -> Result<Vec<BigInt>> {
        Ok(self.project(&self.exponent_vector(w)?))
    }

    /// A subgroup element whose class is `x` (Smith basis).
    pub fn lattice_word(&self, x: &[BigInt]) -> BraidWord {
        let e = self.section.vec_mul(x);
        let mut w = BraidWord::identity(3);
        for (g, k) in e.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let k = i64::try_from(k).expect("exponent fits in i64");
            w = w.then(&self.cosets.schreier[g].word.pow(k));
        }
        w
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            modulus: self.cosets.modulus,
            mode: self.cosets.mode.name().to_string(),
            index: self.cosets.index(),
            schreier_generators: self.cosets.schreier.len(),
            relation_rank: self.smith.rank,
            invariant_factors: self.torsion.iter().map(|x| x.to_string()).collect(),
            free_rank: self.free_rank,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContextSummary {
    pub modulus: u64,
    pub mode: String,
    pub index: usize,
    pub schreier_generators: usize,
    pub relation_rank: usize,
    /// Invariant factors other than 1.
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
}

/// A user-chosen basis of the free part of `H₁(K)`.
#[derive(Clone, Debug)]
pub struct BasisSpec {
    pub words: Vec<BraidWord>,
    /// Columns are the Smith coordinates of the basis words.
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
}

impl BasisSpec {
    /// Coordinates in this basis of a Smith-basis vector.
    pub fn from_smith(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.inverse.mul_vec(x)
    }

    pub fn to_smith(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(y)
    }

    /// `∏ b_j^{y_j}`.
    pub fn lattice_word(&self, y: &[BigInt]) -> BraidWord {
        let mut w = BraidWord::identity(3);
        for (b, k) in self.words.iter().zip(y) {
            let k = i64::try_from(k).expect("exponent fits in i64");
            w = w.then(&b.pow(k));
        }
        w
    }
}

pub fn change_basis(ctx: &AbelianizationContext, words: &[BraidWord]) -> Result<BasisSpec> {
    let r = ctx.free_rank();
    if words.len() != r {
        return Err(Error::Dimension(format!(
            "basis has {} words but the free rank is {r}",
            words.len()
        )));
    }
    let cols: Vec<Vec<BigInt>> = words
        .iter()
        .map(|w| ctx.class_of(w))
        .collect::<Result<_>>()?;
    let matrix = IntMatrix::from_columns(&cols, r);
    let det = matrix.determinant();
    if !det.abs().is_one() {
        return Err(Error::NotABasis {
            determinant: det.to_string(),
        });
    }
    let inverse = snf::unimodular_inverse(&matrix).expect("unimodular");
    Ok(BasisSpec {
        words: words.to_vec(),
        matrix,
        inverse,
    })
}

/// Coordinate system on the lattice `H₁(K)`.
#[derive(Clone, Debug)]
pub enum Basis {
    Smith,
    Words(BasisSpec),
}

impl Basis {
    pub fn coordinates(&self, ctx: &AbelianizationContext, w: &BraidWord) -> Result<Vec<BigInt>> {
        let x = ctx.class_of(w)?;
        Ok(match self {
            Basis::Smith => x,
            Basis::Words(b) => b.from_smith(&x),
        })
    }

    pub fn lattice_word(&self, ctx: &AbelianizationContext, y: &[BigInt]) -> BraidWord {
        match self {
            Basis::Smith => ctx.lattice_word(y),
            Basis::Words(b) => b.lattice_word(y),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Basis::Smith => "smith",
            Basis::Words(_) => "words",
        }
    }
}

/// The basis `e₁ = σ₁³, e₂ = σ₁σ₂³σ₁⁻¹, e₃ = σ₁⁻¹σ₂³σ₁, e₄ = σ₂³` of `H₁(B₃[3])`.
pub fn level_three_basis() -> Vec<BraidWord> {
    [
        vec![1, 1, 1],
        vec![1, 2, 2, 2, -1],
        vec![-1, 2, 2, 2, 1],
        vec![2, 2, 2],
    ]
    .iter()
    .map(|s| BraidWord::from_signed(3, s).expect("valid word"))
    .collect()
}

/// `A₁,₂, A₁,₃, A₂,₃` as a basis of `H₁(P₃)`.
pub fn pure_braid_basis() -> Vec<BraidWord> {
    [(1, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(i, j)| braid::pure_generator(i, j, 3).expect("valid indices"))
        .collect()
}

/// Parses a basis file: one braid word per line; blank lines and `#`
/// comments are skipped.
pub fn parse_basis(text: &str) -> Result<Vec<BraidWord>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| BraidWord::parse(l, 3))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> BraidWord {
        BraidWord::from_signed(3, s).unwrap()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn coset_counts() {
        assert_eq!(CosetContext::build(3, Mode::FullKernel).unwrap().index(), 24);
        assert_eq!(
            CosetContext::build(3, Mode::CenterQuotientKernel).unwrap().index(),
            12
        );
        let sub = CosetContext::build(3, Mode::SubgroupPreimage(vec![w(&[1])])).unwrap();
        assert_eq!(sub.index(), 8);
        assert!(!sub.is_normal());
    }

    #[test]
    fn schreier_counts() {
        for (m, n) in [(2u64, 7usize), (3, 25)] {
            let c = CosetContext::build(m, Mode::FullKernel).unwrap();
            assert_eq!(c.schreier_generators().len(), n);
            assert_eq!(c.tree_edges(), c.index() - 1);
        }
    }

    #[test]
    fn rewrite_basics() {
        let c = CosetContext::build(3, Mode::FullKernel).unwrap();
        assert!(c.reidemeister_rewrite(&BraidWord::identity(3)).unwrap().is_empty());
        assert!(matches!(
            c.reidemeister_rewrite(&w(&[1])),
            Err(Error::NotInSubgroup { .. })
        ));
        let x = w(&[1, 1, 1, 2, 2, 2]);
        let sw = c.reidemeister_rewrite(&x).unwrap();
        // Expansion is freely equal to the input.
        assert_eq!(c.expand(&sw), x);
        for s in c.schreier_generators() {
            assert!(c.contains(&s.word));
        }
    }

    #[test]
    fn transversal_lands_in_coset() {
        for mode in [
            Mode::FullKernel,
            Mode::CenterQuotientKernel,
            Mode::SubgroupPreimage(vec![w(&[1])]),
        ] {
            let c = CosetContext::build(3, mode).unwrap();
            for i in 0..c.index() {
                assert_eq!(c.coset_of(c.transversal(i)), i);
                let x = crate::burau::rho_m(c.transversal(i), 3).unwrap();
                assert_eq!(c.coset_of_matrix(&x), Some(i));
            }
        }
    }

    #[test]
    fn ranks() {
        for (m, mode, r) in [
            (2, Mode::FullKernel, 3),
            (3, Mode::FullKernel, 4),
            (4, Mode::FullKernel, 6),
            (3, Mode::CenterQuotientKernel, 4),
            (4, Mode::CenterQuotientKernel, 6),
            (5, Mode::FullKernel, 12),
            (5, Mode::CenterQuotientKernel, 12),
        ] {
            let a = AbelianizationContext::build(m, mode.clone()).unwrap();
            assert_eq!(a.free_rank(), r, "m={m} {mode}");
            assert!(a.torsion().is_empty());
            assert_eq!(
                a.relation_rank() + a.free_rank(),
                a.cosets().schreier_generators().len()
            );
        }
    }

    #[test]
    fn relator_order_does_not_matter() {
        let c = CosetContext::build(3, Mode::FullKernel).unwrap();
        let base = AbelianizationContext::new(c.clone());
        let rev: Vec<usize> = (0..c.index()).rev().collect();
        let other = AbelianizationContext::with_coset_order(c, Some(&rev));
        assert_eq!(base.free_rank(), other.free_rank());
        assert_eq!(base.smith().invariant_factors(), other.smith().invariant_factors());
    }

    #[test]
    fn level_three_coordinates() {
        let a = AbelianizationContext::build(3, Mode::FullKernel).unwrap();
        let b = change_basis(&a, &level_three_basis()).unwrap();
        let basis = Basis::Words(b);
        let e1 = basis.coordinates(&a, &w(&[1, 1, 1])).unwrap();
        assert_eq!(ints(&e1), vec![1, 0, 0, 0]);
        let x = w(&[1, 1, 2]).pow(2).pow(2);
        assert_eq!(ints(&basis.coordinates(&a, &x).unwrap()), vec![1, 1, 1, 1]);
        let p = w(&[1, 1, 1]);
        let q = w(&[2, 2, 2]);
        let comm = BraidWord::commutator(&p, &q);
        assert!(a.class_of(&comm).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn basis_errors() {
        let a = AbelianizationContext::build(3, Mode::FullKernel).unwrap();
        let same = vec![w(&[1, 1, 1]); 4];
        assert_eq!(
            change_basis(&a, &same).unwrap_err(),
            Error::NotABasis {
                determinant: "0".into()
            }
        );
        assert!(matches!(
            change_basis(&a, &same[..2]),
            Err(Error::Dimension(_))
        ));
        let two = AbelianizationContext::build(2, Mode::FullKernel).unwrap();
        assert!(change_basis(&two, &pure_braid_basis()).is_ok());
    }

    #[test]
    fn lattice_words_realise_coordinates() {
        let a = AbelianizationContext::build(3, Mode::FullKernel).unwrap();
        for k in 0..a.free_rank() {
            let mut x = vec![BigInt::zero(); a.free_rank()];
            x[k] = BigInt::from(2);
            x[(k + 1) % a.free_rank()] = BigInt::from(-1);
            let word = a.lattice_word(&x);
            assert_eq!(a.class_of(&word).unwrap(), x);
        }
    }

    #[test]
    fn rejects_non_subgroup() {
        let g = FiniteMatrixGroup::enumerate(3).unwrap();
        let s1 = g.element_of(&w(&[1]));
        let err = CosetContext::from_elements(3, &[0, s1], &GroupOptions::default());
        assert!(matches!(err, Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn parse_basis_file() {
        let ws = parse_basis("1 1 1\n# comment\n1 2 2 2 -1\n\n-1 2 2 2 1\n2 2 2\n").unwrap();
        assert_eq!(ws, level_three_basis());
    }
}
