//! Complete enumeration of the finite groups `ρ_m(B_n)` and their central
//! quotients.
//!
//! Enumeration is a breadth-first closure from the identity under right
//! multiplication by the letter images, visiting letters in a fixed order
//! (by default `σ₁, σ₁⁻¹, σ₂, σ₂⁻¹, …`). The first letter that reaches an
//! element fixes both its BFS parent and its transversal word, so
//! transversals are shortest words with a deterministic tie-break.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{BraidWord, Letter};
use crate::burau::{self, Representation};
use crate::catalog;
use crate::error::{Error, Result};
use crate::matrix::ResidueMatrix;

pub const DEFAULT_GUARD: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct GroupOptions {
    /// BFS letter order; `None` means `σ₁, σ₁⁻¹, σ₂, σ₂⁻¹, …`.
    pub letter_order: Option<Vec<Letter>>,
    pub guard: usize,
    pub parallel: bool,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions {
            letter_order: None,
            guard: DEFAULT_GUARD,
            parallel: false,
        }
    }
}

/// Result of a BFS closure over canonical representatives.
#[derive(Clone, Debug)]
pub(crate) struct Closure {
    pub reps: Vec<ResidueMatrix>,
    pub lookup: HashMap<ResidueMatrix, usize>,
    pub edges: Vec<Vec<usize>>,
    pub parent: Vec<Option<(usize, usize)>>,
    pub words: Vec<BraidWord>,
}

pub(crate) fn bfs_closure<F>(
    strands: usize,
    letters: &[Letter],
    images: &[ResidueMatrix],
    start: ResidueMatrix,
    canon: F,
    guard: usize,
    parallel: bool,
) -> Result<Closure>
where
    F: Fn(&ResidueMatrix) -> ResidueMatrix + Sync,
{
    let start = canon(&start);
    let mut reps = vec![start.clone()];
    let mut lookup = HashMap::from([(start, 0usize)]);
    let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
    let mut parent = vec![None];
    let mut words = vec![BraidWord::identity(strands)];
    let mut frontier = vec![0usize];

    while !frontier.is_empty() {
        // Neighbours are computed per level (optionally in parallel) and then
        // merged sequentially in frontier order, so both modes agree exactly.
        let step = |&node: &usize| -> Vec<ResidueMatrix> {
            images.iter().map(|g| canon(&reps[node].mul(g))).collect()
        };
        let neighbours: Vec<Vec<ResidueMatrix>> = if parallel {
            frontier.par_iter().map(step).collect()
        } else {
            frontier.iter().map(step).collect()
        };
        let mut next = Vec::new();
        for (&node, nbrs) in frontier.iter().zip(neighbours) {
            let mut row = Vec::with_capacity(nbrs.len());
            for (pos, key) in nbrs.into_iter().enumerate() {
                let target = match lookup.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = reps.len();
                        if t >= guard {
                            return Err(Error::OrderGuard { guard });
                        }
                        lookup.insert(key.clone(), t);
                        reps.push(key);
                        edges.push(Vec::new());
                        parent.push(Some((node, pos)));
                        let w = BraidWord::letter(strands, letters[pos])?;
                        words.push(words[node].then(&w));
                        next.push(t);
                        t
                    }
                };
                row.push(target);
            }
            edges[node] = row;
        }
        frontier = next;
    }
    Ok(Closure {
        reps,
        lookup,
        edges,
        parent,
        words,
    })
}

/// A fully enumerated finite matrix group, possibly taken modulo a central
/// subgroup (elements are then lexicographically least coset
/// representatives).
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    modulus: u32,
    strands: usize,
    dim: usize,
    letters: Vec<Letter>,
    letter_images: Vec<ResidueMatrix>,
    central: Vec<ResidueMatrix>,
    elements: Vec<ResidueMatrix>,
    lookup: HashMap<ResidueMatrix, usize>,
    edges: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
    transversal: Vec<BraidWord>,
}

pub fn default_letters(strands: usize) -> Vec<Letter> {
    (1..strands)
        .flat_map(|i| [Letter::new(i, true), Letter::new(i, false)])
        .collect()
}

fn canonical_in(central: &[ResidueMatrix], m: &ResidueMatrix) -> ResidueMatrix {
    central
        .iter()
        .map(|z| z.mul(m))
        .min()
        .unwrap_or_else(|| m.clone())
}

impl FiniteMatrixGroup {
    /// `ρ_m(B₃)` with default options.
    pub fn enumerate(m: u64) -> Result<Self> {
        Self::with_options(3, m, &GroupOptions::default())
    }

    pub fn with_options(strands: usize, m: u64, opts: &GroupOptions) -> Result<Self> {
        if m < 2 {
            return Err(Error::Modulus(m));
        }
        let m32 = u32::try_from(m).map_err(|_| Error::Unsupported(format!("modulus {m}")))?;
        let rep = Representation::for_strands(strands);
        let all = burau::residue_letter_images(rep, strands, m32)?;
        let letters = match &opts.letter_order {
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort();
                let mut expected = default_letters(strands);
                expected.sort();
                if sorted != expected {
                    return Err(Error::Unsupported(
                        "letter order must list every generator and inverse once".into(),
                    ));
                }
                order.clone()
            }
            None => default_letters(strands),
        };
        let images: Vec<ResidueMatrix> = letters
            .iter()
            .map(|l| all.iter().find(|(x, _)| x == l).unwrap().1.clone())
            .collect();
        Self::build(strands, m32, letters, images, Vec::new(), opts)
    }

    fn build(
        strands: usize,
        modulus: u32,
        letters: Vec<Letter>,
        images: Vec<ResidueMatrix>,
        central: Vec<ResidueMatrix>,
        opts: &GroupOptions,
    ) -> Result<Self> {
        let dim = images[0].dim();
        let id = ResidueMatrix::identity(dim, modulus);
        let c = if central.is_empty() {
            bfs_closure(strands, &letters, &images, id, |m| m.clone(), opts.guard, opts.parallel)?
        } else {
            bfs_closure(
                strands,
                &letters,
                &images,
                id,
                |m| canonical_in(&central, m),
                opts.guard,
                opts.parallel,
            )?
        };
        Ok(FiniteMatrixGroup {
            modulus,
            strands,
            dim,
            letters,
            letter_images: images,
            central,
            elements: c.reps,
            lookup: c.lookup,
            edges: c.edges,
            parent: c.parent,
            transversal: c.words,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_center_quotient(&self) -> bool {
        !self.central.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_images(&self) -> &[ResidueMatrix] {
        &self.letter_images
    }

    /// The central subgroup quotiented out (empty for the full image).
    pub fn central_subgroup(&self) -> &[ResidueMatrix] {
        &self.central
    }

    pub fn elements(&self) -> &[ResidueMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ResidueMatrix {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn canonical(&self, m: &ResidueMatrix) -> ResidueMatrix {
        if self.central.is_empty() {
            m.clone()
        } else {
            canonical_in(&self.central, m)
        }
    }

    pub fn index_of(&self, m: &ResidueMatrix) -> Option<usize> {
        self.lookup.get(&self.canonical(m)).copied()
    }

    pub fn transversal(&self, i: usize) -> &BraidWord {
        &self.transversal[i]
    }

    pub fn transversals(&self) -> &[BraidWord] {
        &self.transversal
    }

    pub fn bfs_parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parent[i]
    }

    /// Cayley edge: element `i` right-multiplied by letter in position `pos`.
    pub fn edge(&self, i: usize, pos: usize) -> usize {
        self.edges[i][pos]
    }

    pub fn letter_position(&self, l: Letter) -> usize {
        self.letters
            .iter()
            .position(|&x| x == l)
            .expect("letter belongs to the group's alphabet")
    }

    /// The element represented by a braid word.
    pub fn element_of(&self, w: &BraidWord) -> usize {
        w.letters()
            .iter()
            .fold(0, |at, &l| self.edges[at][self.letter_position(l)])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].mul(&self.elements[b]);
        self.index_of(&p).expect("group is closed under multiplication")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let o = self.element_order(a);
        self.pow(a, o - 1)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn generator_elements(&self) -> Vec<usize> {
        (0..self.letters.len()).map(|p| self.edges[0][p]).collect()
    }

    /// Elements commuting with every generator image.
    pub fn center(&self) -> Vec<usize> {
        let gens = self.generator_elements();
        (0..self.order())
            .filter(|&x| gens.iter().all(|&g| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    /// `G / Z(G)`, enumerated afresh so that its transversal words are
    /// shortest words for the central cosets.
    pub fn quotient_by_center(&self) -> Result<FiniteMatrixGroup> {
        if self.is_center_quotient() {
            return Err(Error::Unsupported(
                "group is already a central quotient".into(),
            ));
        }
        let central: Vec<ResidueMatrix> =
            self.center().into_iter().map(|i| self.elements[i].clone()).collect();
        Self::build(
            self.strands,
            self.modulus,
            self.letters.clone(),
            self.letter_images.clone(),
            central,
            &GroupOptions::default(),
        )
    }

    /// Orbits under conjugation by the generators, each sorted, in order of
    /// their least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let gens = self.generator_elements();
        let pairs: Vec<(usize, usize)> = gens
            .iter()
            .map(|&g| (g, self.inverse(g)))
            .collect();
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![start];
            class_of[start] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &(g, gi) in &pairs {
                    let y = self.mul(self.mul(g, x), gi);
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort();
            classes.push(members);
        }
        classes
    }

    /// Closure of a set of elements under multiplication.
    pub fn generate_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![0usize];
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort();
        members
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if !set.contains(&0) {
            return false;
        }
        let mut inside = vec![false; self.order()];
        for &x in set {
            inside[x] = true;
        }
        set.iter()
            .all(|&a| set.iter().all(|&b| inside[self.mul(a, b)]))
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let all: Vec<usize> = (0..self.order()).collect();
        self.fingerprint_of(&all)
    }

    /// Fingerprint of a subgroup given by its element indices.
    pub fn fingerprint_of(&self, subgroup: &[usize]) -> GroupFingerprint {
        let mut histogram = BTreeMap::new();
        for &x in subgroup {
            *histogram.entry(self.element_order(x)).or_insert(0) += 1;
        }
        let center_order = subgroup
            .iter()
            .filter(|&&x| subgroup.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
            .count();
        GroupFingerprint {
            order: subgroup.len(),
            histogram,
            center_order,
        }
    }

    pub fn dump(&self) -> GroupDump {
        let fingerprint = self.fingerprint();
        GroupDump {
            modulus: self.modulus,
            strands: self.strands,
            center_quotient: self.is_center_quotient(),
            order: self.order(),
            center_order: fingerprint.center_order,
            catalog: catalog::match_catalog(&fingerprint).unwrap_or("unknown").to_string(),
            histogram: fingerprint.histogram.clone(),
            transversal: self.transversal.iter().map(|w| w.to_string()).collect(),
        }
    }
}

/// Order statistics used to recognise small groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupFingerprint {
    pub order: usize,
    /// Element order → number of elements of that order.
    pub histogram: BTreeMap<usize, usize>,
    pub center_order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupDump {
    pub modulus: u32,
    pub strands: usize,
    pub center_quotient: bool,
    pub order: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub center_order: usize,
    pub catalog: String,
    pub transversal: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_orders() {
        for (m, order, center) in [(2, 6, 1), (3, 24, 2), (4, 48, 2), (5, 120, 2)] {
            let g = FiniteMatrixGroup::enumerate(m).unwrap();
            assert_eq!(g.order(), order, "m={m}");
            assert_eq!(g.center().len(), center, "m={m}");
        }
    }

    #[test]
    fn center_mod3_is_plus_minus_identity() {
        let g = FiniteMatrixGroup::enumerate(3).unwrap();
        let c: Vec<_> = g.center().iter().map(|&i| g.element(i).clone()).collect();
        let id = ResidueMatrix::identity(2, 3);
        assert!(c.contains(&id));
        assert!(c.contains(&id.scale(2)));
    }

    #[test]
    fn transversal_words_reproduce_elements() {
        for m in 2..=5 {
            let g = FiniteMatrixGroup::enumerate(m).unwrap();
            assert!(g.transversal(0).is_empty());
            for i in 0..g.order() {
                let img = burau::rho_m(g.transversal(i), m).unwrap();
                assert_eq!(&img, g.element(i));
                assert_eq!(g.element_of(g.transversal(i)), i);
            }
        }
    }

    #[test]
    fn orders_and_classes() {
        let g = FiniteMatrixGroup::enumerate(3).unwrap();
        assert_eq!(g.conjugacy_classes().len(), 7);
        let twist = g.element_of(&crate::braid::full_twist(3));
        assert_eq!(g.element_order(twist), 2);
        assert_eq!(g.element_order(g.identity()), 1);
    }

    #[test]
    fn lagrange_and_quotients() {
        for m in 2..=5u64 {
            let g = FiniteMatrixGroup::enumerate(m).unwrap();
            for pos in 0..g.letters().len() {
                let h = g.generate_subgroup(&[g.edge(0, pos)]);
                assert_eq!(g.order() % h.len(), 0);
                assert!(g.is_subgroup(&h));
            }
            let q = g.quotient_by_center().unwrap();
            assert_eq!(q.order() * g.center().len(), g.order());
        }
    }

    #[test]
    fn parallel_bfs_is_identical() {
        for m in 2..=7 {
            let a = FiniteMatrixGroup::enumerate(m).unwrap();
            let opts = GroupOptions {
                parallel: true,
                ..Default::default()
            };
            let b = FiniteMatrixGroup::with_options(3, m, &opts).unwrap();
            assert_eq!(a.elements(), b.elements());
            assert_eq!(a.transversals(), b.transversals());
        }
    }

    #[test]
    fn fingerprint_ignores_generator_labels() {
        let a = FiniteMatrixGroup::enumerate(4).unwrap();
        let opts = GroupOptions {
            letter_order: Some(vec![
                Letter::from_signed(-2),
                Letter::from_signed(2),
                Letter::from_signed(-1),
                Letter::from_signed(1),
            ]),
            ..Default::default()
        };
        let b = FiniteMatrixGroup::with_options(3, 4, &opts).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn guard_trips() {
        let opts = GroupOptions {
            guard: 10,
            ..Default::default()
        };
        assert_eq!(
            FiniteMatrixGroup::with_options(3, 3, &opts).unwrap_err(),
            Error::OrderGuard { guard: 10 }
        );
    }

    #[test]
    fn four_strands_mod_two_is_symmetric_group() {
        let g = FiniteMatrixGroup::with_options(4, 2, &GroupOptions::default()).unwrap();
        assert_eq!(catalog::match_catalog(&g.fingerprint()), Some("S4"));
    }

    #[test]
    fn dump_is_deterministic() {
        let a = serde_json::to_string(&FiniteMatrixGroup::enumerate(3).unwrap().dump()).unwrap();
        let b = serde_json::to_string(&FiniteMatrixGroup::enumerate(3).unwrap().dump()).unwrap();
        assert_eq!(a, b);
    }
}
