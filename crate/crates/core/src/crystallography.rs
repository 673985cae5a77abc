//! The extension `1 → H₁(K) → B₃/[K,K] → B₃/K → 1` for normal `K`, its
//! holonomy representation and crystallographic verdicts.
//!
//! Elements of the extension are pairs `(x, q)` standing for
//! `lattice_word(x) · t_q`, with `t_q` the Schreier transversal word of `q`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::braid::BraidWord;
use crate::catalog;
use crate::error::{Error, Result};
use crate::finite_image::{FiniteMatrixGroup, GroupFingerprint, GroupOptions};
use crate::formulas;
use crate::matrix::IntMatrix;
use crate::rewriting::{
    self, change_basis, AbelianizationContext, Basis, CosetContext, Mode,
};
use crate::snf;

#[derive(Clone, Debug)]
pub struct CrystPresentation {
    abel: AbelianizationContext,
    basis: Basis,
    quotient: FiniteMatrixGroup,
    actions: Vec<IntMatrix>,
}

/// The basis used when none is given: `A₁,₂, A₁,₃, A₂,₃` for `m = 2`, the
/// `e`-basis for `m = 3`, and the Smith basis otherwise.
pub fn default_basis(abel: &AbelianizationContext) -> Basis {
    let words = match abel.cosets().modulus() {
        2 => rewriting::pure_braid_basis(),
        3 => rewriting::level_three_basis(),
        _ => return Basis::Smith,
    };
    change_basis(abel, &words)
        .map(Basis::Words)
        .unwrap_or(Basis::Smith)
}

impl CrystPresentation {
    pub fn build(m: u64, mode: Mode) -> Result<Self> {
        let abel = AbelianizationContext::build(m, mode)?;
        let basis = default_basis(&abel);
        Self::new(abel, basis)
    }

    pub fn build_with(m: u64, mode: Mode, opts: &GroupOptions, basis: Option<&[BraidWord]>) -> Result<Self> {
        let abel = AbelianizationContext::new(CosetContext::build_with(m, mode, opts)?);
        let basis = match basis {
            Some(words) => Basis::Words(change_basis(&abel, words)?),
            None => default_basis(&abel),
        };
        Self::new(abel, basis)
    }

    pub fn new(abel: AbelianizationContext, basis: Basis) -> Result<Self> {
        let quotient = abel
            .cosets()
            .quotient()
            .cloned()
            .ok_or_else(|| {
                Error::Unsupported("the extension needs a normal subgroup with a known quotient".into())
            })?;
        let r = abel.free_rank();
        let basis_words: Vec<BraidWord> = (0..r)
            .map(|j| {
                let mut e = vec![BigInt::zero(); r];
                e[j] = BigInt::from(1);
                basis.lattice_word(&abel, &e)
            })
            .collect();
        let cosets = abel.cosets();
        let actions = (0..quotient.order())
            .map(|q| {
                let t = cosets.transversal(q);
                let cols: Vec<Vec<BigInt>> = basis_words
                    .iter()
                    .map(|b| basis.coordinates(&abel, &b.conjugated_by(t)))
                    .collect::<Result<_>>()?;
                Ok(IntMatrix::from_columns(&cols, r))
            })
            .collect::<Result<_>>()?;
        Ok(CrystPresentation {
            abel,
            basis,
            quotient,
            actions,
        })
    }

    pub fn abelianization(&self) -> &AbelianizationContext {
        &self.abel
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn holonomy_group(&self) -> &FiniteMatrixGroup {
        &self.quotient
    }

    pub fn dimension(&self) -> usize {
        self.abel.free_rank()
    }

    /// Lattice coordinates of `w ∈ K` in the presentation's basis.
    pub fn coordinates(&self, w: &BraidWord) -> Result<Vec<BigInt>> {
        self.basis.coordinates(&self.abel, w)
    }

    pub fn lattice_word(&self, x: &[BigInt]) -> BraidWord {
        self.basis.lattice_word(&self.abel, x)
    }

    /// `θ(q)`: column `j` holds the coordinates of `t_q b_j t_q⁻¹`.
    pub fn action_matrix(&self, q: usize) -> &IntMatrix {
        &self.actions[q]
    }

    pub fn action_of(&self, w: &BraidWord) -> &IntMatrix {
        &self.actions[self.abel.cosets().coset_of(w)]
    }

    pub fn transversal(&self, q: usize) -> &BraidWord {
        self.abel.cosets().transversal(q)
    }

    /// `c(q, r)`: coordinates of `t_q t_r t_{qr}⁻¹`.
    pub fn cocycle(&self, q: usize, r: usize) -> Vec<BigInt> {
        let qr = self.quotient.mul(q, r);
        let w = self
            .transversal(q)
            .then(self.transversal(r))
            .then(&self.transversal(qr).inverse());
        self.coordinates(&w).expect("cocycle word lies in K")
    }

    /// Product in the extension.
    pub fn multiply(&self, a: &ExtensionElement, b: &ExtensionElement) -> ExtensionElement {
        let y = self.actions[a.coset].mul_vec(&b.lattice);
        let c = self.cocycle(a.coset, b.coset);
        let lattice = a
            .lattice
            .iter()
            .zip(y.iter().zip(&c))
            .map(|(p, (q, r))| p + q + r)
            .collect();
        ExtensionElement {
            lattice,
            coset: self.quotient.mul(a.coset, b.coset),
        }
    }

    /// The extension element represented by a braid word.
    pub fn element_of(&self, w: &BraidWord) -> ExtensionElement {
        let q = self.abel.cosets().coset_of(w);
        let k = w.then(&self.transversal(q).inverse());
        ExtensionElement {
            lattice: self.coordinates(&k).expect("w t_q⁻¹ lies in K"),
            coset: q,
        }
    }

    pub fn word_of(&self, e: &ExtensionElement) -> BraidWord {
        self.lattice_word(&e.lattice).then(self.transversal(e.coset))
    }

    /// `{q : θ(q) = I}` restricted to `subset` (or all of `Q`).
    pub fn holonomy_kernel(&self, subset: Option<&[usize]>) -> Vec<usize> {
        let all: Vec<usize> = (0..self.quotient.order()).collect();
        subset
            .unwrap_or(&all)
            .iter()
            .copied()
            .filter(|&q| self.actions[q].is_identity())
            .collect()
    }

    /// Looks for finite-order elements above each `q ≠ 1` of `subset`.
    pub fn torsion_test(&self, subset: Option<&[usize]>) -> TorsionReport {
        let all: Vec<usize> = (0..self.quotient.order()).collect();
        let subset = subset.unwrap_or(&all);
        let r = self.dimension();
        let mut witnesses = Vec::new();
        for &q in subset {
            if q == self.quotient.identity() {
                continue;
            }
            let o = self.quotient.element_order(q);
            let theta = &self.actions[q];
            let mut norm = IntMatrix::zeros(r, r);
            let mut power = IntMatrix::identity(r);
            for _ in 0..o {
                norm = norm.add(&power);
                power = power.mul(theta);
            }
            let tq = self.transversal(q);
            let c = self
                .coordinates(&tq.pow(o as i64))
                .expect("t_q^o lies in K");
            let rhs: Vec<BigInt> = c.iter().map(|v| -v).collect();
            if let Some(x) = snf::solve_integer(&norm, &rhs) {
                let word = self.lattice_word(&x).then(tq);
                let certified = self
                    .coordinates(&word.pow(o as i64))
                    .map(|v| v.iter().all(Zero::is_zero))
                    .unwrap_or(false);
                witnesses.push(TorsionWitness {
                    coset: q,
                    order: o,
                    lattice: x.iter().map(|v| v.to_string()).collect(),
                    word,
                    certified,
                });
            }
        }
        TorsionReport {
            torsion_free: witnesses.is_empty(),
            checked: subset.len().saturating_sub(1),
            witnesses,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict_on(None)
    }

    /// Verdict for the preimage in the extension of the subgroup generated by
    /// the images of `gens` in `Q`.
    pub fn sub_extension(&self, gens: &[BraidWord]) -> Result<Verdict> {
        let g: Vec<usize> = gens
            .iter()
            .map(|w| self.abel.cosets().coset_of(w))
            .collect();
        let s = self.quotient.generate_subgroup(&g);
        Ok(self.verdict_on(Some(&s)))
    }

    /// Verdict above an explicit subset of `Q`, which must be a subgroup.
    pub fn sub_extension_elements(&self, subset: &[usize]) -> Result<Verdict> {
        let mut s = subset.to_vec();
        s.sort();
        s.dedup();
        if s.iter().any(|&q| q >= self.quotient.order()) || !self.quotient.is_subgroup(&s) {
            return Err(Error::NotASubgroup(format!(
                "{} elements of the holonomy group are not closed",
                s.len()
            )));
        }
        Ok(self.verdict_on(Some(&s)))
    }

    fn verdict_on(&self, subset: Option<&[usize]>) -> Verdict {
        let fingerprint = match subset {
            Some(s) => self.quotient.fingerprint_of(s),
            None => self.quotient.fingerprint(),
        };
        let kernel = self.holonomy_kernel(subset);
        let faithful = kernel.len() == 1;
        let torsion = self.torsion_test(subset);
        let ctx = self.abel.cosets();
        let recommendation = (!faithful && ctx.mode() == &Mode::FullKernel).then(|| {
            "holonomy is not faithful; try --mode center-quotient".to_string()
        });
        Verdict {
            modulus: ctx.modulus(),
            mode: ctx.mode().name().to_string(),
            basis: self.basis.name().to_string(),
            dimension: self.dimension(),
            lattice_torsion: self.abel.torsion().iter().map(|t| t.to_string()).collect(),
            holonomy_order: fingerprint.order,
            holonomy_group: catalog::match_catalog(&fingerprint)
                .unwrap_or("unknown")
                .to_string(),
            holonomy_fingerprint: fingerprint,
            holonomy_kernel_order: kernel.len(),
            holonomy_kernel: kernel
                .iter()
                .map(|&q| self.transversal(q).to_string())
                .collect(),
            crystallographic: faithful,
            torsion_free: torsion.torsion_free,
            bieberbach: faithful && torsion.torsion_free,
            torsion_witnesses: torsion.witnesses,
            formula_dimension: formulas::almost_cryst_dimension(ctx.modulus(), 2)
                .ok()
                .map(|d| d.to_string()),
            recommendation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionElement {
    pub lattice: Vec<BigInt>,
    pub coset: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionWitness {
    /// Index of `q` in `Q`.
    pub coset: usize,
    pub order: usize,
    /// `x` with `(lattice_word(x) · t_q)^order = 1`.
    pub lattice: Vec<String>,
    pub word: BraidWord,
    /// Whether `word^order` was checked to have zero class.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub torsion_free: bool,
    pub checked: usize,
    pub witnesses: Vec<TorsionWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub modulus: u64,
    pub mode: String,
    pub basis: String,
    pub dimension: usize,
    pub lattice_torsion: Vec<String>,
    pub holonomy_order: usize,
    pub holonomy_group: String,
    pub holonomy_fingerprint: GroupFingerprint,
    pub holonomy_kernel_order: usize,
    pub holonomy_kernel: Vec<String>,
    pub crystallographic: bool,
    pub torsion_free: bool,
    pub bieberbach: bool,
    pub torsion_witnesses: Vec<TorsionWitness>,
    /// `hirsch_length(M(m), 2)`, when the level has a known formula.
    pub formula_dimension: Option<String>,
    pub recommendation: Option<String>,
}
