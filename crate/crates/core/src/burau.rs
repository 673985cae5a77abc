//! The integral Burau representation `b_{−1}` (Burau at `t = −1`), its reduced
//! form, reduction mod `m`, and congruence-subgroup membership.
//!
//! The reduced matrices use a fixed convention of dimension `n − 1`:
//! `σ₁ ↦ [[1,0],[1,1]]` on coordinates `(1,2)`, an interior `σᵢ ↦
//! [[1,−1,0],[0,1,0],[0,1,1]]` on `(i−1,i,i+1)`, and `σ_{n−1} ↦ [[1,−1],[0,1]]`
//! on `(n−2,n−1)`, each padded by the identity. At `n = 3` this sends the full
//! twist `(σ₁σ₂)³` to `−I`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::braid::{BraidWord, Letter};
use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, IntMatrix, ResidueMatrix};
use crate::snf;

/// Which linear representation a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// `n × n` integral Burau.
    Unreduced,
    /// `(n−1) × (n−1)` reduced Burau.
    Reduced,
}

impl Representation {
    /// Reduced for odd strand counts; even counts fall back to unreduced.
    pub fn for_strands(n: usize) -> Self {
        if n % 2 == 1 {
            Representation::Reduced
        } else {
            Representation::Unreduced
        }
    }

    pub fn dimension(self, n: usize) -> usize {
        match self {
            Representation::Unreduced => n,
            Representation::Reduced => n - 1,
        }
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if n < 2 || i < 1 || i >= n {
        return Err(Error::GeneratorIndex {
            index: i as i64,
            strands: n,
        });
    }
    Ok(())
}

/// `I_{i−1} ⊕ [[2,−1],[1,0]] ⊕ I_{n−i−1}`.
pub fn unreduced_generator(i: usize, n: usize) -> Result<ExactMatrix> {
    check_index(i, n)?;
    let mut m = IntMatrix::identity(n);
    let (a, b) = (i - 1, i);
    m[(a, a)] = BigInt::from(2);
    m[(a, b)] = BigInt::from(-1);
    m[(b, a)] = BigInt::one();
    m[(b, b)] = BigInt::zero();
    Ok(m)
}

pub fn reduced_generator(i: usize, n: usize) -> Result<ExactMatrix> {
    check_index(i, n)?;
    let d = n - 1;
    let mut m = IntMatrix::identity(d);
    if n == 2 {
        return Ok(m);
    }
    if i == 1 {
        m[(1, 0)] = BigInt::one();
    } else if i == n - 1 {
        m[(d - 2, d - 1)] = BigInt::from(-1);
    } else {
        // Block on zero-based coordinates (i−2, i−1, i).
        m[(i - 2, i - 1)] = BigInt::from(-1);
        m[(i, i - 1)] = BigInt::one();
    }
    Ok(m)
}

pub fn generator_matrix(rep: Representation, i: usize, n: usize) -> Result<ExactMatrix> {
    match rep {
        Representation::Unreduced => unreduced_generator(i, n),
        Representation::Reduced => reduced_generator(i, n),
    }
}

/// Inverse of a generator image, computed in closed form.
pub fn letter_matrix(rep: Representation, letter: Letter, n: usize) -> Result<ExactMatrix> {
    let g = generator_matrix(rep, letter.index(), n)?;
    if letter.is_positive() {
        return Ok(g);
    }
    snf::unimodular_inverse(&g).ok_or_else(|| {
        Error::Dimension(format!("generator {} image is not invertible", letter.index()))
    })
}

pub fn image(rep: Representation, w: &BraidWord) -> ExactMatrix {
    let n = w.strands();
    let mats: Vec<ExactMatrix> = [true, false]
        .iter()
        .flat_map(|&pos| (1..n).map(move |i| (i, pos)))
        .map(|(i, pos)| letter_matrix(rep, Letter::new(i, pos), n).expect("valid generator"))
        .collect();
    let pick = |l: Letter| {
        let off = if l.is_positive() { 0 } else { n - 1 };
        &mats[off + l.index() - 1]
    };
    let mut acc = IntMatrix::identity(rep.dimension(n));
    for &l in w.letters() {
        acc = acc.mul(pick(l));
    }
    acc
}

pub fn unreduced_burau(w: &BraidWord) -> ExactMatrix {
    image(Representation::Unreduced, w)
}

pub fn reduced_burau(w: &BraidWord) -> ExactMatrix {
    image(Representation::Reduced, w)
}

fn check_modulus(m: u64) -> Result<u32> {
    if m < 2 {
        return Err(Error::Modulus(m));
    }
    u32::try_from(m).map_err(|_| Error::Unsupported(format!("modulus {m} too large")))
}

/// Residue images of `σᵢ^{±1}` for all generators, in the order
/// `σ₁, σ₁⁻¹, σ₂, σ₂⁻¹, …`.
pub fn residue_letter_images(
    rep: Representation,
    n: usize,
    m: u32,
) -> Result<Vec<(Letter, ResidueMatrix)>> {
    let mut out = Vec::new();
    for i in 1..n {
        for pos in [true, false] {
            let l = Letter::new(i, pos);
            out.push((l, letter_matrix(rep, l, n)?.reduce_mod(m)));
        }
    }
    Ok(out)
}

/// `ρ_m(w)`: the representation reduced mod `m`, evaluated without ever
/// forming the exact product.
pub fn rho_m(w: &BraidWord, m: u64) -> Result<ResidueMatrix> {
    let m = check_modulus(m)?;
    let n = w.strands();
    let rep = Representation::for_strands(n);
    let imgs = residue_letter_images(rep, n, m)?;
    let mut acc = ResidueMatrix::identity(rep.dimension(n), m);
    for &l in w.letters() {
        let idx = 2 * (l.index() - 1) + usize::from(!l.is_positive());
        acc = acc.mul(&imgs[idx].1);
    }
    Ok(acc)
}

/// Membership report for the level-`m` congruence subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    pub image: ResidueMatrix,
    pub representation: Representation,
    /// Set for even strand counts, where membership is taken as the kernel of
    /// the unreduced representation mod `m`.
    pub extended_definition: bool,
}

pub fn membership(w: &BraidWord, m: u64) -> Result<Membership> {
    let image = rho_m(w, m)?;
    let rep = Representation::for_strands(w.strands());
    Ok(Membership {
        member: image.is_identity(),
        image,
        representation: rep,
        extended_definition: rep == Representation::Unreduced,
    })
}

pub fn in_congruence(w: &BraidWord, m: u64) -> Result<bool> {
    Ok(rho_m(w, m)?.is_identity())
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantFormReport {
    pub strands: usize,
    pub form: IntMatrix,
    pub solution_dimension: usize,
    pub unimodular: bool,
}

/// Solves `Bᵀ J B = J` for skew-symmetric `J` over all reduced generator
/// images at once and returns a primitive integer solution.
pub fn discover_invariant_form(n: usize) -> Result<InvariantFormReport> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "invariant skew form needs an odd strand count >= 3, got {n}"
        )));
    }
    let d = n - 1;
    let gens: Vec<ExactMatrix> = (1..n)
        .map(|i| reduced_generator(i, n))
        .collect::<Result<_>>()?;
    let unknowns: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .collect();
    let skew = |coeffs: &[BigInt]| {
        let mut j = IntMatrix::zeros(d, d);
        for (&(a, b), c) in unknowns.iter().zip(coeffs) {
            j[(a, b)] = c.clone();
            j[(b, a)] = -c;
        }
        j
    };
    // Column u of the system is vec(BᵀJ_uB − J_u) stacked over generators.
    let mut system = IntMatrix::zeros(gens.len() * d * d, unknowns.len());
    for u in 0..unknowns.len() {
        let mut e = vec![BigInt::zero(); unknowns.len()];
        e[u] = BigInt::one();
        let ju = skew(&e);
        for (g, b) in gens.iter().enumerate() {
            let r = b.transpose().mul(&ju).mul(b).sub(&ju);
            for x in 0..d {
                for y in 0..d {
                    system[(g * d * d + x * d + y, u)] = r[(x, y)].clone();
                }
            }
        }
    }
    let kernel = snf::integer_kernel(&system);
    let Some(first) = kernel.first() else {
        return Err(Error::NoInvariantForm { strands: n });
    };
    let g = first.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut coeffs: Vec<BigInt> = first.iter().map(|x| x / &g).collect();
    if coeffs.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        coeffs.iter_mut().for_each(|x| *x = -std::mem::take(x));
    }
    let form = skew(&coeffs);
    let unimodular = form.determinant().abs().is_one();
    Ok(InvariantFormReport {
        strands: n,
        form,
        solution_dimension: kernel.len(),
        unimodular,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedVectorReport {
    pub strands: usize,
    pub basis: Vec<Vec<String>>,
    #[serde(skip)]
    pub vectors: Vec<Vec<BigInt>>,
}

/// Integer basis of `{u : B u = u}` over all unreduced generator images.
pub fn common_fixed_vectors(n: usize) -> Result<FixedVectorReport> {
    let mut stacked = IntMatrix::zeros((n - 1) * n, n);
    for i in 1..n {
        let b = unreduced_generator(i, n)?.sub(&IntMatrix::identity(n));
        for r in 0..n {
            for c in 0..n {
                stacked[((i - 1) * n + r, c)] = b[(r, c)].clone();
            }
        }
    }
    let mut vectors = snf::integer_kernel(&stacked);
    for v in &mut vectors {
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
    }
    Ok(FixedVectorReport {
        strands: n,
        basis: vectors
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
        vectors,
    })
}
