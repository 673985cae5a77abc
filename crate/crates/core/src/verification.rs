//! A self-contained check suite reproducing the headline computations:
//! representation sanity, finite images, abelianization ranks, action
//! matrices, torsion and crystallographic verdicts, rank formulas, the free
//! basis of the level-4 kernel and the pure braid relations.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{self, BraidWord, Letter};
use crate::burau::{self, Representation};
use crate::catalog;
use crate::crystallography::CrystPresentation;
use crate::error::Result;
use crate::finite_image::FiniteMatrixGroup;
use crate::formulas;
use crate::free_groups::{self, FreeWord, SubgroupGraph};
use crate::matrix::IntMatrix;
use crate::rewriting::{change_basis, AbelianizationContext, Mode};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, claim: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            claim: claim.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, claim: impl Into<String>, got: T, want: T) {
        let passed = got == want;
        self.push(claim, passed, format!("got {got:?}, expected {want:?}"));
    }
}

type CriterionFn = fn(&mut Checks) -> Result<()>;

const CRITERIA: [(&str, u64, CriterionFn); 10] = [
    ("representation sanity", 1_000, representation_sanity),
    ("finite image orders", 5_000, finite_images),
    ("quotient identifications", 5_000, quotients),
    ("abelianization ranks", 20_000, abelianization_ranks),
    ("level-3 action matrices", 10_000, action_matrices),
    ("torsion verdicts", 5_000, torsion_verdicts),
    ("crystallographic verdicts", 10_000, crystallographic_verdicts),
    ("rank formulas", 1_000, formula_layer),
    ("free basis of the level-4 kernel", 5_000, free_group_layer),
    ("pure braid relations and class_of properties", 10_000, word_problem_layer),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize) -> CriterionResult {
    let (title, limit, f) = CRITERIA[id - 1];
    let start = Instant::now();
    let mut checks = Checks::default();
    if let Err(e) = f(&mut checks) {
        checks.push("criterion ran to completion", false, format!("error: {e}"));
    }
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_millis(limit);
    let passed = in_time && !checks.0.is_empty() && checks.0.iter().all(|c| c.passed);
    CriterionResult {
        id,
        title: title.to_string(),
        passed,
        checks: checks.0,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit as u128,
    }
}

/// Runs every criterion, in parallel when asked; results are in id order.
pub fn run_all(parallel: bool) -> Vec<CriterionResult> {
    let ids: Vec<usize> = (1..=CRITERIA.len()).collect();
    if parallel {
        ids.par_iter().map(|&i| run_criterion(i)).collect()
    } else {
        ids.iter().map(|&i| run_criterion(i)).collect()
    }
}

fn w(s: &[i32]) -> BraidWord {
    BraidWord::from_signed(3, s).expect("valid word")
}

fn ints(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect()
}

fn rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().unwrap_or_default()
}

fn representation_sanity(c: &mut Checks) -> Result<()> {
    for rep in [Representation::Unreduced, Representation::Reduced] {
        let mut bad = Vec::new();
        for n in 2..=8 {
            for i in 1..n {
                for j in i + 1..n {
                    let a = BraidWord::generator(i, n, true)?;
                    let b = BraidWord::generator(j, n, true)?;
                    let (lhs, rhs) = if j == i + 1 {
                        (a.then(&b).then(&a), b.then(&a).then(&b))
                    } else {
                        (a.then(&b), b.then(&a))
                    };
                    if burau::image(rep, &lhs) != burau::image(rep, &rhs) {
                        bad.push((n, i, j));
                    }
                }
            }
        }
        c.push(
            format!("{rep:?} Burau at t=-1 satisfies the braid relations for n <= 8"),
            bad.is_empty(),
            format!("violations: {bad:?}"),
        );
    }
    let x = w(&[1, 2]);
    let cube = burau::reduced_burau(&x.pow(3));
    c.eq("reduced image of (s1 s2)^3 is -I", rows(&cube), vec![vec![-1, 0], vec![0, -1]]);
    let six = burau::reduced_burau(&x.pow(6));
    c.eq("reduced image of (s1 s2)^6 is I", six.is_identity(), true);
    Ok(())
}

fn finite_images(c: &mut Checks) -> Result<()> {
    let mut orders = Vec::new();
    let mut centers = Vec::new();
    for m in 2..=5 {
        let g = FiniteMatrixGroup::enumerate(m)?;
        orders.push(g.order());
        centers.push(g.center().len());
    }
    c.eq("orders of the images mod 2..5", orders, vec![6, 24, 48, 120]);
    c.eq("orders of their centers", centers, vec![1, 2, 2, 2]);
    let g3 = FiniteMatrixGroup::enumerate(3)?;
    c.eq("conjugacy classes of the image mod 3", g3.conjugacy_classes().len(), 7);
    Ok(())
}

fn quotients(c: &mut Checks) -> Result<()> {
    for (m, name) in [(3, "A4"), (4, "S4"), (5, "A5")] {
        let q = FiniteMatrixGroup::enumerate(m)?.quotient_by_center()?;
        let f = q.fingerprint();
        c.eq(
            format!("image mod {m} over its center matches {name}"),
            catalog::match_catalog(&f),
            Some(name),
        );
    }
    Ok(())
}

fn abelianization_ranks(c: &mut Checks) -> Result<()> {
    let cases = [
        (2, Mode::FullKernel, 3),
        (3, Mode::FullKernel, 4),
        (4, Mode::FullKernel, 6),
        (5, Mode::FullKernel, 12),
        (3, Mode::CenterQuotientKernel, 4),
        (4, Mode::CenterQuotientKernel, 6),
    ];
    for (m, mode, r) in cases {
        let a = AbelianizationContext::build(m, mode.clone())?;
        c.push(
            format!("H1 of the {mode} subgroup at level {m} is Z^{r}"),
            a.free_rank() == r && a.torsion().is_empty(),
            format!("free rank {}, torsion {:?}", a.free_rank(), a.torsion()),
        );
    }
    Ok(())
}

fn action_matrices(c: &mut Checks) -> Result<()> {
    let p = CrystPresentation::build(3, Mode::FullKernel)?;
    c.eq(
        "theta(s1) in the e-basis",
        rows(p.action_of(&w(&[1]))),
        vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0]],
    );
    c.eq(
        "theta(s2) in the e-basis",
        rows(p.action_of(&w(&[2]))),
        vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1]],
    );
    let g = w(&[1, 1, 2]).pow(2);
    c.eq("theta((s1^2 s2)^2) is the identity", p.action_of(&g).is_identity(), true);
    c.eq(
        "class of ((s1^2 s2)^2)^2 is e1+e2+e3+e4",
        ints(&p.coordinates(&g.pow(2))?),
        vec![1, 1, 1, 1],
    );
    Ok(())
}

fn torsion_verdicts(c: &mut Checks) -> Result<()> {
    let p3 = CrystPresentation::build(3, Mode::FullKernel)?;
    let t3 = p3.torsion_test(None);
    c.push(
        "level-3 extension is torsion free",
        t3.torsion_free,
        format!("{} nontrivial cosets checked", t3.checked),
    );
    let p2 = CrystPresentation::build(2, Mode::FullKernel)?;
    let t2 = p2.torsion_test(None);
    let q = p2.abelianization().cosets().coset_of(&w(&[1, 2]));
    let witness = t2.witnesses.iter().find(|t| t.coset == q);
    c.push(
        "level-2 extension has an order-3 element above s1 s2",
        witness.is_some_and(|t| t.order == 3 && t.certified),
        match witness {
            Some(t) => format!("order {}, x = {:?}, word [{}]", t.order, t.lattice, t.word),
            None => "no witness".to_string(),
        },
    );
    c.push(
        "every level-2 witness is certified",
        !t2.witnesses.is_empty() && t2.witnesses.iter().all(|t| t.certified),
        format!("{} witnesses", t2.witnesses.len()),
    );
    let direct = w(&[-1, -1, 1, 2]).pow(3);
    let cls = p2.coordinates(&direct)?;
    c.push(
        "(A12^-1 s1 s2)^3 has zero class",
        cls.iter().all(Zero::is_zero),
        format!("class {:?}", ints(&cls)),
    );
    Ok(())
}

fn crystallographic_verdicts(c: &mut Checks) -> Result<()> {
    let v3 = CrystPresentation::build(3, Mode::CenterQuotientKernel)?.verdict();
    c.push(
        "level-3 center quotient: Bieberbach, dimension 4, holonomy A4",
        v3.bieberbach && v3.dimension == 4 && v3.holonomy_group == "A4",
        format!("bieberbach {}, dim {}, {}", v3.bieberbach, v3.dimension, v3.holonomy_group),
    );
    let v4 = CrystPresentation::build(4, Mode::CenterQuotientKernel)?.verdict();
    c.push(
        "level-4 center quotient: crystallographic, dimension 6, holonomy S4",
        v4.crystallographic && v4.dimension == 6 && v4.holonomy_group == "S4",
        format!(
            "crystallographic {}, dim {}, {}, torsion free {}",
            v4.crystallographic, v4.dimension, v4.holonomy_group, v4.torsion_free
        ),
    );
    let p3 = CrystPresentation::build(3, Mode::FullKernel)?;
    let v = p3.verdict();
    let kernel: Vec<usize> = p3.holonomy_kernel(None);
    let g = p3.holonomy_group();
    let minus = g.index_of(&crate::matrix::ResidueMatrix::identity(2, 3).scale(2));
    c.push(
        "level-3 full kernel: holonomy kernel is exactly {I, -I}",
        !v.crystallographic && kernel.len() == 2 && kernel.contains(&0) && minus.is_some_and(|x| kernel.contains(&x)),
        format!("kernel {:?}", v.holonomy_kernel),
    );
    let s = p3.sub_extension(&[w(&[1])])?;
    c.push(
        "sub-extension above <s1>: Bieberbach, dimension 4, holonomy Z/3",
        s.bieberbach && s.dimension == 4 && s.holonomy_group == "Z/3",
        format!("bieberbach {}, dim {}, {}", s.bieberbach, s.dimension, s.holonomy_group),
    );
    let sq = CrystPresentation::build(3, Mode::CenterQuotientKernel)?.sub_extension(&[w(&[1])])?;
    c.push(
        "same subgroup over the center quotient: Bieberbach with holonomy Z/3",
        sq.bieberbach && sq.holonomy_group == "Z/3",
        format!("bieberbach {}, {}", sq.bieberbach, sq.holonomy_group),
    );
    Ok(())
}

fn formula_layer(c: &mut Checks) -> Result<()> {
    let r: Vec<u64> = [3, 5, 7].iter().map(|&p| formulas::rank_m(p)).collect::<Result<_>>()?;
    c.eq("M(p) for p = 3, 5, 7", r, vec![3, 11, 29]);
    let mut bad = Vec::new();
    for m in 1..=6 {
        for k in 1..=6 {
            if formulas::witt_rank_u64(m, k) != Some(formulas::lyndon_count(m, k)) {
                bad.push((m, k));
            }
        }
    }
    c.push("Witt formula equals Lyndon-word count for M, k <= 6", bad.is_empty(), format!("mismatches {bad:?}"));
    let h: Vec<String> = [(3, 2), (5, 2), (3, 3)]
        .iter()
        .map(|&(m, k)| formulas::hirsch_length(m, k).map(|x| x.to_string()))
        .collect::<Result<_>>()?;
    c.eq("Hirsch lengths (3,2), (5,2), (3,3)", h, vec!["4".into(), "6".into(), "7".into()]);
    for m in 3..=5 {
        let rank = AbelianizationContext::build(m, Mode::CenterQuotientKernel)?.free_rank();
        let h = formulas::almost_cryst_dimension(m, 2)?;
        c.push(
            format!("level {m}: abelianization rank equals hirsch_length(M({m}), 2)"),
            BigInt::from(rank) == h,
            format!("rank {rank}, formula {h}"),
        );
    }
    Ok(())
}

/// Candidate free bases of the kernel of `F(x, y) → (ℤ/2)²`, with
/// `x = A₁,₃` and `y = A₂,₃`; they differ in the fifth element.
pub fn level_four_candidates() -> Vec<(String, Vec<FreeWord>)> {
    let (x, y): (FreeWord, FreeWord) = (vec![1], vec![2]);
    let yx = free_groups::commutator(&y, &x);
    let xi = free_groups::inverse(&x);
    let yi = free_groups::inverse(&y);
    let cat = |parts: &[&FreeWord]| {
        let joined: FreeWord = parts.iter().flat_map(|p| p.iter().copied()).collect();
        free_groups::reduce(&joined)
    };
    let common = vec![
        cat(&[&x, &x]),
        cat(&[&y, &y]),
        cat(&[&x, &y, &y, &xi]),
        yx.clone(),
    ];
    let fifth = [
        ("x[y,x]x", cat(&[&x, &yx, &x])),
        ("y[y,x]y^-1", cat(&[&y, &yx, &yi])),
        ("x[y,x]x^-1", cat(&[&x, &yx, &xi])),
    ];
    fifth
        .into_iter()
        .map(|(name, f)| {
            let mut g = common.clone();
            g.push(f);
            (name.to_string(), g)
        })
        .collect()
}

/// Maps `x ↦ A₁,₃`, `y ↦ A₂,₃`.
pub fn free_word_to_braid(fw: &[i32]) -> BraidWord {
    let a13 = braid::pure_generator(1, 3, 3).expect("valid indices");
    let a23 = braid::pure_generator(2, 3, 3).expect("valid indices");
    fw.iter().fold(BraidWord::identity(3), |acc, &l| {
        let g = if l.abs() == 1 { &a13 } else { &a23 };
        acc.then(&g.pow(l.signum() as i64))
    })
}

/// A random transitive action of `F_k` on `{0..degree}`.
pub fn random_transitive_action(rng: &mut impl Rng, k: usize, degree: usize) -> Vec<Vec<usize>> {
    loop {
        let perms: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                for i in (1..degree).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        if free_groups::stabilizer_generators(&perms).is_some() {
            return perms;
        }
    }
}

fn free_group_layer(c: &mut Checks) -> Result<()> {
    let mut certified = Vec::new();
    for (name, gens) in level_four_candidates() {
        let v = free_groups::kernel_check(2, &gens, &[2, 2]);
        c.push(
            format!("fifth generator {name}: folded"),
            true,
            format!(
                "in kernel {}, rank {}, index {:?}, certified {}",
                v.generators_in_kernel, v.rank, v.index, v.certified
            ),
        );
        if v.certified && v.rank == 5 && v.index == Some(4) {
            certified.push(name);
        }
    }
    c.push(
        "some candidate list is a free basis of the kernel (rank 5, index 4)",
        !certified.is_empty(),
        format!("certified: {certified:?}"),
    );
    // The certified list, read in B₃, together with Δ⁴ spans H₁(B₃[4]).
    if let Some(name) = certified.first() {
        let gens = &level_four_candidates()
            .into_iter()
            .find(|(n, _)| n == name)
            .expect("listed")
            .1;
        let mut words: Vec<BraidWord> = gens.iter().map(|g| free_word_to_braid(g)).collect();
        words.push(braid::full_twist(3).pow(2));
        let a = AbelianizationContext::build(4, Mode::FullKernel)?;
        let basis = change_basis(&a, &words);
        c.push(
            "its braid image with the square of the full twist is a basis of H1(B3[4])",
            basis.is_ok(),
            match &basis {
                Ok(_) => "unimodular".to_string(),
                Err(e) => e.to_string(),
            },
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let k = rng.gen_range(1..=3);
        let degree = rng.gen_range(1..=8);
        let perms = random_transitive_action(&mut rng, k, degree);
        let gens = free_groups::stabilizer_generators(&perms).expect("transitive");
        let g = SubgroupGraph::build_and_fold(k, &gens);
        let ok = g.index() == Some(degree) && g.rank() == 1 + degree * (k - 1);
        if !ok {
            failures.push(trial);
        }
    }
    c.push(
        "Nielsen-Schreier on 100 random finite-index subgroups",
        failures.is_empty(),
        format!("failing trials {failures:?}"),
    );
    Ok(())
}

fn random_word(rng: &mut impl Rng, len: usize) -> BraidWord {
    let letters = (0..len).map(|_| Letter::new(rng.gen_range(1..=2), rng.gen_bool(0.5)));
    BraidWord::new(3, letters).expect("valid letters")
}

/// A random element of the subgroup: `u · t_{coset(u)}⁻¹`.
fn random_member(rng: &mut impl Rng, p: &CrystPresentation, len: usize) -> BraidWord {
    let u = random_word(rng, len);
    let q = p.abelianization().cosets().coset_of(&u);
    u.then(&p.transversal(q).inverse())
}

fn word_problem_layer(c: &mut Checks) -> Result<()> {
    let rels = braid::pure_braid_relations(3)?;
    c.push(
        "pure braid relations hold in B3",
        braid::verify_pure_braid_relations()?,
        format!("{} relation instances", rels.len()),
    );
    c.push(
        "full twist equals A12 A13 A23",
        braid::verify_full_twist_product()?,
        String::new(),
    );
    let p = CrystPresentation::build(3, Mode::FullKernel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1a55);
    let mut failures = 0;
    for i in 0..1000 {
        let a = random_member(&mut rng, &p, 1 + i % 12);
        let b = random_member(&mut rng, &p, 1 + i % 9);
        let ok = match i % 3 {
            0 => {
                let sum: Vec<BigInt> = p
                    .coordinates(&a)?
                    .iter()
                    .zip(p.coordinates(&b)?)
                    .map(|(x, y)| x + y)
                    .collect();
                p.coordinates(&a.then(&b))? == sum
            }
            1 => p.coordinates(&a.conjugated_by(&b))? == p.coordinates(&a)?,
            _ => {
                let g = random_word(&mut rng, 1 + i % 7);
                let theta = p.action_of(&g);
                p.coordinates(&a.conjugated_by(&g))? == theta.mul_vec(&p.coordinates(&a)?)
            }
        };
        if !ok {
            failures += 1;
        }
    }
    c.push(
        "1000 homomorphism and conjugation checks on class_of",
        failures == 0,
        format!("{failures} failures"),
    );
    Ok(())
}
