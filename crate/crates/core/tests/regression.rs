use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use braidcryst::braid::Letter;
use braidcryst::crystallography::CrystPresentation;
use braidcryst::finite_image::{FiniteMatrixGroup, GroupOptions};
use braidcryst::free_groups::{self, SubgroupGraph};
use braidcryst::matrix::IntMatrix;
use braidcryst::rewriting::{level_three_basis, Mode};
use braidcryst::ResidueMatrix;

fn permutations(items: &[Letter]) -> Vec<Vec<Letter>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn alphabet() -> Vec<Letter> {
    vec![
        Letter::new(1, true),
        Letter::new(1, false),
        Letter::new(2, true),
        Letter::new(2, false),
    ]
}

/// Action matrices keyed by the coset's canonical matrix, so that runs with
/// different transversals can be compared.
fn actions_by_matrix(p: &CrystPresentation) -> BTreeMap<ResidueMatrix, IntMatrix> {
    let ctx = p.abelianization().cosets();
    (0..ctx.index())
        .map(|q| (ctx.coset_representative(q).clone(), p.action_matrix(q).clone()))
        .collect()
}

#[test]
fn verdicts_ignore_transversal_tie_breaking() {
    let cases = [
        (2, Mode::FullKernel),
        (3, Mode::FullKernel),
        (3, Mode::CenterQuotientKernel),
        (4, Mode::CenterQuotientKernel),
    ];
    for (m, mode) in cases {
        let base = CrystPresentation::build(m, mode.clone()).unwrap();
        let v0 = base.verdict();
        let torsion0: Vec<(ResidueMatrix, usize)> = {
            let ctx = base.abelianization().cosets();
            let mut t: Vec<_> = v0
                .torsion_witnesses
                .iter()
                .map(|w| (ctx.coset_representative(w.coset).clone(), w.order))
                .collect();
            t.sort();
            t
        };
        for order in permutations(&alphabet()) {
            let opts = GroupOptions {
                letter_order: Some(order.clone()),
                ..GroupOptions::default()
            };
            let p = CrystPresentation::build_with(m, mode.clone(), &opts, None).unwrap();
            let v = p.verdict();
            assert_eq!(
                (v.dimension, v.crystallographic, v.torsion_free, v.bieberbach),
                (v0.dimension, v0.crystallographic, v0.torsion_free, v0.bieberbach),
                "m={m} {mode} order {order:?}"
            );
            assert_eq!(v.holonomy_group, v0.holonomy_group);
            assert_eq!(v.holonomy_kernel_order, v0.holonomy_kernel_order);
            let ctx = p.abelianization().cosets();
            let mut t: Vec<_> = v
                .torsion_witnesses
                .iter()
                .map(|w| (ctx.coset_representative(w.coset).clone(), w.order))
                .collect();
            t.sort();
            assert_eq!(t, torsion0, "torsion cosets moved for m={m} {mode}");
        }
    }
}

#[test]
fn word_basis_actions_ignore_transversal_tie_breaking() {
    let basis = level_three_basis();
    let base = CrystPresentation::build_with(3, Mode::FullKernel, &GroupOptions::default(), Some(&basis)).unwrap();
    let reference = actions_by_matrix(&base);
    for order in permutations(&alphabet()) {
        let opts = GroupOptions {
            letter_order: Some(order),
            ..GroupOptions::default()
        };
        let p = CrystPresentation::build_with(3, Mode::FullKernel, &opts, Some(&basis)).unwrap();
        assert_eq!(actions_by_matrix(&p), reference);
    }
}

#[test]
fn holonomy_is_a_unimodular_representation() {
    for (m, mode) in [
        (2, Mode::FullKernel),
        (3, Mode::FullKernel),
        (4, Mode::FullKernel),
        (3, Mode::CenterQuotientKernel),
        (4, Mode::CenterQuotientKernel),
    ] {
        let p = CrystPresentation::build(m, mode).unwrap();
        let q = p.holonomy_group();
        assert!(p.action_matrix(q.identity()).is_identity());
        for a in 0..q.order() {
            assert!(p.action_matrix(a).determinant().abs() == 1.into());
            for b in 0..q.order() {
                assert_eq!(
                    p.action_matrix(q.mul(a, b)),
                    &p.action_matrix(a).mul(p.action_matrix(b)),
                    "m={m}, pair ({a}, {b})"
                );
            }
        }
    }
}

#[test]
fn torsion_witnesses_have_the_claimed_order() {
    for (m, mode) in [
        (2, Mode::FullKernel),
        (4, Mode::CenterQuotientKernel),
        (5, Mode::CenterQuotientKernel),
    ] {
        let p = CrystPresentation::build(m, mode).unwrap();
        let report = p.torsion_test(None);
        assert!(!report.witnesses.is_empty());
        let ctx = p.abelianization().cosets();
        for t in &report.witnesses {
            assert!(t.certified);
            let power = t.word.pow(t.order as i64);
            assert!(p.coordinates(&power).unwrap().iter().all(Zero::is_zero));
            for k in 1..t.order {
                assert_ne!(ctx.coset_of(&t.word.pow(k as i64)), 0, "proper power lies in the lattice");
            }
        }
    }
}

#[test]
fn torsion_free_extensions_have_no_witness() {
    let p = CrystPresentation::build(3, Mode::FullKernel).unwrap();
    let report = p.torsion_test(None);
    assert!(report.torsion_free);
    assert_eq!(report.checked, 23);
}

#[test]
fn nielsen_schreier_on_random_actions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 100 {
        let k = rng.gen_range(1..=3usize);
        let degree = rng.gen_range(1..=9usize);
        let perms: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                for i in (1..degree).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        let Some(gens) = free_groups::stabilizer_generators(&perms) else {
            continue;
        };
        let g = SubgroupGraph::build_and_fold(k, &gens);
        assert_eq!(g.index(), Some(degree));
        assert_eq!(g.rank(), 1 + degree * (k - 1));
        // A word lies in the stabilizer iff it fixes the point 0.
        for _ in 0..5 {
            let w: Vec<i32> = (0..rng.gen_range(0..8))
                .map(|_| {
                    let a = rng.gen_range(1..=k as i32);
                    if rng.gen_bool(0.5) { a } else { -a }
                })
                .collect();
            let mut pt = 0;
            for &a in &w {
                let perm = &perms[a.unsigned_abs() as usize - 1];
                pt = if a > 0 {
                    perm[pt]
                } else {
                    perm.iter().position(|&x| x == pt).unwrap()
                };
            }
            assert_eq!(g.contains(&w), pt == 0);
        }
        done += 1;
    }
}

#[test]
fn parallel_enumeration_agrees() {
    for m in 2..=5 {
        let opts = GroupOptions {
            parallel: true,
            ..GroupOptions::default()
        };
        let a = FiniteMatrixGroup::with_options(3, m, &opts).unwrap();
        let b = FiniteMatrixGroup::enumerate(m).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.transversals(), b.transversals());
    }
}

#[test]
fn fifth_generator_variants() {
    let (x, y) = (vec![1], vec![2]);
    let comm = free_groups::commutator(&y, &x);
    let join = |parts: &[&[i32]]| free_groups::reduce(&parts.concat());
    let base = vec![join(&[&x, &x]), join(&[&y, &y]), join(&[&x, &y, &y, &[-1]]), comm.clone()];
    let outcomes: Vec<(bool, usize, Option<usize>)> = [
        join(&[&x, &comm, &x]),
        join(&[&y, &comm, &[-2]]),
        join(&[&x, &comm, &[-1]]),
    ]
    .into_iter()
    .map(|f| {
        let mut gens = base.clone();
        gens.push(f);
        let v = free_groups::kernel_check(2, &gens, &[2, 2]);
        (v.certified, v.rank, v.index)
    })
    .collect();
    assert_eq!(outcomes, vec![(true, 5, Some(4)), (false, 4, None), (true, 5, Some(4))]);
}
