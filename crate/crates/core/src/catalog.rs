//! Reference fingerprints for small groups, computed by brute force from
//! permutation generators.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use crate::finite_image::GroupFingerprint;

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    (0..a.len()).map(|i| a[b[i]]).collect()
}

fn perm_order(p: &Perm) -> usize {
    let id: Perm = (0..p.len()).collect();
    let mut x = p.clone();
    let mut k = 1;
    while x != id {
        x = compose(&x, p);
        k += 1;
    }
    k
}

fn closure(gens: &[Perm], degree: usize) -> Vec<Perm> {
    let id: Perm = (0..degree).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = compose(&out[i], g);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Fingerprint of the permutation group generated by `gens`.
pub fn permutation_fingerprint(gens: &[Perm], degree: usize) -> GroupFingerprint {
    let elems = closure(gens, degree);
    let mut histogram = BTreeMap::new();
    for p in &elems {
        *histogram.entry(perm_order(p)).or_insert(0) += 1;
    }
    let center_order = elems
        .iter()
        .filter(|x| elems.iter().all(|y| compose(x, y) == compose(y, x)))
        .count();
    GroupFingerprint {
        order: elems.len(),
        histogram,
        center_order,
    }
}

/// Fingerprint of `SL(2, ℤ/m)`, enumerated over all 2×2 residue matrices.
pub fn special_linear_fingerprint(m: u32) -> GroupFingerprint {
    type M2 = [u32; 4];
    let mul = |a: &M2, b: &M2| -> M2 {
        [
            (a[0] * b[0] + a[1] * b[2]) % m,
            (a[0] * b[1] + a[1] * b[3]) % m,
            (a[2] * b[0] + a[3] * b[2]) % m,
            (a[2] * b[1] + a[3] * b[3]) % m,
        ]
    };
    let id: M2 = [1, 0, 0, 1];
    let mut elems = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if (a * d + m * m - b * c) % m == 1 % m {
                        elems.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let mut histogram = BTreeMap::new();
    for x in &elems {
        let (mut y, mut k) = (*x, 1);
        while y != id {
            y = mul(&y, x);
            k += 1;
        }
        *histogram.entry(k).or_insert(0) += 1;
    }
    let center_order = elems
        .iter()
        .filter(|x| elems.iter().all(|y| mul(x, y) == mul(y, x)))
        .count();
    GroupFingerprint {
        order: elems.len(),
        histogram,
        center_order,
    }
}

fn cycle(degree: usize, pts: &[usize]) -> Perm {
    let mut p: Perm = (0..degree).collect();
    for w in 0..pts.len() {
        p[pts[w]] = pts[(w + 1) % pts.len()];
    }
    p
}

pub fn catalog() -> &'static [(String, GroupFingerprint)] {
    static CATALOG: OnceLock<Vec<(String, GroupFingerprint)>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut out = vec![
            (
                "S4".to_string(),
                permutation_fingerprint(&[cycle(4, &[0, 1]), cycle(4, &[0, 1, 2, 3])], 4),
            ),
            (
                "A4".to_string(),
                permutation_fingerprint(&[cycle(4, &[0, 1, 2]), cycle(4, &[1, 2, 3])], 4),
            ),
            (
                "A5".to_string(),
                permutation_fingerprint(&[cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])], 5),
            ),
            (
                "S3".to_string(),
                permutation_fingerprint(&[cycle(3, &[0, 1]), cycle(3, &[0, 1, 2])], 3),
            ),
        ];
        for m in 3..=5 {
            out.push((format!("SL(2,Z/{m})"), special_linear_fingerprint(m)));
        }
        for n in 1..=12 {
            let gen = cycle(n, &(0..n).collect::<Vec<_>>());
            let name = if n == 1 { "1".to_string() } else { format!("Z/{n}") };
            out.push((name, permutation_fingerprint(&[gen], n)));
        }
        out
    })
}

/// Name of the catalog group with this fingerprint, if any.
pub fn match_catalog(f: &GroupFingerprint) -> Option<&'static str> {
    catalog()
        .iter()
        .find(|(_, g)| g == f)
        .map(|(name, _)| name.as_str())
}
