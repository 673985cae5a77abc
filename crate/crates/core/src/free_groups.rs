//! Stallings foldings for finitely generated subgroups of a free group.
//!
//! Words are sequences of nonzero integers over the alphabet `±1..±k`,
//! `-a` standing for the inverse of letter `a`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

pub type FreeWord = Vec<i32>;

/// Freely reduces a word.
pub fn reduce(w: &[i32]) -> FreeWord {
    let mut out: FreeWord = Vec::with_capacity(w.len());
    for &a in w {
        if out.last() == Some(&-a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> FreeWord {
    w.iter().rev().map(|a| -a).collect()
}

/// `[a, b] = a b a⁻¹ b⁻¹`.
pub fn commutator(a: &[i32], b: &[i32]) -> FreeWord {
    reduce(&[a, b, &inverse(a), &inverse(b)].concat())
}

/// A folded core graph; vertex 0 is the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    alphabet: usize,
    vertices: usize,
    /// `adj[v][label] = target`, with both signs of each edge present.
    adj: Vec<BTreeMap<i32, usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Keeps the smaller root so the base vertex survives as 0.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.0[drop] = keep;
        true
    }
}

impl SubgroupGraph {
    /// Builds the wedge of loops spelling `generators`, folds it and prunes
    /// it to its core. Letters outside `±1..±alphabet` panic.
    pub fn build_and_fold(alphabet: usize, generators: &[FreeWord]) -> Self {
        let mut next = 1usize;
        let mut edges: Vec<(usize, i32, usize)> = Vec::new();
        for g in generators {
            let g = reduce(g);
            let mut cur = 0;
            for (i, &a) in g.iter().enumerate() {
                assert!(
                    a != 0 && a.unsigned_abs() as usize <= alphabet,
                    "letter {a} outside the alphabet"
                );
                let target = if i + 1 == g.len() {
                    0
                } else {
                    next += 1;
                    next - 1
                };
                if a > 0 {
                    edges.push((cur, a, target));
                } else {
                    edges.push((target, -a, cur));
                }
                cur = target;
            }
        }
        let mut uf = UnionFind((0..next).collect());
        loop {
            let mut changed = false;
            let mut seen: BTreeMap<(usize, i32), usize> = BTreeMap::new();
            for &(u, a, v) in &edges {
                let (u, v) = (uf.find(u), uf.find(v));
                for (from, label, to) in [(u, a, v), (v, -a, u)] {
                    match seen.get(&(from, label)) {
                        Some(&t) => {
                            if uf.union(t, to) {
                                changed = true;
                            }
                        }
                        None => {
                            seen.insert((from, label), to);
                        }
                    }
                }
                if changed {
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        let folded: BTreeSet<(usize, i32, usize)> = edges
            .iter()
            .map(|&(u, a, v)| (uf.find(u), a, uf.find(v)))
            .collect();
        Self::from_edges(alphabet, folded.into_iter().collect()).pruned()
    }

    fn from_edges(alphabet: usize, edges: Vec<(usize, i32, usize)>) -> Self {
        let mut ids: BTreeMap<usize, usize> = BTreeMap::from([(0, 0)]);
        for &(u, _, v) in &edges {
            for x in [u, v] {
                let n = ids.len();
                ids.entry(x).or_insert(n);
            }
        }
        let mut adj = vec![BTreeMap::new(); ids.len()];
        for (u, a, v) in edges {
            let (u, v) = (ids[&u], ids[&v]);
            adj[u].insert(a, v);
            adj[v].insert(-a, u);
        }
        SubgroupGraph {
            alphabet,
            vertices: adj.len(),
            adj,
        }
    }

    fn edge_list(&self) -> Vec<(usize, i32, usize)> {
        let mut out = Vec::new();
        for (u, m) in self.adj.iter().enumerate() {
            for (&a, &v) in m {
                if a > 0 {
                    out.push((u, a, v));
                }
            }
        }
        out
    }

    fn pruned(self) -> Self {
        let mut alive = vec![true; self.vertices];
        let mut edges = self.edge_list();
        loop {
            let mut degree = vec![0usize; self.vertices];
            for &(u, _, v) in &edges {
                degree[u] += 1;
                degree[v] += 1;
            }
            let leaves: Vec<usize> = (1..self.vertices)
                .filter(|&v| alive[v] && degree[v] <= 1)
                .collect();
            if leaves.is_empty() {
                break;
            }
            for &v in &leaves {
                alive[v] = false;
            }
            edges.retain(|&(u, _, v)| alive[u] && alive[v]);
        }
        Self::from_edges(self.alphabet, edges).canonical()
    }

    /// Relabels vertices in BFS order from the base, visiting labels in the
    /// order `1, -1, 2, -2, …`.
    pub fn canonical(&self) -> Self {
        let order: Vec<i32> = (1..=self.alphabet as i32).flat_map(|a| [a, -a]).collect();
        let mut id = vec![usize::MAX; self.vertices];
        id[0] = 0;
        let mut n = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for a in &order {
                if let Some(&v) = self.adj[u].get(a) {
                    if id[v] == usize::MAX {
                        id[v] = n;
                        n += 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut adj = vec![BTreeMap::new(); n];
        for (u, m) in self.adj.iter().enumerate() {
            if id[u] == usize::MAX {
                continue;
            }
            for (&a, &v) in m {
                adj[id[u]].insert(a, id[v]);
            }
        }
        SubgroupGraph {
            alphabet: self.alphabet,
            vertices: n,
            adj,
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertices
    }

    /// The index of the subgroup, `None` when infinite.
    pub fn index(&self) -> Option<usize> {
        let full = self.adj.iter().all(|m| m.len() == 2 * self.alphabet);
        full.then_some(self.vertices)
    }

    /// Membership, by tracing the free reduction of `w` from the base.
    pub fn contains(&self, w: &[i32]) -> bool {
        let mut v = 0;
        for a in &reduce(w) {
            match self.adj[v].get(a) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    pub fn is_folded(&self) -> bool {
        // adj maps hold one target per signed label, so confirm the reverse
        // edges agree.
        self.adj
            .iter()
            .enumerate()
            .all(|(u, m)| m.iter().all(|(&a, &v)| self.adj[v].get(&-a) == Some(&u)))
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump {
            alphabet: self.alphabet,
            base: 0,
            vertices: self.vertices,
            edges: self.edge_list(),
            rank: self.rank(),
            index: self.index(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphDump {
    pub alphabet: usize,
    pub base: usize,
    pub vertices: usize,
    /// `(source, label, target)` with positive labels.
    pub edges: Vec<(usize, i32, usize)>,
    pub rank: usize,
    pub index: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelVerdict {
    pub generators_in_kernel: bool,
    pub rank: usize,
    pub index: Option<usize>,
    pub target_order: u64,
    /// The generators generate exactly the kernel of `F_k → ⊕ ℤ/mᵢ`.
    pub certified: bool,
}

/// Checks whether `generators` generate the kernel of the map sending letter
/// `i` to the `i`-th generator of `ℤ/m₁ × … × ℤ/m_k`.
pub fn kernel_check(alphabet: usize, generators: &[FreeWord], moduli: &[u64]) -> KernelVerdict {
    assert_eq!(moduli.len(), alphabet, "one modulus per letter");
    let in_kernel = generators.iter().all(|g| {
        let mut e = vec![0i64; alphabet];
        for &a in g {
            e[a.unsigned_abs() as usize - 1] += a.signum() as i64;
        }
        e.iter().zip(moduli).all(|(x, &m)| x.rem_euclid(m as i64) == 0)
    });
    let g = SubgroupGraph::build_and_fold(alphabet, generators);
    let target_order: u64 = moduli.iter().product();
    let index = g.index();
    KernelVerdict {
        generators_in_kernel: in_kernel,
        rank: g.rank(),
        index,
        target_order,
        certified: in_kernel && index == Some(target_order as usize),
    }
}

/// Schreier generators of the stabilizer of point 0 under the action of
/// letter `i` by `perms[i-1]` (points act on the right: `p · a = perms[a-1][p]`).
/// Returns `None` if the action is not transitive.
pub fn stabilizer_generators(perms: &[Vec<usize>]) -> Option<Vec<FreeWord>> {
    let degree = perms.first().map_or(1, |p| p.len());
    let mut word: Vec<Option<FreeWord>> = vec![None; degree];
    word[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    let mut tree = BTreeSet::new();
    while let Some(p) = queue.pop_front() {
        for (i, perm) in perms.iter().enumerate() {
            let q = perm[p];
            if word[q].is_none() {
                let mut w = word[p].clone().unwrap();
                w.push(i as i32 + 1);
                word[q] = Some(w);
                tree.insert((p, i));
                queue.push_back(q);
            }
        }
    }
    if word.iter().any(Option::is_none) {
        return None;
    }
    let mut gens = Vec::new();
    for p in 0..degree {
        for (i, perm) in perms.iter().enumerate() {
            if tree.contains(&(p, i)) {
                continue;
            }
            let q = perm[p];
            let mut w = word[p].clone().unwrap();
            w.push(i as i32 + 1);
            w.extend(inverse(word[q].as_ref().unwrap()));
            gens.push(reduce(&w));
        }
    }
    Some(gens)
}
