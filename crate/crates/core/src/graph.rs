//! Finite simple graphs over labelled alphabets.
//!
//! Edges join *confusable* letters. `g ≃ h` (see [`Graph::confusable`])
//! means adjacent or equal. Products follow that convention: in the strong
//! product two pairs are confusable iff both coordinates are.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bitset::Bitset;
use crate::error::{cap_check, Error, Result};
use crate::words::{word_label, Word, WordSpace};

/// Largest vertex count a strong power is materialised for by default.
pub const DEFAULT_POWER_CAP: usize = 4096;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    labels: Vec<String>,
    rows: Vec<Bitset>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex label {l:?}")));
            }
        }
        Ok(Self::unchecked(labels))
    }

    fn unchecked(labels: Vec<String>) -> Self {
        let n = labels.len();
        Graph {
            labels,
            rows: (0..n).map(|_| Bitset::new(n)).collect(),
        }
    }

    /// Graph with vertices labelled `0..n`.
    pub fn with_size(n: usize) -> Self {
        Self::unchecked((0..n).map(|i| i.to_string()).collect())
    }

    /// Builds a graph from an edge list by index; self-loops and repeated
    /// edges are rejected.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(labels)?;
        for &(a, b) in edges {
            if a >= g.n() || b >= g.n() {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {:?}", g.labels[a])));
            }
            if g.adjacent(a, b) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {{{:?},{:?}}}",
                    g.labels[a], g.labels[b]
                )));
            }
            g.connect(a, b);
        }
        Ok(g)
    }

    /// Unlabelled convenience constructor (labels `0..n`).
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// `K_d`: all letters confusable.
    pub fn complete(d: usize) -> Self {
        let mut g = Self::with_size(d);
        for a in 0..d {
            for b in a + 1..d {
                g.connect(a, b);
            }
        }
        g
    }

    /// The complement of `K_d`: all letters distinguishable.
    pub fn edgeless(d: usize) -> Self {
        Self::with_size(d)
    }

    /// The cycle `C_n` on `0..n` (`n >= 3`).
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::with_size(n);
        for a in 0..n {
            let b = (a + 1) % n;
            if a != b && !g.adjacent(a, b) {
                g.connect(a, b);
            }
        }
        g
    }

    pub(crate) fn connect(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.rows[a].insert(b);
        self.rows[b].insert(a);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    /// `a ≃ b`: adjacent or equal.
    #[inline]
    pub fn confusable(&self, a: usize, b: usize) -> bool {
        a == b || self.rows[a].contains(b)
    }

    pub fn neighbors(&self, a: usize) -> &Bitset {
        &self.rows[a]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.rows[a].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bitset::count).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in self.rows[a].iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.rows.iter().all(|r| r.count() + 1 == n)
    }

    pub fn is_edgeless(&self) -> bool {
        self.rows.iter().all(Bitset::is_empty)
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| self.confusable(a, b)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && !self.adjacent(a, b)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Self::unchecked(self.labels.clone());
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) {
                    g.connect(a, b);
                }
            }
        }
        g
    }

    /// `g ⊠ h`: vertex `(x, y)` has index `x * |V(h)| + y`.
    pub fn strong_product(&self, other: &Graph) -> Graph {
        self.pair_product(other, |g, a, b, h, c, d| g.confusable(a, b) && h.confusable(c, d))
    }

    /// `g * h`: distinct pairs are confusable iff adjacent in some coordinate.
    pub fn costrong_product(&self, other: &Graph) -> Graph {
        self.pair_product(other, |g, a, b, h, c, d| g.adjacent(a, b) || h.adjacent(c, d))
    }

    fn pair_product(
        &self,
        other: &Graph,
        rule: impl Fn(&Graph, usize, usize, &Graph, usize, usize) -> bool,
    ) -> Graph {
        let (n, m) = (self.n(), other.n());
        let labels = (0..n * m)
            .map(|v| word_label(&[self.label(v / m), other.label(v % m)]))
            .collect();
        let mut g = Self::unchecked(labels);
        for u in 0..n * m {
            for v in u + 1..n * m {
                if rule(self, u / m, v / m, other, u % m, v % m) {
                    g.connect(u, v);
                }
            }
        }
        g
    }

    /// `G^{⊠n}` materialised explicitly; vertices are words in lexicographic
    /// order. Fails when `|V|^n` exceeds `cap`.
    pub fn strong_power(&self, n: usize, cap: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidArgument("strong power exponent must be >= 1".into()));
        }
        let space = WordSpace::new(self.n(), n);
        let size = space.checked_count("strong power vertex count", cap as u128)?;
        let words: Vec<Word> = (0..size).map(|i| space.word(i)).collect();
        Ok(self.induced_on_words(&words))
    }

    /// Lazy view of `G^{⊠n}` answering `≃` queries on words.
    pub fn power_view(&self, n: usize) -> StrongPowerView<'_> {
        StrongPowerView { base: self, len: n }
    }

    /// `G^{⊠n}[S]` for a set of words of a common length, built from `≃`
    /// queries without materialising the full power.
    pub fn induced_on_words(&self, words: &[Word]) -> Graph {
        let labels = words
            .iter()
            .map(|w| {
                let ls: Vec<&str> = w.0.iter().map(|&l| self.label(l)).collect();
                word_label(&ls)
            })
            .collect();
        let mut g = Self::unchecked(labels);
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if self.words_confusable(&words[i].0, &words[j].0) {
                    g.connect(i, j);
                }
            }
        }
        g
    }

    #[inline]
    pub fn words_confusable(&self, x: &[usize], y: &[usize]) -> bool {
        x.iter().zip(y).all(|(&a, &b)| self.confusable(a, b))
    }

    /// `g ⊔ h`: the vertices of `h` follow those of `g`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n();
        let mut labels: Vec<String> = self.labels.clone();
        let clash = other.labels.iter().any(|l| self.index_of(l).is_some());
        for l in &other.labels {
            labels.push(if clash { format!("{l}'") } else { l.clone() });
        }
        if Graph::new(labels.clone()).is_err() {
            labels = (0..n + other.n()).map(|i| i.to_string()).collect();
        }
        let mut g = Self::unchecked(labels);
        for (a, b) in self.edges() {
            g.connect(a, b);
        }
        for (a, b) in other.edges() {
            g.connect(n + a, n + b);
        }
        g
    }

    /// `g[s]` with vertices in the order given by `s`.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Graph> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        for (i, &v) in s.iter().enumerate() {
            if v >= self.n() {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            if s[..i].contains(&v) {
                return Err(Error::InvalidArgument(format!("vertex {v} repeated")));
            }
        }
        let mut g = Self::unchecked(s.iter().map(|&v| self.labels[v].clone()).collect());
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if self.adjacent(s[i], s[j]) {
                    g.connect(i, j);
                }
            }
        }
        Ok(g)
    }

    /// When `≃` is transitive (a disjoint union of cliques), the cluster id
    /// of every vertex, numbered by first appearance.
    pub fn cluster_ids(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut id = alloc::vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if id[v] != usize::MAX {
                continue;
            }
            let mut members = self.rows[v].clone();
            members.insert(v);
            for u in members.iter() {
                let mut closed = self.rows[u].clone();
                closed.insert(u);
                if closed != members || id[u] != usize::MAX {
                    return None;
                }
                id[u] = next;
            }
            next += 1;
        }
        Some(id)
    }

    pub fn is_cluster(&self) -> bool {
        self.cluster_ids().is_some()
    }
}

/// True iff `map` sends every distinguishable pair of `g` (distinct and
/// non-adjacent) to a distinguishable pair of `h`, i.e. `map` is a
/// homomorphism `∁g → ∁h` and `g ≤ h`.
pub fn is_cohomomorphism(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    if map.len() != g.n() || map.iter().any(|&v| v >= h.n()) {
        return false;
    }
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if !g.adjacent(a, b) && h.confusable(map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

/// Brute-force isomorphism search over all vertex permutations. Test helper
/// for small graphs only.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let n = g.n();
    let mut perm = Vec::with_capacity(n);
    let mut used = alloc::vec![false; n];
    fn rec(
        g: &Graph,
        h: &Graph,
        perm: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let k = perm.len();
        if k == g.n() {
            return true;
        }
        for cand in 0..h.n() {
            if used[cand] || g.degree(k) != h.degree(cand) {
                continue;
            }
            if (0..k).all(|j| g.adjacent(j, k) == h.adjacent(perm[j], cand)) {
                used[cand] = true;
                perm.push(cand);
                if rec(g, h, perm, used) {
                    return true;
                }
                perm.pop();
                used[cand] = false;
            }
        }
        false
    }
    if rec(g, h, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

/// `G^{⊠n}` represented by its base graph and word length.
#[derive(Clone, Copy, Debug)]
pub struct StrongPowerView<'a> {
    pub base: &'a Graph,
    pub len: usize,
}

impl StrongPowerView<'_> {
    pub fn vertex_count(&self) -> Option<u128> {
        WordSpace::new(self.base.n(), self.len).count_u128()
    }

    pub fn confusable(&self, x: &Word, y: &Word) -> bool {
        self.base.words_confusable(&x.0, &y.0)
    }

    pub fn materialize(&self, cap: usize) -> Result<Graph> {
        cap_check(
            "strong power vertex count",
            self.vertex_count().unwrap_or(u128::MAX),
            cap as u128,
        )?;
        self.base.strong_power(self.len, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn complement_examples() {
        assert!(Graph::complete(4).complement().is_edgeless());
        let c5 = Graph::cycle(5);
        assert_eq!(c5.complement().complement(), c5);
        assert!(find_isomorphism(&c5.complement(), &c5).is_some());
        assert!(find_isomorphism(&Graph::cycle(6).complement(), &Graph::cycle(6)).is_none());
    }

    #[test]
    fn strong_product_examples() {
        let c5 = Graph::cycle(5);
        let k1 = Graph::complete(1);
        let p = k1.strong_product(&c5);
        assert!(find_isomorphism(&p, &c5).is_some());
        let sq = c5.strong_product(&c5);
        assert_eq!(sq.n(), 25);
        assert!((0..25).all(|v| sq.degree(v) == 8));
        let k2 = Graph::complete(2);
        assert!(k2.strong_product(&k2).is_complete());
        assert_eq!(k2.strong_product(&k2).n(), 4);
    }

    #[test]
    fn strong_power_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.strong_power(1, 100).unwrap(), c5);
        let e = Graph::edgeless(3).strong_power(2, 100).unwrap();
        assert!(e.is_edgeless() && e.n() == 9);
        let p2 = c5.strong_power(2, 100).unwrap();
        let sp = c5.strong_product(&c5);
        assert_eq!(p2.edges(), sp.edges());
        assert_eq!(p2.labels(), sp.labels());
        assert!(matches!(
            c5.strong_power(6, 4096),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn costrong_examples() {
        let e = Graph::edgeless(2);
        assert!(e.costrong_product(&e).is_edgeless());
        let k2 = Graph::complete(2);
        assert!(k2.costrong_product(&k2).is_complete());
    }

    #[test]
    fn union_examples() {
        let k1 = Graph::complete(1);
        let u = k1.disjoint_union(&k1);
        assert!(u.is_edgeless() && u.n() == 2);
        let u = Graph::cycle(5).disjoint_union(&Graph::complete(3));
        assert_eq!((u.n(), u.edge_count()), (8, 8));
    }

    #[test]
    fn induced_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap(), c5);
        assert!(c5.induced_subgraph(&[0, 1]).unwrap().is_complete());
        assert!(c5.induced_subgraph(&[0, 2]).unwrap().is_edgeless());
        assert_eq!(c5.induced_subgraph(&[]), Err(Error::EmptySubset));
    }

    #[test]
    fn cohomomorphism_examples() {
        let c5 = Graph::cycle(5);
        assert!(is_cohomomorphism(&c5, &c5, &[0, 1, 2, 3, 4]));
        // into a complete target only complete sources qualify
        let k3 = Graph::complete(3);
        assert!(is_cohomomorphism(&Graph::complete(4), &k3, &[0, 1, 2, 0]));
        assert!(!is_cohomomorphism(&c5, &k3, &[0, 1, 2, 0, 1]));
        assert!(!is_cohomomorphism(&Graph::edgeless(2), &c5, &[3, 3]));
    }

    #[test]
    fn loader_rejects_bad_edges() {
        let l = vec!["a".to_string(), "b".to_string()];
        assert!(Graph::from_edges(l.clone(), &[(0, 0)]).is_err());
        assert!(Graph::from_edges(l.clone(), &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn clusters() {
        let g = Graph::from_edge_list(4, &[(0, 1)]).unwrap();
        assert_eq!(g.cluster_ids(), Some(vec![0, 0, 1, 2]));
        assert_eq!(Graph::cycle(5).cluster_ids(), None);
        assert!(Graph::complete(3).is_cluster());
    }
}
