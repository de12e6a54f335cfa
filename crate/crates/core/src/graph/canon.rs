//! Sign-aware canonical labeling.
//!
//! The canonical representative of a graph is the lexicographically smallest
//! sorted edge list over all relabelings reached by an individualization and
//! refinement search. Every automorphism maps the search tree to itself, so two
//! leaves giving the same edge list differ by an automorphism, and the graph
//! vanishes exactly when two such leaves disagree on the sorting parity.
//! Automorphisms found this way prune equivalent branches, so symmetric
//! graphs such as perfect matchings do not enumerate their whole group.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{sort_with_parity, EdgeKind, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCanonicalGraph {
    pub graph: Graph,
    /// `+1`/`-1`, or `0` when an automorphism permutes the edges oddly.
    pub sign: i8,
}

impl SignedCanonicalGraph {
    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

const MEMO_CAPACITY: usize = 1 << 20;

thread_local! {
    /// Canonical forms of edge-sorted graphs; products revisit the same
    /// labeled graphs many times.
    static MEMO: RefCell<HashMap<Graph, (Graph, i8)>> = RefCell::new(HashMap::new());
}

pub fn canonicalize(g: &Graph) -> SignedCanonicalGraph {
    let Some((sorted, s)) = g.labeled_normal() else {
        return search(g);
    };
    let cached = MEMO.with(|m| m.borrow().get(&sorted).cloned());
    let (graph, sign) = match cached {
        Some(hit) => hit,
        None => {
            let c = search(&sorted);
            MEMO.with(|m| {
                let mut m = m.borrow_mut();
                if m.len() >= MEMO_CAPACITY {
                    m.clear();
                }
                m.insert(sorted, (c.graph.clone(), c.sign));
            });
            (c.graph, c.sign)
        }
    };
    SignedCanonicalGraph { graph, sign: sign * s }
}

fn search(g: &Graph) -> SignedCanonicalGraph {
    let search = Search::new(g);
    let mut state = State::default();
    let colors = search.refine(search.initial_colors());
    search.descend(colors, &mut Vec::new(), &mut state);
    let best = state.best.expect("search visits at least one leaf");
    SignedCanonicalGraph {
        graph: Graph::from_raw(g.kind, g.n, best.edges),
        sign: if state.odd_automorphism { 0 } else { best.sign },
    }
}

struct Leaf {
    edges: Vec<(u8, u8)>,
    sign: i8,
    /// Vertex at each canonical position.
    order: Vec<usize>,
}

#[derive(Default)]
struct State {
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms found so far, as vertex maps.
    automorphisms: Vec<Vec<usize>>,
    odd_automorphism: bool,
}

impl State {
    /// Records the automorphism taking `leaf` to `known` when their edge lists
    /// agree; it is odd exactly when their sorting parities differ.
    fn compare(known: &Leaf, leaf: &Leaf, automorphisms: &mut Vec<Vec<usize>>, odd: &mut bool) {
        if known.edges != leaf.edges {
            return;
        }
        if known.sign != leaf.sign {
            *odd = true;
        }
        let mut map = vec![0; leaf.order.len()];
        for (pos, &v) in leaf.order.iter().enumerate() {
            map[v] = known.order[pos];
        }
        if map.iter().enumerate().any(|(v, &w)| v != w) && !automorphisms.contains(&map) {
            automorphisms.push(map);
        }
    }
}

/// Orbit representative of each vertex under the automorphisms that fix
/// every vertex of `prefix`.
fn stabilizer_orbits(n: usize, automorphisms: &[Vec<usize>], prefix: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for a in automorphisms.iter().filter(|a| prefix.iter().all(|&p| a[p] == p)) {
        for v in 0..n {
            let (x, y) = (find(&mut parent, v), find(&mut parent, a[v]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

pub fn is_zero_graph(g: &Graph) -> bool {
    canonicalize(g).is_zero()
}

struct Search<'a> {
    g: &'a Graph,
    out: Vec<Vec<u8>>,
    inn: Vec<Vec<u8>>,
    loops: Vec<u32>,
    isolated: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n;
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let mut loops = vec![0; n];
        let mut isolated = vec![true; n];
        for &(a, b) in &g.edges {
            isolated[a as usize] = false;
            isolated[b as usize] = false;
            if a == b {
                loops[a as usize] += 1;
                continue;
            }
            match g.kind {
                EdgeKind::Directed => {
                    out[a as usize].push(b);
                    inn[b as usize].push(a);
                }
                EdgeKind::Undirected => {
                    out[a as usize].push(b);
                    out[b as usize].push(a);
                }
            }
        }
        Search {
            g,
            out,
            inn,
            loops,
            isolated,
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let keys: Vec<(u32, usize, usize)> = (0..self.g.n)
            .map(|v| (self.loops[v], self.inn[v].len(), self.out[v].len()))
            .collect();
        rank(&keys).0
    }

    /// Equitable refinement; cell order is preserved because the old color
    /// leads every signature.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..self.g.n)
                .map(|v| {
                    let mut o: Vec<u32> = self.out[v].iter().map(|&w| colors[w as usize]).collect();
                    let mut i: Vec<u32> = self.inn[v].iter().map(|&w| colors[w as usize]).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (colors[v], o, i)
                })
                .collect();
            let (next, k) = rank(&sigs);
            colors = next;
            if k == classes {
                return colors;
            }
            classes = k;
        }
    }

    fn target_cell(&self, colors: &[u32]) -> Option<Vec<usize>> {
        let mut size = vec![0usize; self.g.n];
        for &c in colors {
            size[c as usize] += 1;
        }
        let c = (0..self.g.n).find(|&c| {
            size[c] > 1
                && (0..self.g.n).any(|v| colors[v] as usize == c && !self.isolated[v])
        })?;
        Some(
            (0..self.g.n)
                .filter(|&v| colors[v] as usize == c)
                .collect(),
        )
    }

    /// Explores one child per orbit of the known automorphisms fixing the
    /// individualized vertices; pruned children only repeat leaves up to an
    /// automorphism already recorded.
    fn descend(&self, colors: Vec<u32>, prefix: &mut Vec<usize>, state: &mut State) {
        let Some(cell) = self.target_cell(&colors) else {
            self.leaf(&colors, state);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for v in cell {
            if !explored.is_empty() {
                let orbits = stabilizer_orbits(self.g.n, &state.automorphisms, prefix);
                if explored.iter().any(|&w| orbits[w] == orbits[v]) {
                    continue;
                }
            }
            explored.push(v);
            let keys: Vec<(u32, bool)> = (0..self.g.n).map(|u| (colors[u], u != v)).collect();
            let next = self.refine(rank(&keys).0);
            prefix.push(v);
            self.descend(next, prefix, state);
            prefix.pop();
        }
    }

    fn leaf(&self, colors: &[u32], state: &mut State) {
        // Remaining ties are among isolated vertices, which are interchangeable.
        let mut order: Vec<usize> = (0..self.g.n).collect();
        order.sort_by_key(|&v| (colors[v], v));
        let mut perm = vec![0u8; self.g.n];
        for (pos, &v) in order.iter().enumerate() {
            perm[v] = pos as u8;
        }
        let mut edges: Vec<(u8, u8)> = self
            .g
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (perm[a as usize], perm[b as usize]);
                if self.g.kind == EdgeKind::Undirected && a > b {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        let sign = match sort_with_parity(&mut edges) {
            Some(s) => s,
            None => {
                edges.sort_unstable();
                0
            }
        };
        let leaf = Leaf { edges, sign, order };
        let State {
            first,
            best,
            automorphisms,
            odd_automorphism,
        } = state;
        if let Some(f) = first.as_ref() {
            State::compare(f, &leaf, automorphisms, odd_automorphism);
        }
        match best.as_ref() {
            Some(b) if b.edges < leaf.edges => {}
            Some(b) if b.edges == leaf.edges => State::compare(b, &leaf, automorphisms, odd_automorphism),
            _ => {
                if first.is_none() {
                    *first = Some(Leaf {
                        edges: leaf.edges.clone(),
                        sign: leaf.sign,
                        order: leaf.order.clone(),
                    });
                }
                *best = Some(leaf);
            }
        }
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Dense ranks of `keys` in sorted order, and the number of distinct keys.
fn rank<K: Ord>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut out = vec![0u32; keys.len()];
    let mut r = 0u32;
    for (k, &i) in idx.iter().enumerate() {
        if k > 0 && keys[idx[k - 1]] != keys[i] {
            r += 1;
        }
        out[i] = r;
    }
    (out, if keys.is_empty() { 0 } else { r as usize + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Graph {
        s.parse().unwrap()
    }

    #[test]
    fn reversed_edge_canonicalizes_positively() {
        let c = canonicalize(&g("n=2 edges=(2,1)"));
        assert_eq!(c.graph.to_string(), "n=2 edges=(1,2)");
        assert_eq!(c.sign, 1);
    }

    #[test]
    fn parallel_pair_vanishes() {
        assert_eq!(canonicalize(&g("n=2 edges=(1,2)(1,2)")).sign, 0);
        assert!(is_zero_graph(&g("n=2 edges=(1,2)(1,2)")));
    }

    #[test]
    fn two_cycle_vanishes() {
        // swapping the vertices exchanges the two edges: an odd automorphism
        assert_eq!(canonicalize(&g("n=2 edges=(1,2)(2,1)")).sign, 0);
        assert_eq!(canonicalize(&g("n=2 edges=(2,1)(1,2)")).sign, 0);
        // labeled, it is a nonzero element of dGra(2)
        assert!(g("n=2 edges=(1,2)(2,1)").labeled_normal().is_some());
    }

    #[test]
    fn single_edge_is_nonzero() {
        assert!(!is_zero_graph(&g("n=2 edges=(1,2)")));
    }

    #[test]
    fn cycles_vanish_by_length_mod_four() {
        for len in 2..=9usize {
            let edges: String = (0..len)
                .map(|i| format!("{{{},{}}}", i + 1, (i + 1) % len + 1))
                .collect();
            let cyc = g(&format!("n={len} uedges={edges}"));
            let expect_zero = len % 4 != 1;
            // the 2-cycle is a parallel pair; it vanishes too
            assert_eq!(is_zero_graph(&cyc), expect_zero, "cycle of length {len}");
        }
    }

    #[test]
    fn idempotent_with_positive_sign() {
        let c = canonicalize(&g("n=4 edges=(3,1)(3,2)(2,3)(2,2)"));
        let again = canonicalize(&c.graph);
        assert_eq!(again.graph, c.graph);
        assert_eq!(again.sign, 1);
    }

    #[test]
    fn large_symmetric_graphs_are_fast() {
        // |Aut| = 2^12 · 12!; the search must not visit a leaf per automorphism
        let matching: String = (0..12).map(|i| format!("{{{},{}}}", 2 * i + 1, 2 * i + 2)).collect();
        let c = canonicalize(&g(&format!("n=24 uedges={matching}")));
        assert!(c.is_zero(), "swapping two matching edges is odd");
        let tadpoles: String = (1..=24).map(|i| format!("({i},{i})")).collect();
        assert!(canonicalize(&g(&format!("n=24 edges={tadpoles}"))).is_zero());
        let cycle: String = (0..24).map(|i| format!("({},{})", i + 1, (i + 1) % 24 + 1)).collect();
        assert!(canonicalize(&g(&format!("n=24 edges={cycle}"))).is_zero());
        let k = "n=8 uedges={1,2}{1,3}{1,4}{1,5}{1,6}{1,7}{1,8}{2,3}{2,4}{2,5}{2,6}{2,7}{2,8}{3,4}{3,5}{3,6}{3,7}{3,8}{4,5}{4,6}{4,7}{4,8}{5,6}{5,7}{5,8}{6,7}{6,8}{7,8}";
        canonicalize(&g(k));
    }

    #[test]
    fn isolated_vertices_do_not_branch() {
        let c = canonicalize(&g("n=12 edges=(1,2)"));
        assert_eq!(c.graph.to_string(), "n=12 edges=(11,12)");
        assert_eq!(c.sign, 1);
    }
}
