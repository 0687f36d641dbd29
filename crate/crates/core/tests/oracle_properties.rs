//! Property checks against independent brute-force oracles.
//!
//! Oracles here deliberately avoid the library's fast paths: the FS oracle
//! walks `Vec<usize>` permutations through a `HashMap`, the graph6 decoder is
//! written from the format description, and the pattern oracle classifies
//! five-vertex graphs by component structure rather than by relabelling.

use std::collections::{HashMap, VecDeque};

use fs_lollipop::fs::{apply_moves, fs_components, fs_neighbors, fs_reach, rank, unrank, Bijection};
use fs_lollipop::graph::{
    k_subsets, make_complete, make_cycle, make_dandelion, make_lollipop, make_path, make_spider, make_star,
    parse_graph6, write_graph6, Graph, VertexSet,
};
use fs_lollipop::lab::{enumerate_labeled_graphs, sample_graph_with_min_degree_stream, sample_uniform_graph};
use fs_lollipop::theory::{
    corollary_k5_predicate, decide_lollipop_fs_connected, every_k_subset_connected, has_induced_pattern, Pattern,
};
use proptest::prelude::*;
use rayon::prelude::*;

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Component label per permutation, by BFS from every unvisited vertex,
/// generating neighbours by filtering all transpositions.
fn bfs_components(x: &Graph, y: &Graph) -> HashMap<Vec<usize>, usize> {
    let n = x.order();
    let mut label: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut next = 0;
    for start in all_perms(n) {
        if label.contains_key(&start) {
            continue;
        }
        label.insert(start.clone(), next);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for a in 0..n {
                for b in 0..n {
                    if a < b && x.adjacent(a, b) && y.adjacent(s[a], s[b]) {
                        let mut t = s.clone();
                        t.swap(a, b);
                        if !label.contains_key(&t) {
                            label.insert(t.clone(), next);
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        next += 1;
    }
    label
}

fn families(n: usize) -> Vec<(String, Graph)> {
    let mut out = vec![
        ("path".to_string(), make_path(n).unwrap()),
        ("complete".to_string(), make_complete(n).unwrap()),
        ("star".to_string(), make_star(n).unwrap()),
    ];
    if n >= 3 {
        out.push(("cycle".into(), make_cycle(n).unwrap()));
    }
    for k in 2..=n {
        out.push((format!("lollipop {},{}", n - k, k), make_lollipop(n - k, k).unwrap()));
        out.push((format!("dandelion {},{}", n - k, k), make_dandelion(n - k, k).unwrap()));
    }
    out
}

#[test]
fn components_match_bfs_oracle() {
    for n in 2..=5 {
        let xs = families(n);
        let ys: Vec<Graph> = enumerate_labeled_graphs(n).unwrap().collect();
        xs.par_iter().for_each(|(name, x)| {
            for y in &ys {
                let oracle = bfs_components(x, y);
                let comps = fs_components(x, y).unwrap();
                let count = oracle.values().max().unwrap() + 1;
                assert_eq!(comps.component_count(), count, "{name} vs {}", write_graph6(y));
                // same partition: oracle labels and canonical roots biject
                let mut pairing: HashMap<usize, usize> = HashMap::new();
                for (perm, &lbl) in &oracle {
                    let root = comps.root_of(&Bijection::new(perm.clone()).unwrap());
                    assert_eq!(*pairing.entry(lbl).or_insert(root), root, "{name} vs {}", write_graph6(y));
                }
            }
        });
    }
}

#[test]
fn fs_adjacency_is_symmetric_and_valid() {
    for n in 2..=5 {
        let ys: Vec<Graph> = enumerate_labeled_graphs(n).unwrap().collect();
        for (_, x) in families(n) {
            for y in ys.iter().step_by(7) {
                for r in 0..(1..=n as u64).product::<u64>() {
                    let s = unrank(r, n).unwrap();
                    for (mv, t) in fs_neighbors(&x, y, &s).unwrap() {
                        let differ: Vec<usize> = (0..n).filter(|&p| s.person_at(p) != t.person_at(p)).collect();
                        assert_eq!(differ, vec![mv.a, mv.b]);
                        assert!(x.adjacent(mv.a, mv.b));
                        assert!(y.adjacent(s.person_at(mv.a), s.person_at(mv.b)));
                        assert_eq!(s.person_at(mv.a), t.person_at(mv.b));
                        assert_eq!(s.person_at(mv.b), t.person_at(mv.a));
                        let back = fs_neighbors(&x, y, &t).unwrap();
                        assert!(back.iter().any(|(_, u)| *u == s));
                    }
                }
            }
        }
    }
}

#[test]
fn reach_replays_and_is_shortest() {
    let x = make_lollipop(2, 3).unwrap();
    let y = make_cycle(5).unwrap().complement().complement();
    let oracle = bfs_components(&x, &y);
    let src = Bijection::identity(5);
    // BFS distances from src by the HashMap oracle
    let mut dist: HashMap<Vec<usize>, usize> = HashMap::new();
    dist.insert(src.to_vec(), 0);
    let mut queue = VecDeque::from([src.to_vec()]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for (a, b) in x.edges() {
            if y.adjacent(s[a], s[b]) {
                let mut t = s.clone();
                t.swap(a, b);
                if !dist.contains_key(&t) {
                    dist.insert(t.clone(), d + 1);
                    queue.push_back(t);
                }
            }
        }
    }
    for r in 0..120 {
        let dst = unrank(r, 5).unwrap();
        let got = fs_reach(&x, &y, &src, &dst).unwrap();
        assert_eq!(got.is_some(), oracle[&dst.to_vec()] == oracle[&src.to_vec()]);
        if let Some(moves) = got {
            assert_eq!(apply_moves(&x, &y, &src, &moves).unwrap(), dst);
            assert_eq!(moves.len(), dist[&dst.to_vec()]);
        }
    }
}

#[test]
fn components_deterministic_across_workers() {
    let x = make_lollipop(5, 3).unwrap();
    let y = make_cycle(8).unwrap().complement();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(6).build().unwrap();
    let a = one.install(|| fs_components(&x, &y).unwrap());
    let b = many.install(|| fs_components(&x, &y).unwrap());
    assert_eq!(a, b);
}

/// graph6 decoder written straight from the format description.
fn decode_graph6_reference(s: &str) -> (usize, Vec<(usize, usize)>) {
    let bytes = s.as_bytes();
    let n = (bytes[0] - 63) as usize;
    let bits: Vec<bool> = bytes[1..]
        .iter()
        .flat_map(|&b| (0..6).rev().map(move |i| (b - 63) >> i & 1 == 1))
        .collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    edges.sort();
    (n, edges)
}

#[test]
fn graph6_round_trip_all_small_graphs() {
    for n in 1..=6 {
        for g in enumerate_labeled_graphs(n).unwrap() {
            let s = write_graph6(&g);
            assert_eq!(parse_graph6(&s).unwrap(), g);
            assert_eq!(decode_graph6_reference(&s), (n, g.edges()));
        }
    }
    assert_eq!(decode_graph6_reference("D~{"), (5, make_complete(5).unwrap().edges()));
}

proptest! {
    #[test]
    fn graph6_round_trip_random(n in 1usize..=12, seed in any::<u64>()) {
        let g = sample_uniform_graph(n, seed, 0).unwrap();
        let s = write_graph6(&g);
        prop_assert_eq!(parse_graph6(&s).unwrap(), g);
        prop_assert_eq!(decode_graph6_reference(&s), (n, g.edges()));
    }

    #[test]
    fn lehmer_round_trip(n in 1usize..=10, r in any::<u64>()) {
        let count: u64 = (1..=n as u64).product();
        let b = unrank(r % count, n).unwrap();
        prop_assert_eq!(rank(&b), r % count);
    }

    #[test]
    fn induced_subgraph_is_simple(n in 1usize..=12, seed in any::<u64>(), bits in any::<u16>()) {
        let g = sample_uniform_graph(n, seed, 1).unwrap();
        let s = VertexSet::from_bits(bits).intersection(g.vertices());
        prop_assume!(!s.is_empty());
        let h = g.induced_subgraph(s).unwrap();
        let members = s.to_vec();
        prop_assert_eq!(h.order(), members.len());
        for u in 0..h.order() {
            prop_assert!(!h.adjacent(u, u));
            for v in 0..h.order() {
                prop_assert_eq!(h.adjacent(u, v), h.adjacent(v, u));
                prop_assert_eq!(h.adjacent(u, v), g.adjacent(members[u], members[v]));
            }
        }
    }
}

#[test]
fn removal_robustness_bridges_subset_criterion() {
    for n in 2..=7usize {
        let pairs = n * (n - 1) / 2;
        (0u128..1 << pairs).into_par_iter().for_each(|mask| {
            let y = Graph::from_edge_mask(n, mask).unwrap();
            for k in 2..=n {
                assert_eq!(
                    every_k_subset_connected(&y, k).unwrap(),
                    y.is_l_removal_robust(n - k + 1).unwrap(),
                    "{} k={k}",
                    write_graph6(&y)
                );
            }
        });
    }
}

#[test]
fn subset_criterion_is_monotone_in_k() {
    for n in 3..=6 {
        for y in enumerate_labeled_graphs(n).unwrap() {
            for k in 2..n {
                if decide_lollipop_fs_connected(&y, k).unwrap() {
                    assert!(decide_lollipop_fs_connected(&y, k + 1).unwrap(), "{} k={k}", write_graph6(&y));
                }
            }
        }
    }
}

fn isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && all_perms(a.order()).iter().any(|p| a.edges().iter().all(|&(u, v)| b.adjacent(p[u], p[v])))
}

#[test]
fn dandelion_is_the_spider_with_unit_legs() {
    for n in 2..=7 {
        for k in 2..=n {
            let mut legs = vec![n - k];
            legs.extend(std::iter::repeat_n(1, k - 1));
            legs.retain(|&l| l > 0);
            legs.sort_by(|a, b| b.cmp(a));
            let spider = make_spider(&legs).unwrap();
            assert!(isomorphic(&make_dandelion(n - k, k).unwrap(), &spider), "n={n} k={k}");
        }
    }
}

#[test]
fn spider_embeds_in_lollipop() {
    // Spider(λ) is a spanning subgraph of Lollipop_{λ1, n-λ1} up to relabelling.
    for legs in [vec![2, 1, 1], vec![2, 2], vec![3, 1], vec![1, 1, 1, 1]] {
        let s = make_spider(&legs).unwrap();
        let n = s.order();
        let l = make_lollipop(legs[0], n - legs[0]).unwrap();
        assert!(all_perms(n).iter().any(|p| s.edges().iter().all(|&(u, v)| l.adjacent(p[u], p[v]))), "{legs:?}");
    }
}

/// 5-vertex pattern recogniser by component structure.
fn classify_5(g: &Graph) -> Option<Pattern> {
    let comps = g.components();
    if comps.len() != 2 {
        return None;
    }
    let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
    sizes.sort();
    if sizes != [2, 3] {
        return None;
    }
    match g.edge_count() {
        4 => Some(Pattern::K3P2),
        3 => Some(Pattern::P3P2),
        _ => None,
    }
}

fn pattern_oracle(y: &Graph, p: Pattern) -> bool {
    k_subsets(y.order(), 5).any(|s| classify_5(&y.induced_subgraph(s).unwrap()) == Some(p))
}

#[test]
fn pattern_detector_matches_structural_oracle() {
    let c7bar = make_cycle(7).unwrap().complement();
    assert_eq!(c7bar.min_degree(), 4);
    for p in Pattern::ALL {
        assert_eq!(has_induced_pattern(&c7bar, p).unwrap(), pattern_oracle(&c7bar, p));
    }
    for n in 5..=9 {
        for i in 0..200 {
            let y = sample_uniform_graph(n, 99, i).unwrap();
            for p in Pattern::ALL {
                assert_eq!(has_induced_pattern(&y, p).unwrap(), pattern_oracle(&y, p), "{}", write_graph6(&y));
            }
        }
    }
}

#[test]
fn corollary_matches_subset_criterion_n8() {
    for i in 0..100 {
        let y = sample_graph_with_min_degree_stream(8, 4, 2024, i).unwrap();
        assert_eq!(corollary_k5_predicate(&y).unwrap(), every_k_subset_connected(&y, 5).unwrap());
    }
}
