use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pcf_core::factor::{is_distance_d_coloured, is_distance_d_factor, is_rc_factor};
use pcf_core::hypergraph::{
    brute_1in3, is_one_in_three, k4_3, positive9, random_regular_hypergraph, regular_hypergraphs, Hypergraph3,
};
use pcf_core::kneser::{canonical_colouring, subsets};
use pcf_core::reduction::{binomial, build_d2c_gadget, build_rc_gadget};
use pcf_core::search::{distance_factor_search, rc_factor_search, SearchCaps};

/// Every 1-in-3-colouring, by plain enumeration.
fn colourings(h: &Hypergraph3) -> Vec<Vec<bool>> {
    let n = h.vertex_count();
    (0u32..1 << n)
        .map(|code| (0..n).map(|i| code >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|phi| is_one_in_three(h, phi))
        .collect()
}

fn sample(n: usize, k: usize, count: usize, seed: u64) -> Vec<Hypergraph3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).filter_map(|_| random_regular_hypergraph(n, k, &mut rng)).collect()
}

fn instances() -> Vec<Hypergraph3> {
    let mut hs: Vec<Hypergraph3> = (4..=7).flat_map(|n| regular_hypergraphs(n, 3)).collect();
    hs.extend(sample(8, 3, 40, 8));
    hs.extend(sample(9, 3, 40, 9));
    hs.push(k4_3());
    hs.push(positive9());
    hs
}

fn check_rc(h: &Hypergraph3, r: usize) {
    let g = build_rc_gadget(h, r).unwrap();
    let (n, m) = (h.vertex_count(), h.edge_count());
    assert_eq!(g.graph.vertex_count(), n * (r + 1) * (r + 1) + m);
    assert_eq!(g.graph.edge_count(), n * (r + 2) * binomial(r + 1, 2) + 3 * r * m);
    assert_eq!(g.graph.k() as usize, binomial(r + 1, 2));
    let all = colourings(h);
    let found = rc_factor_search(&g.graph, r, SearchCaps::default()).unwrap();
    assert_eq!(found.is_some(), !all.is_empty(), "{}", h.to_text());
    if let Some(f) = &found {
        assert!(all.contains(&g.colouring_from_factor(h, f).unwrap()));
    }
    for phi in &all {
        let f = g.factor_from_colouring(h, phi).unwrap();
        assert!(is_rc_factor(&g.graph, &f, r));
        assert_eq!(&g.colouring_from_factor(h, &f).unwrap(), phi);
    }
}

fn check_d2c(h: &Hypergraph3, r: usize) {
    let g = build_d2c_gadget(h, r).unwrap();
    let rho = binomial(2 * r - 1, r - 1);
    assert_eq!(g.graph.vertex_count(), h.vertex_count() * 2 * rho * rho + h.edge_count());
    assert!(g.graph.k() as usize <= 2 * r - 1);
    let all = colourings(h);
    let found = distance_factor_search(&g.graph, r, 2, SearchCaps::default()).unwrap();
    assert_eq!(found.is_some(), !all.is_empty(), "{}", h.to_text());
    if let Some(f) = &found {
        assert!(all.contains(&g.colouring_from_factor(h, f).unwrap()));
    }
    for phi in &all {
        let f = g.factor_from_colouring(h, phi).unwrap();
        assert!(is_distance_d_factor(&g.graph, &f, r, 2));
        assert_eq!(&g.colouring_from_factor(h, &f).unwrap(), phi);
    }
}

#[test]
fn rc_reduction_is_correct_for_r2() {
    instances().par_iter().for_each(|h| check_rc(h, 2));
}

#[test]
fn d2c_reduction_is_correct_for_r2() {
    instances().par_iter().for_each(|h| check_d2c(h, 2));
}

#[test]
fn rc_reduction_r3_samples() {
    // 4-regular instances
    let mut hs = regular_hypergraphs(6, 4);
    hs.truncate(60);
    hs.extend(sample(9, 4, 10, 3));
    hs.par_iter().for_each(|h| check_rc(h, 3));
}

#[test]
fn k4_has_no_colouring_and_both_gadgets_agree() {
    let h = k4_3();
    assert_eq!(brute_1in3(&h, 24).unwrap(), None);
    assert!(colourings(&h).is_empty());
    let rc = build_rc_gadget(&h, 2).unwrap();
    assert_eq!((rc.graph.vertex_count(), rc.graph.k()), (40, 3));
    let d2c = build_d2c_gadget(&h, 2).unwrap();
    assert_eq!(d2c.graph.vertex_count(), 76);
}

#[test]
fn canonical_colour_classes() {
    for r in 2..=4 {
        let g = canonical_colouring(r).unwrap();
        let graph = g.graph();
        let all: pcf_core::EdgeSet = (0..g.edge_count()).collect();
        assert!(is_distance_d_coloured(&g, &all, 2));
        let sets = subsets(2 * r - 1, r - 1);
        for c in 1..=(2 * r - 1) as u32 {
            let class: Vec<usize> = (0..g.edge_count()).filter(|&e| g.colour(e) == c).collect();
            // one edge per split of [2r-1] \ {c} into two (r-1)-sets
            assert_eq!(class.len(), binomial(2 * r - 2, r - 1) / 2);
            for &e in &class {
                let (u, v) = graph.endpoints(e);
                let (a, b) = (&sets[u], &sets[v]);
                let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
                union.sort_unstable();
                let expected: Vec<usize> = (1..2 * r).filter(|&x| x != c as usize).collect();
                assert_eq!(union, expected);
            }
            for (i, &e) in class.iter().enumerate() {
                for &e2 in &class[i + 1..] {
                    assert!(graph.edge_distance(e, e2).unwrap() >= 1);
                }
            }
        }
    }
}

#[test]
fn interior_kneser_edges_are_forced() {
    use pcf_core::search::{forced_edges, Condition};
    use pcf_core::DegreeSpec;
    for h in [k4_3(), positive9()] {
        let g = build_d2c_gadget(&h, 2).unwrap();
        let f = DegreeSpec::constant(g.graph.vertex_count(), 2);
        let forced = forced_edges(&g.graph, &f, Condition::Distance(2)).unwrap().unwrap();
        assert!(g.interior_edges().iter().all(|e| forced.contains(e)));
        assert!(g.bridge_exclusivity(&forced).unwrap() > 0);
    }
}
