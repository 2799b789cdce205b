use proptest::prelude::*;

use codedcast::analysis::{psi_heterogeneous, rate_bound, PsiOptions};
use codedcast::coding::{
    mds_generator, parse_frame, verify_round_trip, write_frame, Codeword, Gf256, Gf65536, PacketStore,
};
use codedcast::coloring::{
    brute_force_oracle, closed_neighborhood_colors, gclc, gclc1, gclc2, hglc, local_number, local_search,
    parse_coloring_dump, write_coloring_dump, Grouping, HglcParams,
};
use codedcast::graph::{parse_dimacs, ConflictGraph};
use codedcast::instances::{random_instance, random_small_instance, RandomShape};
use codedcast::model::NetworkConfig;

fn shape() -> impl Strategy<Value = RandomShape> {
    (1usize..=5, 1usize..=6, 1usize..=5, 1usize..=3, 0.0f64..0.9).prop_map(
        |(users, files, packets, max_requests, cache_prob)| RandomShape {
            users,
            files,
            packets,
            max_requests,
            cache_prob,
        },
    )
}

fn graph(shape: RandomShape, seed: u64) -> ConflictGraph {
    let (cache, demand) = random_instance(shape, seed);
    ConflictGraph::build(&cache, &demand).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn colorings_are_valid_and_ordered(shape in shape(), seed in any::<u64>(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let g = graph(shape, seed);
        let two = gclc2(&g);
        let outcomes = [
            gclc1(&g, Grouping::Cardinality),
            gclc1(&g, Grouping::SameUsers),
            two.clone(),
            gclc(&g, Grouping::Cardinality),
            hglc(&g, HglcParams::new(a, b).unwrap(), seed),
        ];
        for o in &outcomes {
            prop_assert!(o.coloring.validate(&g).is_ok());
            prop_assert_eq!(local_number(&g, &o.coloring).unwrap(), o.local_number);
            prop_assert!(o.local_number <= o.num_colors());
            if !g.is_empty() {
                prop_assert!(o.local_number >= 1);
            }
        }
        prop_assert!(outcomes[3].local_number <= two.local_number);
        prop_assert!(outcomes[4].local_number <= two.local_number);
    }

    #[test]
    fn fast_local_number_matches_definition(shape in shape(), seed in any::<u64>()) {
        let g = graph(shape, seed);
        let o = gclc(&g, Grouping::Cardinality);
        let slow = closed_neighborhood_colors(&g, &o.coloring).iter().map(Vec::len).max().unwrap_or(0);
        prop_assert_eq!(o.local_number, slow);
    }

    #[test]
    fn local_search_never_hurts(shape in shape(), seed in any::<u64>()) {
        let g = graph(shape, seed);
        let start = gclc1(&g, Grouping::Cardinality);
        let polished = local_search(&g, &start.coloring).unwrap();
        prop_assert!(polished.validate(&g).is_ok());
        prop_assert!(local_number(&g, &polished).unwrap() <= start.local_number);
    }

    #[test]
    fn hglc_is_deterministic(shape in shape(), seed in any::<u64>()) {
        let g = graph(shape, seed);
        let params = HglcParams::default();
        prop_assert_eq!(hglc(&g, params, seed), hglc(&g, params, seed));
    }

    #[test]
    fn dumps_round_trip(shape in shape(), seed in any::<u64>()) {
        let g = graph(shape, seed);
        let o = gclc(&g, Grouping::Cardinality);
        let mut text = Vec::new();
        write_coloring_dump(&o.coloring, &mut text).unwrap();
        let back = parse_coloring_dump(std::str::from_utf8(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &o.coloring);

        let mut text = Vec::new();
        g.write_dimacs(&mut text).unwrap();
        let arcs = parse_dimacs(std::str::from_utf8(&text).unwrap()).unwrap();
        prop_assert_eq!(arcs.vertices, g.len());
        prop_assert_eq!(arcs.arcs.len(), g.arc_count());
        for (s, t) in arcs.arcs {
            prop_assert!(g.has_arc(s, t));
        }
    }

    #[test]
    fn codewords_decode_for_every_user(shape in shape(), seed in any::<u64>(), symbols in 1usize..4) {
        let (cache, demand) = random_instance(shape, seed);
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let store = PacketStore::<Gf65536>::random(shape.files, shape.packets, symbols, seed);
        for o in [gclc(&g, Grouping::Cardinality), gclc2(&g), hglc(&g, HglcParams::default(), seed)] {
            let gm = mds_generator::<Gf65536>(o.num_colors(), o.local_number).unwrap();
            prop_assert!(verify_round_trip(&g, &o, &gm, &store).is_ok());
        }
    }

    #[test]
    fn frames_round_trip(nu in 0usize..5, symbols in 0usize..6, seed in any::<u64>()) {
        let store = PacketStore::<Gf65536>::random(1, nu.max(1), symbols, seed);
        let rows: Vec<Vec<Gf65536>> = (0..nu)
            .map(|i| store.get(codedcast::model::PacketId::new(0, i)).to_vec())
            .collect();
        let word = Codeword::from_rows(rows, symbols).unwrap();
        let bytes = write_frame(&word);
        prop_assert_eq!(bytes.len(), 8 + 2 * nu * symbols);
        prop_assert_eq!(parse_frame::<Gf65536>(&bytes).unwrap(), word);
    }

    #[test]
    fn generators_are_mds(chi in 1usize..=12, nu_frac in 0.0f64..=1.0) {
        let nu = ((chi as f64 * nu_frac).ceil() as usize).clamp(1, chi);
        prop_assert!(mds_generator::<Gf256>(chi, nu).unwrap().is_mds(0, 0));
        prop_assert!(mds_generator::<Gf65536>(chi, nu).unwrap().is_mds(0, 0));
    }

    #[test]
    fn empty_caches_give_total_requests(n in 1usize..5, m in 1usize..6, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let requests: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=m)).collect();
        let total: usize = requests.iter().sum();
        let cfg = NetworkConfig::explicit(1, vec![0.0; n], requests, rows, vec![vec![1.0 / m as f64; m]; n]).unwrap();
        let psi = psi_heterogeneous(&cfg, PsiOptions::default()).unwrap();
        prop_assert!((psi.value - total as f64).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn heuristics_dominate_oracle(seed in any::<u64>()) {
        let (cache, demand) = random_small_instance(8, seed);
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let best = brute_force_oracle(&g).unwrap();
        prop_assert!(best.coloring.validate(&g).is_ok());
        for o in [gclc1(&g, Grouping::Cardinality), gclc2(&g), hglc(&g, HglcParams::default(), seed)] {
            prop_assert!(o.local_number >= best.local_number);
        }
    }
}

#[test]
fn bound_weakly_decreases_with_cache() {
    let mut last = f64::INFINITY;
    for m_cache in [0.0, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
        let cfg = NetworkConfig::homogeneous(10, 6, 1, m_cache, 2, 0.5).unwrap();
        let r = rate_bound(&cfg, PsiOptions::default()).unwrap();
        assert!(r.r_gclc <= last + 1e-12, "M = {m_cache}: {} > {last}", r.r_gclc);
        assert_eq!(r.r_gclc, r.psi.min(r.m_bar - r.big_m_bar));
        last = r.r_gclc;
    }
}
