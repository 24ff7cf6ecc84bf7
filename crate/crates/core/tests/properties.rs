use indset::bounds::{bound_holds_exact, evaluate, BoundKind, RootStatus, Verdict};
use indset::exact::{alpha_branch_and_bound, alpha_enumeration, alpha_exact};
use indset::generators::gen_gnm_connected;
use indset::graph::Graph;
use indset::io::{parse, serialize, Format, GraphDocument};
use indset::min_greedy::{k_min_exhaustive, replay, run_min, TieBreak};
use indset::rng::Seed;
use proptest::prelude::*;

/// Arbitrary simple graph, possibly disconnected; self-loops filtered out.
fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * 3).prop_map(move |pairs| {
            let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

/// Connected G(n, m) with m anywhere in the connected range.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..1.0, any::<u64>()).prop_map(|(n, frac, seed)| {
        let extra = n * (n - 1) / 2 - (n - 1);
        let m = n - 1 + (frac * (extra + 1) as f64) as usize;
        gen_gnm_connected(n, m.min(n * (n - 1) / 2), Seed(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn handshake(g in any_graph(30)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
        prop_assert!(g.check_invariants());
        prop_assert_eq!(g.edges().count(), g.m());
    }

    #[test]
    fn closed_neighborhood_deletion_accounts(g in any_graph(20), pick in any::<prop::sample::Index>()) {
        let v = pick.index(g.n());
        let d = g.delete_closed_neighborhood(v).unwrap();
        prop_assert_eq!(d.removed_vertices.len(), 1 + g.degree(v));
        prop_assert_eq!(d.removed_vertices.len() + d.remaining.n(), g.n());
        prop_assert_eq!(d.removed_edges + d.remaining.m(), g.m());
        for (a, b) in d.remaining.edges() {
            prop_assert!(g.has_edge(d.old_of_new[a], d.old_of_new[b]));
        }
    }

    #[test]
    fn round_trip_both_formats(g in any_graph(25)) {
        for fmt in [Format::Dimacs, Format::EdgeList] {
            let mut doc = GraphDocument::new(g.clone(), fmt);
            doc.comments.push("generated".into());
            let bytes = serialize(&doc, fmt);
            let back = parse(&bytes, fmt).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(serialize(&back, fmt), bytes);
        }
    }

    #[test]
    fn parsers_reject_noise_without_panicking(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse(&bytes, Format::Dimacs);
        let _ = parse(&bytes, Format::EdgeList);
    }

    #[test]
    fn min_trace_invariants(g in connected_graph(40), seed in any::<u64>()) {
        for tie in [TieBreak::LowestIndex, TieBreak::Random(Seed(seed))] {
            let t = run_min(&g, tie);
            prop_assert!(t.check(&g).is_ok());
            prop_assert!(g.is_independent(&t.selected()));
            prop_assert_eq!(t.iterations.iter().map(|i| i.deleted_vertices.len()).sum::<usize>(), g.n());
            prop_assert_eq!(t.iterations.iter().map(|i| i.edges_removed).sum::<usize>(), g.m());
            // The first step always takes a global minimum.
            if let Some(first) = t.iterations.first() {
                prop_assert_eq!(Some(first.chosen_degree), g.min_degree());
            }
            let again = replay(&g, &t.selected()).unwrap();
            prop_assert_eq!(again, t);
        }
    }

    #[test]
    fn min_is_deterministic(g in connected_graph(30), seed in any::<u64>()) {
        prop_assert_eq!(run_min(&g, TieBreak::LowestIndex), run_min(&g, TieBreak::LowestIndex));
        prop_assert_eq!(run_min(&g, TieBreak::Random(Seed(seed))), run_min(&g, TieBreak::Random(Seed(seed))));
    }

    #[test]
    fn k_ordering(g in connected_graph(11)) {
        let alpha = alpha_enumeration(&g).unwrap().alpha;
        let (k_min, witness) = k_min_exhaustive(&g, 14).unwrap();
        prop_assert!(witness.check(&g).is_ok());
        prop_assert_eq!(witness.k(), k_min);
        prop_assert!(k_min <= run_min(&g, TieBreak::LowestIndex).k());
        prop_assert!(run_min(&g, TieBreak::LowestIndex).k() <= alpha);
    }

    #[test]
    fn exact_solvers_agree(g in any_graph(18)) {
        let en = alpha_enumeration(&g).unwrap();
        let bb = alpha_branch_and_bound(&g);
        prop_assert_eq!(en.alpha, bb.alpha);
        prop_assert_eq!(&en.witness, &bb.witness);
        prop_assert!(g.is_independent(&bb.witness));
    }

    #[test]
    fn alpha_monotone_under_vertex_deletion(g in any_graph(14), pick in any::<prop::sample::Index>()) {
        let mut keep = vec![true; g.n()];
        keep[pick.index(g.n())] = false;
        let (h, _) = g.induced(&keep);
        let a = alpha_exact(&g).alpha;
        let b = alpha_exact(&h).alpha;
        prop_assert!(b <= a && a <= b + 1);
    }

    #[test]
    fn float_and_exact_verdicts_agree(g in connected_graph(14)) {
        let alpha = alpha_exact(&g).alpha as u64;
        let (n, m) = (g.n() as u64, g.m() as u64);
        for kind in BoundKind::ALL {
            let b = evaluate(kind, n, m).unwrap();
            let verdict = bound_holds_exact(kind, n, m, alpha).unwrap();
            match b.value {
                None => prop_assert_eq!(verdict, Verdict::NotReal),
                Some(value) => {
                    // Skip values within rounding distance of an integer.
                    if (value - alpha as f64).abs() > 1e-9 {
                        prop_assert_eq!(value <= alpha as f64, verdict == Verdict::Holds);
                    }
                    let ceil = b.ceil_value.unwrap();
                    prop_assert!(ceil >= 1);
                    prop_assert!((ceil as f64) >= value - 1e-9 && (ceil as f64) < value + 1.0 + 1e-9);
                }
            }
            if kind != BoundKind::Claimed {
                prop_assert_eq!(b.status, RootStatus::Real);
                prop_assert!(verdict == Verdict::Holds);
            }
        }
    }
}
