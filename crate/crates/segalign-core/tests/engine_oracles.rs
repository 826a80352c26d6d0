use proptest::prelude::*;
use segalign_core::finset::{colimit_of, limit_adjoint, limit_of, Edge, LimitOptions};

#[derive(Debug, Clone)]
struct Diagram {
    sizes: Vec<usize>,
    edges: Vec<Edge>,
}

fn diagram() -> impl Strategy<Value = Diagram> {
    (1usize..=4)
        .prop_flat_map(|n| prop::collection::vec(0usize..=6, n))
        .prop_flat_map(|sizes| {
            let n = sizes.len();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && (sizes[b] > 0 || sizes[a] == 0))
                .collect();
            let count = if pairs.is_empty() { 0 } else { 4 };
            (
                Just(sizes),
                Just(pairs),
                prop::collection::vec(any::<prop::sample::Index>(), 0..=count),
            )
        })
        .prop_map(|(sizes, pairs, idx)| {
            let picks: Vec<(usize, usize)> = idx.iter().map(|i| pairs[i.index(pairs.len())]).collect();
            (sizes, picks)
        })
        .prop_flat_map(|(sizes, picks)| {
            let maps: Vec<_> = picks
                .iter()
                .map(|&(a, b)| prop::collection::vec(0..sizes[b].max(1), sizes[a]))
                .collect();
            (Just(sizes), Just(picks), maps)
        })
        .prop_map(|(sizes, picks, maps)| Diagram {
            sizes,
            edges: picks
                .into_iter()
                .zip(maps)
                .map(|((src, dst), map)| Edge { src, dst, map })
                .collect(),
        })
}

fn brute_limit(d: &Diagram) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0usize; d.sizes.len()];
    if d.sizes.contains(&0) {
        return out;
    }
    loop {
        if d.edges.iter().all(|e| e.map[t[e.src]] == t[e.dst]) {
            out.push(t.clone());
        }
        let mut k = t.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < d.sizes[k] {
                break;
            }
            t[k] = 0;
        }
    }
}

fn brute_classes(d: &Diagram) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = d
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(n, &s)| (0..s).map(move |x| (n, x)))
        .collect();
    let mut label: Vec<usize> = (0..all.len()).collect();
    let pos = |p: (usize, usize)| all.iter().position(|&q| q == p).unwrap();
    let mut changed = true;
    while changed {
        changed = false;
        for e in &d.edges {
            for (x, &y) in e.map.iter().enumerate() {
                let (a, b) = (pos((e.src, x)), pos((e.dst, y)));
                let m = label[a].min(label[b]);
                if label[a] != m || label[b] != m {
                    let (la, lb) = (label[a], label[b]);
                    for l in label.iter_mut() {
                        if *l == la || *l == lb {
                            *l = m;
                        }
                    }
                    changed = true;
                }
            }
        }
    }
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &p) in all.iter().enumerate() {
        match seen.iter().position(|&l| l == label[i]) {
            Some(c) => classes[c].push(p),
            None => {
                seen.push(label[i]);
                classes.push(vec![p]);
            }
        }
    }
    classes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn limits_match_product_filter(d in diagram()) {
        let exhaustive = limit_of(&d.sizes, &d.edges, &LimitOptions::default()).unwrap();
        let searched = limit_of(&d.sizes, &d.edges, &LimitOptions { product_cap: 0, result_cap: 1 << 20 }).unwrap();
        let expected = brute_limit(&d);
        prop_assert_eq!(exhaustive.tuples(), expected.as_slice());
        prop_assert_eq!(searched.tuples(), expected.as_slice());
        for (k, t) in expected.iter().enumerate() {
            prop_assert_eq!(exhaustive.position(t), Some(k));
        }
    }

    #[test]
    fn colimits_match_union_find(d in diagram()) {
        let c = colimit_of(&d.sizes, &d.edges);
        let expected = brute_classes(&d);
        prop_assert_eq!(c.classes(), expected.as_slice());
        for (k, class) in c.classes().iter().enumerate() {
            for &(n, x) in class {
                prop_assert_eq!(c.injections()[n][x], k);
            }
        }
    }

    #[test]
    fn limit_adjoint_of_the_limit_is_the_identity(d in diagram()) {
        let lim = limit_of(&d.sizes, &d.edges, &LimitOptions::default()).unwrap();
        let legs: Vec<Vec<usize>> = (0..d.sizes.len()).map(|n| lim.projection(n)).collect();
        let adjoint = limit_adjoint(&d.sizes, &d.edges, &lim, lim.len(), &legs).unwrap();
        prop_assert_eq!(adjoint, (0..lim.len()).collect::<Vec<_>>());
    }
}

#[test]
fn result_cap_is_a_resource_error() {
    let sizes = [6, 6];
    let err = limit_of(
        &sizes,
        &[],
        &LimitOptions {
            product_cap: 100,
            result_cap: 10,
        },
    )
    .unwrap_err();
    assert!(matches!(err, segalign_core::error::Error::ResourceCap { .. }));
}
