use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use segalign_core::alignment_functor::{
    build_from_pairwise, AlignmentFunctor, BaseCategory, BuildPolicy, HubMode, ObjectImage,
};
use segalign_core::chromology::{canonical_arrow, check_cone, ConeEdge, EnvironmentFunctor, PedigradMode, SegCone};
use segalign_core::dp_align::{align_all_pairs, build_table, Mode};
use segalign_core::environment::{enumerate_words, word_image, AlignedTuple, AlignmentSpec, PointedAlphabet, Word};
use segalign_core::finset::{classify, colimit_of, limit_adjoint, limit_of, Classification, Edge, LimitOptions};
use segalign_core::kan::{kan_canonical_arrow, ran_eval, ran_on_morphism, SegmentDiagram};
use segalign_core::preorder::{chain_preorder, MonotoneMap, Preorder};
use segalign_core::segments::{
    enumerate_morphisms, push_colors, push_colors_morphism, quasi_homologous_morphism, Segment, SegmentMorphism,
};
use segalign_core::slices::{detect_mechanisms, slice_eval, MechanismTemplate};
use segalign_core::truncation::{truncate_morphism, Pointed};

type Check = std::result::Result<String, String>;

type Criterion = (&'static str, fn() -> Check);

const SEQUENCES: [&str; 4] = ["ACCGACTG", "ACATCTG", "ACCGTCA", "ACTACTG"];

type PairRows = (usize, usize, &'static [(&'static str, &'static str)]);

const TABLE: [PairRows; 6] = [
    (
        0,
        1,
        &[
            ("ACCGACTG", "AεCATCTG"),
            ("ACCGACTG", "ACAεTCTG"),
            ("ACCGAεCTG", "AεCεATCTG"),
            ("ACCGACTG", "ACATεCTG"),
        ],
    ),
    (0, 2, &[("ACCGACTG", "ACCGTCεA"), ("ACCGACTG", "ACCGTCAε")]),
    (0, 3, &[("ACCGACTG", "AεCTACTG"), ("ACCGACTG", "ACTεACTG")]),
    (
        1,
        2,
        &[
            ("AεCATCTG", "ACCGTCεA"),
            ("ACAεTCTG", "ACCGTCεA"),
            ("AεCATCTG", "ACCGTCAε"),
            ("ACAεTCTG", "ACCGTCAε"),
        ],
    ),
    (
        1,
        3,
        &[
            ("ACATCTG", "ACTACTG"),
            ("ACATεCTG", "ACεTACTG"),
            ("ACεATCTG", "ACTAεCTG"),
        ],
    ),
    (
        2,
        3,
        &[
            ("ACCGTCA", "ACTACTG"),
            ("ACCGTCεA", "AεCTACTG"),
            ("ACCGTCεA", "ACTεACTG"),
            ("ACCGTεCεA", "AεCεTACTG"),
            ("ACCGTCεA", "ACTAεCTG"),
            ("ACεCGTCA", "ACTACTεG"),
            ("ACCεGTCA", "ACTACTεG"),
            ("ACCGεTCA", "ACTACTεG"),
            ("ACεεCGTCA", "ACTACεTεG"),
            ("ACCGTCAε", "AεCTACTG"),
            ("ACCGTCAε", "ACTεACTG"),
            ("ACCGTεCAε", "AεCεTACTG"),
            ("ACCGTCAε", "ACTAεCTG"),
            ("ACεCGTCA", "ACTACTGε"),
            ("ACCεGTCA", "ACTACTGε"),
            ("ACCGεTCA", "ACTACTGε"),
            ("ACεεCGTCA", "ACTACεTGε"),
        ],
    ),
];

fn ensure(ok: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn functor(mode: HubMode) -> AlignmentFunctor {
    let spec = AlignmentSpec::boolean(&["a", "b", "c", "d"]).unwrap();
    let level = spec.omega().element("[1111]").unwrap();
    let seqs: Vec<Vec<u8>> = SEQUENCES.iter().map(|s| s.as_bytes().to_vec()).collect();
    let pairs = align_all_pairs(&seqs, Mode::Global);
    let policy = BuildPolicy {
        objects: None,
        hub_mode: mode,
    };
    build_from_pairwise(&spec, &PointedAlphabet::dna(), level, &seqs, &pairs, &policy).unwrap()
}

fn seg(o: &Arc<Preorder>, text: &str) -> Segment {
    Segment::parse(o, text).unwrap()
}

fn qh(a: &Segment, b: &Segment) -> SegmentMorphism {
    quasi_homologous_morphism(a, b).unwrap().unwrap()
}

fn dp_table() -> Check {
    let t = build_table(b"ACCGACTG", b"ACATCTG", Mode::Global);
    let expected: [[u32; 9]; 8] = [
        [0, 1, 2, 3, 4, 5, 6, 7, 8],
        [1, 0, 1, 2, 3, 4, 5, 6, 7],
        [2, 1, 0, 1, 2, 3, 4, 5, 6],
        [3, 2, 1, 1, 2, 2, 3, 4, 5],
        [4, 3, 2, 2, 2, 3, 3, 3, 4],
        [5, 4, 3, 2, 3, 3, 3, 4, 4],
        [6, 5, 4, 3, 3, 4, 4, 3, 4],
        [7, 6, 5, 4, 3, 4, 5, 4, 3],
    ];
    ensure(t.cells().len() == 8, "table has the wrong number of rows")?;
    for (r, (row, exp)) in t.cells().iter().zip(expected.iter()).enumerate() {
        ensure(row.as_slice() == exp.as_slice(), format!("row {r} is {row:?}"))?;
    }
    ensure(t.corner() == 3, format!("corner {}", t.corner()))?;
    Ok("72 cells match, corner 3".to_string())
}

fn tracebacks() -> Check {
    let pairs = align_all_pairs(&SEQUENCES, Mode::Global);
    ensure(pairs.len() == 6, "six pairs expected")?;
    let mut total = 0;
    for (p, (i, j, rows)) in pairs.iter().zip(TABLE) {
        ensure((p.first, p.second) == (i, j), "pair order")?;
        let got: BTreeSet<(String, String)> = p.alignments.iter().map(|a| a.render("ε")).collect();
        let want: BTreeSet<(String, String)> = rows.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
        ensure(
            got.len() == p.alignments.len(),
            format!("duplicate alignments for pair {i}/{j}"),
        )?;
        ensure(got == want, format!("pair {i}/{j} differs"))?;
        total += got.len();
    }
    ensure(pairs[0].alignments.len() == 4, "Anne/Bob count")?;
    let by_len: Vec<(usize, usize)> = pairs[5].by_length().iter().map(|(n, v)| (*n, v.len())).collect();
    ensure(
        by_len == [(7, 1), (8, 12), (9, 4)],
        format!("Craig/Doug lengths {by_len:?}"),
    )?;
    let f = functor(HubMode::Full);
    let k = f.base().index_of(&seg(f.spec().omega(), "(!8,[0011])")).unwrap();
    let twelve = f.image(k).finite().map_or(0, <[AlignedTuple]>::len);
    ensure(twelve == 12, format!("T(!8,[0011]) has {twelve} tuples"))?;
    Ok(format!("{total} alignments over 6 pairs, Craig/Doug 1/12/4"))
}

fn morphism_counts() -> Check {
    let o = AlignmentSpec::boolean(&["a", "b", "c", "d"]).unwrap().omega().clone();
    let count = |a: &str, b: &str| enumerate_morphisms(&seg(&o, a), &seg(&o, b)).unwrap().len();
    let first = count("(!8,[1100])", "(!9,[1100])");
    let second = count("(!8,[1011])", "(!9,[0011])");
    ensure(first == 9 && second == 9, format!("counts {first} and {second}"))?;
    Ok("9 and 9".to_string())
}

fn kan_extension() -> Check {
    let f = functor(HubMode::Full);
    let o = f.spec().omega().clone();
    let opts = LimitOptions::default();
    let v = ran_eval(&f, &seg(&o, "(!8,[1100])"), &opts).map_err(|e| e.to_string())?;
    ensure(
        v.reduced_cardinality() == 3,
        format!("Ran at [1100] is {}", v.reduced_cardinality()),
    )?;
    let apex = seg(&o, "(!8,[1110])");
    let names = [
        "(!8,[1010])",
        "(!8,[0110])",
        "(!8,[1100])",
        "(!8,[0010])",
        "(!8,[1000])",
        "(!8,[0100])",
    ];
    let nodes: Vec<Segment> = names.iter().map(|n| seg(&o, n)).collect();
    let pairs = [(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5)];
    let d = SegmentDiagram {
        apex: apex.clone(),
        edges: pairs.iter().map(|&(a, b)| (a, b, qh(&nodes[a], &nodes[b]))).collect(),
        legs: nodes.iter().map(|n| qh(&apex, n)).collect(),
        nodes,
    };
    let a = kan_canonical_arrow(&f, &d, &opts).map_err(|e| e.to_string())?;
    let apex_size = a.source.reduced_cardinality();
    ensure(
        apex_size == 4 && a.target_size == 4,
        format!("Ran at [1110] {apex_size}, limit {}", a.target_size),
    )?;
    ensure(
        a.classification == Classification::Bijective,
        format!("canonical arrow {}", a.classification.as_str()),
    )?;
    let h = qh(&apex, &seg(&o, "(!8,[1010])"));
    let proj = ran_on_morphism(&f, &h, &opts)
        .and_then(|m| m.classify(&opts))
        .map_err(|e| e.to_string())?;
    ensure(proj.is_surjective(), format!("projection {}", proj.as_str()))?;
    let apex = seg(&o, "(!8,[1011])");
    let names = ["(!8,[1010])", "(!8,[1001])", "(!8,[1000])"];
    let nodes: Vec<Segment> = names.iter().map(|n| seg(&o, n)).collect();
    let d = SegmentDiagram {
        apex: apex.clone(),
        edges: vec![(0, 2, qh(&nodes[0], &nodes[2])), (1, 2, qh(&nodes[1], &nodes[2]))],
        legs: nodes.iter().map(|n| qh(&apex, n)).collect(),
        nodes,
    };
    let a = kan_canonical_arrow(&f, &d, &opts).map_err(|e| e.to_string())?;
    ensure(
        a.classification == Classification::SurjectiveOnly,
        format!("arrow at [1011] {}", a.classification.as_str()),
    )?;
    Ok(format!(
        "|Ran[1100]| = 3, |Ran[1110]| = 4 = limit, bijective, projection {}, arrow surjective_only",
        proj.as_str()
    ))
}

fn surjection() -> Check {
    let f = functor(HubMode::ReachableClosure);
    ensure(f.validate().is_empty(), "functor fails validation")?;
    let base = f.base();
    let o = f.spec().omega().clone();
    let ab = base.index_of(&seg(&o, "(!8,[1100])")).unwrap();
    let hub = base.index_of(&seg(&o, "(!8,[0100])")).unwrap();
    let bc = base.index_of(&seg(&o, "(!8,[0110])")).unwrap();
    let ac = seg(&o, "(!8,[1010])");
    let arrow = |src: usize| {
        let m = qh(&base.objects()[src], &base.objects()[hub]);
        f.arrow(base.morphism_index(&m).unwrap()).unwrap()
    };
    let size = |k: usize| f.image(k).finite().unwrap().len();
    let edges = [
        Edge {
            src: 0,
            dst: 1,
            map: arrow(ab),
        },
        Edge {
            src: 2,
            dst: 1,
            map: arrow(bc),
        },
    ];
    let lim =
        limit_of(&[size(ab), size(hub), size(bc)], &edges, &LimitOptions::default()).map_err(|e| e.to_string())?;
    ensure(lim.len() == 4, format!("pullback has {} elements", lim.len()))?;
    let target = f.image(base.index_of(&ac).unwrap()).finite().unwrap().to_vec();
    ensure(target.len() == 2, format!("T(!8,[1010]) has {} elements", target.len()))?;
    let spec = f.spec();
    let mut map = Vec::new();
    for t in lim.tuples() {
        let x = &f.image(ab).finite().unwrap()[t[0]];
        let y = &f.image(bc).finite().unwrap()[t[2]];
        let components = (0..spec.len())
            .map(|i| match i {
                0 => x.components()[0].clone(),
                2 => y.components()[2].clone(),
                _ => {
                    let s = push_colors(&spec.maps()[i], &ac).unwrap();
                    Word::new(s, spec.maps()[i].apply(f.level()), Vec::new()).unwrap()
                }
            })
            .collect();
        let z = AlignedTuple::new(spec, ac.clone(), f.level(), components).map_err(|e| e.to_string())?;
        map.push(
            target
                .iter()
                .position(|w| *w == z)
                .ok_or("glued pair outside T(!8,[1010])")?,
        );
    }
    let c = classify(&map, target.len());
    ensure(c.is_surjective(), format!("map is {}", c.as_str()))?;
    Ok(format!("4 -> 2, {}", c.as_str()))
}

fn example_cones(o: &Arc<Preorder>) -> Vec<SegCone> {
    let nodes = || {
        vec![
            seg(o, "(000)(11)(111)(0000)"),
            seg(o, "(000)(11)(000)(2222)"),
            seg(o, "(222)(11)(000)(0000)"),
            seg(o, "(000)(11)(000)(0000)"),
        ]
    };
    let edges = [(0, 3), (1, 3), (2, 3)];
    vec![
        SegCone::quasi_homologous(seg(o, "(222)(11)(222)(2222)"), nodes(), &edges).unwrap(),
        SegCone::quasi_homologous(seg(o, "(2)(2)(2)(11)(22)(2)(22)(22)"), nodes(), &edges).unwrap(),
        SegCone::quasi_homologous(
            seg(o, "(1)(11)(11)(11)(1)(111)(1)"),
            vec![seg(o, "(000)(11)(000)(1111)")],
            &[],
        )
        .unwrap(),
    ]
}

fn cone_classification() -> Check {
    let o = Arc::new(chain_preorder(3));
    let expected = [(1, 2), (1, 2), (0, 1)];
    for (k, (c, (d, i))) in example_cones(&o).iter().zip(expected).enumerate() {
        for b in 0..3 {
            let class = canonical_arrow(c, b).map_err(|e| e.to_string())?.classify();
            if b == d {
                ensure(
                    class == Classification::Bijective,
                    format!("cone {} at {b}: {}", k + 1, class.as_str()),
                )?;
            }
            if b == i {
                ensure(
                    class.is_injective(),
                    format!("cone {} at {b}: {}", k + 1, class.as_str()),
                )?;
            }
        }
    }
    Ok("exactly 1-distributive + 2-injective (twice), exactly 0-distributive + 1-injective".to_string())
}

fn random_apex(rng: &mut ChaCha8Rng, o: &Arc<Preorder>) -> Segment {
    let n = rng.random_range(1..=5);
    let mut topology = vec![0usize; n];
    for i in 1..n {
        topology[i] = topology[i - 1] + usize::from(rng.random_bool(0.5));
    }
    let colors = (0..=topology[n - 1]).map(|_| rng.random_range(0..o.len())).collect();
    Segment::new(o.clone(), topology, colors).unwrap()
}

fn random_node(rng: &mut ChaCha8Rng, apex: &Segment) -> Segment {
    let src = apex.topology();
    let mut topology = vec![0usize; src.len()];
    for i in 1..src.len() {
        let cut = src[i] != src[i - 1] && rng.random_bool(0.7);
        topology[i] = topology[i - 1] + usize::from(cut);
    }
    let colors = (0..=topology[src.len() - 1])
        .map(|p| {
            let floor = (0..src.len())
                .filter(|&i| topology[i] == p)
                .map(|i| apex.node_color(i))
                .min()
                .unwrap();
            rng.random_range(0..=floor)
        })
        .collect();
    Segment::new(apex.omega().clone(), topology, colors).unwrap()
}

fn random_cone(rng: &mut ChaCha8Rng, o: &Arc<Preorder>) -> SegCone {
    let apex = random_apex(rng, o);
    let k = rng.random_range(1..=3);
    let nodes: Vec<Segment> = (0..k).map(|_| random_node(rng, &apex)).collect();
    let legs = nodes.iter().map(|n| qh(&apex, n)).collect();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && rng.random_bool(0.4) {
                if let Some(m) = quasi_homologous_morphism(&nodes[a], &nodes[b]).unwrap() {
                    edges.push(ConeEdge {
                        src: a,
                        dst: b,
                        morphism: m,
                    });
                }
            }
        }
    }
    SegCone::new(apex, nodes, edges, legs).unwrap()
}

fn pedigrad_theorems() -> Check {
    let o = Arc::new(chain_preorder(3));
    let alphabet = PointedAlphabet::letters(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac0_57e5);
    let mut bijective = Vec::new();
    let mut injective = Vec::new();
    let mut drawn = 0;
    while bijective.len() < 200 || injective.len() < 200 {
        drawn += 1;
        ensure(drawn < 200_000, "sampler stalled")?;
        let cone = random_cone(&mut rng, &o);
        let b = rng.random_range(0..o.len());
        let class = canonical_arrow(&cone, b).map_err(|e| e.to_string())?.classify();
        if class == Classification::Bijective && bijective.len() < 200 {
            bijective.push((cone, b));
        } else if class == Classification::InjectiveOnly && injective.len() < 200 {
            injective.push((cone, b));
        }
    }
    let opts = LimitOptions::default();
    let run = |cones: &[(SegCone, usize)], mode: PedigradMode| -> std::result::Result<usize, String> {
        let failures: Vec<String> = cones
            .par_iter()
            .filter_map(|(c, b)| {
                let f = EnvironmentFunctor::new(alphabet.clone(), *b, 1 << 12);
                match check_cone(&f, c, mode, &opts) {
                    Ok(r) if r.passed && !r.structural => None,
                    Ok(r) => Some(format!(
                        "{} at {b}: {} (structural {})",
                        c.apex(),
                        r.classification.as_str(),
                        r.structural
                    )),
                    Err(e) => Some(e.to_string()),
                }
            })
            .collect();
        match failures.first() {
            None => Ok(cones.len()),
            Some(f) => Err(format!("{} counterexamples, first {f}", failures.len())),
        }
    };
    let nb = run(&bijective, PedigradMode::Bijective)?;
    let ni = run(&injective, PedigradMode::Surjective)?;
    Ok(format!(
        "{nb} bijective and {ni} surjective limit adjoints, 0 counterexamples ({drawn} cones drawn)"
    ))
}

fn slice_negative() -> Check {
    let f = functor(HubMode::Full);
    let tau = seg(f.spec().omega(), "(!8,[1011])");
    let s = slice_eval(&f, 2, &tau, &LimitOptions::default()).map_err(|e| e.to_string())?;
    let value = s.value();
    ensure(!value.is_empty(), "Kan value is empty")?;
    let render = |x: &AlignedTuple| -> Vec<String> {
        x.components()
            .iter()
            .map(|w| w.render_plain(f.alphabet(), true))
            .collect()
    };
    let comma = value.comma();
    let long: Vec<usize> = (0..comma.len())
        .filter(|&k| f.base().objects()[comma.objects()[k].target].n1() == 9)
        .collect();
    let short: Vec<usize> = (0..comma.len())
        .filter(|&k| f.base().objects()[comma.objects()[k].target].n1() == 8)
        .collect();
    ensure(long.len() == 9, format!("{} legs into length 9", long.len()))?;
    let mut target = None;
    let mut constant = 0u64;
    let mut lifted_constant = 0u64;
    value.for_each_element(|x| {
        let ys: Vec<AlignedTuple> = long.iter().map(|&k| value.value(x, k).unwrap().clone()).collect();
        if ys.iter().all(|y| *y == ys[0]) {
            constant += 1;
            if !s.lifts(x).is_empty() {
                lifted_constant += 1;
            }
            let mut l = vec![String::new(); f.spec().len()];
            for &k in &short {
                for (row, w) in l.iter_mut().zip(render(value.value(x, k).unwrap())) {
                    if !w.is_empty() {
                        *row = w;
                    }
                }
            }
            let y = render(&ys[0]);
            if l == ["ACCGACTG", "", "ACCGTCεA", "AεCTACTG"] && y == ["", "", "ACCGTεCεA", "AεCεTACTG"] {
                target = Some(x.to_vec());
            }
        }
        true
    });
    let x = target.ok_or("the distant gluing is not an element of the Kan value")?;
    ensure(s.lifts(&x).is_empty(), "the distant gluing lifts")?;
    ensure(
        constant > 0 && lifted_constant == 0,
        format!("{lifted_constant} of {constant} constant elements lift"),
    )?;
    Ok(format!(
        "|Ran| = {}, element without lift, 0 of {constant} constant elements lift, slice size {}",
        value.cardinality(),
        s.elements().len()
    ))
}

fn duplication(other: &str, rows: Option<[[&str; 2]; 2]>) -> (AlignmentFunctor, Segment) {
    let spec = AlignmentSpec::boolean(&["c", "o"]).unwrap();
    let o = spec.omega().clone();
    let level = o.element("[11]").unwrap();
    let node = seg(&o, "([11][11])([11])([11])([11][11][11][11])");
    let tau = seg(&o, "([11][11])([11])([11][11][11][11])");
    let dna = PointedAlphabet::dna();
    let f = match rows {
        None => {
            let seqs = vec![b"ACGGTCA".to_vec(), other.as_bytes().to_vec()];
            let pairs = align_all_pairs(&seqs, Mode::Global);
            let policy = BuildPolicy {
                objects: Some(vec![node]),
                hub_mode: HubMode::Full,
            };
            build_from_pairwise(&spec, &dna, level, &seqs, &pairs, &policy).unwrap()
        }
        Some(rows) => {
            let tuples = rows
                .iter()
                .map(|r| AlignedTuple::from_rows(&spec, &dna, &node, level, r).unwrap())
                .collect();
            let base = BaseCategory::full_quasi_homologous(vec![node]).unwrap();
            AlignmentFunctor::new(base, spec, dna, level, vec![ObjectImage::Finite(tuples)]).unwrap()
        }
    };
    (f, tau)
}

fn mechanisms() -> Check {
    let opts = LimitOptions::default();
    let rows = [["ACεGGTCA", "ACGGGTCA"], ["ACGεGTCA", "ACGGGTCA"]];
    let (f, tau) = duplication("ACGGGTCA", Some(rows));
    let hits = detect_mechanisms(&f, 0, &tau, &[MechanismTemplate::duplication()], &opts).map_err(|e| e.to_string())?;
    ensure(hits.len() == 1, format!("{} duplication hits", hits.len()))?;
    ensure(!hits[0].witness.is_empty(), "duplication without witness")?;
    let z = hits[0].z.render_plain(f.alphabet(), true);
    ensure(
        hits[0].block_start == 2 && z == "ACGGTCA",
        format!("duplication at {} with {z}", hits[0].block_start),
    )?;
    let (g, tau) = duplication("ACGTGTCA", None);
    let none = detect_mechanisms(&g, 0, &tau, &[MechanismTemplate::duplication()], &opts).map_err(|e| e.to_string())?;
    ensure(none.is_empty(), format!("{} hits on the substitution", none.len()))?;
    let spec = AlignmentSpec::chain(&["c", "o"], 3).unwrap();
    let o = spec.omega().clone();
    let level = o.element("[11]").unwrap();
    let dna = PointedAlphabet::dna();
    let tau = seg(&o, "([11][11])([11])([11])([11])([11][11][11][11])");
    let shapes = [
        "([11][11])([22])([22])([11])([11])([11])([11][11][11][11])",
        "([11][11])([11])([22])([11])([22])([11])([11][11][11][11])",
        "([11][11])([11])([11])([11])([22])([22])([11][11][11][11])",
    ];
    let rows = [
        ["ACεεACGGTCA", "ACGCAεεGTCA"],
        ["ACAεCεGGTCA", "ACεGCAεGTCA"],
        ["ACACGεεGTCA", "ACεεGCAGTCA"],
    ];
    let nodes: Vec<Segment> = shapes.iter().map(|s| seg(&o, s)).collect();
    let images = nodes
        .iter()
        .zip(rows)
        .map(|(s, r)| ObjectImage::Finite(vec![AlignedTuple::from_rows(&spec, &dna, s, level, &r).unwrap()]))
        .collect();
    let base = BaseCategory::full_quasi_homologous(nodes).map_err(|e| e.to_string())?;
    let h = AlignmentFunctor::new(base, spec, dna, level, images).map_err(|e| e.to_string())?;
    let inv = detect_mechanisms(&h, 0, &tau, &[MechanismTemplate::inversion()], &opts).map_err(|e| e.to_string())?;
    ensure(inv.len() == 1, format!("{} inversion hits", inv.len()))?;
    let zi = inv[0].z.render_plain(h.alphabet(), true);
    Ok(format!(
        "duplication at block {} (z {z}), substitution 0 hits, inversion at block {} (z {zi})",
        hits[0].block_start, inv[0].block_start
    ))
}

struct Diagram {
    sizes: Vec<usize>,
    edges: Vec<Edge>,
}

fn random_diagram(rng: &mut ChaCha8Rng) -> Diagram {
    let n = rng.random_range(1..=4);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(0..=6)).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && (sizes[b] > 0 || sizes[a] == 0))
        .collect();
    let count = if pairs.is_empty() { 0 } else { rng.random_range(0..=4) };
    let edges = (0..count)
        .map(|_| {
            let (src, dst) = pairs[rng.random_range(0..pairs.len())];
            let map = (0..sizes[src])
                .map(|_| rng.random_range(0..sizes[dst].max(1)))
                .collect();
            Edge { src, dst, map }
        })
        .collect();
    Diagram { sizes, edges }
}

fn product_filter(d: &Diagram) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d.sizes.contains(&0) {
        return out;
    }
    let mut t = vec![0usize; d.sizes.len()];
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

fn union_find(d: &Diagram) -> Vec<Vec<(usize, usize)>> {
    let offsets: Vec<usize> = d
        .sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total: usize = d.sizes.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in &d.edges {
        for (x, &y) in e.map.iter().enumerate() {
            let (a, b) = (
                find(&mut parent, offsets[e.src] + x),
                find(&mut parent, offsets[e.dst] + y),
            );
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
    }
    let mut classes: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for (n, &s) in d.sizes.iter().enumerate() {
        for x in 0..s {
            let r = find(&mut parent, offsets[n] + x);
            match classes.iter_mut().find(|(root, _)| *root == r) {
                Some((_, c)) => c.push((n, x)),
                None => classes.push((r, vec![(n, x)])),
            }
        }
    }
    classes.into_iter().map(|(_, c)| c).collect()
}

fn check_diagram(d: &Diagram) -> std::result::Result<(), String> {
    let expected = product_filter(d);
    let exhaustive = limit_of(&d.sizes, &d.edges, &LimitOptions::default()).map_err(|e| e.to_string())?;
    let searched = limit_of(
        &d.sizes,
        &d.edges,
        &LimitOptions {
            product_cap: 0,
            result_cap: 1 << 20,
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(exhaustive.tuples() == expected.as_slice(), "exhaustive limit differs")?;
    ensure(searched.tuples() == expected.as_slice(), "backtracking limit differs")?;
    let c = colimit_of(&d.sizes, &d.edges);
    ensure(c.classes() == union_find(d).as_slice(), "colimit differs")?;
    for (k, class) in c.classes().iter().enumerate() {
        ensure(
            class.iter().all(|&(n, x)| c.injections()[n][x] == k),
            "colimit injection differs",
        )?;
    }
    let legs: Vec<Vec<usize>> = (0..d.sizes.len()).map(|n| exhaustive.projection(n)).collect();
    let adjoint = limit_adjoint(&d.sizes, &d.edges, &exhaustive, exhaustive.len(), &legs).map_err(|e| e.to_string())?;
    ensure(
        adjoint == (0..exhaustive.len()).collect::<Vec<_>>(),
        "limit adjoint of the limit is not the identity",
    )
}

fn orders() -> Vec<Arc<Preorder>> {
    vec![
        Arc::new(chain_preorder(2)),
        Arc::new(chain_preorder(3)),
        Arc::new(
            Preorder::from_pairs(
                &["x", "y", "z"],
                &[("x", "x"), ("y", "y"), ("z", "z"), ("x", "y"), ("x", "z")],
            )
            .unwrap(),
        ),
        Arc::new(Preorder::from_pairs(&["p", "q"], &[("p", "p"), ("q", "q"), ("p", "q"), ("q", "p")]).unwrap()),
    ]
}

fn segments(o: &Arc<Preorder>, max_len: usize) -> Vec<Segment> {
    let mut out = Vec::new();
    for n in 0..=max_len {
        for cuts in 0u32..(1 << n.saturating_sub(1)) {
            let mut topology = vec![0usize; n];
            for i in 1..n {
                topology[i] = topology[i - 1] + usize::from(cuts & (1 << (i - 1)) != 0);
            }
            let patches = topology.last().map_or(0, |&p| p + 1);
            let mut colors = vec![0usize; patches];
            loop {
                out.push(Segment::new(o.clone(), topology.clone(), colors.clone()).unwrap());
                let Some(k) = (0..patches).rev().find(|&k| colors[k] + 1 < o.len()) else {
                    break;
                };
                colors[k] += 1;
                for c in colors.iter_mut().skip(k + 1) {
                    *c = 0;
                }
            }
        }
    }
    out
}

struct Homs {
    segs: Vec<Segment>,
    homs: Vec<Vec<Vec<SegmentMorphism>>>,
}

impl Homs {
    fn new(o: &Arc<Preorder>, max_len: usize) -> Self {
        let segs = segments(o, max_len);
        let homs = segs
            .iter()
            .map(|a| segs.iter().map(|b| enumerate_morphisms(a, b).unwrap()).collect())
            .collect();
        Self { segs, homs }
    }

    fn composable(&self) -> Vec<(&SegmentMorphism, &SegmentMorphism)> {
        let n = self.segs.len();
        let mut out = Vec::new();
        for b in 0..n {
            for a in 0..n {
                for f in &self.homs[a][b] {
                    for c in 0..n {
                        for g in &self.homs[b][c] {
                            out.push((f, g));
                        }
                    }
                }
            }
        }
        out
    }
}

fn laws_hold(o: &Arc<Preorder>) -> std::result::Result<usize, String> {
    let h = Homs::new(o, 4);
    let pairs = h.composable();
    let alphabet = PointedAlphabet::letters(1);
    let bad = pairs.par_iter().find_map_any(|&(f, g)| {
        let gf = g.after(f).ok()?;
        if !gf.is_valid()
            || SegmentMorphism::identity(g.dst()).after(&gf).ok()? != gf
            || gf.after(&SegmentMorphism::identity(f.src())).ok()? != gf
        {
            return Some("segment composition".to_string());
        }
        for b in 0..o.len() {
            let lhs = truncate_morphism(&gf, b).ok()?;
            let rhs = truncate_morphism(f, b)
                .ok()?
                .after(&truncate_morphism(g, b).ok()?)
                .ok()?;
            if lhs != rhs {
                return Some("truncation".to_string());
            }
            for w in enumerate_words(f.src(), b, &alphabet).ok()? {
                let direct = word_image(&gf, &w, &alphabet).ok()?;
                let stepped = word_image(g, &word_image(f, &w, &alphabet).ok()?, &alphabet).ok()?;
                if direct != stepped {
                    return Some("words".to_string());
                }
            }
        }
        None
    });
    if let Some(what) = bad {
        return Err(format!("{what} fails over {:?}", o.elements()));
    }
    for s in &h.segs {
        let id = SegmentMorphism::identity(s);
        for b in 0..o.len() {
            let t = truncate_morphism(&id, b).map_err(|e| e.to_string())?;
            let fixed = t
                .mapping()
                .iter()
                .enumerate()
                .all(|(r, p)| *p == Pointed::At(t.dom().indices()[r]));
            ensure(fixed, "truncation of an identity")?;
            for w in enumerate_words(s, b, &alphabet).map_err(|e| e.to_string())? {
                ensure(
                    word_image(&id, &w, &alphabet).map_err(|e| e.to_string())? == w,
                    "word identity",
                )?;
            }
        }
    }
    Ok(pairs.len())
}

fn associativity_and_pushforward() -> std::result::Result<(), String> {
    let o = Arc::new(chain_preorder(3));
    let h = Homs::new(&o, 3);
    for (f, g) in h.composable() {
        let gf = g.after(f).map_err(|e| e.to_string())?;
        let d = h.segs.iter().position(|s| s == g.dst()).unwrap();
        for k in h.homs[d].iter().flatten() {
            let stepped = k.after(g).and_then(|kg| kg.after(f)).map_err(|e| e.to_string())?;
            ensure(k.after(&gf).map_err(|e| e.to_string())? == stepped, "associativity")?;
        }
    }
    let two = Arc::new(chain_preorder(2));
    let h = Homs::new(&o, 4);
    let pairs = h.composable();
    for table in [vec![0, 0, 1], vec![0, 1, 1], vec![0, 0, 0], vec![1, 1, 1]] {
        let m = MonotoneMap::new(o.clone(), two.clone(), table).map_err(|e| e.to_string())?;
        let bad = pairs.par_iter().any(|&(f, g)| {
            let lhs = push_colors_morphism(&m, &g.after(f).unwrap()).unwrap();
            let rhs = push_colors_morphism(&m, g)
                .unwrap()
                .after(&push_colors_morphism(&m, f).unwrap())
                .unwrap();
            lhs != rhs
        });
        ensure(!bad, "color pushforward composition")?;
        for s in &h.segs {
            let id = push_colors_morphism(&m, &SegmentMorphism::identity(s)).map_err(|e| e.to_string())?;
            ensure(id == SegmentMorphism::identity(id.src()), "color pushforward identity")?;
        }
    }
    Ok(())
}

fn engine_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x011a_17e5);
    let diagrams: Vec<Diagram> = (0..500).map(|_| random_diagram(&mut rng)).collect();
    let failures: Vec<String> = diagrams.par_iter().filter_map(|d| check_diagram(d).err()).collect();
    if let Some(f) = failures.first() {
        return Err(format!("{} of 500 diagrams disagree, first: {f}", failures.len()));
    }
    let mut pairs = 0;
    for o in orders() {
        pairs += laws_hold(&o)?;
    }
    associativity_and_pushforward()?;
    Ok(format!(
        "500 diagrams agree; laws hold on {pairs} composable pairs with n1 <= 4"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("DP table reproduction", dp_table),
        ("traceback completeness", tracebacks),
        ("morphism counts", morphism_counts),
        ("Kan extension", kan_extension),
        ("pullback surjection", surjection),
        ("cone classification", cone_classification),
        ("pedigrad theorems", pedigrad_theorems),
        ("slice negative result", slice_negative),
        ("mechanism detection", mechanisms),
        ("engine oracles and functor laws", engine_oracles),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        10 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
