use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::select;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrl_core::affect::{AffectTables, DimensionPoint, EmotionSpec};
use rrl_core::document::InfoKind;
use rrl_core::fixtures::{eshowroom_resources, generate_random_scene, oracle, Bounds, AFFECT_TABLE};
use rrl_core::gesture::{schedule, viseme_track, Articulator, GestureCandidate, GestureClass, SchedulerConfig, Scope};
use rrl_core::io;
use rrl_core::network::{NodeId, Pattern, TypedNetwork};
use rrl_core::pipeline::{run, RunOptions};
use rrl_core::prosody::{assign_prosody, synthesize_timing};
use rrl_core::realizer::minimal_document;
use rrl_core::scene::{Act, ConditionSpec, DialogueActSpec, Scene, SceneBuilder, Term};
use rrl_core::temporal::{Relation, TemporalStatement, TemporalStore};

fn scene(seed: u64) -> Scene {
    generate_random_scene(seed, Bounds::default())
}

fn scan(net: &TypedNetwork, p: &Pattern) -> Vec<NodeId> {
    let mut out = Vec::new();
    for n in net.nodes() {
        if p.type_label.as_ref().is_some_and(|t| *t != n.type_label) {
            continue;
        }
        if p.constraints.iter().all(|(a, v)| net.arcs().any(|arc| arc.from == n.id && arc.attr == *a && arc.to == *v)) {
            out.push(n.id.clone());
        }
    }
    out
}

fn kinds(net: &TypedNetwork) -> Vec<String> {
    eshowroom_resources().tbox.validate(net).violations.iter().map(|v| v.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn query_matches_scan(seed in 0u64..10_000, pick in any::<prop::sample::Index>(), arc_pick in any::<prop::sample::Index>(), typed in any::<bool>()) {
        let net = scene(seed).into_network();
        let nodes: Vec<_> = net.nodes().cloned().collect();
        let arcs: Vec<_> = net.arcs().collect();
        let node = pick.get(&nodes);
        let mut p = if typed { Pattern::of_type(&node.type_label) } else { Pattern::default() };
        let arc = arc_pick.get(&arcs);
        p = p.with(&arc.attr, &arc.to);
        prop_assert_eq!(net.query(&p), scan(&net, &p));
        prop_assert_eq!(net.query(&p), oracle::query(&net, &p));
        prop_assert_eq!(net.query(&Pattern::of_type(&node.type_label)), scan(&net, &Pattern::of_type(&node.type_label)));
    }

    #[test]
    fn last_write_wins_and_stays_local(seed in 0u64..10_000, ops in prop::collection::vec((any::<prop::sample::Index>(), select(vec!["p", "q"]), any::<prop::sample::Index>()), 1..12)) {
        let mut net = scene(seed).into_network();
        let before = net.clone();
        let ids: Vec<NodeId> = net.nodes().map(|n| n.id.clone()).collect();
        let mut touched = BTreeSet::new();
        for (from, attr, to) in &ops {
            let (from, to) = (from.get(&ids), to.get(&ids));
            net.set_attribute(from, attr, to).unwrap();
            prop_assert_eq!(net.attribute(from, attr), Some(to));
            touched.insert((from.clone(), attr.to_string()));
        }
        prop_assert_eq!(net.len(), before.len());
        for n in before.nodes() {
            prop_assert_eq!(net.node(&n.id), Some(n));
        }
        for arc in before.arcs() {
            if !touched.contains(&(arc.from.clone(), arc.attr.clone())) {
                prop_assert_eq!(net.attribute(&arc.from, &arc.attr), Some(&arc.to));
            }
        }
    }

    #[test]
    fn validation_ignores_insertion_order(seed in 0u64..10_000, shuffle in any::<u64>(), drop_arc in any::<prop::sample::Index>()) {
        let mut net = scene(seed).into_network();
        let arcs: Vec<_> = net.arcs().collect();
        let victim = drop_arc.get(&arcs);
        net.remove_attribute(&victim.from, &victim.attr);
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        let mut nodes: Vec<_> = net.nodes().cloned().collect();
        let mut arcs: Vec<_> = net.arcs().collect();
        nodes.shuffle(&mut rng);
        arcs.shuffle(&mut rng);
        let mut other = TypedNetwork::new();
        for n in nodes {
            other.insert_node(n).unwrap();
        }
        for a in arcs {
            other.set_attribute(&a.from, &a.attr, &a.to).unwrap();
        }
        let got = kinds(&other);
        prop_assert_eq!(&got, &kinds(&net));
        prop_assert!(got.len() <= 1);
    }

    #[test]
    fn scene_io_is_canonical(seed in 0u64..100_000) {
        let net = scene(seed).into_network();
        let text = io::write_scene(&net);
        prop_assert_eq!(&io::write_scene(&net), &text);
        let back = io::read_scene(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(io::write_scene(&back), text);
    }
}

fn random_store(n: usize, raw: &[(usize, usize, bool)]) -> (Vec<NodeId>, Vec<TemporalStatement>, TemporalStore) {
    let acts: Vec<NodeId> = (1..=n).map(|i| NodeId::new(format!("v{i}"))).collect();
    let mut store = TemporalStore::new(acts.iter().cloned());
    let mut stmts = Vec::new();
    for &(a, b, before) in raw {
        let (a, b) = (a % n, b % n);
        if a == b {
            continue;
        }
        let relation = if before { Relation::Before } else { Relation::Simultaneous };
        store.add(relation, &acts[a], &acts[b]).unwrap();
        stmts.push(TemporalStatement { relation, a: acts[a].clone(), b: acts[b].clone() });
    }
    (acts, stmts, store)
}

fn satisfies(lin: &[Vec<NodeId>], s: &TemporalStatement) -> bool {
    let slot = |id: &NodeId| lin.iter().position(|class| class.contains(id)).unwrap();
    match s.relation {
        Relation::Before => slot(&s.a) < slot(&s.b),
        Relation::Simultaneous => slot(&s.a) == slot(&s.b),
    }
}

proptest! {
    #[test]
    fn consistency_matches_oracle(n in 1usize..=6, raw in prop::collection::vec((0usize..6, 0usize..6, any::<bool>()), 0..8)) {
        let (acts, stmts, store) = random_store(n, &raw);
        prop_assert_eq!(store.is_consistent(), oracle::consistent(&acts, &stmts));
    }

    #[test]
    fn linearizations_satisfy_and_shrink(n in 1usize..=5, raw in prop::collection::vec((0usize..5, 0usize..5, any::<bool>()), 0..6), extra in (0usize..5, 0usize..5, any::<bool>())) {
        let (_, stmts, store) = random_store(n, &raw);
        prop_assume!(store.is_consistent());
        let lins = store.linearizations(usize::MAX).unwrap();
        for lin in &lins {
            prop_assert_eq!(lin.iter().map(Vec::len).sum::<usize>(), n);
            for s in &stmts {
                prop_assert!(satisfies(lin, s), "{:?} violates {}", lin, s);
            }
        }
        let mut more = raw.clone();
        more.push(extra);
        let (_, _, bigger) = random_store(n, &more);
        let count = bigger.linearizations(usize::MAX).map_or(0, |l| l.len());
        prop_assert!(count <= lins.len());
    }

    #[test]
    fn dimensions_are_homogeneous(row in any::<prop::sample::Index>(), k in 0.0f64..=1.0, i in 0.0f64..=1.0) {
        let tables = eshowroom_resources().tables;
        let label = &row.get(tables.occ()).label;
        let at = |x: f64| tables.to_dimensions(&EmotionSpec::new(label, x)).unwrap();
        let (lhs, rhs) = (at(k * i), at(i).scaled(k));
        let tol = 1e-12;
        prop_assert!((lhs.valence - rhs.valence).abs() < tol && (lhs.arousal - rhs.arousal).abs() < tol);
        prop_assert!(lhs.in_bounds());
    }

    #[test]
    fn basic_category_survives_table_scaling(row in any::<prop::sample::Index>(), i in 0.0f64..=1.0, shift in 1i32..=4) {
        let k = 0.5f64.powi(shift);
        let scaled: AffectTables = scale_table(AFFECT_TABLE, k).parse().unwrap();
        let tables = eshowroom_resources().tables;
        let spec = EmotionSpec::new(&row.get(tables.occ()).label, i);
        prop_assert_eq!(tables.to_basic_category(&spec).unwrap(), scaled.to_basic_category(&spec).unwrap());
    }
}

// Multiply every coordinate column of an affect table by `k`.
fn scale_table(text: &str, k: f64) -> String {
    text.lines()
        .map(|line| {
            let cols: Vec<&str> = line.split('|').collect();
            if cols.len() < 6 {
                return line.to_string();
            }
            let mut out: Vec<String> = cols.iter().map(|c| c.to_string()).collect();
            for c in &mut out[1..4] {
                if let Ok(x) = c.trim().parse::<f64>() {
                    *c = format!(" {} ", x * k);
                }
            }
            out.join("|")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn inform_scene(grounded: bool, emotion: Option<(&str, f64)>) -> (Scene, NodeId) {
    let mut b = SceneBuilder::new();
    let seller = b.person("seller");
    let buyer = b.person("buyer");
    let cg_refs: &[(&str, &str)] = if grounded { &[("x", "car")] } else { &[] };
    let cg_conds: Vec<ConditionSpec> =
        if grounded { vec![ConditionSpec::new("car", vec![Term::Local("x".into())])] } else { vec![] };
    let cg = b.common_ground(cg_refs, &cg_conds).unwrap();
    let hp = b.network_mut().constant("horsepower", "80hp");
    let (car_term, referents) = match cg.referent("x") {
        Some(x) => (Term::Node(x.clone()), vec![]),
        None => (Term::Local("y".into()), vec![("y", "car")]),
    };
    let grounded_car = cg.referent("x").cloned();
    let spec_emotion = emotion.map(|(c, i)| EmotionSpec { cause: grounded_car.clone(), ..EmotionSpec::new(c, i) });
    let (act, _) = b
        .dialogue_act(DialogueActSpec {
            act_type: "inform",
            speaker: seller,
            addressees: vec![buyer],
            referents,
            conditions: vec![ConditionSpec::new("have", vec![car_term, Term::Node(hp)])],
            response_to: None,
            emotion: spec_emotion,
        })
        .unwrap();
    (b.build(), act)
}

fn realize(scene: &Scene, act: &NodeId) -> Vec<String> {
    let res = eshowroom_resources();
    let da = scene.dialogue_act(act).unwrap();
    let doc = res.realizer.realize_act(scene, &da, "u1", &res.tables).unwrap();
    doc.words.iter().map(|w| w.text.to_lowercase()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn article_definite_iff_grounded(grounded in any::<bool>()) {
        let (scene, act) = inform_scene(grounded, None);
        let words = realize(&scene, &act);
        prop_assert_eq!(words[0] == "the", grounded, "{:?}", words);
        prop_assert!(matches!(words[0].as_str(), "the" | "a"));
    }

    #[test]
    fn adjective_iff_threshold(row in any::<prop::sample::Index>(), step in 0u32..=20) {
        let res = eshowroom_resources();
        let label = row.get(res.tables.occ()).label.clone();
        let i = f64::from(step) / 20.0;
        let (plain_scene, plain_act) = inform_scene(true, None);
        let plain = realize(&plain_scene, &plain_act);
        let (scene, act) = inform_scene(true, Some((&label, i)));
        let words = realize(&scene, &act);
        let valence = res.tables.to_dimensions(&EmotionSpec::new(&label, i)).unwrap().valence;
        let (pos, neg) = res.realizer.templates.evaluative();
        let evaluative: Vec<&String> = pos.iter().chain(neg).collect();
        let inserted: Vec<usize> = (0..words.len()).filter(|&k| evaluative.contains(&&words[k])).collect();
        if valence.abs() > res.realizer.threshold {
            prop_assert_eq!(inserted.len(), 1);
            let mut without = words.clone();
            without.remove(inserted[0]);
            prop_assert_eq!(without, plain);
        } else {
            prop_assert_eq!(words, plain);
        }
    }

    #[test]
    fn realized_documents_are_covered(seed in 0u64..10_000) {
        let res = eshowroom_resources();
        let scene = scene(seed);
        for act in scene.history().unwrap().acts {
            let Ok(Act::Dialogue(da)) = scene.act(&act) else { continue };
            let doc = res.realizer.realize_act(&scene, &da, "u1", &res.tables).unwrap();
            let n = doc.words.len();
            let info = doc.info.as_ref().unwrap();
            let covered: usize = info.iter().filter(|s| matches!(s.kind, InfoKind::Theme | InfoKind::Rheme)).map(|s| s.end - s.start).sum();
            prop_assert_eq!(covered, n);
            prop_assert_eq!(doc.syntax.as_ref().unwrap().leaves(), (0..n).collect::<Vec<_>>());
            let text = io::write_synthesis(&doc);
            prop_assert_eq!(io::write_synthesis(&io::read_synthesis(&text).unwrap()), text);
        }
    }
}

const WORDS: [&str; 14] =
    ["the", "car", "has", "80", "hp", "motor", "wonderful", "how", "much", "power", "price", "yes", "it", "a"];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec((select(WORDS.to_vec()), select(vec!["", "", "", " ,", " .", " ?"])), 1..16)
        .prop_map(|ws| ws.into_iter().map(|(w, p)| format!("{w}{p}")).collect::<Vec<_>>().join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn minimal_documents_round_trip(text in sentence()) {
        let doc = minimal_document(&text, NodeId::new("v1"), DimensionPoint::ORIGIN).unwrap();
        let xml = io::write_synthesis(&doc);
        let back = io::read_synthesis(&xml).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(io::write_synthesis(&back), xml);
    }

    #[test]
    fn timing_is_deterministic_and_stressed_vowels_unique(text in sentence()) {
        let res = eshowroom_resources();
        let mut doc = minimal_document(&text, NodeId::new("v1"), DimensionPoint::ORIGIN).unwrap();
        assign_prosody(&mut doc);
        let a = synthesize_timing(&doc, &res.config.durations, &res.lexicon);
        let b = synthesize_timing(&doc, &res.config.durations, &res.lexicon);
        prop_assert_eq!(io::write_timing(&a), io::write_timing(&b));
        a.check().unwrap();
        for s in a.syllables.iter().filter(|s| s.stressed) {
            let n = a.phones[s.start..s.end].iter().filter(|p| p.vowel && p.stressed).count();
            prop_assert_eq!(n, 1);
        }
    }

    #[test]
    fn schedules_never_overlap_and_visemes_cover(text in sentence(), raw in prop::collection::vec((0usize..7, 0i32..5, 0usize..3, 0usize..8, 0usize..6, 0usize..6), 0..10)) {
        let res = eshowroom_resources();
        let mut doc = minimal_document(&text, NodeId::new("v1"), DimensionPoint::ORIGIN).unwrap();
        assign_prosody(&mut doc);
        let track = synthesize_timing(&doc, &res.config.durations, &res.lexicon);
        const CLASSES: [GestureClass; 7] = [
            GestureClass::Emblematic, GestureClass::Iconic, GestureClass::Deictic, GestureClass::Contrast,
            GestureClass::TurnAccompanying, GestureClass::Emotional, GestureClass::Backchannel,
        ];
        const ARTS: [Articulator; 6] = [
            Articulator::Brows, Articulator::Gaze, Articulator::Head,
            Articulator::ArmLeft, Articulator::ArmRight, Articulator::Posture,
        ];
        let cands: Vec<GestureCandidate> = raw
            .iter()
            .map(|&(c, prio, sk, si, a1, a2)| {
                let scope = match sk {
                    0 => Scope::Act,
                    1 => Scope::Phrase(si % (track.phrases.len() + 1)),
                    _ => Scope::Word(si % (track.words.len() + 1)),
                };
                let arts: Vec<Articulator> = [ARTS[a1], ARTS[a2]].into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                GestureCandidate::new(CLASSES[c], "g", prio, scope, &arts)
            })
            .collect();
        let sched = schedule(&cands, &track, &SchedulerConfig::default());
        for (i, g) in sched.gestures.iter().enumerate() {
            let (gs, ge) = g.span();
            prop_assert!(ge <= track.duration());
            for h in &sched.gestures[i + 1..] {
                let (hs, he) = h.span();
                let shared = g.articulators.iter().any(|a| h.articulators.contains(a));
                prop_assert!(!(shared && gs < he && hs < ge));
            }
        }
        let visemes = viseme_track(&track, &res.visemes).unwrap();
        let mut cursor: Vec<(u64, u64)> = track.phones.iter().map(|p| (p.start, p.end)).collect();
        cursor.dedup();
        let covered: u64 = visemes.iter().map(|v| v.end - v.start).sum();
        prop_assert_eq!(covered, cursor.iter().map(|(s, e)| e - s).sum::<u64>());
        for p in &track.phones {
            prop_assert!(visemes.iter().any(|v| v.start <= p.start && p.end <= v.end));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_scenes_run_end_to_end(seed in 0u64..100_000) {
        let res = eshowroom_resources();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.xml");
        std::fs::write(&path, io::write_scene(scene(seed).network())).unwrap();
        let art = run(&path, &res, &RunOptions::default()).unwrap();
        let t = art.timeline.unwrap();
        let text = io::write_timeline(&t);
        prop_assert_eq!(io::write_timeline(&io::read_timeline(&text).unwrap()), text);
    }
}
