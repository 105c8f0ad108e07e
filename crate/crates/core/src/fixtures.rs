//! The eShowRoom fixture, a seeded random scene generator and brute-force
//! reference implementations for tests.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affect::{AffectTables, EmotionSpec, NEUTRAL};
use crate::config::Config;
use crate::network::{NodeId, Pattern, TypedNetwork};
use crate::pipeline::Resources;
use crate::realizer::Realizer;
use crate::scene::{ConditionSpec, DialogueActSpec, Scene, SceneBuilder, Term};
use crate::temporal::{Relation, TemporalStatement};

pub const TBOX: &str = include_str!("../../../fixtures/eshowroom/eshowroom.tbox");
pub const AFFECT_TABLE: &str = include_str!("../../../fixtures/eshowroom/affect.table");
pub const LEXICON: &str = include_str!("../../../fixtures/eshowroom/lexicon.txt");
pub const TEMPLATES: &str = include_str!("../../../fixtures/eshowroom/templates.txt");
pub const VISEMES: &str = include_str!("../../../fixtures/eshowroom/visemes.txt");
pub const CONFIG: &str = include_str!("../../../fixtures/eshowroom/rrl.conf");

/// Resources of the eShowRoom fixture, from the copies compiled into the
/// library. Paths in the returned config point at `fixtures/eshowroom`.
pub fn eshowroom_resources() -> Resources {
    let config = Config::parse(CONFIG, Path::new("fixtures/eshowroom"), "rrl.conf").expect("fixture config");
    Resources {
        tbox: TBOX.parse().expect("fixture tbox"),
        tables: AFFECT_TABLE.parse().expect("fixture affect table"),
        lexicon: LEXICON.parse().expect("fixture lexicon"),
        visemes: VISEMES.parse().expect("fixture visemes"),
        realizer: Realizer::new(TEMPLATES.parse().expect("fixture templates"), config.evaluative_threshold),
        config,
    }
}

/// The car-sales scene with handles to its interesting nodes.
#[derive(Debug, Clone)]
pub struct EShowRoom {
    pub scene: Scene,
    pub seller: NodeId,
    pub buyer: NodeId,
    /// The car in common ground.
    pub car: NodeId,
    /// Seller offers information about the car's motor.
    pub ask: NodeId,
    /// Buyer's "yes", simultaneous with `question`.
    pub feedback: NodeId,
    /// Buyer asks how much horse power the car has.
    pub question: NodeId,
    /// Seller answers with joy caused by the car.
    pub inform: NodeId,
}

pub fn eshowroom() -> EShowRoom {
    let mut b = SceneBuilder::new();
    let seller = b.person("seller");
    let buyer = b.person("buyer");
    let cg = b
        .common_ground(&[("x", "car")], &[ConditionSpec::new("car", vec![Term::Local("x".into())])])
        .expect("common ground");
    let car = cg.referent("x").expect("x").clone();
    let x = || Term::Node(car.clone());

    let (ask, _) = b
        .dialogue_act(DialogueActSpec {
            act_type: "question",
            speaker: seller.clone(),
            addressees: vec![buyer.clone()],
            referents: vec![],
            conditions: vec![ConditionSpec::new("offerInfo", vec![x()])],
            response_to: None,
            emotion: None,
        })
        .expect("ask");
    let (feedback, _) = b
        .dialogue_act(DialogueActSpec {
            act_type: "positiveFeedback",
            speaker: buyer.clone(),
            addressees: vec![seller.clone()],
            referents: vec![],
            conditions: vec![],
            response_to: Some(ask.clone()),
            emotion: None,
        })
        .expect("feedback");
    let (question, _) = b
        .dialogue_act(DialogueActSpec {
            act_type: "question",
            speaker: buyer.clone(),
            addressees: vec![seller.clone()],
            referents: vec![("h", "horsepower")],
            conditions: vec![ConditionSpec::new("have", vec![x(), Term::Local("h".into())])],
            response_to: Some(ask.clone()),
            emotion: None,
        })
        .expect("question");
    let hp = b.network_mut().constant("horsepower", "80hp");
    let (inform, _) = b
        .dialogue_act(DialogueActSpec {
            act_type: "inform",
            speaker: seller.clone(),
            addressees: vec![buyer.clone()],
            referents: vec![],
            conditions: vec![ConditionSpec::new("have", vec![x(), Term::Node(hp)])],
            response_to: Some(question.clone()),
            emotion: Some(EmotionSpec { cause: Some(car.clone()), ..EmotionSpec::new("joy", 1.0) }),
        })
        .expect("inform");
    b.temporal(Relation::Before, &ask, &feedback).expect("statement");
    b.temporal(Relation::Simultaneous, &feedback, &question).expect("statement");
    b.temporal(Relation::Before, &question, &inform).expect("statement");
    EShowRoom { scene: b.build(), seller, buyer, car, ask, feedback, question, inform }
}

/// Size limits for [`generate_random_scene`].
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_acts: usize,
    pub max_persons: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_acts: 6, max_persons: 3 }
    }
}

const NAMES: [&str; 6] = ["seller", "buyer", "clerk", "visitor", "manager", "friend"];
const OCC: [&str; 6] = ["joy", "distress", "hope", "fear", "pride", "reproach"];

/// A schema-valid, well-formed, temporally consistent scene, determined by
/// `seed`. Acts get hidden time slots; every temporal statement and every
/// response agrees with the slots.
pub fn generate_random_scene(seed: u64, bounds: Bounds) -> Scene {
    assert!(bounds.max_acts > 0 && bounds.max_persons > 0, "bounds must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = SceneBuilder::new();
    let n_persons = rng.random_range(2..=bounds.max_persons.clamp(2, NAMES.len()));
    let persons: Vec<NodeId> = NAMES[..n_persons].iter().map(|n| b.person(n)).collect();

    let n_cars = rng.random_range(1..=2);
    let keys: Vec<String> = (0..n_cars).map(|i| format!("c{i}")).collect();
    let refs: Vec<(&str, &str)> = keys.iter().map(|k| (k.as_str(), "car")).collect();
    let conds: Vec<ConditionSpec> =
        keys.iter().map(|k| ConditionSpec::new("car", vec![Term::Local(k.clone())])).collect();
    let cg = b.common_ground(&refs, &conds).expect("common ground");
    let cars: Vec<NodeId> = cg.referents.iter().map(|(_, id)| id.clone()).collect();

    let n_acts = rng.random_range(1..=bounds.max_acts);
    let mut acts: Vec<NodeId> = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for i in 0..n_acts {
        let slot = rng.random_range(0..n_acts);
        let speaker = rng.random_range(0..n_persons);
        let car = Term::Node(cars[rng.random_range(0..cars.len())].clone());
        if rng.random_bool(0.15) {
            let act = b.non_communicative_act("pointAt", &persons[speaker], &[("target", "car")]).expect("action");
            acts.push(act);
            slots.push(slot);
            continue;
        }
        let addressees: Vec<NodeId> = (0..n_persons).filter(|&p| p != speaker).map(|p| persons[p].clone()).collect();
        let earlier: Vec<usize> = (0..i).filter(|&j| slots[j] < slot).collect();
        let response =
            (!earlier.is_empty() && rng.random_bool(0.5)).then(|| earlier[rng.random_range(0..earlier.len())]);
        let (act_type, referents, conditions) = match rng.random_range(0..4) {
            0 => (
                "question",
                vec![("h", "horsepower")],
                vec![ConditionSpec::new("have", vec![car, Term::Local("h".into())])],
            ),
            1 => ("positiveFeedback", vec![], vec![]),
            2 => ("question", vec![], vec![ConditionSpec::new("offerInfo", vec![car])]),
            _ => {
                let hp = b.network_mut().constant("horsepower", &format!("{}hp", rng.random_range(40..300)));
                ("inform", vec![], vec![ConditionSpec::new("have", vec![car, Term::Node(hp)])])
            }
        };
        let emotion = rng.random_bool(0.3).then(|| EmotionSpec {
            category: OCC[rng.random_range(0..OCC.len())].to_string(),
            intensity: f64::from(rng.random_range(0..=20u32)) / 20.0,
            cause: Some(cars[0].clone()),
        });
        let (act, _) = b
            .dialogue_act(DialogueActSpec {
                act_type,
                speaker: persons[speaker].clone(),
                addressees,
                referents,
                conditions,
                response_to: response.map(|j| acts[j].clone()),
                emotion,
            })
            .expect("dialogue act");
        if let Some(j) = response {
            pending.push((j, i));
        }
        acts.push(act);
        slots.push(slot);
    }
    for i in 0..n_acts {
        for j in i + 1..n_acts {
            if !rng.random_bool(0.4) {
                continue;
            }
            let (rel, a, c) = match slots[i].cmp(&slots[j]) {
                std::cmp::Ordering::Equal => (Relation::Simultaneous, i, j),
                std::cmp::Ordering::Less => (Relation::Before, i, j),
                std::cmp::Ordering::Greater => (Relation::Before, j, i),
            };
            b.temporal(rel, &acts[a], &acts[c]).expect("statement");
        }
    }
    for (j, i) in pending {
        b.temporal(Relation::Before, &acts[j], &acts[i]).expect("statement");
    }
    b.build()
}

/// Reference implementations by exhaustive search.
pub mod oracle {
    use super::*;

    fn models(acts: &[NodeId], statements: &[TemporalStatement]) -> Vec<Vec<usize>> {
        let n = acts.len();
        let idx = |id: &NodeId| acts.iter().position(|a| a == id).expect("act in universe");
        let st: Vec<(Relation, usize, usize)> = statements.iter().map(|s| (s.relation, idx(&s.a), idx(&s.b))).collect();
        let mut out = Vec::new();
        let mut t = vec![0usize; n];
        let total = n.checked_pow(n as u32).unwrap_or(1).max(1);
        for code in 0..total {
            let mut c = code;
            for slot in t.iter_mut() {
                *slot = c % n.max(1);
                c /= n.max(1);
            }
            let ok = st.iter().all(|&(r, a, b)| match r {
                Relation::Before => t[a] < t[b],
                Relation::Simultaneous => t[a] == t[b],
            });
            if ok {
                out.push(t.clone());
            }
        }
        out
    }

    /// Some assignment of time points to acts satisfies every statement.
    pub fn consistent(acts: &[NodeId], statements: &[TemporalStatement]) -> bool {
        !models(acts, statements).is_empty()
    }

    /// Whether `rel(a, b)` holds in every satisfying assignment; `None` when
    /// there is none.
    pub fn entailed(
        acts: &[NodeId],
        statements: &[TemporalStatement],
        rel: Relation,
        a: &NodeId,
        b: &NodeId,
    ) -> Option<bool> {
        let ms = models(acts, statements);
        if ms.is_empty() {
            return None;
        }
        let (i, j) = (acts.iter().position(|x| x == a).expect("act"), acts.iter().position(|x| x == b).expect("act"));
        Some(ms.iter().all(|t| match rel {
            Relation::Before => t[i] < t[j],
            Relation::Simultaneous => t[i] == t[j],
        }))
    }

    /// Nearest basic category by scanning the whole table.
    pub fn nearest_basic(tables: &AffectTables, spec: &EmotionSpec) -> (String, f64) {
        if spec.intensity == 0.0 {
            return (NEUTRAL.to_string(), 0.0);
        }
        let entry = tables.occ().iter().find(|e| e.label == spec.category).expect("category");
        if let Some(d) = &entry.direct {
            return (d.clone(), spec.intensity);
        }
        let p = entry.point;
        let dist = |q: &crate::affect::DimensionPoint| {
            let mut s =
                (p.valence * spec.intensity - q.valence).powi(2) + (p.arousal * spec.intensity - q.arousal).powi(2);
            if let (Some(x), Some(y)) = (p.dominance, q.dominance) {
                s += (x * spec.intensity - y).powi(2);
            }
            s
        };
        let all: Vec<f64> = tables.basic().iter().map(|b| dist(&b.point)).collect();
        let min = all.iter().copied().fold(f64::INFINITY, f64::min);
        let k = all.iter().position(|&d| d == min).expect("nonempty table");
        (tables.basic()[k].label.clone(), spec.intensity)
    }

    /// Query by checking every node against every constraint.
    pub fn query(net: &TypedNetwork, pattern: &Pattern) -> Vec<NodeId> {
        let mut out = Vec::new();
        for node in net.nodes() {
            if let Some(t) = &pattern.type_label {
                if node.type_label != *t {
                    continue;
                }
            }
            let arcs: Vec<(&str, &NodeId)> = net.attributes(&node.id).collect();
            if pattern.constraints.iter().all(|(k, v)| arcs.iter().any(|(a, to)| a == k && *to == v)) {
                out.push(node.id.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::check_wellformed;

    #[test]
    fn eshowroom_is_clean() {
        let f = eshowroom();
        let res = eshowroom_resources();
        assert!(res.tbox.validate(f.scene.network()).is_empty());
        let store = f.scene.temporal_store().unwrap();
        assert!(store.is_consistent());
        assert!(check_wellformed(&f.scene, &store).unwrap().is_empty());
    }

    #[test]
    fn random_scenes_are_valid_and_deterministic() {
        let tbox = eshowroom_resources().tbox;
        for seed in 0..60 {
            let s = generate_random_scene(seed, Bounds::default());
            let report = tbox.validate(s.network());
            assert!(report.is_empty(), "seed {seed}: {:?}", report.violations);
            let store = s.temporal_store().unwrap();
            assert!(store.is_consistent(), "seed {seed}");
            assert_eq!(check_wellformed(&s, &store).unwrap(), vec![], "seed {seed}");
            assert_eq!(generate_random_scene(seed, Bounds::default()).network(), s.network());
        }
    }
}
