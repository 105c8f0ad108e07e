//! The generation pipeline: scene, realize, prosody, gesture, timeline.
//!
//! Every stage has a serialized output, so a run can stop after any stage and
//! a later run can pick up from the written files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::affect::AffectTables;
use crate::config::{Config, Linearization};
use crate::document::SynthesisDocument;
use crate::gesture::{physiological_layer, schedule, viseme_track, VisemeError, VisemeTable};
use crate::io::{self, IoError};
use crate::network::NodeId;
use crate::prosody::{assign_prosody, synthesize_timing, Lexicon, TimingTrack};
use crate::realizer::{propose_candidates, RealizeError, Realizer, Templates};
use crate::scene::{check_wellformed, Act, Scene, SceneError};
use crate::tbox::TBox;
use crate::timeline::{utterance_timeline, Event, Timeline, UtteranceLayers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Scene,
    Realize,
    Prosody,
    Gesture,
    Timeline,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Scene, Stage::Realize, Stage::Prosody, Stage::Gesture, Stage::Timeline];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Scene => "scene",
            Stage::Realize => "realize",
            Stage::Prosody => "prosody",
            Stage::Gesture => "gesture",
            Stage::Timeline => "timeline",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.as_str() == s)
    }

    pub fn previous(self) -> Option<Stage> {
        Stage::ALL.into_iter().rev().find(|s| *s < self)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stage failures. Each kind has its own process exit code.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: IoError,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("temporal inconsistency: {0}")]
    Temporal(String),
    #[error("ill-formed scene: {0}")]
    WellFormed(String),
    #[error("missing resource entry: {0}")]
    Missing(String),
    #[error("{0}")]
    Io(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse { .. } => 3,
            PipelineError::Schema(_) => 4,
            PipelineError::Temporal(_) => 5,
            PipelineError::WellFormed(_) => 6,
            PipelineError::Missing(_) => 7,
            PipelineError::Io(_) => 8,
        }
    }
}

impl From<RealizeError> for PipelineError {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::Scene(s) => PipelineError::Schema(s.to_string()),
            other => PipelineError::Missing(other.to_string()),
        }
    }
}

impl From<SceneError> for PipelineError {
    fn from(e: SceneError) -> Self {
        PipelineError::Schema(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))
}

/// Loaded configuration and the resource files it names.
#[derive(Debug, Clone)]
pub struct Resources {
    pub config: Config,
    pub tbox: TBox,
    pub tables: AffectTables,
    pub lexicon: Lexicon,
    pub visemes: VisemeTable,
    pub realizer: Realizer,
}

impl Resources {
    pub fn load(config: Config) -> Result<Resources, PipelineError> {
        fn load<T: FromStr>(path: &Path) -> Result<T, PipelineError>
        where
            T::Err: fmt::Display,
        {
            read_file(path)?.parse().map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))
        }
        let templates: Templates = load(&config.templates)?;
        Ok(Resources {
            tbox: load(&config.tbox)?,
            tables: load(&config.affect_tables)?,
            lexicon: load(&config.lexicon)?,
            visemes: load(&config.visemes)?,
            realizer: Realizer::new(templates, config.evaluative_threshold),
            config,
        })
    }
}

/// One step of the linearized scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanItem {
    Utterance { id: String, speaker: NodeId, speaker_label: String, acts: Vec<NodeId> },
    Action { act: NodeId, agent: NodeId, agent_label: String, act_type: String },
}

/// Line format:
/// `utterance <id> <speaker> <speaker-label> <act>...` and
/// `action <act> <agent> <agent-label> <type>`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Plan {
    pub items: Vec<PlanItem>,
}

impl Plan {
    pub fn utterances(&self) -> impl Iterator<Item = (&str, &str, &[NodeId])> {
        self.items.iter().filter_map(|it| match it {
            PlanItem::Utterance { id, speaker_label, acts, .. } => {
                Some((id.as_str(), speaker_label.as_str(), acts.as_slice()))
            }
            PlanItem::Action { .. } => None,
        })
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for it in &self.items {
            match it {
                PlanItem::Utterance { id, speaker, speaker_label, acts } => {
                    write!(f, "utterance {id} {speaker} {speaker_label}")?;
                    for a in acts {
                        write!(f, " {a}")?;
                    }
                    writeln!(f)?;
                }
                PlanItem::Action { act, agent, agent_label, act_type } => {
                    writeln!(f, "action {act} {agent} {agent_label} {act_type}")?
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Plan {
    type Err = String;

    fn from_str(s: &str) -> Result<Plan, String> {
        let mut items = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let item = match f.as_slice() {
                [] => continue,
                ["utterance", id, speaker, label, acts @ ..] if !acts.is_empty() => PlanItem::Utterance {
                    id: id.to_string(),
                    speaker: NodeId::new(*speaker),
                    speaker_label: label.to_string(),
                    acts: acts.iter().map(|a| NodeId::new(*a)).collect(),
                },
                ["action", act, agent, label, ty] => PlanItem::Action {
                    act: NodeId::new(*act),
                    agent: NodeId::new(*agent),
                    agent_label: label.to_string(),
                    act_type: ty.to_string(),
                },
                _ => return Err(format!("plan line {}: cannot read {line:?}", i + 1)),
            };
            items.push(item);
        }
        Ok(Plan { items })
    }
}

const FEEDBACK: [&str; 3] = ["positiveFeedback", "negativeFeedback", "backchannel"];

fn label_of(scene: &Scene, id: &NodeId) -> String {
    match scene.network().name_of(id) {
        Some(n) if !n.is_empty() && !n.chars().any(char::is_whitespace) => n.to_string(),
        _ => id.to_string(),
    }
}

/// Parse and check a scene, then linearize its acts.
pub fn stage_scene(text: &str, origin: &str, res: &Resources) -> Result<(Scene, Plan), PipelineError> {
    let net = io::read_scene(text).map_err(|source| PipelineError::Parse { path: origin.to_string(), source })?;
    let report = res.tbox.validate(&net);
    if !report.is_empty() {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(PipelineError::Schema(lines.join("; ")));
    }
    let scene = Scene::from_network(net)?;
    let store = scene.temporal_store()?;
    if let Some(c) = store.conflict() {
        return Err(PipelineError::Temporal(c.to_string()));
    }
    let violations = check_wellformed(&scene, &store)?;
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(PipelineError::WellFormed(lines.join("; ")));
    }
    let order = store
        .linearizations(1)
        .map_err(|e| PipelineError::Temporal(e.to_string()))?
        .into_iter()
        .next()
        .unwrap_or_default();
    let plan = make_plan(&scene, &order, res.config.linearization)?;
    Ok((scene, plan))
}

fn make_plan(scene: &Scene, order: &[Vec<NodeId>], policy: Linearization) -> Result<Plan, PipelineError> {
    let mut items = Vec::new();
    let mut n = 0;
    let mut utterance = |speaker: &NodeId, acts: Vec<NodeId>| {
        n += 1;
        PlanItem::Utterance {
            id: format!("u{n}"),
            speaker: speaker.clone(),
            speaker_label: label_of(scene, speaker),
            acts,
        }
    };
    for class in order {
        let acts: Vec<Act> = class.iter().map(|id| scene.act(id)).collect::<Result<_, _>>()?;
        let mut used = vec![false; acts.len()];
        for i in 0..acts.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            match &acts[i] {
                Act::NonCommunicative(a) => items.push(PlanItem::Action {
                    act: a.id.clone(),
                    agent: a.agent.clone(),
                    agent_label: label_of(scene, &a.agent),
                    act_type: a.act_type.clone(),
                }),
                Act::Dialogue(d) => {
                    let mut group = vec![d.id.clone()];
                    if policy == Linearization::Merge && FEEDBACK.contains(&d.act_type.as_str()) {
                        let partner = (i + 1..acts.len()).find(|&j| {
                            !used[j]
                                && matches!(&acts[j], Act::Dialogue(q) if q.act_type == "question" && q.speaker == d.speaker)
                        });
                        if let Some(j) = partner {
                            used[j] = true;
                            group.push(acts[j].id().clone());
                        }
                    }
                    items.push(utterance(&d.speaker, group));
                }
            }
        }
    }
    Ok(Plan { items })
}

/// Realize every utterance of the plan and attach gesture candidates.
pub fn stage_realize(scene: &Scene, plan: &Plan, res: &Resources) -> Result<Vec<SynthesisDocument>, PipelineError> {
    let mut out = Vec::new();
    for (id, _, act_ids) in plan.utterances() {
        let acts = act_ids.iter().map(|a| scene.dialogue_act(a)).collect::<Result<Vec<_>, _>>()?;
        let mut doc = res.realizer.realize_utterance(scene, &acts, id, &res.tables)?;
        doc.candidates = propose_candidates(&acts, &doc);
        out.push(doc);
    }
    Ok(out)
}

/// Annotate accents and boundaries, then lay out phone timing.
pub fn stage_prosody(docs: &mut [SynthesisDocument], res: &Resources) -> Vec<TimingTrack> {
    docs.iter_mut()
        .map(|doc| {
            assign_prosody(doc);
            synthesize_timing(doc, &res.config.durations, &res.lexicon)
        })
        .collect()
}

/// Schedule gestures, add the physiological layer and visemes.
pub fn stage_gesture(
    plan: &Plan,
    docs: &[SynthesisDocument],
    tracks: &[TimingTrack],
    res: &Resources,
) -> Result<Vec<Timeline>, PipelineError> {
    let speakers: BTreeMap<&str, &str> = plan.utterances().map(|(id, sp, _)| (id, sp)).collect();
    let mut out = Vec::new();
    for (doc, track) in docs.iter().zip(tracks) {
        let sched = schedule(&doc.candidates, track, &res.config.scheduler);
        let (blinks, breaths) = physiological_layer(&sched.gestures, track, &res.config.physiology);
        let visemes = viseme_track(track, &res.visemes).map_err(|e| match e {
            VisemeError::UnknownPhone(_) => PipelineError::Missing(e.to_string()),
            other => PipelineError::Io(other.to_string()),
        })?;
        let speaker = speakers.get(doc.utterance.as_str()).copied().unwrap_or(doc.speaker.as_str());
        out.push(utterance_timeline(&UtteranceLayers {
            speaker,
            track,
            schedule: &sched,
            blinks: &blinks,
            breaths: &breaths,
            visemes: &visemes,
        }));
    }
    Ok(out)
}

/// Concatenate utterances and actions in plan order, separated by the
/// configured gap.
pub fn stage_timeline(
    plan: &Plan,
    utterances: &BTreeMap<String, Timeline>,
    res: &Resources,
) -> Result<Timeline, PipelineError> {
    let gap = res.config.utterance_gap_ms;
    let mut t = Timeline::default();
    let mut offset = 0;
    for (k, item) in plan.items.iter().enumerate() {
        if k > 0 {
            offset += gap;
        }
        match item {
            PlanItem::Utterance { id, .. } => {
                let u =
                    utterances.get(id).ok_or_else(|| PipelineError::Io(format!("no timeline for utterance {id}")))?;
                t.append(u, offset);
                offset += u.duration;
            }
            PlanItem::Action { act, agent_label, act_type, .. } => {
                t.events.push(Event {
                    start: offset,
                    channel: "action".into(),
                    end: offset + res.config.action_ms,
                    kind: "action".into(),
                    label: act_type.clone(),
                    speaker: agent_label.clone(),
                    utterance: act.to_string(),
                });
                offset += res.config.action_ms;
            }
        }
    }
    t.duration = offset;
    t.sort();
    Ok(t)
}

/// Everything a run produced, by stage.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub scene: Option<String>,
    pub plan: Plan,
    pub synthesis: Vec<SynthesisDocument>,
    pub timing: Vec<TimingTrack>,
    pub utterance_timelines: Vec<Timeline>,
    pub timeline: Option<Timeline>,
}

pub const SCENE_FILE: &str = "scene.xml";
pub const PLAN_FILE: &str = "plan.txt";
pub const TIMELINE_FILE: &str = "timeline.xml";

pub fn synthesis_file(utterance: &str) -> String {
    format!("{utterance}.synthesis.xml")
}

pub fn timing_file(utterance: &str) -> String {
    format!("{utterance}.timing.xml")
}

pub fn utterance_timeline_file(utterance: &str) -> String {
    format!("{utterance}.timeline.xml")
}

/// Where a run starts and stops.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub start_from: Stage,
    pub stop_after: Stage,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { start_from: Stage::Scene, stop_after: Stage::Timeline }
    }
}

fn parse_in<T>(dir: &Path, name: &str, read: fn(&str) -> Result<T, IoError>) -> Result<T, PipelineError> {
    let path = dir.join(name);
    let text = read_file(&path)?;
    read(&text).map_err(|source| PipelineError::Parse { path: path.display().to_string(), source })
}

/// Run stages `start_from..=stop_after`. With `start_from = scene`, `input`
/// is a scene file; otherwise it is a directory holding the outputs of the
/// stage before `start_from`.
pub fn run(input: &Path, res: &Resources, opts: &RunOptions) -> Result<Artifacts, PipelineError> {
    if opts.start_from > opts.stop_after {
        return Err(PipelineError::Io(format!(
            "cannot start from {} and stop after {}",
            opts.start_from, opts.stop_after
        )));
    }
    let mut art = Artifacts::default();
    let mut scene = None;
    let runs = |s: Stage| opts.start_from <= s && s <= opts.stop_after;

    if opts.start_from == Stage::Scene {
        let text = read_file(input)?;
        let (sc, plan) = stage_scene(&text, &input.display().to_string(), res)?;
        art.scene = Some(io::write_scene(sc.network()));
        art.plan = plan;
        scene = Some(sc);
    } else {
        let path = input.join(PLAN_FILE);
        art.plan =
            read_file(&path)?.parse().map_err(|e: String| PipelineError::Io(format!("{}: {e}", path.display())))?;
    }
    let ids: Vec<String> = art.plan.utterances().map(|(id, _, _)| id.to_string()).collect();

    if runs(Stage::Realize) {
        let sc = match scene.take() {
            Some(sc) => sc,
            None => Scene::from_network(parse_in(input, SCENE_FILE, io::read_scene)?)?,
        };
        art.synthesis = stage_realize(&sc, &art.plan, res)?;
    } else if runs(Stage::Prosody) || runs(Stage::Gesture) {
        for id in &ids {
            art.synthesis.push(parse_in(input, &synthesis_file(id), io::read_synthesis)?);
        }
    }

    if runs(Stage::Prosody) {
        art.timing = stage_prosody(&mut art.synthesis, res);
    } else if runs(Stage::Gesture) {
        for id in &ids {
            art.timing.push(parse_in(input, &timing_file(id), io::read_timing)?);
        }
    }

    if runs(Stage::Gesture) {
        art.utterance_timelines = stage_gesture(&art.plan, &art.synthesis, &art.timing, res)?;
    } else if runs(Stage::Timeline) {
        for id in &ids {
            art.utterance_timelines.push(parse_in(input, &utterance_timeline_file(id), io::read_timeline)?);
        }
    }

    if runs(Stage::Timeline) {
        let by_id = ids.iter().cloned().zip(art.utterance_timelines.iter().cloned()).collect();
        art.timeline = Some(stage_timeline(&art.plan, &by_id, res)?);
    }
    Ok(art)
}

impl Artifacts {
    /// Write the outputs of stages `from..=to` into `dir`. The plan is always
    /// written, since every later stage needs it.
    pub fn write_stages(&self, dir: &Path, from: Stage, to: Stage) -> Result<(), PipelineError> {
        fs::create_dir_all(dir).map_err(|e| PipelineError::Io(format!("{}: {e}", dir.display())))?;
        let has = |s: Stage| from <= s && s <= to;
        write_file(&dir.join(PLAN_FILE), &self.plan.to_string())?;
        if has(Stage::Scene) {
            if let Some(s) = &self.scene {
                write_file(&dir.join(SCENE_FILE), s)?;
            }
        }
        if has(Stage::Realize) || has(Stage::Prosody) {
            for d in &self.synthesis {
                write_file(&dir.join(synthesis_file(&d.utterance)), &io::write_synthesis(d))?;
            }
        }
        if has(Stage::Prosody) {
            for t in &self.timing {
                write_file(&dir.join(timing_file(&t.utterance)), &io::write_timing(t))?;
            }
        }
        if has(Stage::Gesture) {
            for (id, t) in self.plan.utterances().map(|u| u.0).zip(&self.utterance_timelines) {
                write_file(&dir.join(utterance_timeline_file(id)), &io::write_timeline(t))?;
            }
        }
        if has(Stage::Timeline) {
            if let Some(t) = &self.timeline {
                write_file(&dir.join(TIMELINE_FILE), &io::write_timeline(t))?;
            }
        }
        Ok(())
    }
}

/// One line per problem found by schema validation, temporal consistency
/// and well-formedness.
pub fn validate_scene(text: &str, origin: &str, tbox: &TBox) -> Result<Vec<String>, PipelineError> {
    let net = io::read_scene(text).map_err(|source| PipelineError::Parse { path: origin.to_string(), source })?;
    let report = tbox.validate(&net);
    if !report.is_empty() {
        return Ok(report.violations.iter().map(ToString::to_string).collect());
    }
    let scene = match Scene::from_network(net) {
        Ok(s) => s,
        Err(e) => return Ok(vec![e.to_string()]),
    };
    let store = match scene.temporal_store() {
        Ok(s) => s,
        Err(e) => return Ok(vec![e.to_string()]),
    };
    let mut out = Vec::new();
    if let Some(c) = store.conflict() {
        out.push(format!("temporal inconsistency: {c}"));
    }
    match check_wellformed(&scene, &store) {
        Ok(v) => out.extend(v.iter().map(ToString::to_string)),
        Err(e) => out.push(e.to_string()),
    }
    Ok(out)
}
