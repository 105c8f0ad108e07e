use std::path::{Path, PathBuf};

use rrl_core::fixtures::{eshowroom, eshowroom_resources};
use rrl_core::io;
use rrl_core::pipeline::{run, PipelineError, RunOptions, Stage};
use rrl_core::scene::SceneBuilder;
use rrl_core::temporal::Relation;

fn golden_scene() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/eshowroom/scene.xml")
}

fn scene_file(dir: &Path) -> PathBuf {
    let path = dir.join("input.xml");
    std::fs::write(&path, io::write_scene(eshowroom().scene.network())).unwrap();
    path
}

#[test]
fn checked_in_scene_matches_builder() {
    let text = io::write_scene(eshowroom().scene.network());
    if std::env::var_os("RRL_BLESS").is_some() {
        std::fs::write(golden_scene(), &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(golden_scene()).unwrap(), text);
}

#[test]
fn eshowroom_utterances() {
    let dir = tempfile::tempdir().unwrap();
    let art = run(&scene_file(dir.path()), &eshowroom_resources(), &RunOptions::default()).unwrap();
    let texts: Vec<String> = art.synthesis.iter().map(|d| d.text()).collect();
    assert_eq!(
        texts,
        [
            "Would you like to know more about the motor of this car ?",
            "Yes , how much horse power does it have ?",
            "The wonderful car has 80 hp .",
        ]
    );
    let t = art.timeline.unwrap();
    let wonderful = t.events.iter().find(|e| e.channel == "speech" && e.label == "wonderful").unwrap();
    assert_eq!(wonderful.speaker, "seller");
    assert!(t.events.iter().all(|e| e.end <= t.duration));
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = scene_file(dir.path());
    let res = eshowroom_resources();
    let a = run(&input, &res, &RunOptions::default()).unwrap();
    let b = run(&input, &res, &RunOptions::default()).unwrap();
    assert_eq!(io::write_timeline(a.timeline.as_ref().unwrap()), io::write_timeline(b.timeline.as_ref().unwrap()));
}

#[test]
fn every_stage_boundary_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = scene_file(dir.path());
    let res = eshowroom_resources();
    let full = io::write_timeline(run(&input, &res, &RunOptions::default()).unwrap().timeline.as_ref().unwrap());
    for stop in [Stage::Scene, Stage::Realize, Stage::Prosody, Stage::Gesture] {
        let inter = dir.path().join(stop.as_str());
        let first = run(&input, &res, &RunOptions { stop_after: stop, ..Default::default() }).unwrap();
        assert!(first.timeline.is_none());
        first.write_stages(&inter, Stage::Scene, stop).unwrap();
        let next = Stage::ALL.into_iter().find(|s| *s > stop).unwrap();
        let second = run(&inter, &res, &RunOptions { start_from: next, ..Default::default() }).unwrap();
        assert_eq!(io::write_timeline(second.timeline.as_ref().unwrap()), full, "split after {stop}");
    }
}

#[test]
fn stop_after_prosody_writes_documents_only() {
    let dir = tempfile::tempdir().unwrap();
    let res = eshowroom_resources();
    let art =
        run(&scene_file(dir.path()), &res, &RunOptions { stop_after: Stage::Prosody, ..Default::default() }).unwrap();
    let out = dir.path().join("out");
    art.write_stages(&out, Stage::Scene, Stage::Prosody).unwrap();
    for u in ["u1", "u2", "u3"] {
        assert!(out.join(format!("{u}.synthesis.xml")).exists());
        assert!(out.join(format!("{u}.timing.xml")).exists());
        assert!(!out.join(format!("{u}.timeline.xml")).exists());
    }
    assert!(!out.join("timeline.xml").exists());
}

#[test]
fn temporal_cycle_names_acts() {
    let f = eshowroom();
    let mut b = SceneBuilder::from_scene(f.scene).unwrap();
    b.temporal(Relation::Before, &f.inform, &f.ask).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.xml");
    std::fs::write(&path, io::write_scene(b.build().network())).unwrap();
    let err = run(&path, &eshowroom_resources(), &RunOptions::default()).unwrap_err();
    assert!(matches!(err, PipelineError::Temporal(_)), "{err}");
    assert_eq!(err.exit_code(), 5);
    let msg = err.to_string();
    for act in [&f.ask, &f.question, &f.inform] {
        assert!(msg.contains(act.as_str()), "{msg}");
    }
}

#[test]
fn missing_template_is_reported() {
    let mut res = eshowroom_resources();
    res.realizer.templates = "noun car = car\n".parse().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let err = run(&scene_file(dir.path()), &res, &RunOptions::default()).unwrap_err();
    assert_eq!(err.exit_code(), 7, "{err}");
}
