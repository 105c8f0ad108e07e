//! Python module `rrl`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use rrl_core::affect::{AffectTables as CoreTables, DimensionPoint, EmotionSpec};
use rrl_core::config::Config;
use rrl_core::fixtures::{generate_random_scene, Bounds};
use rrl_core::io;
use rrl_core::network::{NodeId, Pattern, TypedNetwork};
use rrl_core::pipeline::{self, Resources, RunOptions, Stage};
use rrl_core::prosody::{assign_prosody, synthesize_timing};
use rrl_core::realizer::minimal_document;
use rrl_core::tbox::TBox;
use rrl_core::temporal::{Relation, TemporalStore as CoreStore};

create_exception!(rrl, RrlError, PyException, "Raised for any pipeline failure; `args[1]` is the CLI exit code.");

fn err(e: impl std::fmt::Display) -> PyErr {
    RrlError::new_err(e.to_string())
}

fn pipeline_err(e: pipeline::PipelineError) -> PyErr {
    RrlError::new_err((e.to_string(), e.exit_code()))
}

fn relation(name: &str) -> PyResult<Relation> {
    Relation::parse(name).ok_or_else(|| err(format!("unknown relation {name:?}")))
}

/// A typed object network read from or written to scene XML.
#[pyclass(module = "rrl")]
struct Network {
    net: TypedNetwork,
}

#[pymethods]
impl Network {
    #[staticmethod]
    fn from_xml(xml: &str) -> PyResult<Self> {
        io::read_scene(xml).map(|net| Network { net }).map_err(err)
    }

    fn to_xml(&self) -> String {
        io::write_scene(&self.net)
    }

    fn __len__(&self) -> usize {
        self.net.len()
    }

    fn type_of(&self, id: &str) -> Option<String> {
        self.net.type_of(&NodeId::new(id)).map(str::to_string)
    }

    fn attribute(&self, id: &str, attr: &str) -> Option<String> {
        self.net.attribute(&NodeId::new(id), attr).map(|n| n.to_string())
    }

    #[pyo3(signature = (type_label=None, constraints=None))]
    fn query(&self, type_label: Option<&str>, constraints: Option<BTreeMap<String, String>>) -> Vec<String> {
        let mut p = type_label.map(Pattern::of_type).unwrap_or_default();
        for (attr, value) in constraints.unwrap_or_default() {
            p = p.with(&attr, &NodeId::new(value));
        }
        self.net.query(&p).into_iter().map(|n| n.to_string()).collect()
    }
}

/// Before/simultaneous constraints over act ids.
#[pyclass(module = "rrl")]
struct TemporalStore {
    store: CoreStore,
}

#[pymethods]
impl TemporalStore {
    #[new]
    fn new(acts: Vec<String>) -> Self {
        TemporalStore { store: CoreStore::new(acts.into_iter().map(NodeId::new)) }
    }

    fn add(&mut self, relation_name: &str, a: &str, b: &str) -> PyResult<()> {
        self.store.add(relation(relation_name)?, &NodeId::new(a), &NodeId::new(b)).map_err(err)
    }

    fn is_consistent(&self) -> bool {
        self.store.is_consistent()
    }

    fn entailed(&self, relation_name: &str, a: &str, b: &str) -> PyResult<bool> {
        self.store.entailed(relation(relation_name)?, &NodeId::new(a), &NodeId::new(b)).map_err(err)
    }

    #[pyo3(signature = (limit=1000))]
    fn linearizations(&self, limit: usize) -> PyResult<Vec<Vec<Vec<String>>>> {
        let lins = self.store.linearizations(limit).map_err(err)?;
        Ok(lins
            .into_iter()
            .map(|l| l.into_iter().map(|c| c.into_iter().map(|n| n.to_string()).collect()).collect())
            .collect())
    }
}

#[pyclass(module = "rrl")]
struct AffectTables {
    tables: CoreTables,
}

#[pymethods]
impl AffectTables {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(|tables| AffectTables { tables }).map_err(err)
    }

    /// (valence, arousal, dominance or None)
    fn to_dimensions(&self, category: &str, intensity: f64) -> PyResult<(f64, f64, Option<f64>)> {
        let p = self.tables.to_dimensions(&EmotionSpec::new(category, intensity)).map_err(err)?;
        Ok((p.valence, p.arousal, p.dominance))
    }

    fn to_basic_category(&self, category: &str, intensity: f64) -> PyResult<(String, f64)> {
        self.tables.to_basic_category(&EmotionSpec::new(category, intensity)).map_err(err)
    }
}

/// Loaded configuration and resource files.
#[pyclass(module = "rrl")]
struct Pipeline {
    res: Resources,
}

#[pymethods]
impl Pipeline {
    #[new]
    fn new(config_path: PathBuf) -> PyResult<Self> {
        let config = Config::load(&config_path).map_err(err)?;
        Resources::load(config).map(|res| Pipeline { res }).map_err(pipeline_err)
    }

    /// Timeline XML for a scene file.
    fn run(&self, scene_path: PathBuf) -> PyResult<String> {
        let art = pipeline::run(&scene_path, &self.res, &RunOptions::default()).map_err(pipeline_err)?;
        Ok(io::write_timeline(art.timeline.as_ref().expect("full run has a timeline")))
    }

    /// Surface text of each utterance, in plan order.
    fn utterances(&self, scene_path: PathBuf) -> PyResult<Vec<String>> {
        let opts = RunOptions { stop_after: Stage::Realize, ..Default::default() };
        let art = pipeline::run(&scene_path, &self.res, &opts).map_err(pipeline_err)?;
        Ok(art.synthesis.iter().map(|d| d.text()).collect())
    }

    /// Violation lines for a scene document; empty when it is clean.
    fn validate(&self, scene_xml: &str) -> PyResult<Vec<String>> {
        pipeline::validate_scene(scene_xml, "<string>", &self.res.tbox).map_err(pipeline_err)
    }

    /// Timing XML for plain text, spoken with no emotion.
    fn timing(&self, text: &str) -> PyResult<String> {
        let mut doc = minimal_document(text, NodeId::new("v1"), DimensionPoint::ORIGIN).map_err(err)?;
        assign_prosody(&mut doc);
        Ok(io::write_timing(&synthesize_timing(&doc, &self.res.config.durations, &self.res.lexicon)))
    }
}

/// Violation lines for a scene document against a t-box text.
#[pyfunction]
pub fn validate(scene_xml: &str, tbox_text: &str) -> PyResult<Vec<String>> {
    let tbox: TBox = tbox_text.parse().map_err(err)?;
    pipeline::validate_scene(scene_xml, "<string>", &tbox).map_err(pipeline_err)
}

/// Scene XML of a random valid scene.
#[pyfunction]
#[pyo3(signature = (seed, max_acts=6, max_persons=3))]
pub fn random_scene(seed: u64, max_acts: usize, max_persons: usize) -> PyResult<String> {
    if max_acts == 0 || max_persons == 0 {
        return Err(err("bounds must be positive"));
    }
    Ok(io::write_scene(generate_random_scene(seed, Bounds { max_acts, max_persons }).network()))
}

#[pymodule]
fn rrl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RrlError", m.py().get_type::<RrlError>())?;
    m.add_class::<Network>()?;
    m.add_class::<TemporalStore>()?;
    m.add_class::<AffectTables>()?;
    m.add_class::<Pipeline>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(random_scene, m)?)?;
    Ok(())
}
