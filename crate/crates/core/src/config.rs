//! Pipeline configuration: `key = value` lines, `#` comments. Resource paths
//! are relative to the configuration file.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::gesture::{PhysiologyConfig, SchedulerConfig};
use crate::prosody::{DurationModel, Millis};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearization {
    /// Realize acts one by one in the first linearization.
    First,
    /// Like `First`, but a feedback act and a question by the same speaker in
    /// one simultaneity class become a single utterance.
    Merge,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: line {line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("{path}: missing required key {key}")]
    Missing { path: String, key: &'static str },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tbox: PathBuf,
    pub affect_tables: PathBuf,
    pub lexicon: PathBuf,
    pub templates: PathBuf,
    pub visemes: PathBuf,
    pub evaluative_threshold: f64,
    pub linearization: Linearization,
    pub durations: DurationModel,
    pub scheduler: SchedulerConfig,
    pub physiology: PhysiologyConfig,
    pub utterance_gap_ms: Millis,
    pub action_ms: Millis,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&text, base, &path.display().to_string())
    }

    /// Parse configuration text; `base` anchors relative paths and `origin`
    /// names the source in diagnostics.
    pub fn parse(text: &str, base: &Path, origin: &str) -> Result<Config, ConfigError> {
        let mut paths: [Option<PathBuf>; 5] = Default::default();
        let mut cfg = Config {
            tbox: PathBuf::new(),
            affect_tables: PathBuf::new(),
            lexicon: PathBuf::new(),
            templates: PathBuf::new(),
            visemes: PathBuf::new(),
            evaluative_threshold: 0.5,
            linearization: Linearization::First,
            durations: DurationModel::default(),
            scheduler: SchedulerConfig::default(),
            physiology: PhysiologyConfig::default(),
            utterance_gap_ms: 300,
            action_ms: 1000,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::Syntax { path: origin.to_string(), line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let ms = || value.parse::<Millis>().map_err(|_| err(format!("{key}: {value:?} is not a whole number")));
            match key {
                "tbox" => paths[0] = Some(base.join(value)),
                "affect_tables" => paths[1] = Some(base.join(value)),
                "lexicon" => paths[2] = Some(base.join(value)),
                "templates" => paths[3] = Some(base.join(value)),
                "visemes" => paths[4] = Some(base.join(value)),
                "evaluative_threshold" => {
                    cfg.evaluative_threshold =
                        value.parse().ok().filter(|t: &f64| t.is_finite() && *t >= 0.0).ok_or_else(|| {
                            err(format!("evaluative_threshold: {value:?} is not a non-negative number"))
                        })?
                }
                "linearization" => {
                    cfg.linearization = match value {
                        "first" => Linearization::First,
                        "merge" => Linearization::Merge,
                        _ => return Err(err(format!("linearization must be first or merge, not {value:?}"))),
                    }
                }
                "consonant_ms" => cfg.durations.consonant_ms = ms()?,
                "vowel_ms" => cfg.durations.vowel_ms = ms()?,
                "stressed_vowel_ms" => cfg.durations.stressed_vowel_ms = ms()?,
                "pause_ms" => cfg.durations.pause_ms = ms()?,
                "preparation_ms" => cfg.scheduler.preparation_ms = ms()?,
                "stroke_ms" => cfg.scheduler.stroke_ms = ms()?,
                "retraction_ms" => cfg.scheduler.retraction_ms = ms()?,
                "blink_period_ms" => cfg.physiology.blink_period_ms = ms()?,
                "blink_min_gap_ms" => cfg.physiology.blink_min_gap_ms = ms()?,
                "blink_exclusion_ms" => cfg.physiology.blink_exclusion_ms = ms()?,
                "blink_ms" => cfg.physiology.blink_ms = ms()?,
                "breath_period_ms" => cfg.physiology.breath_period_ms = ms()?,
                "breath_reset_pause_ms" => cfg.physiology.breath_reset_pause_ms = ms()?,
                "utterance_gap_ms" => cfg.utterance_gap_ms = ms()?,
                "action_ms" => cfg.action_ms = ms()?,
                _ => return Err(err(format!("unknown key {key}"))),
            }
        }
        if !cfg.durations.is_valid() {
            return Err(ConfigError::Syntax {
                path: origin.to_string(),
                line: 0,
                message: "durations must be strictly positive".into(),
            });
        }
        const KEYS: [&str; 5] = ["tbox", "affect_tables", "lexicon", "templates", "visemes"];
        let mut resolved = Vec::with_capacity(5);
        for (p, key) in paths.into_iter().zip(KEYS) {
            resolved.push(p.ok_or(ConfigError::Missing { path: origin.to_string(), key })?);
        }
        let [tbox, affect_tables, lexicon, templates, visemes]: [PathBuf; 5] = resolved.try_into().expect("five paths");
        Ok(Config { tbox, affect_tables, lexicon, templates, visemes, ..cfg })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIN: &str = "tbox = a\naffect_tables = b\nlexicon = c\ntemplates = d\nvisemes = e\n";

    #[test]
    fn defaults_and_paths() {
        let c = Config::parse(MIN, Path::new("/x"), "t").unwrap();
        assert_eq!(c.tbox, PathBuf::from("/x/a"));
        assert_eq!(c.durations, DurationModel::default());
        assert_eq!(c.linearization, Linearization::First);
        assert_eq!(c.evaluative_threshold, 0.5);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Config::parse("tbox = a\n", Path::new("."), "t"),
            Err(ConfigError::Missing { key: "affect_tables", .. })
        ));
        let bad = format!("{MIN}pause_ms = -1\n");
        assert!(matches!(Config::parse(&bad, Path::new("."), "t"), Err(ConfigError::Syntax { line: 6, .. })));
        let bad = format!("{MIN}colour = red\n");
        assert!(Config::parse(&bad, Path::new("."), "t").is_err());
        let zero = format!("{MIN}vowel_ms = 0\n");
        assert!(Config::parse(&zero, Path::new("."), "t").is_err());
    }
}
