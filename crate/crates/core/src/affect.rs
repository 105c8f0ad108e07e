//! Emotion categories, dimensions and basic facial-expression categories.
//!
//! Appraisal categories (OCC) carry an intensity in `[0, 1]`. For speech they
//! are projected onto valence/arousal/dominance; for the face they map onto
//! the nearest basic category. All coordinates come from an editable table
//! file; none are compiled in.
//!
//! Table file format: `[occ]` and `[basic]` sections, one row per category,
//! `|`-separated columns:
//!
//! ```text
//! label | valence | arousal | dominance or - | direct basic label or - | provenance
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::network::NodeId;

/// The neutral basic category label; it must sit at the origin.
pub const NEUTRAL: &str = "neutral";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionPoint {
    pub valence: f64,
    pub arousal: f64,
    pub dominance: Option<f64>,
}

impl DimensionPoint {
    pub const ORIGIN: DimensionPoint = DimensionPoint { valence: 0.0, arousal: 0.0, dominance: Some(0.0) };

    pub fn new(valence: f64, arousal: f64, dominance: Option<f64>) -> Self {
        DimensionPoint { valence, arousal, dominance }
    }

    pub fn scaled(self, k: f64) -> Self {
        DimensionPoint {
            valence: self.valence * k,
            arousal: self.arousal * k,
            dominance: self.dominance.map(|d| d * k),
        }
    }

    pub fn in_bounds(&self) -> bool {
        let ok = |x: f64| (-1.0..=1.0).contains(&x);
        ok(self.valence) && ok(self.arousal) && self.dominance.is_none_or(ok)
    }

    /// Squared Euclidean distance. Dominance only counts when both points have it.
    pub fn distance_sq(&self, other: &DimensionPoint) -> f64 {
        let dv = self.valence - other.valence;
        let da = self.arousal - other.arousal;
        let dd = match (self.dominance, other.dominance) {
            (Some(a), Some(b)) => a - b,
            _ => 0.0,
        };
        dv * dv + da * da + dd * dd
    }
}

impl fmt::Display for DimensionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v={}, a={}", self.valence, self.arousal)?;
        if let Some(d) = self.dominance {
            write!(f, ", d={d}")?;
        }
        f.write_str(")")
    }
}

/// An appraisal emotion attached to an act.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionSpec {
    pub category: String,
    pub intensity: f64,
    /// Handle into a DRS: a referent, constant or condition node.
    pub cause: Option<NodeId>,
}

impl EmotionSpec {
    pub fn new(category: &str, intensity: f64) -> Self {
        EmotionSpec { category: category.to_string(), intensity, cause: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffectEntry {
    pub label: String,
    pub point: DimensionPoint,
    pub direct: Option<String>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AffectError {
    #[error("unknown emotion category {0}")]
    UnknownCategory(String),
    #[error("intensity {0} outside [0, 1]")]
    InvalidIntensity(f64),
    #[error("affect table line {line}: {message}")]
    Table { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AffectTables {
    occ: Vec<AffectEntry>,
    basic: Vec<AffectEntry>,
}

impl AffectTables {
    pub fn occ(&self) -> &[AffectEntry] {
        &self.occ
    }

    /// Basic categories in table order (the tie-break order).
    pub fn basic(&self) -> &[AffectEntry] {
        &self.basic
    }

    pub fn occ_entry(&self, category: &str) -> Option<&AffectEntry> {
        self.occ.iter().find(|e| e.label == category)
    }

    fn checked(&self, spec: &EmotionSpec) -> Result<&AffectEntry, AffectError> {
        if !(0.0..=1.0).contains(&spec.intensity) {
            return Err(AffectError::InvalidIntensity(spec.intensity));
        }
        self.occ_entry(&spec.category).ok_or_else(|| AffectError::UnknownCategory(spec.category.clone()))
    }

    /// The category's table point scaled linearly from the origin by intensity.
    pub fn to_dimensions(&self, spec: &EmotionSpec) -> Result<DimensionPoint, AffectError> {
        Ok(self.checked(spec)?.point.scaled(spec.intensity))
    }

    /// Basic facial-expression category and blend weight.
    ///
    /// Zero intensity always yields neutral. Otherwise a direct-table entry
    /// wins; failing that, the basic category nearest to the scaled point,
    /// ties going to the earlier table row.
    pub fn to_basic_category(&self, spec: &EmotionSpec) -> Result<(String, f64), AffectError> {
        let entry = self.checked(spec)?;
        if spec.intensity == 0.0 {
            return Ok((NEUTRAL.to_string(), 0.0));
        }
        if let Some(direct) = &entry.direct {
            return Ok((direct.clone(), spec.intensity));
        }
        let point = entry.point.scaled(spec.intensity);
        let mut best: Option<(&AffectEntry, f64)> = None;
        for b in &self.basic {
            let d = b.point.distance_sq(&point);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((b, d));
            }
        }
        let (b, _) = best.expect("basic table holds at least neutral");
        Ok((b.label.clone(), spec.intensity))
    }
}

impl FromStr for AffectTables {
    type Err = AffectError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Occ,
            Basic,
        }
        let mut section = Section::None;
        let mut tables = AffectTables::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| AffectError::Table { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[occ]" => {
                    section = Section::Occ;
                    continue;
                }
                "[basic]" => {
                    section = Section::Basic;
                    continue;
                }
                _ => {}
            }
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if cols.len() != 6 {
                return Err(err(format!("expected 6 columns, found {}", cols.len())));
            }
            let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(format!("{what} {s:?} is not a number")));
            let point = DimensionPoint {
                valence: num(cols[1], "valence")?,
                arousal: num(cols[2], "arousal")?,
                dominance: match cols[3] {
                    "-" => None,
                    d => Some(num(d, "dominance")?),
                },
            };
            if !point.in_bounds() {
                return Err(err(format!("{} has coordinates outside [-1, 1]", cols[0])));
            }
            let direct = match cols[4] {
                "-" => None,
                d => Some(d.to_string()),
            };
            let entry = AffectEntry { label: cols[0].to_string(), point, direct, provenance: cols[5].to_string() };
            let target = match section {
                Section::Occ => &mut tables.occ,
                Section::Basic => {
                    if entry.direct.is_some() {
                        return Err(err("basic rows cannot carry a direct mapping".into()));
                    }
                    &mut tables.basic
                }
                Section::None => return Err(err("row before any [occ] or [basic] header".into())),
            };
            if target.iter().any(|e| e.label == entry.label) {
                return Err(err(format!("duplicate category {}", entry.label)));
            }
            target.push(entry);
        }
        let end = text.lines().count();
        let neutral = tables
            .basic
            .iter()
            .find(|e| e.label == NEUTRAL)
            .ok_or_else(|| AffectError::Table { line: end, message: "basic table lacks neutral".into() })?;
        if neutral.point.distance_sq(&DimensionPoint::ORIGIN) != 0.0 {
            return Err(AffectError::Table { line: end, message: "neutral must map to the origin".into() });
        }
        for e in &tables.occ {
            if let Some(d) = &e.direct {
                if !tables.basic.iter().any(|b| &b.label == d) {
                    return Err(AffectError::Table {
                        line: end,
                        message: format!("{} maps directly to unknown basic category {d}", e.label),
                    });
                }
            }
        }
        Ok(tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "
[occ]
joy       |  0.8 |  0.5 |  0.4 | happiness | test
fear      | -0.6 |  0.6 | -0.4 | fear      | test
gratitude |  0.4 |  0.2 | -0.3 | -         | test
mild      |  0.5 |  0   |  0   | -         | test
[basic]
neutral   |  0   |  0   |  0   | - | origin
happiness |  0.8 |  0.5 |  0.5 | - | test
fear      | -0.6 |  0.6 | -0.4 | - | test
surprise  |  0.3 |  0.5 | -0.3 | - | test
bright    |  1   |  0   |  0   | - | test
";

    fn tables() -> AffectTables {
        TABLE.parse().unwrap()
    }

    #[test]
    fn zero_intensity_is_origin() {
        let p = tables().to_dimensions(&EmotionSpec::new("fear", 0.0)).unwrap();
        assert_eq!((p.valence, p.arousal, p.dominance), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn full_intensity_is_verbatim() {
        let t = tables();
        let p = t.to_dimensions(&EmotionSpec::new("joy", 1.0)).unwrap();
        assert_eq!(p, t.occ_entry("joy").unwrap().point);
    }

    #[test]
    fn half_intensity_is_half() {
        let p = tables().to_dimensions(&EmotionSpec::new("joy", 0.5)).unwrap();
        assert_eq!(p, DimensionPoint::new(0.4, 0.25, Some(0.2)));
    }

    #[test]
    fn unknown_category() {
        assert_eq!(
            tables().to_dimensions(&EmotionSpec::new("ennui", 1.0)),
            Err(AffectError::UnknownCategory("ennui".into()))
        );
        assert!(matches!(
            tables().to_basic_category(&EmotionSpec::new("joy", 1.5)),
            Err(AffectError::InvalidIntensity(_))
        ));
    }

    #[test]
    fn direct_mapping() {
        let (c, w) = tables().to_basic_category(&EmotionSpec::new("fear", 0.7)).unwrap();
        assert_eq!((c.as_str(), w), ("fear", 0.7));
    }

    #[test]
    fn zero_intensity_is_neutral() {
        let (c, w) = tables().to_basic_category(&EmotionSpec::new("fear", 0.0)).unwrap();
        assert_eq!((c.as_str(), w), (NEUTRAL, 0.0));
    }

    #[test]
    fn nearest_when_no_direct_entry() {
        // gratitude (0.4, 0.2, -0.3): neutral 0.29, happiness 0.89, fear 1.17,
        // surprise 0.10, bright 0.49
        let (c, w) = tables().to_basic_category(&EmotionSpec::new("gratitude", 1.0)).unwrap();
        assert_eq!((c.as_str(), w), ("surprise", 1.0));
    }

    #[test]
    fn exact_tie_goes_to_table_order() {
        // mild (0.5, 0, 0) is 0.25 from both neutral and bright
        let (c, _) = tables().to_basic_category(&EmotionSpec::new("mild", 1.0)).unwrap();
        assert_eq!(c, "neutral");
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            "[basic]\nhappiness | 0 | 0 | 0 | - | x".parse::<AffectTables>(),
            Err(AffectError::Table { .. })
        ));
        assert!(matches!(
            "[basic]\nneutral | 0.1 | 0 | 0 | - | x".parse::<AffectTables>(),
            Err(AffectError::Table { .. })
        ));
        assert!(matches!(
            "[basic]\nneutral | 0 | 0 | 0 | - | x\n[occ]\njoy | 2 | 0 | 0 | - | x".parse::<AffectTables>(),
            Err(AffectError::Table { line: 4, .. })
        ));
        assert!(matches!(
            "[basic]\nneutral | 0 | 0 | 0 | - | x\n[occ]\njoy | 1 | 0 | 0 | glee | x".parse::<AffectTables>(),
            Err(AffectError::Table { .. })
        ));
    }
}
