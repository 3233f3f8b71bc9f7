use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::data_lines;

const DEFAULT_SCHEME: &str = include_str!("../../data/nace_sectors.tsv");

/// Sector aggregate a NACE code belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorClass {
    HighTechManufacturing,
    MediumHighTechManufacturing,
    KnowledgeIntensiveServices,
    Other,
}

impl fmt::Display for SectorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SectorClass::HighTechManufacturing => "high-tech-manufacturing",
            SectorClass::MediumHighTechManufacturing => "medium-high-tech-manufacturing",
            SectorClass::KnowledgeIntensiveServices => "knowledge-intensive-services",
            SectorClass::Other => "other",
        };
        f.write_str(name)
    }
}

/// Classification result: the sector class plus the high-tech-services flag
/// for the subset of knowledge-intensive services that counts as high-tech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorLabel {
    pub class: SectorClass,
    pub high_tech_services: bool,
}

/// NACE Rev. 2 prefix rules mapping industry codes to sector classes.
///
/// Rules are digit prefixes (dots stripped); the longest matching prefix
/// wins, which makes group-level exclusions override their enclosing
/// division. Codes matching nothing are "other".
#[derive(Debug, Clone)]
pub struct SectorScheme {
    // prefix (2-3 digits) -> (class, high-tech-services flag)
    rules: HashMap<String, SectorLabel>,
}

impl SectorScheme {
    pub fn bundled() -> SectorScheme {
        Self::from_str(DEFAULT_SCHEME, Path::new("nace_sectors.tsv"))
            .expect("bundled sector rules are valid")
    }

    pub fn from_path(path: &Path) -> Result<SectorScheme> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text, path)
    }

    fn from_str(text: &str, origin: &Path) -> Result<SectorScheme> {
        let scheme_err = |message: String| Error::Scheme {
            path: origin.to_path_buf(),
            message,
        };
        let mut rules = HashMap::new();
        for (lineno, line) in data_lines(text) {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(scheme_err(format!(
                    "line {lineno}: expected 2 tab-separated fields"
                )));
            }
            let rule = fields[0].trim();
            let label = match fields[1].trim() {
                "high-tech-manufacturing" => SectorLabel {
                    class: SectorClass::HighTechManufacturing,
                    high_tech_services: false,
                },
                "medium-high-tech-manufacturing" => SectorLabel {
                    class: SectorClass::MediumHighTechManufacturing,
                    high_tech_services: false,
                },
                "knowledge-intensive-services" => SectorLabel {
                    class: SectorClass::KnowledgeIntensiveServices,
                    high_tech_services: false,
                },
                "high-tech-services" => SectorLabel {
                    class: SectorClass::KnowledgeIntensiveServices,
                    high_tech_services: true,
                },
                "other" => SectorLabel {
                    class: SectorClass::Other,
                    high_tech_services: false,
                },
                other => {
                    return Err(scheme_err(format!("line {lineno}: unknown class {other:?}")))
                }
            };
            for prefix in expand_rule(rule)
                .map_err(|m| scheme_err(format!("line {lineno}: {m}")))?
            {
                if rules.insert(prefix.clone(), label).is_some() {
                    return Err(scheme_err(format!(
                        "line {lineno}: duplicate rule for prefix {prefix}"
                    )));
                }
            }
        }
        Ok(SectorScheme { rules })
    }

    /// Classify a 2-4 digit NACE code. The longest matching prefix decides;
    /// 2-digit codes can only match division-level rules.
    pub fn classify_sector(&self, nace: &str) -> Result<SectorLabel> {
        let code = normalize_nace(nace)?;
        for len in (2..=code.len()).rev() {
            if let Some(label) = self.rules.get(&code[..len]) {
                return Ok(*label);
            }
        }
        Ok(SectorLabel {
            class: SectorClass::Other,
            high_tech_services: false,
        })
    }
}

/// Expand a rule into digit prefixes: "64-66" covers three divisions,
/// "25.4" is the group prefix "254", "21" a plain division.
fn expand_rule(rule: &str) -> std::result::Result<Vec<String>, String> {
    if let Some((lo, hi)) = rule.split_once('-') {
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range {rule:?}"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range {rule:?}"))?;
        if lo > hi || hi > 99 {
            return Err(format!("bad range {rule:?}"));
        }
        return Ok((lo..=hi).map(|d| format!("{d:02}")).collect());
    }
    let digits: String = rule.chars().filter(|c| *c != '.').collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad rule {rule:?}"));
    }
    if !(2..=4).contains(&digits.len()) {
        return Err(format!("rule {rule:?} must resolve to 2-4 digits"));
    }
    Ok(vec![digits])
}

/// Strip dots and validate a NACE code: 2-4 digits after normalization.
pub fn normalize_nace(code: &str) -> Result<String> {
    let digits: String = code.trim().chars().filter(|c| *c != '.').collect();
    if digits.is_empty() {
        return Err(Error::Validation("empty NACE code".into()));
    }
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Validation(format!("non-numeric NACE code {code:?}")));
    }
    if !(2..=4).contains(&digits.len()) {
        return Err(Error::Validation(format!(
            "NACE code {code:?} must have 2-4 digits"
        )));
    }
    Ok(digits)
}

/// Truncate a valid NACE code to the requested digit count; this is the
/// label used on the technology axis of the tensor.
pub fn tech_category(nace: &str, digits: usize) -> Result<String> {
    if !(2..=4).contains(&digits) {
        return Err(Error::Validation(format!(
            "technology granularity must be 2-4 digits, got {digits}"
        )));
    }
    let code = normalize_nace(nace)?;
    if code.len() < digits {
        return Err(Error::Validation(format!(
            "NACE code {nace:?} is shorter than {digits} digits"
        )));
    }
    Ok(code[..digits].to_string())
}
