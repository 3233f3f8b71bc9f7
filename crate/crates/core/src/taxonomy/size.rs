use std::path::Path;

use crate::error::{Error, Result};
use crate::taxonomy::data_lines;

const DEFAULT_SCHEME: &str = include_str!("../../data/size_classes.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
struct SizeClass {
    label: String,
    min: u64,
    max: Option<u64>,
}

/// Ordered, contiguous employee-count ranges covering 0 and up.
///
/// Missing employee values fall into the first class, which is why the
/// default scheme starts with "0, 1, or n.a.".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeClassScheme {
    classes: Vec<SizeClass>,
}

impl SizeClassScheme {
    /// The bundled 11-class scheme.
    pub fn bundled() -> SizeClassScheme {
        Self::from_str(DEFAULT_SCHEME, Path::new("size_classes.tsv"))
            .expect("bundled size classes are valid")
    }

    pub fn from_path(path: &Path) -> Result<SizeClassScheme> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text, path)
    }

    fn from_str(text: &str, origin: &Path) -> Result<SizeClassScheme> {
        let scheme_err = |message: String| Error::Scheme {
            path: origin.to_path_buf(),
            message,
        };
        let mut classes: Vec<SizeClass> = Vec::new();
        for (lineno, line) in data_lines(text) {
            let fields: Vec<&str> = line.split('\t').collect();
            // the max field may be empty or absent entirely, meaning unbounded
            if fields.len() != 2 && fields.len() != 3 {
                return Err(scheme_err(format!(
                    "line {lineno}: expected label, min, optional max"
                )));
            }
            let label = fields[0].trim().to_string();
            if label.is_empty() {
                return Err(scheme_err(format!("line {lineno}: empty label")));
            }
            let min: u64 = fields[1]
                .trim()
                .parse()
                .map_err(|_| scheme_err(format!("line {lineno}: bad min {:?}", fields[1])))?;
            let max = match fields.get(2).map(|s| s.trim()).unwrap_or("") {
                "" => None,
                s => Some(s.parse::<u64>().map_err(|_| {
                    scheme_err(format!("line {lineno}: bad max {s:?}"))
                })?),
            };
            classes.push(SizeClass { label, min, max });
        }
        if classes.is_empty() {
            return Err(scheme_err("no size classes defined".into()));
        }

        // ranges must partition 0..infinity: contiguous, non-overlapping,
        // first starts at 0, last unbounded
        if classes[0].min != 0 {
            return Err(scheme_err("first class must start at 0".into()));
        }
        for window in classes.windows(2) {
            let prev_max = window[0]
                .max
                .ok_or_else(|| scheme_err("only the last class may be unbounded".into()))?;
            if window[1].min != prev_max + 1 {
                return Err(scheme_err(format!(
                    "classes {:?} and {:?} are not contiguous",
                    window[0].label, window[1].label
                )));
            }
        }
        if classes.last().unwrap().max.is_some() {
            return Err(scheme_err("last class must be unbounded".into()));
        }
        Ok(SizeClassScheme { classes })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classify an employee count. Missing counts land in the first class.
    pub fn size_class(&self, employees: Option<i64>) -> Result<&str> {
        let count = match employees {
            None => return Ok(&self.classes[0].label),
            Some(n) if n < 0 => {
                return Err(Error::Validation(format!("negative employee count {n}")))
            }
            Some(n) => n as u64,
        };
        let class = self
            .classes
            .iter()
            .find(|c| count >= c.min && c.max.is_none_or(|max| count <= max))
            .expect("classes partition 0..infinity");
        Ok(&class.label)
    }

    /// The smallest employee count belonging to a class, used when
    /// materializing synthetic records.
    pub fn representative_employees(&self, label: &str) -> Option<u64> {
        self.classes.iter().find(|c| c.label == label).map(|c| c.min)
    }
}
