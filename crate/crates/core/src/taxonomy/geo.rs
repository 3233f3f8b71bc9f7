use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::taxonomy::data_lines;

const DEFAULT_HIERARCHY: &str = include_str!("../../data/geo_hierarchy.tsv");
const DEFAULT_ALIASES: &str = include_str!("../../data/geo_aliases.tsv");

/// Result of city-name standardization. Unknown names pass through (trimmed)
/// so level-3 analyses can keep them, but they carry `known = false` and will
/// not resolve to a prefecture or province.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedCity {
    pub name: String,
    pub known: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GeoPath {
    prefecture: String,
    province: String,
}

/// City -> prefecture -> province paths plus an alias table for raw names.
///
/// Levels: province = 1, prefecture = 2, city = 3. Municipalities appear
/// with the same name at levels 1 and 2.
#[derive(Debug, Clone)]
pub struct GeoHierarchy {
    // canonical city -> path
    paths: HashMap<String, GeoPath>,
    // lowercased raw name -> canonical city (canonical names map to themselves)
    aliases: HashMap<String, String>,
}

impl GeoHierarchy {
    pub fn bundled() -> GeoHierarchy {
        Self::from_strs(
            DEFAULT_HIERARCHY,
            Path::new("geo_hierarchy.tsv"),
            DEFAULT_ALIASES,
            Path::new("geo_aliases.tsv"),
        )
        .expect("bundled hierarchy is valid")
    }

    pub fn from_paths(hierarchy: &Path, aliases: &Path) -> Result<GeoHierarchy> {
        let h = std::fs::read_to_string(hierarchy)?;
        let a = std::fs::read_to_string(aliases)?;
        Self::from_strs(&h, hierarchy, &a, aliases)
    }

    fn from_strs(
        hierarchy: &str,
        hierarchy_origin: &Path,
        aliases: &str,
        alias_origin: &Path,
    ) -> Result<GeoHierarchy> {
        let mut paths = HashMap::new();
        let mut alias_map = HashMap::new();
        for (lineno, line) in data_lines(hierarchy) {
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Scheme {
                    path: hierarchy_origin.to_path_buf(),
                    message: format!("line {lineno}: expected city, prefecture, province"),
                });
            }
            let city = fields[0].to_string();
            let previous = paths.insert(
                city.clone(),
                GeoPath {
                    prefecture: fields[1].to_string(),
                    province: fields[2].to_string(),
                },
            );
            if previous.is_some() {
                return Err(Error::Scheme {
                    path: hierarchy_origin.to_path_buf(),
                    message: format!("line {lineno}: city {city:?} has two paths"),
                });
            }
            // canonical names are fixed points of normalization
            alias_map.insert(city.to_lowercase(), city);
        }

        for (lineno, line) in data_lines(aliases) {
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Scheme {
                    path: alias_origin.to_path_buf(),
                    message: format!("line {lineno}: expected raw, canonical"),
                });
            }
            let canonical = fields[1].to_string();
            if !paths.contains_key(&canonical) {
                return Err(Error::Scheme {
                    path: alias_origin.to_path_buf(),
                    message: format!(
                        "line {lineno}: alias target {canonical:?} is not a known city"
                    ),
                });
            }
            alias_map.insert(fields[0].to_lowercase(), canonical);
        }

        Ok(GeoHierarchy {
            paths,
            aliases: alias_map,
        })
    }

    /// Trim and case-fold a raw city name, then apply the alias table.
    /// Idempotent: canonical names map to themselves.
    pub fn normalize_city(&self, raw: &str) -> Result<NormalizedCity> {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(Error::Validation("empty city name".into()));
        }
        match self.aliases.get(&trimmed.to_lowercase()) {
            Some(canonical) => Ok(NormalizedCity {
                name: canonical.clone(),
                known: true,
            }),
            None => Ok(NormalizedCity {
                name: trimmed.to_string(),
                known: false,
            }),
        }
    }

    /// Region label of a canonical city at a hierarchy level (1 = province,
    /// 2 = prefecture, 3 = the city itself). `None` means the city cannot be
    /// resolved at that level; the caller decides how to account for it.
    pub fn resolve_geo(&self, city: &str, level: u8) -> Result<Option<String>> {
        match level {
            3 => Ok(Some(city.to_string())),
            2 => Ok(self.paths.get(city).map(|p| p.prefecture.clone())),
            1 => Ok(self.paths.get(city).map(|p| p.province.clone())),
            other => Err(Error::Validation(format!(
                "geographic level must be 1, 2 or 3, got {other}"
            ))),
        }
    }

    /// Canonical province labels, sorted.
    pub fn provinces(&self) -> Vec<String> {
        let mut provinces: Vec<String> =
            self.paths.values().map(|p| p.province.clone()).collect();
        provinces.sort();
        provinces.dedup();
        provinces
    }

    pub fn known_city(&self, city: &str) -> bool {
        self.paths.contains_key(city)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alias_and_casefold_normalization() {
        let geo = GeoHierarchy::bundled();
        assert_eq!(
            geo.normalize_city("Beijing Capital City").unwrap(),
            NormalizedCity { name: "Beijing".into(), known: true }
        );
        assert_eq!(geo.normalize_city("beijing ").unwrap().name, "Beijing");
        assert_eq!(geo.normalize_city("Hangzhou").unwrap().name, "Hangzhou");
    }

    #[test]
    fn unknown_names_pass_through_flagged() {
        let geo = GeoHierarchy::bundled();
        let n = geo.normalize_city(" Atlantis ").unwrap();
        assert_eq!(n.name, "Atlantis");
        assert!(!n.known);
    }

    #[test]
    fn normalization_is_idempotent() {
        let geo = GeoHierarchy::bundled();
        for raw in ["Beijing Capital City", "beijing", "Hangzhou", "Atlantis"] {
            let once = geo.normalize_city(raw).unwrap();
            let twice = geo.normalize_city(&once.name).unwrap();
            assert_eq!(once.name, twice.name);
        }
    }

    #[test]
    fn empty_city_names_are_rejected() {
        let geo = GeoHierarchy::bundled();
        assert!(geo.normalize_city("   ").is_err());
    }

    #[test]
    fn resolves_the_three_levels() {
        let geo = GeoHierarchy::bundled();
        assert_eq!(
            geo.resolve_geo("Hangzhou", 1).unwrap(),
            Some("Zhejiang".into())
        );
        assert_eq!(
            geo.resolve_geo("Hangzhou", 3).unwrap(),
            Some("Hangzhou".into())
        );
        assert_eq!(geo.resolve_geo("Kunshan", 2).unwrap(), Some("Suzhou".into()));
        assert_eq!(geo.resolve_geo("Nowhere", 2).unwrap(), None);
        assert!(geo.resolve_geo("Hangzhou", 4).is_err());
    }

    #[test]
    fn municipalities_resolve_at_both_levels() {
        let geo = GeoHierarchy::bundled();
        for city in ["Beijing", "Shanghai", "Tianjin", "Chongqing"] {
            assert_eq!(geo.resolve_geo(city, 1).unwrap(), Some(city.to_string()));
            assert_eq!(geo.resolve_geo(city, 2).unwrap(), Some(city.to_string()));
        }
    }

    #[test]
    fn bundled_hierarchy_covers_31_provinces() {
        let geo = GeoHierarchy::bundled();
        assert_eq!(geo.provinces().len(), 31);
    }
}
