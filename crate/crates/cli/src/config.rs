//! Flat `key = value` suite configuration.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use meshforge::quiver::Family;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MESHFORGE_CONFIG";

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub families: BTreeSet<Family>,
    pub max_a: usize,
    pub max_d: usize,
    /// Word-length bound for quotient and H⁰ computations.
    pub l_max: usize,
    /// Tensor-length bound for Koszul duals.
    pub w_max: usize,
    pub window: usize,
    /// Bound for the negative-degree cohomology windows.
    pub cohomology_l: usize,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            families: [Family::A, Family::D, Family::E].into(),
            max_a: 12,
            max_d: 12,
            l_max: 20,
            w_max: 12,
            window: 2,
            cohomology_l: 7,
            threads: 0,
            out: None,
        }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = SuiteConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = || {
            value
                .parse::<usize>()
                .map_err(|_| format!("`{key}` needs a non-negative integer, got `{value}`"))
        };
        match key {
            "families" => {
                self.families = value
                    .split(',')
                    .map(|f| {
                        f.trim()
                            .parse::<Family>()
                            .map_err(|_| format!("unknown family `{f}`"))
                    })
                    .collect::<Result<_, _>>()?
            }
            "max_a" => self.max_a = num()?,
            "max_d" => self.max_d = num()?,
            "L_max" | "l_max" => self.l_max = num()?,
            "W_max" | "w_max" => self.w_max = num()?,
            "window" => self.window = num()?,
            "cohomology_L" | "cohomology_l" => self.cohomology_l = num()?,
            "threads" => self.threads = num()?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn check(&self) -> Result<(), String> {
        if self.l_max == 0 || self.w_max == 0 || self.window == 0 || self.cohomology_l == 0 {
            return Err("bounds must be positive".into());
        }
        if self.max_d != 0 && self.max_d < 4 {
            return Err("max_d must be 0 or at least 4".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let cfg = SuiteConfig::parse("families = E\nL_max=2 # short\n\nthreads=1").unwrap();
        assert_eq!(cfg.families, [Family::E].into());
        assert_eq!(cfg.l_max, 2);
        assert!(SuiteConfig::parse("colour = red").is_err());
        assert!(SuiteConfig::parse("L_max = 0").is_err());
        assert!(SuiteConfig::parse("families = Z").is_err());
    }
}
