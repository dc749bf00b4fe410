//! Figure presets shipped with the crate.

use std::path::Path;

use crate::config::RunConfig;
use crate::error::{Error, Result};

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        /// `(name, file contents)` of every preset.
        pub const PRESETS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../../presets/", $name, ".cfg")))),*
        ];
    };
}

presets!(
    "fig2a", "fig2c", "fig2e", "fig2g", "fig3b", "fig3c", "fig3d", "fig4", "fig4_sit", "fig5a", "fig5b", "fig6a",
    "fig6b", "zero",
);

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset(name: &str) -> Result<RunConfig> {
    let text = preset_text(name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        Error::Config(format!("unknown preset '{name}' (available: {})", names.join(", ")))
    })?;
    RunConfig::from_toml(text, Path::new(&format!("{name}.cfg")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_and_resolves() {
        for (name, _) in PRESETS {
            let c = preset(name).unwrap();
            if c.sweep.is_some() {
                c.sweep_spec().unwrap();
            } else {
                c.resolve().unwrap();
            }
        }
        assert!(preset("fig9").is_err());
    }
}
