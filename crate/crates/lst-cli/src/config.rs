//! The JSON config: top-level shared keys plus one section per subcommand.
//!
//! ```json
//! { "portfolio": "fund.csv", "format": "csv",
//!   "rcr": { "shock": 0.2, "policy": "waterfall" },
//!   "buffer": { "spread": "50bp", "eta": 2 } }
//! ```
//!
//! Relative paths are taken from the config file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::output::Format;
use crate::values::NumList;

const PATH_KEYS: [&str; 5] = ["portfolio", "corr", "alpha", "requests", "buckets"];
/// Top-level keys copied into a section that does not set them.
const SHARED_KEYS: [&str; 2] = ["portfolio", "corr"];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub portfolio: Option<String>,
    pub corr: Option<String>,
    pub format: Option<Format>,
    pub raw: Option<bool>,
    pub out_dir: Option<PathBuf>,
    pub rcr: Option<Value>,
    pub hqla: Option<Value>,
    pub rst: Option<Value>,
    pub optimize: Option<Value>,
    pub buffer: Option<Value>,
    pub swing: Option<Value>,
    pub gate: Option<Value>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        let mut v: Value =
            serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        resolve_paths(&mut v, base);
        if let Some(dir) = v.get_mut("out_dir") {
            if let Some(s) = dir.as_str() {
                *dir = Value::String(base.join(s).to_string_lossy().into_owned());
            }
        }
        serde_json::from_value(v).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
    }

    pub fn section(&self, name: &str) -> Option<&Value> {
        match name {
            "rcr" => self.rcr.as_ref(),
            "hqla" => self.hqla.as_ref(),
            "rst" => self.rst.as_ref(),
            "optimize" => self.optimize.as_ref(),
            "buffer" => self.buffer.as_ref(),
            "swing" => self.swing.as_ref(),
            "gate" => self.gate.as_ref(),
            _ => None,
        }
    }

    /// Section values, overlaid with the flags that were given. Shared keys
    /// fill in only where the section's type has them.
    pub fn merge<T: Serialize + DeserializeOwned>(&self, name: &str, flags: &T, shared: &[&str]) -> CliResult<T> {
        let mut m = match self.section(name) {
            Some(Value::Object(o)) => o.clone(),
            Some(_) => return Err(CliError::invalid(format!("config: `{name}` must be an object"))),
            None => Map::new(),
        };
        for key in shared.iter().filter(|k| SHARED_KEYS.contains(k)) {
            let top = match *key {
                "portfolio" => &self.portfolio,
                _ => &self.corr,
            };
            if let (Some(p), false) = (top, m.contains_key(*key)) {
                m.insert((*key).to_string(), Value::String(p.clone()));
            }
        }
        let Value::Object(f) = serde_json::to_value(flags).expect("flags serialise") else {
            unreachable!("flag structs serialise to objects")
        };
        m.extend(f);
        serde_json::from_value(Value::Object(m)).map_err(|e| CliError::invalid(format!("config `{name}`: {e}")))
    }
}

fn resolve_paths(v: &mut Value, base: &Path) {
    let Value::Object(m) = v else { return };
    for (k, x) in m.iter_mut() {
        match x {
            Value::String(s) if PATH_KEYS.contains(&k.as_str()) => {
                // an inline alpha list is not a path
                if k == "alpha" && s.parse::<NumList>().is_ok() {
                    continue;
                }
                if Path::new(s).is_relative() {
                    *s = base.join(&*s).to_string_lossy().into_owned();
                }
            }
            Value::Object(_) => resolve_paths(x, base),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{PolicyArg, RcrArgs};
    use crate::values::Num;

    fn config(v: Value) -> ConfigFile {
        let mut v = v;
        resolve_paths(&mut v, Path::new("/cfg"));
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn flags_override_sections() {
        let c = config(serde_json::json!({
            "portfolio": "fund.csv",
            "rcr": { "shock": "25%", "policy": "waterfall" }
        }));
        let flags = RcrArgs { shock: Some(Num(0.1)), ..RcrArgs::default() };
        let a = c.merge("rcr", &flags, &["portfolio"]).unwrap();
        assert_eq!(a.shock, Some(Num(0.1)));
        assert_eq!(a.policy, Some(PolicyArg::Waterfall));
        assert_eq!(a.portfolio, Some(PathBuf::from("/cfg/fund.csv")));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let c = config(serde_json::json!({ "rcr": { "shok": 0.2 } }));
        assert!(c.merge("rcr", &RcrArgs::default(), &[]).is_err());
        assert!(serde_json::from_value::<ConfigFile>(serde_json::json!({ "rcrr": {} })).is_err());
    }

    #[test]
    fn inline_alpha_is_kept() {
        let c = config(serde_json::json!({ "rst": { "alpha": "0.2,0.3" } }));
        assert_eq!(c.rst.unwrap()["alpha"], "0.2,0.3");
    }
}
