//! Self-describing JSON checkpoints:
//!
//! ```text
//! {version, variant, n_qubits, hidden, seed, epoch,
//!  config: {...}, stats: {...}, params: {<tensor name>: nested arrays}}
//! ```
//!
//! Tensor names come from [`Parameters::tensors`], e.g. `gate_f.pre.weight`,
//! `gate_f.vqc.angles`, `attn.w_q`, `head.l1.weight`.

use std::fs;
use std::path::Path;

use ndarray::ArrayViewD;
use serde_json::{json, Map, Value};

use super::config::TrainConfig;
use crate::dataio::NormalizationStats;
use crate::error::{Error, Result};
use crate::network::ModelParams;
use crate::nncore::Parameters;

pub const CHECKPOINT_VERSION: u64 = 1;

const KNOWN_KEYS: [&str; 9] = [
    "version", "variant", "n_qubits", "hidden", "seed", "epoch", "config", "stats", "params",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config: TrainConfig,
    /// Seed of the run that produced these parameters.
    pub seed: u64,
    pub epoch: usize,
    pub stats: NormalizationStats,
    pub params: ModelParams,
}

fn nested(view: ArrayViewD<'_, f64>) -> Value {
    fn rec(data: &[f64], shape: &[usize]) -> Value {
        match shape {
            [] => json!(data[0]),
            [n] => Value::Array(data[..*n].iter().map(|&v| json!(v)).collect()),
            [n, rest @ ..] => {
                let stride: usize = rest.iter().product();
                Value::Array((0..*n).map(|i| rec(&data[i * stride..], rest)).collect())
            }
        }
    }
    let flat: Vec<f64> = view.iter().copied().collect();
    rec(&flat, view.shape())
}

fn flatten_into(name: &str, v: &Value, shape: &[usize], out: &mut Vec<f64>) -> Result<()> {
    match shape {
        [] => out.push(v.as_f64().ok_or_else(|| {
            Error::Parse(format!("tensor `{name}`: expected a number, found {v}"))
        })?),
        [n, rest @ ..] => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == *n)
                .ok_or_else(|| Error::Parse(format!("tensor `{name}`: shape mismatch (expected {shape:?})")))?;
            for item in arr {
                flatten_into(name, item, rest, out)?;
            }
        }
    }
    Ok(())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("checkpoint is missing key `{key}`")))
}

impl Checkpoint {
    pub fn to_json(&self) -> Value {
        let mut params = Map::new();
        for (name, t) in self.params.tensors() {
            params.insert(name, nested(t));
        }
        let n_qubits = if self.config.variant.is_quantum() {
            json!(self.config.n_qubits)
        } else {
            Value::Null
        };
        json!({
            "version": CHECKPOINT_VERSION,
            "variant": self.config.variant,
            "n_qubits": n_qubits,
            "hidden": self.config.hidden,
            "seed": self.seed,
            "epoch": self.epoch,
            "config": self.config,
            "stats": self.stats,
            "params": Value::Object(params),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("checkpoint root must be a JSON object".into()))?;
        let version = field(obj, "version")?
            .as_u64()
            .ok_or_else(|| Error::Parse("checkpoint `version` must be an integer".into()))?;
        if version != CHECKPOINT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }
        for key in obj.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                log::warn!("ignoring unknown checkpoint key `{key}`");
            }
        }
        let parse = |key: &str, e: serde_json::Error| Error::Parse(format!("checkpoint `{key}`: {e}"));
        let config: TrainConfig =
            serde_json::from_value(field(obj, "config")?.clone()).map_err(|e| parse("config", e))?;
        let stats: NormalizationStats =
            serde_json::from_value(field(obj, "stats")?.clone()).map_err(|e| parse("stats", e))?;
        let seed = field(obj, "seed")?
            .as_u64()
            .ok_or_else(|| Error::Parse("checkpoint `seed` must be an integer".into()))?;
        let epoch = field(obj, "epoch")?
            .as_u64()
            .ok_or_else(|| Error::Parse("checkpoint `epoch` must be an integer".into()))? as usize;
        let variant: crate::network::Variant =
            serde_json::from_value(field(obj, "variant")?.clone()).map_err(|e| parse("variant", e))?;
        if variant != config.variant {
            return Err(Error::Parse(format!(
                "checkpoint variant `{variant}` disagrees with config variant `{}`",
                config.variant
            )));
        }
        config.validate()?;

        let tensors = field(obj, "params")?
            .as_object()
            .ok_or_else(|| Error::Parse("checkpoint `params` must be an object".into()))?;
        let mut params = ModelParams::zeros(config.model_config())?;
        let mut expected = Vec::new();
        for (name, mut t) in params.tensors_mut() {
            let v = tensors
                .get(&name)
                .ok_or_else(|| Error::Parse(format!("checkpoint is missing tensor `{name}`")))?;
            let mut flat = Vec::with_capacity(t.len());
            flatten_into(&name, v, &t.shape().to_vec(), &mut flat)?;
            for (dst, src) in t.iter_mut().zip(flat) {
                *dst = src;
            }
            expected.push(name);
        }
        for name in tensors.keys() {
            if !expected.contains(name) {
                log::warn!("ignoring unknown checkpoint tensor `{name}`");
            }
        }
        Ok(Self {
            config,
            seed,
            epoch,
            stats,
            params,
        })
    }
}

pub fn save_checkpoint(ckpt: &Checkpoint, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string(&ckpt.to_json()).expect("checkpoint serializes");
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Checkpoint::from_json(&value).map_err(|e| e.context(path.display()))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::dataio::{ChannelStats, Channels, LOG_OFFSET};
    use crate::network::Variant;

    fn stats() -> NormalizationStats {
        let ch = ChannelStats { min: 0.0, max: 1.0 };
        NormalizationStats {
            c: LOG_OFFSET,
            channels: Channels { x: ch, y: ch, z: ch, facies: ChannelStats { min: 0.0, max: 2.0 }, target: ch },
        }
    }

    fn checkpoint(v: Variant) -> Checkpoint {
        let config = TrainConfig {
            hidden: 4,
            dense: 3,
            n_qubits: 2,
            ..TrainConfig::new(v)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        Checkpoint {
            params: ModelParams::init(config.model_config(), &mut rng).unwrap(),
            config,
            seed: 9,
            epoch: 10,
            stats: stats(),
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        for v in [Variant::Lstma, Variant::QlstmaSg, Variant::QlstmaIg] {
            let c = checkpoint(v);
            let text = serde_json::to_string(&c.to_json()).unwrap();
            let back = Checkpoint::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn lstma_has_null_qubits() {
        let j = checkpoint(Variant::Lstma).to_json();
        assert!(j["n_qubits"].is_null());
        assert_eq!(j["params"]["head.l1.weight"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn version_and_schema_errors() {
        let mut j = checkpoint(Variant::QlstmaIg).to_json();
        j["version"] = json!(2);
        assert!(matches!(
            Checkpoint::from_json(&j),
            Err(Error::UnsupportedVersion { found: 2, expected: 1 })
        ));

        let mut j = checkpoint(Variant::QlstmaIg).to_json();
        j.as_object_mut().unwrap().remove("stats");
        let err = Checkpoint::from_json(&j).unwrap_err();
        assert!(err.to_string().contains("`stats`"), "{err}");

        let mut j = checkpoint(Variant::QlstmaIg).to_json();
        j["params"].as_object_mut().unwrap().remove("attn.w_k");
        let err = Checkpoint::from_json(&j).unwrap_err();
        assert!(err.to_string().contains("attn.w_k"), "{err}");

        let mut j = checkpoint(Variant::QlstmaIg).to_json();
        j["params"]["gate_f.vqc.angles"] = json!([[1.0]]);
        assert!(matches!(Checkpoint::from_json(&j), Err(Error::Parse(_))));
    }

    #[test]
    fn unknown_keys_are_ignored() {
        let c = checkpoint(Variant::QlstmaSg);
        let mut j = c.to_json();
        j["comment"] = json!("extra");
        j["params"]["unused.tensor"] = json!([1.0]);
        assert_eq!(Checkpoint::from_json(&j).unwrap(), c);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        save_checkpoint(&checkpoint(Variant::Lstma), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(load_checkpoint(&path), Err(Error::Parse(_))));
    }
}
