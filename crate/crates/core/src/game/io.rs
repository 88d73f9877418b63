//! JSON game files:
//!
//! ```json
//! {"n": 2, "dist": "Normal", "seed": 7, "values": {"1": 1.0, "2": 2.0, "3": 4.0}}
//! ```
//!
//! Keys of `values` are decimal coalition indices; all of `1 ..= 2^n - 1`
//! must be present exactly once.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{coalition_count, CoalitionGame, MAX_AGENTS};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct GameFileOut<'a> {
    n: usize,
    dist: Option<&'a str>,
    seed: Option<u64>,
    values: IndexedValues<'a>,
}

struct IndexedValues<'a>(&'a [f64]);

impl Serialize for IndexedValues<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (j, v) in self.0.iter().enumerate() {
            map.serialize_entry(&(j + 1).to_string(), v)?;
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFileIn {
    n: usize,
    #[serde(default)]
    dist: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
    values: BTreeMap<String, f64>,
}

pub fn write_game<W: Write>(game: &CoalitionGame, mut writer: W) -> Result<()> {
    let out = GameFileOut {
        n: game.agents(),
        dist: game.dist_label(),
        seed: game.seed(),
        values: IndexedValues(game.values()),
    };
    serde_json::to_writer_pretty(&mut writer, &out)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_game<R: Read>(reader: R) -> Result<CoalitionGame> {
    let raw: GameFileIn = serde_json::from_reader(reader)?;
    if raw.n == 0 {
        return Err(Error::Schema("n must be at least 1".into()));
    }
    if raw.n > MAX_AGENTS {
        return Err(Error::Schema(format!("n = {} exceeds {MAX_AGENTS}", raw.n)));
    }
    let count = coalition_count(raw.n);
    let mut values = vec![None; count];
    for (key, v) in raw.values {
        let index: usize = key
            .parse()
            .map_err(|_| Error::Schema(format!("coalition key `{key}` is not a decimal index")))?;
        if index == 0 || index > count || key != index.to_string() {
            return Err(Error::Schema(format!(
                "coalition key `{key}` outside 1..={count}"
            )));
        }
        values[index - 1] = Some(v);
    }
    if let Some(missing) = values.iter().position(Option::is_none) {
        return Err(Error::Schema(format!(
            "missing value for coalition {} (expected {count} entries)",
            missing + 1
        )));
    }
    let values = values.into_iter().map(Option::unwrap).collect();
    Ok(CoalitionGame::new(raw.n, values)?.with_provenance(raw.dist, raw.seed))
}

pub fn save_game(game: &CoalitionGame, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_game(game, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_game(path: impl AsRef<Path>) -> Result<CoalitionGame> {
    let file = fs::File::open(path)?;
    read_game(std::io::BufReader::new(file))
}
