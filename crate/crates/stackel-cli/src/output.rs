use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use stackel_core::Tolerances;

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance carried by every output file. Wall time is kept out of the
/// data files so that reruns are byte-identical; it goes to `<file>.run.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: Vec<String>,
    pub tool_version: String,
    pub lambda: f64,
    pub r_max: Option<f64>,
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, Serialize)]
struct WallTime<'a> {
    manifest: &'a RunManifest,
    wall_time_s: f64,
}

/// Floats with 17 significant digits, everything else as `F` does it.
struct Digits17<F>(F);

macro_rules! forward {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.0.$name(w)
        })*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    forward!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
}

pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut buf = Vec::new();
    let res = if pretty {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new())))
    } else {
        value.serialize(&mut serde_json::Serializer::with_formatter(&mut buf, Digits17(CompactFormatter)))
    };
    res.expect("in-memory serialization");
    String::from_utf8(buf).expect("json is utf-8")
}

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutDir { root: root.to_path_buf() })
    }

    pub fn write(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// `<name>.run.json` with the manifest and the elapsed time.
    pub fn write_timing(&self, name: &str, manifest: &RunManifest, wall_time_s: f64) -> Result<(), CliError> {
        let text = to_json(&WallTime { manifest, wall_time_s }, true);
        self.write(&format!("{name}.run.json"), &(text + "\n")).map(|_| ())
    }
}
