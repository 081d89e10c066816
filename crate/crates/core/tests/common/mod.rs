#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use zhat::graphio::{parse_plumbing, series_from_json};
use zhat::plumbing::PlumbedGraph;
use zhat::qseries::QSeries;

pub const GOLDEN_ORDER: i64 = 20;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Every corpus file as `(file name, text)`, sorted by name.
pub fn corpus_texts() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(data_dir().join("data/plumbings"))
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "plumb"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).expect("readable corpus file"))
        })
        .collect();
    out.sort();
    out
}

pub fn corpus() -> Vec<(String, PlumbedGraph)> {
    corpus_texts()
        .into_iter()
        .map(|(name, text)| {
            let g = parse_plumbing(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, g)
        })
        .collect()
}

/// Negative definite corpus graphs with at least one internal vertex.
pub fn nd_corpus() -> Vec<(String, PlumbedGraph)> {
    corpus()
        .into_iter()
        .filter(|(_, g)| g.is_negative_definite() && !g.tree().degree_partition().internal().is_empty())
        .collect()
}

/// Golden series computed by `scripts/golden_zhat.py` at order 20.
pub fn golden() -> BTreeMap<String, QSeries> {
    let text = std::fs::read_to_string(data_dir().join("golden/zhat_order20.json")).expect("golden file");
    let v: serde_json::Value = serde_json::from_str(&text).expect("golden json");
    v.as_object()
        .expect("object keyed by file name")
        .iter()
        .map(|(k, s)| (k.clone(), series_from_json(s, int(GOLDEN_ORDER)).expect("golden series")))
        .collect()
}
