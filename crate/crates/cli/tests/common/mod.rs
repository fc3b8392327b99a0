#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn man(name: &str) -> PathBuf {
    corpus().join(format!("{}.man", name))
}

pub fn map(name: &str) -> PathBuf {
    corpus().join("maps").join(format!("{}.map", name))
}

/// Every `.man` file in the corpus, sorted by name.
pub fn all_manifolds() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(corpus())
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "man"))
        .collect();
    out.sort();
    out
}

/// Compare with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
pub fn assert_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        fs::write(&path, actual).expect("write golden file");
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {} ({}); run with UPDATE_GOLDEN=1", path.display(), e));
    if actual != expected {
        eprintln!("golden mismatch: {}", name);
        eprintln!("--- expected\n{}", expected);
        eprintln!("--- actual\n{}", actual);
        panic!("golden mismatch: {}", name);
    }
}
