mod common;

use common::{all_manifolds, assert_golden, man};
use segre_kit::commands::{cmd_analyze, cmd_segre};
use segre_kit::demo::{self, DemoMap};
use segre_kit::report::AnalyzeOptions;

#[test]
fn analyze_reports_match_golden() {
    let files = all_manifolds();
    assert!(files.len() >= 10, "corpus has {} manifolds", files.len());
    for f in files {
        let out = cmd_analyze(std::slice::from_ref(&f), &AnalyzeOptions::default(), true);
        assert_eq!(out.code, 0, "{}: {}", f.display(), out.stderr);
        let stem = f.file_stem().unwrap().to_string_lossy();
        assert_golden(&format!("analyze-{}.json", stem), &out.stdout);
    }
}

#[test]
fn analyze_text_matches_golden() {
    for name in ["lewy", "plane", "z4"] {
        let out = cmd_analyze(&[man(name)], &AnalyzeOptions::default(), false);
        assert_golden(&format!("analyze-{}.txt", name), &out.stdout);
    }
}

#[test]
fn segre_output_matches_golden() {
    for (name, j) in [("lewy", 3), ("plane", 2), ("hole", 2)] {
        let out = cmd_segre(&man(name), j, None, None, false).unwrap();
        assert_golden(&format!("segre-{}-j{}.txt", name, j), &out.stdout);
        let out = cmd_segre(&man(name), j, None, None, true).unwrap();
        assert_golden(&format!("segre-{}-j{}.json", name, j), &out.stdout);
    }
}

#[test]
fn demo_matches_golden() {
    for (tag, spec) in [("identity", "identity"), ("dilation", "dilation=2"), ("rotation", "rotation=3/5+4/5i")] {
        let out = demo::run(&DemoMap::parse(spec).unwrap(), demo::DEFAULT_ORDER, 0).unwrap();
        assert_golden(&format!("demo-lewy-{}.txt", tag), &out);
    }
}
