use std::path::PathBuf;

use ljplus_core::corpus::run_corpus;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn every_corpus_item_passes() {
    let outcomes = run_corpus(&corpus_dir()).unwrap();
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(outcomes.iter().filter(|o| o.task == "check").count() >= 6);
}
