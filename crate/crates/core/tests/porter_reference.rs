//! Stemmer output against a reference vocabulary produced by an
//! independent implementation (see `data/gen_porter_fixture.py`).

use autolabel_core::disambiguator::porter_stem;

#[test]
fn agrees_with_reference_vocabulary() {
    let text = include_str!("data/porter_reference.tsv");
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for line in text.lines().filter(|l| !l.is_empty()) {
        let (word, expected) = line.split_once('\t').expect("two columns");
        let got = porter_stem(word);
        if got != expected {
            mismatches.push(format!("{word}: got {got}, expected {expected}"));
        }
        checked += 1;
    }
    assert!(checked > 8000, "fixture has {checked} words");
    assert!(
        mismatches.is_empty(),
        "{} mismatches:\n{}",
        mismatches.len(),
        mismatches[..mismatches.len().min(20)].join("\n")
    );
}
