//! Replays the checked-in fuzz corpus through the same round trips the
//! fuzz targets assert, so seeds stay meaningful on a stable toolchain.

use std::path::PathBuf;

use trilat::catalog::{Catalog, EMBEDDED_SOURCES};
use trilat::stabilizer::FuchsianSignature;
use trilat::tracefield::FieldClaim;
use trilat::Word;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn word_seeds_round_trip() {
    for s in seeds("parse_word") {
        let w = Word::parse(std::str::from_utf8(&s).unwrap()).unwrap();
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }
}

#[test]
fn cyclotomic_seeds_round_trip() {
    for s in seeds("parse_cyclotomic") {
        let x = cyclo::parse(std::str::from_utf8(&s).unwrap()).unwrap();
        assert_eq!(cyclo::parse(&x.to_string()).unwrap(), x);
    }
}

#[test]
fn signature_and_field_seeds_round_trip() {
    for s in seeds("parse_signature") {
        let sig = FuchsianSignature::parse(std::str::from_utf8(&s).unwrap()).unwrap();
        assert_eq!(FuchsianSignature::parse(&sig.to_string()).unwrap(), sig);
    }
    for s in seeds("parse_field_claim") {
        let c = FieldClaim::parse(std::str::from_utf8(&s).unwrap()).unwrap();
        assert_eq!(FieldClaim::parse(&c.to_string()).unwrap(), c);
    }
}

#[test]
fn catalog_seeds_load_or_fail_cleanly() {
    let mut loaded = 0;
    for s in seeds("catalog_json") {
        let (&which, rest) = s.split_first().unwrap();
        let mut sources = EMBEDDED_SOURCES;
        sources[which as usize % 4] = std::str::from_utf8(rest).unwrap();
        if Catalog::from_sources(sources[0], sources[1], sources[2], sources[3]).is_ok() {
            loaded += 1;
        }
    }
    // the four unmodified data files
    assert!(loaded >= 4);
}
