//! Committed stub-backend signatures. Regenerate with
//! `MLSS_UPDATE_GOLDEN=1 cargo test -p mlss-core --test golden`.

mod common;

use common::*;

#[test]
fn signatures_match_committed_files() {
    let update = std::env::var_os("MLSS_UPDATE_GOLDEN").is_some();
    for f in &GOLDEN_FIXTURES {
        let bytes = golden_signature(f);
        let path = golden_path(f.name);
        if update {
            std::fs::write(&path, &bytes).unwrap();
            continue;
        }
        let committed = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(bytes, committed, "{} differs from committed file", f.name);
    }
}

#[test]
fn committed_files_verify() {
    for f in &GOLDEN_FIXTURES {
        let committed = std::fs::read(golden_path(f.name)).unwrap();
        let sig = mlss::decode_signature(&committed).unwrap();
        assert_eq!((sig.d, sig.n as usize, sig.hash), (f.d, f.n, f.hash));
        let (doc, view) = fixed_document(f.seed, f.n, f.block);
        let (_, pk) = stub_keys(f.seed);
        let mut h = mlss::HashBackend::new(f.hash);
        assert!(mlss::verify(&pk, &sig, &doc, &view, true, &mut h).unwrap().is_valid());
    }
}

#[test]
fn matrix_digests_match_frozen_values() {
    for (d, n, hex) in GOLDEN_DIGESTS {
        assert_eq!(mlss::build(d, n).unwrap().canonical_digest().to_hex(), hex, "d={d} n={n}");
    }
    for (d, n, hex) in GOLDEN_PR_DIGESTS {
        assert_eq!(mlss::cff::build_pr_greedy(d, n).unwrap().canonical_digest().to_hex(), hex, "d={d} n={n}");
    }
}
