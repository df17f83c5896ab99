//! The bundles in `fixtures/` are the canonical serialization of the
//! library fixtures. Set `MBQG_BLESS=1` to rewrite them.

use std::path::PathBuf;

use mbqg_core::bundle::{shipped, Bundle};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn shipped_bundles_match_library_fixtures() {
    let bless = std::env::var_os("MBQG_BLESS").is_some();
    for (stem, b) in shipped().unwrap() {
        let path = dir().join(format!("{stem}.bundle"));
        let want = b.to_canonical();
        if bless {
            std::fs::write(&path, &want).unwrap();
            continue;
        }
        let have = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(have, want, "{} is stale; rerun with MBQG_BLESS=1", path.display());
        let parsed = Bundle::parse(&have).unwrap();
        assert_eq!(parsed, b);
        assert_eq!(parsed.to_canonical(), have);
    }
}
