//! Exercises the external adapter with stand-in executables. Kept in its own
//! test binary since it sets process environment.

use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};

use srres_core::oracle::{m2_compare, M2_ENV};
use srres_core::transfer::CheckStatus;
use srres_core::{MomentAngle, Rationals, SimplicialComplex};

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\ncat > /dev/null\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[test]
fn adapter_outcomes() {
    let dir = std::env::temp_dir().join(format!("srres-m2-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let k = SimplicialComplex::simplex_boundary(2).unwrap();
    let ma = MomentAngle::new(&k, Rationals);
    let betti = ma.model.betti();

    std::env::remove_var(M2_ENV);
    assert!(matches!(m2_compare(&k, &betti, &Rationals).status, CheckStatus::Skipped(_)));

    let good = script(&dir, "good", "echo 'BETTI 0 0,0'; echo 'BETTI 1 1,1'; echo 'LAST v1,v2'");
    std::env::set_var(M2_ENV, &good);
    let report = m2_compare(&k, &betti, &Rationals);
    assert_eq!(report.status, CheckStatus::Pass, "{report:?}");

    let wrong = script(&dir, "wrong", "echo 'BETTI 0 0,0'");
    std::env::set_var(M2_ENV, &wrong);
    assert!(m2_compare(&k, &betti, &Rationals).status.is_fail());

    let broken = script(&dir, "broken", "echo oops >&2; exit 3");
    std::env::set_var(M2_ENV, &broken);
    match m2_compare(&k, &betti, &Rationals).status {
        CheckStatus::Skipped(why) => assert!(why.contains("oops"), "{why}"),
        other => panic!("expected Skipped, got {other:?}"),
    }

    std::env::set_var(M2_ENV, dir.join("missing"));
    assert!(matches!(m2_compare(&k, &betti, &Rationals).status, CheckStatus::Skipped(_)));
    std::env::remove_var(M2_ENV);
    std::fs::remove_dir_all(&dir).unwrap();
}
